"""Certification of pretty good fractional revival from factor structure and spectral data."""

from .criteria import InvalidOrbitError, class_distinctness_gate, distinctness_gate, orbit_size_criterion, trace_degree_criterion
from .factor import DEFAULT_NUMERIC_Q, Factor, Factorization, PreconditionViolation, RankFragileError, factor_by_minpolys
from .falsifier import IntegerRelation, brute_force_relation, degeneracy_search
from .pipeline import (
    CERTIFIED,
    DEGENERATE,
    EXIT_CODES,
    NOT_CERTIFIED,
    Certificate,
    CertifyOptions,
    certify,
    recheck_certificate,
)

__all__ = [
    "InvalidOrbitError", "class_distinctness_gate", "distinctness_gate", "orbit_size_criterion",
    "trace_degree_criterion", "DEFAULT_NUMERIC_Q", "Factor", "Factorization", "PreconditionViolation",
    "RankFragileError", "factor_by_minpolys", "IntegerRelation", "brute_force_relation", "degeneracy_search",
    "CERTIFIED", "DEGENERATE", "EXIT_CODES", "NOT_CERTIFIED", "Certificate", "CertifyOptions", "certify",
    "recheck_certificate",
]
