"""Certifying pretty good fractional revival under a diagonal perturbation."""
