"""Shared pytest setup: hypothesis profile and the per-criterion acceptance summary."""

from __future__ import annotations

from collections import defaultdict

from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_criterion: dict[str, str] = {}
_outcomes: dict[str, dict[str, bool]] = defaultdict(dict)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _criterion[item.nodeid] = str(mark.args[0])


def pytest_runtest_logreport(report):
    crit = _criterion.get(report.nodeid)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[crit][report.nodeid] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_outcomes, key=lambda c: int(c)):
        runs = _outcomes[crit]
        failed = [nid.split("::")[-1] for nid, ok in runs.items() if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {crit}: {status} ({len(runs) - len(failed)}/{len(runs)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
