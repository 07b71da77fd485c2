"""Acceptance criteria: one test per criterion, each backed by a verification suite.

A criterion passes when every check of its suite passes (negative controls
included) within its time budget.  Criterion 4 is expected to fail: its
literal target series disagrees with the brute-force torsion sum, while the
corrected series is checked by the same suite and by a separate test below.
"""

import time

import pytest

from hallshuffle.verify import SuiteConfig, run_suite

RESULTS: list = []

CRITERIA = [
    (1, "Hall-number base", "hall-base", 1),
    (2, "Hecke generator coproduct", "hecke-coproduct", 30),
    (3, "Green compatibility on torsion", "green-torsion", 120),
    (4, "Witt bihomomorphism with literal kappa", "witt-bihom", 120),
    (5, "Zeta consistency", "zeta", 5),
    (6, "Euler form vs enumeration", "euler-form", 10),
    (7, "LHom functional equation", "lhom-feq", 5),
    (8, "Quadratic relations and Eisenstein functional equation", "quadratic", 300),
    (9, "Constant-term formula", "constant-term", 300),
    (10, "Relation lattices and omega intertwining on P^1", "main-p1", 600),
    (11, "Psi-series coefficients and M o M = Id", "psi-m", 600),
    (12, "Regularity of symmetric products", "regularity", 60),
]

XFAIL = {4: "literal kappa = (1+t)/(1+q t) disagrees with the brute-force torsion sum; "
            "the sum matches (1-t)/(1-q t)"}


def _run(num, title, suite, budget):
    t0 = time.perf_counter()
    rep = run_suite(suite, SuiteConfig())
    elapsed = time.perf_counter() - t0
    ok = rep.ok and elapsed < budget
    failed = [c.name for c in rep.failures()]
    line = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {title} ({suite}, {elapsed:.1f}s / {budget}s)"
    if failed:
        line += f" failing: {'; '.join(failed)}"
    RESULTS.append(line)
    print(line)
    return rep, elapsed, ok


def _param(c):
    marks = [pytest.mark.xfail(strict=True, reason=XFAIL[c[0]])] if c[0] in XFAIL else []
    return pytest.param(*c, id=f"criterion{c[0]:02d}-{c[2]}", marks=marks)


@pytest.mark.parametrize("num,title,suite,budget", [_param(c) for c in CRITERIA])
def test_criterion(num, title, suite, budget):
    rep, elapsed, ok = _run(num, title, suite, budget)
    assert rep.ok, rep.to_text()
    assert elapsed < budget, f"{suite} took {elapsed:.1f}s, budget {budget}s"


def test_corrected_kappa_grid():
    # the part of criterion 4 that does hold: U = chi (x) chi' (x) (1-t)/(1-q t) on the grid
    rep = run_suite("witt-bihom", SuiteConfig())
    grid = [c for c in rep.checks if "grid" in c.name or "U(chi, 0)" in c.name]
    assert grid and all(c.ok for c in grid)
    literal = [c for c in rep.checks if "(1+t)/(1+q t)" in c.name]
    assert literal and not any(c.ok for c in literal)
