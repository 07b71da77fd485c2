import json

import pytest

from hallshuffle import verify
from hallshuffle.verify import SuiteConfig, SuiteReport, run_suite


def test_control_semantics():
    rep = SuiteReport("demo")
    rep.add("holds", lambda: (True, None))
    rep.add("perturbed identity fails", lambda: (False, {"at": 1}), control=True)
    assert rep.ok
    rep.add("vacuous control", lambda: (True, None), control=True)
    assert not rep.ok
    assert [c.name for c in rep.failures()] == ["vacuous control"]


def test_report_serialization():
    rep = run_suite("hall-base", SuiteConfig(q=2))
    data = rep.to_json()
    assert data["suite"] == "hall-base" and data["ok"] is True
    assert json.loads(json.dumps(data)) == data
    text = rep.to_text()
    assert text.splitlines()[0].startswith("suite hall-base: PASS")
    assert all("[pass]" in line for line in text.splitlines()[1:] if "[" in line)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_suite_config_overrides():
    cfg = SuiteConfig(q=3, window=(-1, 1))
    assert cfg.qs((2, 4)) == (3,)
    assert cfg.win((-3, 3)) == (-1, 1)
    assert SuiteConfig().qs((2, 4)) == (2, 4)


@pytest.mark.parametrize("name", ["euler-form", "lhom-feq", "eisenstein-feq", "constant-term", "green-cross"])
def test_fast_suites_pass(name):
    rep = run_suite(name)
    assert rep.ok, rep.to_text()


def test_every_suite_with_controls_reports_them():
    rep = run_suite("quadratic", SuiteConfig(q=2))
    assert any(c.control for c in rep.checks)
    assert rep.ok


def test_constant_term_calibration_is_reported():
    rep = run_suite("constant-term")
    assert set(rep.conventions.values()) == {"LHom(f2,f1)"}


def test_cross_identity_calibration_picks_raising_direction():
    rep = run_suite("green-cross")
    assert rep.conventions["Hecke direction in the cross formula, q=2"] == "T"


def test_omega_windows():
    from hallshuffle.cohp1 import HallElement, bundle

    P = HallElement.basis(bundle(1, 0), 2)
    w = verify.omega2(P, (-1, 1))
    assert w  # O + O(1) splits into O (x) O(1) and O(1) (x) O inside the window
    assert all(sum(e for _, e in m) == 1 for m in w)


def test_suites_are_deterministic():
    a = run_suite("hecke-coproduct", SuiteConfig(q=2, trunc=2)).to_json()
    b = run_suite("hecke-coproduct", SuiteConfig(q=2, trunc=2)).to_json()
    for d in (a, b):
        d.pop("seconds")
        for c in d["checks"]:
            c.pop("seconds")
    assert a == b
