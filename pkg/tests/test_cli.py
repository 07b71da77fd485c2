import json
import os
import subprocess
import sys

import pytest

from hallshuffle.cli import run


def call(args, capsys):
    code = run(args)
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_witt_mul_example(capsys):
    code, out, _ = call(["witt", "mul", "--trunc", "4", '{"trunc":4,"b":["-2"]}', '{"trunc":4,"b":["-3"]}'], capsys)
    assert code == 0
    assert out == '{"trunc":4,"b":["-6","0","0","0"]}'


def test_zeta_example(capsys):
    code, out, _ = call(["zeta", "--q", "2", "--g", "0", "--rational"], capsys)
    assert (code, out) == (0, "1 | (1-t)*(1-2*t)")


def test_torsion_mul_example(capsys):
    code, out, _ = call(["hall", "torsion-mul", "--q", "2", '{"[1]":"1"}', '{"[1]":"1"}'], capsys)
    assert (code, out) == (0, '{"[1,1]":"3","[2]":"1"}')


def test_global_flags_before_subcommand(capsys):
    code, out, _ = call(["--q", "3", "zeta"], capsys)
    assert out == "1 | (1-t)*(1-3*t)"


def test_leaf_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"q": 3}')
    assert call(["--config", str(cfg), "zeta"], capsys)[1] == "1 | (1-t)*(1-3*t)"
    assert call(["--config", str(cfg), "zeta", "--q", "4"], capsys)[1] == "1 | (1-t)*(1-4*t)"


def test_payload_from_file(tmp_path, capsys):
    f = tmp_path / "x.json"
    f.write_text('{"[1]": "1"}')
    code, out, _ = call(["hall", "torsion-mul", "--q", "2", str(f), str(f)], capsys)
    assert out == '{"[1,1]":"3","[2]":"1"}'


def test_schema_error_points_at_field(capsys):
    code, _, err = call(["witt", "add", '{"trunc":2,"b":["1"],"x":1}'], capsys)
    assert code == 2 and "arg1.x" in err
    code, _, err = call(["hall", "torsion-mul", '{"[a]":"1"}'], capsys)
    assert code == 2 and "[a]" in err
    code, _, err = call(["witt", "add", "{not json"], capsys)
    assert code == 2 and "invalid JSON" in err


def test_unknown_flag_is_rejected(capsys):
    assert call(["zeta", "--bogus"], capsys)[0] == 2


def test_feasibility_guard_exit_code(capsys):
    code, _, err = call(["hall", "comul", '[[{"bundle":[5,-5,0]},"1"]]', "--q", "4", "--split", "2,1",
                         "--window=-9,9"], capsys)
    assert code == 3
    assert "guard" in err and "4194304" in err


def test_verify_exit_codes(capsys):
    code, out, _ = call(["verify", "hall-base"], capsys)
    assert code == 0 and "PASS" in out
    code, out, _ = call(["verify", "witt-bihom", "--q", "2"], capsys)
    assert code == 1 and "FAIL" in out


def test_verify_json(capsys):
    code, out, _ = call(["verify", "zeta", "--q", "2", "--json"], capsys)
    data = json.loads(out)
    assert data["suite"] == "zeta" and data["ok"]


def test_negative_window_value(capsys):
    code, out, _ = call(["hall", "comul", '[[{"bundle":[1,0]},"1"]]', "--window", "-1,1"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert [r[2] for r in rows] == ["1", "1/2"]


@pytest.mark.parametrize("args", [
    ["hall", "p1-mul", '[[{"bundle":[-1]},"1"]]', '[[{"bundle":[1]},"1"]]'],
    ["hall", "psi", "--trunc", "2"],
    ["hall", "m-op", "--a", "0", "--b", "1", "--trunc", "2"],
    ["hall", "hecke", '{"torsion":{"x":[1]}}', '[[{"bundle":[0]},"1"]]', "--direction", "T*"],
    ["shuffle", "kernel", "--q", "3", "--full"],
    ["shuffle", "mul", '{"[1]":"t1"}', '{"[1]":"t1^-1"}'],
    ["witt", "lhom", '{"twist":"l"}', '{"twist":"m"}', "--closed"],
])
def test_output_is_deterministic(args, capsys):
    first = call(args, capsys)
    second = call(args, capsys)
    assert first[0] == 0 and first == second


def test_round_trips(capsys):
    # outputs re-parse as inputs
    _, out, _ = call(["hall", "p1-mul", '[[{"bundle":[-1]},"1"]]', '[[{"bundle":[1]},"1"]]'], capsys)
    code, again, _ = call(["hall", "p1-mul", out, '[[{"bundle":[],"torsion":{}},"1"]]'], capsys)
    assert code == 0 and again == out
    _, w, _ = call(["witt", "mul", '{"trunc":3,"b":["-2"]}', '{"trunc":3,"b":["1","1"]}'], capsys)
    assert call(["witt", "add", w, '{"trunc":3,"b":[]}'], capsys)[1] == w
    _, k, _ = call(["shuffle", "kernel", "--q", "2"], capsys)
    _, x, _ = call(["shuffle", "mul", "--kernel", k, '{"[1]":"t1"}', '{"[1]":"1"}'], capsys)
    _, y, _ = call(["shuffle", "mul", '{"[1]":"t1"}', '{"[1]":"1"}'], capsys)
    assert x == y
    _, local, _ = call(["hall", "torsion-mul", '{"[1]":"1"}', '{"[1]":"1"}'], capsys)
    assert call(["hall", "torsion-mul", local, '{"[]":"1"}'], capsys)[1] == local


def test_relations_command(capsys):
    code, out, _ = call(["shuffle", "relations", '[{"[1,1]":"t1"},{"[1,1]":"2*t1"}]'], capsys)
    assert json.loads(out) == {"count": 2, "relations": [["1", "-1/2"]]}


def test_help_for_every_group(capsys):
    for group in ([], ["witt"], ["hall"], ["shuffle"], ["verify"]):
        code, out, _ = call(group + ["--help"], capsys)
        assert code == 0 and "Usage" in out


def test_console_entry_point():
    env = dict(os.environ)
    res = subprocess.run([sys.executable, "-m", "hallshuffle", "zeta", "--q", "2"], capture_output=True, text=True,
                         env=env)
    assert res.returncode == 0 and res.stdout.strip() == "1 | (1-t)*(1-2*t)"
