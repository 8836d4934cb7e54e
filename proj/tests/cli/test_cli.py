# End-to-end checks of the `kronecker` binary: exit codes, reports, determinism.
# The binary path comes from KRONECKER_BIN (set by ctest).

import csv
import json
import os
import subprocess
import sys

import pytest

BIN = os.environ.get("KRONECKER_BIN", os.path.join(os.path.dirname(__file__), "..", "..", "build", "kronecker"))

ROOT_TWO = {"kind": "kronecker", "lambda": ["1", "sqrt(2)"], "alpha": ["0", "0"],
            "epsilon": ["1/20", "1/20"], "tau": "0"}


def run(*args, check=None):
    p = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, timeout=300)
    if check is not None:
        assert p.returncode == check, f"exit {p.returncode}\nstdout:\n{p.stdout}\nstderr:\n{p.stderr}"
    return p


def write(path, obj):
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return path


def cert(path):
    c = json.loads(path.read_text())
    c.pop("wall_clock_seconds", None)
    return c


def test_bounds_small():
    out = run("bounds", "--n", 2, "--eps", "0.25,0.25", check=0).stdout
    assert "gamma = 0.125" in out
    assert "M* = 32" in out


def test_bounds_json(tmp_path):
    run("--json", tmp_path / "b.json", "bounds", "--n", 2, "--eps", "0.1", check=0)
    text = (tmp_path / "b.json").read_text()
    assert "30" in text  # M_gm at eps = 0.1


@pytest.mark.parametrize("args", [["bounds", "--n", 1, "--eps", "0.1"],
                                  ["bounds", "--n", 2, "--eps", "0.6"],
                                  ["bounds", "--n", 2, "--eps", "0"],
                                  ["bounds"],
                                  ["no-such-command"]])
def test_invalid_input_exits_2(args):
    run(*args, check=2)


def test_compare_gm_flip(tmp_path):
    out = run("--csv", tmp_path / "g.csv", "compare-gm", "--n", 2, "--eps-grid", "1e-5:1e-1:geometric:20", check=0).stdout
    rows = list(csv.DictReader((tmp_path / "g.csv").open()))
    assert len(rows) == 20
    flags = [r["star_is_smaller"] for r in rows]
    k = flags.index("false")
    assert all(f == "true" for f in flags[:k]) and all(f == "false" for f in flags[k:])
    eps0 = 2 * 2.718281828459045 ** -8
    lo, hi = float(rows[k - 1]["eps"]), float(rows[k]["eps"])
    assert lo >= eps0 / 2 and hi <= 2 * eps0
    assert "flip between" in out


def test_gen_preset_round_trip(tmp_path):
    path = tmp_path / "p.json"
    run("gen-preset", "--kind", "sqrt-primes", "--n", 2, "--eps", "1/20", "--out", path, check=0)
    inst = json.loads(path.read_text())
    assert inst["lambda"] == ["sqrt(2)", "sqrt(3)"]
    run("hypothesis", path, check=0)


def test_hypothesis_root_two(tmp_path):
    inst = write(tmp_path / "r2.json", ROOT_TWO)
    run("--json", tmp_path / "h.json", "hypothesis", inst, check=0)
    c = cert(tmp_path / "h.json")
    h = c["hypothesis"]
    assert h["minimizer"] == ["99", "-70"]
    assert h["verdict"] == "holds"
    assert c["exit_code"] == 0


def test_hypothesis_fails_on_dependent_lambda(tmp_path):
    inst = write(tmp_path / "bad.json", dict(ROOT_TWO, **{"lambda": ["1", "2"]}))
    run("hypothesis", inst, check=1)
    p = run("verify-theorem1", inst, "--trials", 5, check=1)
    assert "FAILURE" in p.stderr


def test_malformed_input_exits_2(tmp_path):
    run("hypothesis", write(tmp_path / "m.json", "{not json"), check=2)
    run("hypothesis", write(tmp_path / "u.json", dict(ROOT_TWO, extra="1")), check=2)
    run("hypothesis", write(tmp_path / "n.json", dict(ROOT_TWO, tau=0)), check=2)
    run("hypothesis", tmp_path / "missing.json", check=2)


def test_budget_exits_3(tmp_path):
    inst = write(tmp_path / "r2.json", ROOT_TWO)
    run("--budget", 100, "hypothesis", inst, check=3)


def test_witness_and_verify(tmp_path):
    inst = write(tmp_path / "r2.json", ROOT_TWO)
    run("--json", tmp_path / "w.json", "witness", inst, "--T", "100", check=0)
    c = cert(tmp_path / "w.json")
    assert c["exit_code"] == 0
    run("verify", tmp_path / "w.json", check=0)


def test_linear_witness_and_transference(tmp_path):
    lin = tmp_path / "lin.json"
    run("--seed", 7, "gen-preset", "--kind", "random-linear", "--n", 2, "--eps", "1/4", "--out", lin, check=0)
    p = run("--json", tmp_path / "t.json", "transference", lin)
    assert p.returncode in (0, 1)
    c = cert(tmp_path / "t.json")
    assert c["duality_identity"] is True
    run("verify", tmp_path / "t.json", check=0)


def test_verify_theorem1_and_tamper(tmp_path):
    inst = write(tmp_path / "r2.json", ROOT_TWO)
    run("--json", tmp_path / "c.json", "verify-theorem1", inst, "--trials", 20, check=0)
    run("verify", tmp_path / "c.json", check=0)
    c = json.loads((tmp_path / "c.json").read_text())
    c["exit_code"] = 1
    write(tmp_path / "bad.json", c)
    run("verify", tmp_path / "bad.json", check=1)


@pytest.mark.parametrize("command", [["hypothesis"], ["verify-theorem1", "--trials", 50], ["witness", "--T", "500"]])
def test_thread_count_does_not_change_output(tmp_path, command):
    inst = write(tmp_path / "r2.json", ROOT_TWO)
    outs = []
    for threads in (1, 8):
        path = tmp_path / f"o{threads}.json"
        run("--threads", threads, "--json", path, command[0], inst, *command[1:], check=0)
        outs.append(json.dumps(cert(path), sort_keys=False))
    assert outs[0] == outs[1]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
