"""End-to-end checks of the command-line interface via main(argv)."""

import json
from fractions import Fraction

import pytest

from idealconv.cli import main

from oracles import power_term


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# fn
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,n,extra,value",
    [
        ("omega", "12", (), "2"),
        ("gamma", "64", (), "4"),
        ("tau", "64", (), "12"),
        ("N", "3003", (), "8"),
        ("ap", "48", ("--p", "2"), "4"),
        ("h", "360", (), "1"),
        ("H", "360", (), "3"),
    ],
)
def test_fn_single_values(capsys, name, n, extra, value):
    code, out, _ = run(capsys, "fn", name, n, *extra)
    assert code == 0
    row = out.splitlines()[-1].split()
    assert row == [n, value]


def test_fn_range(capsys):
    code, out, _ = run(capsys, "fn", "d", "1:6", "--output", "csv")
    assert code == 0
    assert out == "n,value\n1,1\n2,2\n3,2\n4,3\n5,2\n6,4\n"


def test_fn_errors(capsys):
    code, _, err = run(capsys, "fn", "nope", "5")
    assert code == 2 and "unknown function" in err
    code, _, err = run(capsys, "fn", "ap", "48")
    assert code == 2 and "--p" in err
    code, _, err = run(capsys, "fn", "omega", "9:3")
    assert code == 2


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def test_construct_logpower(capsys):
    code, out, _ = run(capsys, "construct", "--logpower", "0.5", "--terms", "3")
    assert code == 0
    assert out == "1\n6\n34\n"


def test_construct_power_fraction(capsys):
    code, out, _ = run(capsys, "construct", "--power", "3/4", "--terms", "5")
    assert code == 0
    want = [power_term(n, Fraction(3, 4)) for n in range(1, 6)]
    assert [int(v) for v in out.split()] == want


def test_construct_smooth(capsys):
    code, out, _ = run(capsys, "construct", "--smooth", "2,3", "--terms", "6")
    assert code == 0
    assert [int(v) for v in out.split()] == [1, 2, 3, 4, 6, 8]


def test_construct_needs_exactly_one_set(capsys):
    code, _, err = run(capsys, "construct", "--terms", "3")
    assert code == 2 and "exactly one" in err
    code, _, err = run(
        capsys, "construct", "--power", "0.5", "--logpower", "0.5", "--terms", "3"
    )
    assert code == 2 and "exactly one" in err


def test_construct_bad_exponent(capsys):
    code, _, err = run(capsys, "construct", "--power", "x/y", "--terms", "3")
    assert code == 2 and "bad exponent" in err


# ---------------------------------------------------------------------------
# lambda
# ---------------------------------------------------------------------------


def test_lambda_from_file(capsys, tmp_path):
    path = tmp_path / "nat.txt"
    path.write_text("".join(f"{i}\n" for i in range(1, 10_001)))
    code, out, _ = run(capsys, "lambda", "--file", str(path))
    assert code == 0
    assert out.startswith("lambda estimate: 1.000000")


def test_lambda_power_set(capsys):
    code, out, _ = run(
        capsys, "lambda", "--power", "0.5", "--terms", "2000", "--output", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == pytest.approx(0.5, abs=1e-3)
    assert doc["terms"] == 2000
    assert [r["n"] for r in doc["records"]][:4] == [2, 4, 8, 16]


def test_lambda_rejects_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("5\n3\n")
    code, _, err = run(capsys, "lambda", "--file", str(path))
    assert code == 2
    assert "bad.txt:2" in err and "strictly increasing" in err


def test_lambda_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "lambda", "--file", str(tmp_path / "none.txt"))
    assert code == 2 and "error:" in err


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def test_classify_exit_codes(capsys):
    # consistent -> 0
    code, out, _ = run(
        capsys, "classify", "--power", "0.25", "--ideal", "less", "--q", "0.5"
    )
    assert code == 0 and out.startswith("verdict: consistent")
    # inconsistent -> 1
    code, out, _ = run(
        capsys, "classify", "--power", "0.5", "--ideal", "leq", "--q", "0.25"
    )
    assert code == 1 and out.startswith("verdict: inconsistent")
    # indeterminate -> 3
    code, out, _ = run(
        capsys, "classify", "--power", "0.5", "--ideal", "leq", "--q", "0.48"
    )
    assert code == 3 and out.startswith("verdict: indeterminate")


def test_classify_json_payload(capsys):
    code, out, _ = run(
        capsys,
        "classify",
        "--power",
        "0.25",
        "--ideal",
        "less",
        "--q",
        "0.5",
        "--output",
        "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "consistent"
    assert doc["delta_used"] > 0
    rec = doc["records"][0]
    assert {"set", "ideal", "q", "delta", "x", "count", "ratio", "verdict"} <= rec.keys()


def test_classify_custom_checkpoints(capsys):
    code, _, _ = run(
        capsys,
        "classify",
        "--power",
        "0.25",
        "--ideal",
        "less",
        "--q",
        "0.5",
        "--checkpoints",
        "100:1000000:10",
    )
    assert code == 0


def test_classify_bad_checkpoints(capsys):
    code, _, err = run(
        capsys,
        "classify",
        "--power",
        "0.25",
        "--ideal",
        "less",
        "--q",
        "0.5",
        "--checkpoints",
        "10:20",
    )
    assert code == 2 and "START:CAP:FACTOR" in err


# ---------------------------------------------------------------------------
# aeps
# ---------------------------------------------------------------------------


def test_aeps_counts(capsys):
    code, out, _ = run(
        capsys, "aeps", "--seq", "gamma", "--eps", "0.5", "--limit", "10000"
    )
    assert code == 0
    assert "envelope perfect_power: holds" in out


def test_aeps_counts_csv(capsys):
    code, out, _ = run(
        capsys,
        "aeps",
        "--seq",
        "gamma",
        "--eps",
        "0.5",
        "--limit",
        "10000",
        "--checkpoints",
        "10:10000:10",
        "--output",
        "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "sequence,eps,x,count,envelope,ratio"
    counts = [line.split(",")[2:4] for line in lines[1:]]
    assert counts == [
        ["10", "3"],
        ["100", "12"],
        ["1000", "40"],
        ["10000", "124"],
    ]


def test_aeps_remark(capsys):
    code, out, _ = run(
        capsys,
        "aeps",
        "--seq",
        "omega",
        "--eps",
        "0.5",
        "--limit",
        "10000",
        "--remark",
    )
    assert code == 0
    first = out.splitlines()[2].split()
    assert first[2:] == ["1", "3", "0"]  # k=1 lands on n=3, log 1 = 0


def test_aeps_requires_p_for_ap(capsys):
    code, _, err = run(capsys, "aeps", "--seq", "ap", "--eps", "0.5")
    assert code == 2 and "prime" in err


def test_aeps_unknown_sequence(capsys):
    code, _, err = run(capsys, "aeps", "--seq", "zeta", "--eps", "0.5")
    assert code == 2 and "unknown sequence" in err


def test_aeps_checkpoint_beyond_limit(capsys):
    code, _, err = run(
        capsys,
        "aeps",
        "--seq",
        "gamma",
        "--eps",
        "0.5",
        "--limit",
        "1000",
        "--checkpoints",
        "10:10000:10",
    )
    assert code == 2 and "exceeds" in err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_single_statement(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "IV", "--limit", "100000")
    assert code == 0
    assert out.startswith("suite: PASS")


def test_verify_unknown_statement(capsys):
    code, _, err = run(capsys, "verify", "--suite", "IX", "--limit", "100000")
    assert code == 2 and "unknown statements" in err


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def test_outputs_are_deterministic(capsys):
    argv = (
        "aeps", "--seq", "gamma", "--eps", "0.5", "--limit", "10000",
        "--checkpoints", "10:10000:10", "--output", "csv",
    )
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    argv = argv[:-1] + ("json",)
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_json_envelope_fields(capsys):
    code, out, _ = run(
        capsys,
        "verify",
        "--suite",
        "IV",
        "--limit",
        "100000",
        "--output",
        "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["command"] == "verify"
    assert doc["passed"] is True
    assert all(isinstance(r["passed"], bool) for r in doc["records"])


def test_out_writes_file(capsys, tmp_path):
    path = tmp_path / "set.txt"
    code = main(
        ["construct", "--power", "0.5", "--terms", "4", "--out", str(path)]
    )
    assert code == 0
    assert path.read_text() == "1\n4\n9\n16\n"
    capsys.readouterr()

    path = tmp_path / "report.json"
    code = main(
        [
            "aeps", "--seq", "gamma", "--eps", "0.5", "--limit", "10000",
            "--checkpoints", "10:10000:10", "--output", "json",
            "--out", str(path),
        ]
    )
    assert code == 0
    capsys.readouterr()
    doc = json.loads(path.read_text())
    assert [r["count"] for r in doc["records"]] == [3, 12, 40, 124]
