import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from metabelian.cli import main

DATA = Path(__file__).parent / "data"

SCHEMAS = {
    "dims": {
        "type": "object",
        "required": ["variety", "method", "rows"],
        "properties": {
            "variety": {"type": "string"},
            "method": {"type": "string"},
            "rows": {"type": "array", "items": {
                "type": "object",
                "required": ["degree"],
                "properties": {
                    "degree": {"type": "integer"},
                    "basis": {"type": "integer"},
                    "oracle": {"type": "integer"},
                    "match": {"type": "boolean"},
                },
            }},
        },
    },
    "nf": {
        "type": "object",
        "required": ["variety", "input", "normal_form"],
        "properties": {
            "variety": {"type": "string"},
            "input": {"type": "string"},
            "normal_form": {"type": "array", "items": {
                "type": "object",
                "required": ["coef", "term"],
                "properties": {"coef": {"type": "string", "pattern": r"^-?\d+/\d+$"}, "term": {"type": "string"}},
            }},
        },
    },
    "sym": {
        "type": "object",
        "required": ["variety", "degree", "generators"],
        "properties": {
            "variety": {"type": "string"},
            "degree": {"type": "integer"},
            "generators": {"type": "array", "items": {
                "type": "object",
                "required": ["label", "poly"],
                "properties": {"label": {"type": "string"}, "poly": {"type": "string"}, "checks": {"type": "object"}},
            }},
        },
    },
    "verify": {
        "type": "object",
        "required": ["suite", "checks"],
        "properties": {
            "suite": {"type": "string"},
            "checks": {"type": "array", "items": {
                "type": "object",
                "required": ["name", "pass", "detail"],
                "properties": {"name": {"type": "string"}, "pass": {"type": "boolean"}, "detail": {"type": "string"}},
            }},
        },
    },
}


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


# -- dims ---------------------------------------------------------------------------------

def test_dims_basis(capsys):
    code, out, _ = run(capsys, "dims", "--variety", "mlieadm", "--max-degree", "5", "--method", "basis")
    assert code == 0 and out == "1 2 11 77 679\n"


def test_dims_oracle(capsys):
    code, out, _ = run(capsys, "dims", "--variety", "lieadm", "--max-degree", "4", "--method", "oracle")
    assert code == 0 and out == "1 2 11 101\n"


def test_dims_both(capsys):
    code, out, _ = run(capsys, "dims", "--variety", "mnov", "--max-degree", "4", "--method", "both", "--json")
    data = json.loads(out)
    assert code == 0
    assert [(r["basis"], r["oracle"], r["match"]) for r in data["rows"]] == [
        (1, 1, True), (2, 2, True), (6, 6, True), (5, 5, True)]


def test_dims_custom_variety(capsys):
    code, out, _ = run(capsys, "dims", "--variety", "custom", "--identities", str(DATA / "metabelian.txt"),
                       "--max-degree", "4", "--method", "oracle")
    assert code == 0 and out == "1 2 12 96\n"


def test_dims_preconditions(capsys):
    assert run(capsys, "dims", "--variety", "lieadm", "--max-degree", "3", "--method", "basis")[0] == 3
    assert run(capsys, "dims", "--variety", "mnov", "--max-degree", "7", "--method", "oracle")[0] == 3
    assert run(capsys, "dims", "--variety", "mnov", "--max-degree", "9")[0] == 3
    assert run(capsys, "dims", "--variety", "mnov", "--max-degree", "0")[0] == 3
    assert run(capsys, "dims", "--variety", "custom", "--max-degree", "2", "--method", "oracle")[0] == 3


def test_max_cost_raises_the_cap(capsys):
    code, out, _ = run(capsys, "dims", "--variety", "mnov", "--max-degree", "9", "--max-cost", "9")
    assert code == 0 and out.split()[-1] == "9"


# -- nf -------------------------------------------------------------------------------------

@pytest.mark.parametrize("variety, text, expected", [
    ("mnov", "(x1*(x2*x3))", "(x2*(x1*x3))"),
    ("mnov", "((x1*x2)*(x3*x4))", "0"),
    ("mlieadm", "{[x1,x2],[x3,x4]}", "0"),
    ("mlieadm", "[[x1,x2],x3]", "[x1,[x2,x3]] - [x2,[x1,x3]]"),
    ("mlieadm", "(x2*x1)", "-1/2 [x1,x2] + 1/2 {x1,x2}"),
])
def test_nf(capsys, variety, text, expected):
    code, out, _ = run(capsys, "nf", "--variety", variety, "--term", text)
    assert code == 0 and out == expected + "\n"


def test_nf_poly_and_json(capsys):
    code, out, _ = run(capsys, "nf", "--variety", "mnov", "--poly", "((x1*x3)*x2) - 2 (x1*(x2*x3))", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["normal_form"] == [
        {"coef": "1/1", "term": "((x1*x2)*x3)"},
        {"coef": "-3/1", "term": "(x2*(x1*x3))"},
        {"coef": "1/1", "term": "(x3*(x1*x2))"},
    ]


@pytest.mark.parametrize("argv, code", [
    (["nf", "--variety", "mnov", "--term", "(x1*x2"], 2),
    (["nf", "--variety", "mnov", "--term", "[x1,x2]"], 2),
    (["nf", "--variety", "mlieadm", "--term", "(x1*[x2,x3])"], 2),
    (["nf", "--variety", "mnov"], 3),
    (["nf", "--variety", "novikov", "--term", "x1"], 2),
])
def test_nf_errors(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


# -- basis ------------------------------------------------------------------------------------

def test_basis_lists(capsys):
    code, out, _ = run(capsys, "basis", "--variety", "mlieadm", "--degree", "3", "--multilinear")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 12 and lines[-1] == "count=11"
    code, out, _ = run(capsys, "basis", "--variety", "mnov", "--degree", "4", "--multilinear")
    assert out.splitlines()[-1] == "count=5" and len(out.splitlines()) == 6
    code, out, _ = run(capsys, "basis", "--variety", "mnov", "--degree", "2", "--vars", "1")
    assert out == "(x1*x1)\ncount=1\n"


# -- sym ----------------------------------------------------------------------------------------

def test_sym_mnov_verify(capsys):
    code, out, _ = run(capsys, "sym", "--variety", "mnov", "--degree", "3", "--verify", "--json")
    data = json.loads(out)
    assert code == 0
    assert [g["label"] for g in data["generators"]] == ["p3,1", "p3,2"]
    assert all(all(g["checks"].values()) for g in data["generators"])


def test_sym_lists_generators(capsys):
    code, out, _ = run(capsys, "sym", "--variety", "mlieadm", "--degree", "3")
    assert code == 0 and len(out.splitlines()) == 4
    code, out, _ = run(capsys, "sym", "--variety", "mnov", "--degree", "5")
    assert code == 0 and out.startswith("p5 = ") and len(out.splitlines()) == 1


def test_sym_verify_reports_failures(capsys):
    code, out, _ = run(capsys, "sym", "--variety", "mlieadm", "--degree", "3", "--verify")
    assert code == 1
    assert "FAIL p(•,•,3) invariant" in out and "PASS p(•,○,3) invariant" in out


def test_sym_verify_respects_oracle_cap(capsys):
    assert run(capsys, "sym", "--variety", "mnov", "--degree", "7", "--verify")[0] == 3
    assert run(capsys, "sym", "--variety", "mnov", "--degree", "7")[0] == 0


# -- verify -----------------------------------------------------------------------------------------

def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--variety", "mnov", "--degree", "5", "--suite", "identities")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line.startswith("PASS lemma") and "(nf)" in line) == 7


def test_verify_basis(capsys):
    code, out, _ = run(capsys, "verify", "--variety", "mlieadm", "--degree", "4", "--suite", "basis")
    assert code == 0 and "(77 vs 77)" in out and "PASS M_4 independent" in out


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--variety", "mnov", "--degree", "5", "--suite", "all", "--json")
    data = json.loads(out)
    names = [c["name"] for c in data["checks"]]
    assert code == 0 and all(c["pass"] for c in data["checks"])
    assert any("oracle reduce" in n for n in names) and any("diff model" in n for n in names)


def test_verify_cap(capsys):
    assert run(capsys, "verify", "--variety", "mnov", "--degree", "7")[0] == 3


# -- reduce ------------------------------------------------------------------------------------------

def test_reduce_examples(capsys):
    code, out, _ = run(capsys, "reduce", "--identities", str(DATA / "metabelian.txt"), "--degree", "4",
                       "--poly", "((x1*x2)*(x3*x4))")
    assert code == 0 and out == "0\nconsequence=true\n"
    code, out, _ = run(capsys, "reduce", "--identities", str(DATA / "empty.txt"), "--degree", "3",
                       "--poly", "(x1*(x2*x3)) - (x2*(x1*x3))")
    assert out == "(x1*(x2*x3)) - (x2*(x1*x3))\nconsequence=false\n"
    code, out, _ = run(capsys, "reduce", "--identities", str(DATA / "empty.txt"), "--degree", "3", "--poly", "0")
    assert out == "0\nconsequence=true\n"
    code, out, _ = run(capsys, "reduce", "--identities", str(DATA / "left_commutative.txt"), "--degree", "3",
                       "--poly", "(x1*(x2*x3)) - (x2*(x1*x3))")
    assert out == "0\nconsequence=true\n"


def test_reduce_errors(capsys):
    base = ["reduce", "--identities", str(DATA / "left_commutative.txt"), "--degree", "3"]
    assert run(capsys, *base, "--poly", "(x1*(x1*x3))")[0] == 3
    assert run(capsys, *base, "--poly", "(x1*(x2*x3)")[0] == 2
    assert run(capsys, *base, "--poly", "[x1,[x2,x3]]")[0] == 2
    assert run(capsys, "reduce", "--identities", str(DATA / "missing.txt"), "--degree", "2", "--poly", "(x1*x2)")[0] == 3


# -- contract ------------------------------------------------------------------------------------------

GOLDEN = [
    ("dims", ["dims", "--variety", "mnov", "--max-degree", "5", "--method", "both", "--json"]),
    ("dims", ["dims", "--variety", "mlieadm", "--max-degree", "4", "--method", "oracle", "--json"]),
    ("nf", ["nf", "--variety", "mlieadm", "--term", "[x1,[x2,[x3,x4]]]", "--json"]),
    ("nf", ["nf", "--variety", "mnov", "--term", "((x1*x2)*(x3*x4))", "--json"]),
    ("sym", ["sym", "--variety", "mlieadm", "--degree", "4", "--json"]),
    ("sym", ["sym", "--variety", "mnov", "--degree", "4", "--verify", "--json"]),
    ("verify", ["verify", "--variety", "mlieadm", "--degree", "4", "--suite", "all", "--json"]),
    ("verify", ["verify", "--variety", "mnov", "--degree", "3", "--suite", "table", "--json"]),
]


@pytest.mark.parametrize("kind, argv", GOLDEN, ids=[" ".join(a[:3]) for _, a in GOLDEN])
def test_json_schemas_and_determinism(capsys, kind, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    jsonschema.validate(json.loads(first), SCHEMAS[kind])


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "metabelian", "sym", "--variety", "mlieadm", "--degree", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.count(b"\n") == 8


def test_timing_goes_to_stderr(capsys):
    _, out, err = run(capsys, "dims", "--variety", "mnov", "--max-degree", "3", "--method", "oracle")
    assert "timing oracle degree 3:" in err and "timing" not in out
