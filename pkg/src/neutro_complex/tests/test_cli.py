import json

import pytest

from neutro_complex.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main

C2_TABLE = """\
*,0,iF,1,1+iF
0,0,0,0,0
iF,0,1,iF,1+iF
1,0,iF,1,1+iF
1+iF,0,1+iF,1+iF,0
"""

WORKED_P = "(2+iF) + (1+2iF)*x + (2+2iF)*x^7"
WORKED_Q = "iF + (2+iF)*x^3 + 2*x^6"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--modulus", "2")
    assert code == EXIT_OK
    assert out == C2_TABLE


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--modulus", "2", "--op", "add", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["op"] == "add"
    assert payload["grid"][0] == ["*", "0", "iF", "1", "1+iF"]
    assert payload["grid"][4][4] == "0"


@pytest.mark.parametrize(
    "argv, expected",
    [
        pytest.param(["--modulus", "7"], "field\n", id="C(Z_7)"),
        pytest.param(["--modulus", "5"], "ring-with-zero-divisors (1+2iF)*(2+iF) = 0\n", id="C(Z_5)"),
        pytest.param(
            ["--family", "mod-neutro-complex", "--modulus", "3"],
            "ring-with-zero-divisors (I)*(1+2I) = 0\n",
            id="C(<Z_3 u I>)",
        ),
        pytest.param(["--family", "mod-plain", "--modulus", "11"], "field\n", id="Z_11"),
    ],
)
def test_classify(capsys, argv, expected):
    code, out, _ = run(capsys, "classify", *argv)
    assert code == EXIT_OK
    assert out == expected


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--modulus", "13", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == {
        "carrier": "C(Z_13)",
        "verdict": "ring-with-zero-divisors",
        "witness": ["1+5iF", "5+iF"],
        "method": "sum-of-two-squares",
    }


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--modulus", "2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["order"] == 4
    assert payload["is_field"] is False
    assert payload["zero_divisors"] == [["1+iF", "1+iF"]]


def test_scan_is_deterministic(capsys):
    _, first, _ = run(capsys, "scan", "--modulus", "12")
    _, second, _ = run(capsys, "scan", "--modulus", "12")
    _, parallel, _ = run(capsys, "scan", "--modulus", "12", "--jobs", "8")
    assert first == second == parallel


def test_scan_text(capsys):
    code, out, _ = run(capsys, "scan", "--modulus", "2", "--format", "text")
    assert code == EXIT_OK
    assert "zero_divisor: 1+iF*1+iF\n" in out
    assert "nilpotent: 1+iF^2\n" in out


def test_poly_mul(capsys):
    code, out, _ = run(capsys, "poly", "mul", "--modulus", "3", "--p", WORKED_P, "--q", WORKED_Q, "--format", "text")
    assert code == EXIT_OK
    assert out == "(2+2iF) + (1+iF)*x + iF*x^3 + 2iF*x^4 + (1+2iF)*x^6 + 2*x^10 + (1+iF)*x^13\n"


def test_poly_mul_json(capsys):
    code, out, _ = run(capsys, "poly", "mul", "--modulus", "3", "--p", WORKED_P, "--q", WORKED_Q)
    assert code == EXIT_OK
    coeffs = json.loads(out)["coeffs"]
    assert len(coeffs) == 14
    assert coeffs[7] == "0"


def test_poly_roots_and_eval(capsys):
    code, out, _ = run(capsys, "poly", "roots", "--modulus", "3", "--p", "1 + x^2")
    assert code == EXIT_OK
    assert json.loads(out) == {"roots": ["iF", "2iF"]}
    _, out, _ = run(capsys, "poly", "eval", "--modulus", "3", "--p", "1 + x^2", "--x", "iF")
    assert json.loads(out) == {"value": "0"}
    _, out, _ = run(capsys, "poly", "roots", "--family", "exact", "--p", "x^2 + 4", "--bound", "3", "--gaussian")
    assert json.loads(out) == {"roots": ["-2i", "2i"]}


def test_poly_irreducible(capsys):
    _, out, _ = run(capsys, "poly", "irreducible", "--family", "mod-plain", "--modulus", "3", "--p", "1 + x^2")
    assert json.loads(out) == {"irreducible": True, "factors": None}
    _, out, _ = run(capsys, "poly", "irreducible", "--modulus", "3", "--p", "1 + x^2")
    assert json.loads(out) == {"irreducible": False, "factors": ["2iF + x", "iF + x"]}


def test_mat(capsys):
    code, out, _ = run(capsys, "mat", "mul", "--modulus", "7", "--a", "1,iF;0,1", "--b", "1,6iF;0,1", "--format", "csv")
    assert code == EXIT_OK
    assert out == "1,0\n0,1\n"
    _, out, _ = run(capsys, "mat", "det", "--modulus", "7", "--a", "1,iF;iF,6")
    assert json.loads(out) == {"det": "0"}
    _, out, _ = run(capsys, "mat", "inverse", "--modulus", "7", "--a", "1,iF;iF,6")
    assert json.loads(out) == {"inverse": None, "reason": "singular"}


def test_mat_ideal(capsys):
    code, out, _ = run(capsys, "mat", "ideal", "--modulus", "2", "--mask", "1,0;1,0", "--side", "left")
    assert code == EXIT_OK
    assert json.loads(out)["holds"] is True
    _, out, _ = run(capsys, "mat", "ideal", "--modulus", "2", "--mask", "1,0;1,0", "--side", "right")
    payload = json.loads(out)
    assert payload["holds"] is False
    assert len(payload["counterexample"]) == 3


def test_mat_from_file(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(
        json.dumps({"carrier": {"family": "mod-complex", "modulus": 3}, "rows": 1, "cols": 2, "entries": ["1", "iF"]})
    )
    code, out, _ = run(capsys, "mat", "transpose", "--modulus", "3", "--a", f"@{path}", "--format", "csv")
    assert code == EXIT_OK
    assert out == "1\niF\n"


def test_random_is_seeded(capsys):
    argv = ["mat", "random", "--modulus", "11", "--rows", "3", "--cols", "3", "--seed", "42"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert len(json.loads(first)["entries"]) == 9


def test_random_distinct_batch(capsys, caplog):
    argv = ["mat", "random", "--modulus", "2", "--rows", "1", "--cols", "1", "--format", "csv", "--distinct"]
    code, out, _ = run(capsys, *argv, "--count", "4")
    assert code == EXIT_OK
    assert sorted(out.split()) == ["0", "1", "1+iF", "iF"]
    _, out, _ = run(capsys, *argv, "--count", "5")
    assert len(out.split()) == 4
    assert "fewer than min_length" in caplog.text


def test_random_poly_batch(capsys):
    code, out, _ = run(capsys, "poly", "random", "--modulus", "3", "--count", "3")
    assert code == EXIT_OK
    assert [p["carrier"] for p in json.loads(out)] == [{"family": "mod-complex", "modulus": 3}] * 3


def test_eigen(capsys):
    code, out, _ = run(capsys, "eigen", "--modulus", "3", "--a", "1,0;0,1")
    assert code == EXIT_OK
    assert json.loads(out) == {"values": [{"value": "1", "eigenbasis": [["1", "0"], ["0", "1"]]}]}


def test_eigen_outside_the_base(capsys):
    argv = ["eigen", "--family", "mod-plain", "--modulus", "7", "--a", "0,1;6,0", "--search-family", "mod-complex"]
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert [v["value"] for v in json.loads(out)["values"]] == ["iF", "6iF"]


def test_closure(capsys):
    argv = ["closure", "--family", "mod-neutro-complex", "--modulus", "3", "--members", "0,I", "--scalars", "0,1"]
    code, out, _ = run(capsys, *argv, "--scalar-family", "mod-plain")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["classification"] == "set vector space"
    assert payload["add_violation"] == ["I", "I"]
    assert payload["scalar_closed"] is True


def test_out_file(capsys, tmp_path):
    path = tmp_path / "table.csv"
    code, out, _ = run(capsys, "table", "--modulus", "2", "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert path.read_text(encoding="utf-8") == C2_TABLE


@pytest.mark.parametrize(
    "argv",
    [
        pytest.param(["table"], id="missing-modulus"),
        pytest.param(["table", "--family", "exact", "--modulus", "3"], id="modulus-for-exact"),
        pytest.param(["mat", "add", "--modulus", "3", "--a", "1,x", "--b", "1,1"], id="bad-element"),
        pytest.param(["mat", "add", "--modulus", "3", "--a", "1,1"], id="missing-operand"),
        pytest.param(["poly", "mul", "--modulus", "3", "--p", "1 + y", "--q", "x"], id="bad-poly"),
        pytest.param(["mat", "det", "--modulus", "3", "--a", "@/nonexistent/a.json"], id="missing-file"),
        pytest.param(["closure", "--modulus", "3", "--members", "0", "--scalars", "1", "--flags", "div"], id="flag"),
        pytest.param(["mat", "det", "--family", "exact", "--a", "1/0"], id="zero-denominator"),
        pytest.param(["mat", "random", "--modulus", "3", "--count", "0"], id="count"),
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == ""
    assert "error" in err


@pytest.mark.parametrize(
    "payload",
    [
        pytest.param({"rows": 1, "cols": 1, "entries": ["1"]}, id="no-carrier"),
        pytest.param({"carrier": {"family": "mod-complex", "modulus": 3}, "rows": 1, "cols": 1}, id="no-entries"),
        pytest.param(
            {"carrier": {"family": "mod-complex", "modulus": 3}, "rows": 1, "cols": 1, "entries": 5}, id="type"
        ),
    ],
)
def test_malformed_matrix_file(capsys, tmp_path, payload):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(payload))
    code, out, err = run(capsys, "mat", "det", "--modulus", "3", "--a", f"@{path}")
    assert code == EXIT_USAGE
    assert out == ""
    assert "Malformed" in err


def test_parser_errors_exit_with_usage_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["table", "--modulus", "two"])
    assert e.value.code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv, error",
    [
        pytest.param(
            ["poly", "divmod", "--modulus", "3", "--p", "1 + x", "--q", "0"], "PolyZeroDivisionError", id="div0"
        ),
        pytest.param(["mat", "inverse", "--modulus", "5", "--a", "1,0;0,1"], "UnsupportedCarrierError", id="non-field"),
        pytest.param(["scan", "--family", "exact"], "InfiniteCarrierError", id="infinite"),
        pytest.param(["scan", "--modulus", "50", "--max-order", "100"], "BudgetExceededError", id="budget"),
        pytest.param(["table", "--modulus", "17"], "BudgetExceededError", id="table-budget"),
    ],
)
def test_domain_errors(capsys, argv, error):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_DOMAIN
    assert out == ""
    assert error in err
