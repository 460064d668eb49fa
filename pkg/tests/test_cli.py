import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from lrsdensity.cli import run
from lrsdensity.jsonio import decimal_str, dumps, parse_rational

EXAMPLE3_LOOP = """\
x=0; y=6; z=4;
while true
{
  x=4x+3y;
  y=4y-3x;
  z=5z;
  if y+z>0 { Region A } else { Region B }
}
"""
SCHEMA = json.loads(resources.files("lrsdensity").joinpath("schema.json").read_text())


def call(*argv):
    code, text = run(list(argv))
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    return code, doc, text


@pytest.fixture
def ex3(tmp_path):
    p = tmp_path / "ex3.loop"
    p.write_text(EXAMPLE3_LOOP)
    return str(p)


def gauss_pow(a, b, n):
    x, y = 1, 0
    for _ in range(n):
        x, y = x * a - y * b, x * b + y * a
    return x


def test_loop_density_example3(ex3):
    code, doc, _ = call("loop", ex3, "density", "--eps", "1/200")
    assert code == 0 and doc["command"] == "loop density"
    v = doc["result"]["value"]
    lo, hi = Fraction(v["lo"]), Fraction(v["hi"])
    assert hi - lo <= Fraction(1, 100) and lo <= Fraction("0.732279") <= hi
    assert doc["input"]["sequence"] == {"coeffs": ["13", "-65", "125"], "init": ["44", "142", "236"]}


def test_decide_one_fibonacci():
    code, doc, _ = call("decide-one", "--coeffs", "1,1", "--init", "1,1")
    assert code == 0 and doc["result"]["decision"] == "yes"


def test_rational_example2():
    code, doc, _ = call("rational", "--coeffs", "6/5,-1", "--init", "3/5,-7/25")
    assert doc["result"]["decision"] == "rational" and doc["result"]["value"] == "1/2"
    assert doc["result"]["value_decimal"] == "0.5"


def test_rational_example3_irrational(ex3):
    code, doc, _ = call("loop", ex3, "rational")
    assert doc["result"]["decision"] == "irrational"


def test_empirical_and_signs():
    code, doc, _ = call("empirical", "--coeffs", "-1", "--init", "1", "--n", "1000")
    assert doc["result"]["density"] == "1/2"
    code, doc, _ = call("signs", "--coeffs", "-1", "--init", "1", "--from", "3", "--to", "6")
    assert doc["result"]["runs"] == [["+", 1], ["-", 1], ["+", 1], ["-", 1]]


def test_analyze_example3(ex3):
    code, doc, _ = call("loop", ex3, "analyze")
    r = doc["result"]
    assert r["subsequences"]["P1"] == 1 and r["subsequences"]["P"] == 2
    assert r["eta"] == [1, 1] and r["minimal_order"] == 3


def test_file_inputs(tmp_path):
    f = tmp_path / "fib.json"
    f.write_text(json.dumps({"coeffs": ["1", "1"], "init": ["1", "1"]}))
    assert call("decide-one", "--file", str(f))[1]["result"]["decision"] == "yes"
    g = tmp_path / "loop.json"
    g.write_text(json.dumps({"loop": EXAMPLE3_LOOP}))
    code, doc, _ = call("decide-zero", "--file", str(g))
    assert doc["result"]["decision"] == "positive" and "loop" in doc["input"]


def test_nonstrict_guard_is_complement(tmp_path):
    p = tmp_path / "alt.loop"
    # u_n = 0, 1, 0, -1, ...: u >= 0 on 3/4 of the indices
    p.write_text("a = 1; b = 0; while true { a = -b; b = a; if b >= 0 }")
    code, doc, _ = call("loop", str(p), "empirical", "--n", "1000")
    assert doc["result"]["density"] == "3/4"
    code, doc, _ = call("loop", str(p), "density", "--eps", "1/10")
    assert doc["result"]["value"] == "3/4"
    assert "complement" in doc["input"]["loop"]["note"]


def test_unknown_exits_2():
    # Re((39+52i)^n) + Re((25+60i)^n) - 2 65^n: sup F = 0 exactly on a 2-torus
    p = [1]
    for f in ([65**2, -78, 1], [65**2, -50, 1], [-65, 1]):
        p = [sum(p[i] * f[j - i] for i in range(len(p)) if 0 <= j - i < len(f)) for j in range(len(p) + len(f) - 1)]
    coeffs = [-c for c in reversed(p[:-1])]
    init = [gauss_pow(39, 52, n) + gauss_pow(25, 60, n) - 2 * 65**n for n in range(1, 6)]
    argv = ["decide-zero", "--coeffs", ",".join(map(str, coeffs)), "--init", ",".join(map(str, init)),
            "--max-boxes", "50"]
    code, doc, _ = call(*argv)
    assert code == 2 and doc["result"]["decision"] == "unknown"


@pytest.mark.parametrize(
    "argv",
    [
        ["density"],
        ["density", "--coeffs", "1,1", "--init", "1"],
        ["density", "--coeffs", "0.5", "--init", "1"],
        ["density", "--coeffs", "1", "--init", "1", "--eps", "2"],
        ["frobnicate"],
        ["empirical", "--coeffs", "1", "--init", "1", "--n", "0"],
    ],
)
def test_usage_errors_exit_1(argv):
    code, doc, _ = call(*argv)
    assert code == 1 and doc["error"]["type"] in ("usage", "input")


def test_loop_syntax_error_reports_position(tmp_path):
    p = tmp_path / "bad.loop"
    p.write_text("x = 1;\nwhile true {\n  x = x*x;\n  if x > 0\n}\n")
    code, doc, _ = call("loop", str(p), "density")
    assert code == 1 and doc["error"]["type"] == "loop-syntax"
    assert (doc["error"]["line"], doc["error"]["col"]) == (3, 7)


def test_determinism_and_threads():
    base = ["density", "--monte-carlo", "--samples", "4000", "--seed", "11", "--coeffs", "13,-65,125",
            "--init", "44,142,236"]
    t1 = run(base)[1]
    assert t1 == run(base)[1]
    assert t1 == run(base + ["--workers", "3"])[1]
    assert t1 != run(base[:-4] + ["--seed", "12"] + base[-4:])[1]


def test_subprocess_entry_point(ex3):
    out = subprocess.run([sys.executable, "-m", "lrsdensity", "loop", ex3, "decide-one"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["decision"] == "no"


def test_help_exits_zero(capsys):
    from lrsdensity.cli import main

    assert main(["--help"]) == 0
    assert "decide-zero" in capsys.readouterr().out


@given(st.fractions(max_denominator=10**6))
@settings(max_examples=100)
def test_rationals_round_trip_through_json(x):
    doc = json.loads(dumps({"v": x, "w": [x, x]}))
    assert parse_rational(doc["v"]) == x and [parse_rational(s) for s in doc["w"]] == [x, x]
    assert float(doc["v_decimal"]) == pytest.approx(float(x), rel=1e-11, abs=1e-300)


def test_decimal_rendering_digits():
    assert decimal_str(Fraction(2, 3)) == "0.666666666667"
    assert decimal_str(Fraction(1, 2)) == "0.5"
