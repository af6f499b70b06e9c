"""End-to-end checks of the troppadic CLI; one case per invocation."""
import json
import os
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import jsonschema

BIN, ROOT, CASE = sys.argv[1], Path(sys.argv[2]), sys.argv[3]
DATA, SCHEMAS = ROOT / "data", ROOT / "schemas"


def run(*args, env=None, expect=0):
    e = dict(os.environ)
    e.pop("TROPPADIC_SEED", None)
    e.update(env or {})
    p = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=e)
    assert p.returncode == expect, f"{args}: exit {p.returncode}, stderr: {p.stderr}"
    return p


def report(*args, **kw):
    doc = json.loads(run(*args, **kw).stdout)
    validate(doc)
    return doc


def validate(doc, kind=None):
    schema = json.loads((SCHEMAS / f"{kind or doc['type']}.schema.json").read_text())
    jsonschema.validate(doc, schema)


def q(s):
    return Fraction(s)


def case_trop_quintic():
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a.svg", Path(tmp) / "b.svg"
        d = report("trop", DATA / "quintic_p5.series", "--svg", a)
        run("trop", DATA / "quintic_p5.series", "--svg", b)
        assert a.read_bytes() == b.read_bytes(), "SVG not deterministic"
        assert a.read_text().startswith("<svg")
    cells = d["cells"]
    verts = [c for c in cells if c["dim"] == 0]
    assert len(verts) == 1 and [q(x) for x in verts[0]["cell"]["vertices"][0]] == [q("1/4"), q("1/4")]
    rays = sorted(tuple(int(x) for x in c["cell"]["rays"][0]) for c in cells if c["dim"] == 1)
    assert rays == [(-1, -1), (0, 1), (5, 1)], rays


def case_trop_monomial():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "m.svg"
        d = report("trop", DATA / "monomial.series", "--svg", out)
        assert d["cells"] == [] and not out.exists()


def case_trop_precision_exit():
    p = run("trop", DATA / "quintic_p5_weak_tail.series", expect=3)
    assert "nu =" in p.stderr


def case_input_errors():
    run("trop", DATA / "does_not_exist.series", expect=2)
    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / "bad.series"
        bad.write_text('{"prime": 5,\n "nvars": }')
        p = run("trop", bad, expect=2)
        assert ":2:" in p.stderr, p.stderr
    run("trop", DATA / "quintic_p5.series", "--prime", "7", expect=2)
    run("bound-system", DATA / "line_a.series", DATA / "line_b.series", expect=2)
    run("term-deriv", "Ep(x", expect=2)
    run("nosuchcommand", expect=2)


def case_bound_lines():
    d = report("bound-system", DATA / "line_a.series", DATA / "line_b.series", "--seed", "5")
    assert int(d["S"]) >= 1
    assert [c["multiplicity"] for c in d["components"]] == ["1"]


def case_bound_missing_variable():
    d = report("bound-system", DATA / "missing_var_1.series", DATA / "missing_var_2.series", "--seed", "5")
    assert d["transforms"]["factors"] == ["f1 *= (1 + 5^1 x2)"], d["transforms"]
    assert d["transforms"]["pointed_after"]


def case_bound_determinism():
    args = ["bound-system", DATA / "line_a.series", DATA / "line_b.series"]
    a = run(*args, "--seed", "11").stdout
    b = run(*args, "--jobs", "4", env={"TROPPADIC_SEED": "11"}).stdout
    assert a == b, "report depends on jobs or seed source"
    c = json.loads(run(*args, "--seed", "12").stdout)
    da = json.loads(a)
    assert [x["multiplicity"] for x in da["components"]] == [x["multiplicity"] for x in c["components"]]
    assert [x["shifts"] for x in da["components"]] != [x["shifts"] for x in c["components"]]


def case_bound_parameterized():
    d = report("bound-system", DATA / "box_fixture.series", DATA / "line_a.series", "--seed", "2")
    assert d["series"][0]["d"] == 3, d["series"]


def case_strassmann():
    assert report("strassmann", DATA / "strassmann_5x_x5.series")["count"] == 5


def case_wdiv():
    d = report("wdiv", DATA / "wdiv_f.series", DATA / "wdiv_g.series", "--prec", "8", "--deg", "8")
    assert d["order"] == 2
    assert d["Q"]["terms"] == [{"exps": [1], "coeff": {"unit": "1", "val": "0", "prec": "8"}}], d["Q"]["terms"]
    assert d["A"][0]["terms"] == []
    assert [t["coeff"]["val"] for t in d["A"][1]["terms"]] == ["1"]


def case_mixed_volume():
    assert report("mixed-volume", DATA / "mv_family.json")["mixed_volume"] == "4"
    assert report("mixed-volume", DATA / "mv_family.json", "--normalization", "normalized")["mixed_volume"] == "2"


def case_term_deriv():
    assert report("term-deriv", "Ep(x)")["derivative"] == "p*Ep(x)"
    assert report("term-deriv", "x*x")["derivative"] == "2*x"
    d = report("term-deriv", "Ep(x)*Ep(y) + 3*x", "--var", "y", "--realize", "--prec", "4", "--deg", "8")
    assert d["derivative"] == "p*Ep(x)*Ep(y)" and d["variables"] == ["x", "y"]


def case_data_files_validate():
    for f in DATA.glob("*.series"):
        validate(json.loads(f.read_text()), "series")
    validate(json.loads((DATA / "mv_family.json").read_text()), "polytope_family")


globals()["case_" + CASE]()
print("ok", CASE)
