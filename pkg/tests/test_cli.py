import io
import json
from pathlib import Path

import jsonschema
import pytest

from lsalgebroid.bialgebroid import s_bracket
from lsalgebroid.cli import main
from lsalgebroid.serialize import REPORT_SCHEMA, algebroid_from_json, read_json, symmetric_from_json

DATA = Path(__file__).resolve().parent.parent / "data" / "examples"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    doc = json.loads(out) if out else None
    if doc is not None:
        jsonschema.validate(doc, REPORT_SCHEMA)
    return code, doc, err


def d(name):
    return DATA / name


def test_check_lsa_exit_codes():
    assert run("check-lsa", d("abelian.json"), "--trials", 3)[0] == 0
    code, doc, _ = run_json("check-lsa", d("swap.json"))
    assert code == 1 and not doc["passed"]
    assert doc["checks"][0]["witness"]["inputs"] == ["e1", "e2", "e1"]
    code, out, err = run("check-lsa", d("malformed.json"))
    assert code == 2 and out == "" and "/products/1,3" in err


def test_missing_file_and_usage():
    assert run("check-lsa", d("nope.json"))[0] == 2
    assert run("check-lsa")[0] == 2
    assert run("search", "--dim", 0)[0] == 2
    assert run("search", "--dim", 5)[0] == 2
    assert run("identities", d("abelian.json"), "--trials", "many")[0] == 2


def test_identities():
    code, doc, _ = run_json("identities", d("tangent_R1.json"), "--trials", 3)
    assert code == 0
    assert len(doc["checks"][0]["checks"]) == 11


def test_bialgebroid_and_double(tmp_path):
    assert run("check-bialgebroid", d("idempotent.json"), d("abelian_dual.json"), "--trials", 3)[0] == 0
    out = tmp_path / "E.json"
    code, doc, _ = run_json("double", d("idempotent.json"), d("abelian_dual.json"), "--trials", 3, "-o", out)
    assert code == 0 and out.exists()
    assert run("dirac", out, d("sub_A.json"))[0] == 0
    assert run("double", d("abelian_dual.json"), d("abelian_dual.json"))[0] == 2


def test_dirac_and_manin():
    assert run("dirac", d("double_idempotent.json"), d("sub_A.json"))[0] == 0
    assert run("manin", d("double_idempotent.json"), d("sub_A.json"), d("sub_Astar.json"))[0] == 0
    code, doc, _ = run_json("manin", d("double_idempotent.json"), d("sub_A.json"), d("sub_A.json"))
    assert code == 1 and doc["checks"][0]["witness"]["inputs"] == ["L1", "L2"]


def test_mc():
    assert run("mc", d("idempotent.json"), d("abelian_dual.json"), d("H_e1e1.json"))[0] == 0
    code, doc, _ = run_json("mc", d("idempotent.json"), d("abelian_dual.json"), d("H_e1e2.json"))
    assert code == 1
    assert doc["checks"][0]["witness"] == {"inputs": ["ε1", "ε2", "ε2"], "residual": "1"}
    code, _, err = run("mc", d("tangent_R1.json"), d("abelian_dual.json"), d("H_e1e2.json"))
    assert code == 2 and err


def test_hessian():
    code, doc, _ = run_json("hessian", "--potential", "x1^2*x2/2", "--vars", "x1,x2", "--trials", 3)
    assert code == 0
    assert doc["metric"] == [["x2", "x1"], ["x1", "0"]]
    names = [c["name"] for c in doc["checks"][0]["checks"]]
    assert names[0] == "pseudo-Hessian"
    assert run("hessian", "--potential", "x1", "--vars", "x1")[0] == 2
    code, doc, _ = run_json("hessian", "--potential", "x^3/6", "--vars", "x", "--christoffel",
                            d("christoffel_R1.json"), "--trials", 3)
    # covariant Hessian x - x^2/2 for the connection with Gamma_11^1 = 1
    assert code == 0 and doc["metric"] == [["-x^2/2 + x"]]


def test_search(tmp_path):
    out = tmp_path / "cat.json"
    code, doc, _ = run_json("search", "--dim", 2, "--count", 5, "--seed", 7, "--mc", "-o", out)
    assert code == 0 and len(doc["catalog"]) == 5
    for entry in read_json(out)["catalog"]:
        alg = algebroid_from_json(entry["structure"])
        if "H" in entry:
            assert s_bracket(alg, symmetric_from_json(entry["H"], alg.base)).is_zero
    code, doc, _ = run_json("search", "--dim", 1, "--count", 10)
    assert code == 0 and doc["catalog"]


@pytest.mark.parametrize("argv", [
    ("check-lsa", "tangent_R2.json"),
    ("check-bialgebroid", "idempotent.json", "abelian_dual.json"),
    ("mc", "idempotent.json", "abelian_dual.json", "H_e1e2.json"),
    ("manin", "double_idempotent.json", "sub_A.json", "sub_Astar.json"),
])
def test_deterministic_bytes(argv):
    args = [argv[0]] + [d(a) for a in argv[1:]] + ["--json", "--trials", 3, "--seed", 4]
    assert run(*args)[1] == run(*args)[1]


def test_timings_flag():
    _, doc, _ = run_json("check-lsa", d("abelian.json"), "--trials", 1, "--timings")
    assert "elapsed_ms" in doc["checks"][0]
    _, doc, _ = run_json("check-lsa", d("abelian.json"), "--trials", 1)
    assert "elapsed_ms" not in doc["checks"][0]


def test_text_output():
    code, out, _ = run("check-lsa", d("swap.json"))
    assert "[FAIL] left-symmetric" in out and out.endswith("overall: FAIL\n")
    assert len(run("check-lsa", d("abelian.json"), "--trials", 1)[1].splitlines()[1].split("sha256=")[1]) == 16
