import json
import random

import jsonschema
import pytest

from cubeflow import cli
from cubeflow.specseq import random_filtered_complex

TREFOIL = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]


@pytest.fixture
def pd_file(tmp_path):
    def make(pd, name="k"):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps({"pd": pd, "name": name}))
        return str(p)
    return make


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_kh_unknot(capsys, pd_file):
    code, out = run(capsys, "kh", "--pd", pd_file([], "unknot"))
    assert code == 0
    assert out.out.strip() == "t=0 q=0 delta=0 rank=1"


def test_kh_json_validates(capsys, pd_file):
    code, out = run(capsys, "kh", "--pd", pd_file(TREFOIL), "--json")
    data = json.loads(out.out)
    jsonschema.validate(data, cli.schemas()["kh"])
    assert code == 0 and data["total_rank"] == 3


def test_kh_polynomials(capsys, pd_file):
    _, out = run(capsys, "kh", "--pd", pd_file(TREFOIL), "--polynomials")
    assert "poincare:" in out.out and "euler:" in out.out


def test_sig_with_oracle(capsys, pd_file):
    code, out = run(capsys, "sig", "--pd", pd_file(TREFOIL), "--compare-oracle")
    assert code == 0
    assert out.out.splitlines() == ["sigma=2 det=3 nullity=0", "oracle: MATCH"]


def test_sig_json(capsys, pd_file):
    code, out = run(capsys, "sig", "--pd", pd_file(TREFOIL), "--json", "--compare-oracle")
    data = json.loads(out.out)
    jsonschema.validate(data, cli.schemas()["sig"])
    assert data["oracle"]["match"]


def test_output_is_deterministic(capsys, pd_file):
    path = pd_file(TREFOIL)
    _, first = run(capsys, "kh", "--pd", path, "--json")
    _, second = run(capsys, "kh", "--pd", path, "--json")
    assert first.out == second.out


@pytest.mark.parametrize("which", ["kh", "jones", "sig"])
@pytest.mark.parametrize("pd", [TREFOIL, [[4, 1, 3, 2], [2, 3, 1, 4]]], ids=["knot", "two-component"])
def test_oracles_match(capsys, pd_file, which, pd):
    code, out = run(capsys, "oracle", which, "--pd", pd_file(pd))
    assert code == 0 and "MISMATCH" not in out.out


def test_ss_from_complex(capsys, tmp_path):
    c = random_filtered_complex(random.Random(5), 14)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(c.to_json()))
    code, out = run(capsys, "ss", "--complex", str(p), "--json")
    data = json.loads(out.out)
    jsonschema.validate(data, cli.schemas()["ss"])
    assert code == 0 and data["e_infinity_matches"]


def test_ss_from_pd(capsys, pd_file):
    code, out = run(capsys, "ss", "--from-pd", pd_file(TREFOIL), "--pages", "2")
    assert code == 0 and "E2: total 3" in out.out


def test_ss_bad_complex(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"generators": [{"id": 0, "t": 0}], "d": []}))
    code, out = run(capsys, "ss", "--complex", str(p))
    assert code == 2 and "error" in out.err


def test_ss_filtration_violation(capsys, tmp_path):
    p = tmp_path / "c.json"
    gens = [{"id": 0, "t": 1, "delta": 0}, {"id": 1, "t": 0, "delta": 1}]
    p.write_text(json.dumps({"generators": gens, "d": [[0, 1]]}))
    code, _ = run(capsys, "ss", "--complex", str(p))
    assert code == 2


def test_polytope(capsys):
    code, out = run(capsys, "polytope", "--lattice", "1,1,1", "--fvector", "--realize", "--cancellation")
    assert code == 0
    assert "f-vector: 6 6 1" in out.out
    assert "duality: PASS" in out.out
    assert "realization: 6 vertices, 6 edges, dimension 2" in out.out
    assert "cubes: 30, survivors: 6, cancelling: 24" in out.out


def test_polytope_json(capsys):
    code, out = run(capsys, "polytope", "--lattice", "2,1", "--fvector", "--json")
    jsonschema.validate(json.loads(out.out), cli.schemas()["polytope"])
    assert code == 0


def test_pathalg_verify(capsys):
    code, out = run(capsys, "pathalg", "--lattice", "1,1,1", "--verify")
    assert code == 0
    assert out.out.strip() == "identity: PASS (all 27 intervals)"


def test_pathalg_dump_json(capsys):
    code, out = run(capsys, "pathalg", "--lattice", "1,1", "--dump", "--json")
    data = json.loads(out.out)
    jsonschema.validate(data, cli.schemas()["pathalg"])
    assert code == 0 and all(r["ok"] for r in data["dump"])


def test_pathalg_dump_unknown_lattice(capsys):
    code, _ = run(capsys, "pathalg", "--lattice", "2,2", "--dump")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["pathalg", "--lattice", "1,x", "--verify"],
    ["pathalg", "--lattice", "0", "--verify"],
    ["polytope", "--lattice", "2,1", "--cancellation"],
])
def test_bad_lattice_input(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_bad_pd_input(capsys, pd_file, tmp_path):
    code, _ = run(capsys, "kh", "--pd", pd_file([[1, 2, 3]]))
    assert code == 2
    code, _ = run(capsys, "sig", "--pd", str(tmp_path / "missing.json"))
    assert code == 2


def test_crossing_bound(capsys, pd_file, monkeypatch):
    monkeypatch.setenv("CUBEFLOW_MAX_CROSSINGS", "2")
    code, _ = run(capsys, "kh", "--pd", pd_file(TREFOIL))
    assert code == 2


@pytest.mark.parametrize("argv", [["kh", "--pd", "x", "--bogus"], ["pathalg", "--lattice", "1"], ["nothing"]])
def test_argument_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_corpus_listing(capsys):
    code, out = run(capsys, "corpus")
    assert code == 0 and len(out.out.splitlines()) == 85


def test_corpus_acceptance_small(capsys):
    code, out = run(capsys, "corpus", "--run-acceptance", "--max-crossings", "6")
    assert code == 0
    assert out.out.count("PASS") == 4
