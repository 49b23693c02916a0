import json
import subprocess
import sys

import pytest

from polycobar.cli import element_from_json, main, parse_dims
from polycobar.cobar import DgAlgebra, cobar_dj
from polycobar.complexes import SimplicialComplex
from polycobar.errors import MalformedInputError
from polycobar.whitehead import iterated_example_chain

SUBST_FACETS = [[4, 5], [1, 2, 4], [1, 2, 5], [1, 3, 4], [1, 3, 5], [2, 3, 4], [2, 3, 5]]


@pytest.fixture
def files(tmp_path):
    def write(name, facets, vertices=None):
        data = {"facets": facets}
        if vertices:
            data["vertices"] = vertices
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return {
        "edge": write("edge.json", [[1, 2]]),
        "wedge": write("wedge.json", [[1], [2]]),
        "delta2": write("delta2.json", [[1, 2, 3]]),
        "subst": write("subst.json", SUBST_FACETS),
        "bad": write("bad.json", [[1, 1]]),
        "p3": write("p3.json", [[3]]),
        "p4": write("p4.json", [[4]]),
        "dir": str(tmp_path),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- complex ---------------------------------------------------------------------


def test_complex_bracket(capsys):
    code, out, _ = run(capsys, "complex", "bracket", "[[m1,m2,m3],m4,m5]")
    assert code == 0
    assert "boundary: {4,5} {1,2,4} {1,2,5} {1,3,4} {1,3,5} {2,3,4} {2,3,5}" in out


def test_complex_bracket_inclusions(capsys, files):
    code, out, _ = run(capsys, "complex", "bracket", "[[m1,m2,m3],m4,m5]", "--complex", files["subst"],
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["boundary_in_K"] is True and data["full_in_K"] is False
    assert data["boundary"]["facets"] == SUBST_FACETS


def test_complex_substitute_singletons(capsys, files, tmp_path):
    parts = []
    for v in (1, 2, 4, 5):
        p = tmp_path / f"pt{v}.json"
        p.write_text(json.dumps({"facets": [[v]]}))
        parts += ["--part", str(p)]
    K = tmp_path / "k.json"
    K.write_text(json.dumps({"facets": [[1, 2, 4], [4, 5], [2, 5]]}))
    code, out, _ = run(capsys, "complex", "substitute", "--complex", str(K), *parts, "--format", "json")
    assert code == 0
    assert SimplicialComplex.from_dict(json.loads(out)) == SimplicialComplex.from_facets([[1, 2, 4], [4, 5], [2, 5]])


def test_complex_substitute_subst(capsys, files):
    code, out, _ = run(capsys, "complex", "substitute", "--complex", '{"facets": [[1,2],[1,3],[2,3]]}',
                       "--part", '{"facets": [[1,2],[1,3],[2,3]]}',
                       "--part", files["p4"], "--part", '{"facets": [[5]]}', "--format", "json")
    assert code == 0 and json.loads(out)["facets"] == SUBST_FACETS


def test_complex_show(capsys, files):
    code, out, _ = run(capsys, "complex", "show", "--complex", files["delta2"])
    assert code == 0 and "simplices: 8" in out


def test_malformed_facet_file(capsys, files):
    code, _, err = run(capsys, "complex", "show", "--complex", files["bad"])
    assert code == 1 and "duplicate" in err


def test_missing_file(capsys, files):
    code, _, err = run(capsys, "complex", "show", "--complex", files["dir"] + "/nope.json")
    assert code == 1 and "cannot read" in err


def test_bracket_syntax_error(capsys):
    code, _, err = run(capsys, "complex", "bracket", "[m1,,m2]")
    assert code == 1 and "offset 4" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "homology", "cpn", "2")[0] == 1
    assert run(capsys, "cobar", "spheres")[0] == 1
    assert run(capsys, "cobar", "cpn", "x")[0] == 1
    assert run(capsys, "cobar", "dj", "--max-degree", "3")[0] == 1
    assert run(capsys, "cobar", "cpn", "2", "--jobs", "0")[0] == 1


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


# --- cobar ---------------------------------------------------------------------------


def test_cobar_dj_check(capsys, files):
    code, out, _ = run(capsys, "cobar", "dj", "--complex", files["subst"], "--max-degree", "9", "--check")
    assert code == 0 and out.strip().endswith("PASS")


def test_cobar_spheres_dims(capsys, files):
    code, out, _ = run(capsys, "cobar", "spheres", "--dims", "1=5,2=2")
    assert code == 0 and "d = -b{1}*b{2} + b{2}*b{1}" in out
    code, out2, _ = run(capsys, "cobar", "spheres", "--complex", files["edge"], "--dims", "5,2")
    assert out2 == out


def test_cobar_cpn(capsys):
    code, out, _ = run(capsys, "cobar", "cpn", "3")
    assert code == 0 and "d = a1*a2 + a2*a1" in out


def test_cobar_requires_bound(capsys, files):
    code, _, err = run(capsys, "cobar", "dj", "--complex", files["edge"])
    assert code == 2 and "--max-degree" in err
    assert run(capsys, "cobar", "cpn", "inf")[0] == 2
    assert run(capsys, "cobar", "cpn", "inf", "--max-degree", "7")[0] == 0


def test_cobar_precondition(capsys, files):
    code, _, err = run(capsys, "cobar", "spheres", "--complex", files["edge"], "--dims", "1,2")
    assert code == 2 and "simply connected" in err


def test_cobar_json_round_trip(capsys, files):
    code, out, _ = run(capsys, "cobar", "dj", "--complex", files["subst"], "--max-degree", "5", "--check",
                       "--format", "json")
    data = json.loads(out)
    assert data["check"]["passed"]
    A = DgAlgebra.from_dict(data)
    assert A.same_differentials(cobar_dj(SimplicialComplex.from_facets(SUBST_FACETS), 5))


# --- homology --------------------------------------------------------------------------


def test_homology_cpn2(capsys):
    code, out, _ = run(capsys, "homology", "cpn", "2", "--up-to", "9", "--format", "json")
    assert code == 0
    assert [d["rank"] for d in json.loads(out)["degrees"]] == [1, 1, 0, 0, 1, 1, 0, 0, 1, 1]


def test_homology_edge(capsys, files):
    code, out, _ = run(capsys, "homology", "spheres", "--complex", files["edge"], "--dims", "2,2", "--up-to", "6",
                       "--format", "json")
    assert [d["rank"] for d in json.loads(out)["degrees"]] == [1, 2, 3, 4, 5, 6, 7]


def test_homology_wedge_table(capsys, files):
    code, out, _ = run(capsys, "homology", "spheres", "--complex", files["wedge"], "--up-to", "4")
    assert code == 0
    rows = [line.split("|") for line in out.splitlines()[2:]]
    assert [int(r[1]) for r in rows] == [int(r[3]) for r in rows] == [1, 2, 4, 8, 16]


def test_homology_bound_too_small(capsys, files):
    code, _, err = run(capsys, "homology", "dj", "--complex", files["edge"], "--up-to", "5", "--max-degree", "5")
    assert code == 2
    assert run(capsys, "homology", "cpn", "inf", "--up-to", "12")[0] == 2


# --- whitehead --------------------------------------------------------------------------


def test_whitehead_example(capsys):
    code, out, _ = run(capsys, "whitehead", "--example", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["degree"] == 7 and data["cycle"] is True
    chain = iterated_example_chain()
    assert element_from_json(data["terms"], chain.ambient.generators) == chain.chain
    assert data["chain"] == str(chain.chain)


def test_whitehead_wedge(capsys, files):
    code, out, _ = run(capsys, "whitehead", "--bracket", "[m1,m2]", "--complex", files["wedge"], "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["zero_class"] is False and data["witness"] is None


def test_whitehead_delta2(capsys, files):
    code, out, _ = run(capsys, "whitehead", "--bracket", "[m1,m2,m3]", "--complex", files["delta2"])
    assert code == 0 and "zero class: True" in out and "witness: x{1,2,3}" in out


def test_whitehead_not_defined(capsys, files):
    code, _, err = run(capsys, "whitehead", "--bracket", "[m1,m2,m3]", "--complex", files["edge"])
    assert code == 2 and "not defined" in err and "{3}" in err


def test_whitehead_other_shapes(capsys):
    code, out, _ = run(capsys, "whitehead", "--bracket", "[[m1,m2],m3]", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["chain"] is None and data["boundary_in_K"] is True


def test_whitehead_argument_checks(capsys):
    assert run(capsys, "whitehead")[0] == 1
    assert run(capsys, "whitehead", "--example", "--bracket", "[m1,m2]")[0] == 1
    assert run(capsys, "whitehead", "--example", "--max-degree", "7")[0] == 2


# --- general -------------------------------------------------------------------------------


def test_parse_dims():
    assert parse_dims("1=5,2=2") == {1: 5, 2: 2}
    assert parse_dims("3", [1, 2]) == {1: 3, 2: 3}
    assert parse_dims("2,3", [4, 7]) == {4: 2, 7: 3}
    for bad in ("1=2,3", "a", "2,2,2"):
        with pytest.raises(MalformedInputError):
            parse_dims(bad, [1, 2])


@pytest.mark.parametrize(
    "argv",
    [
        ["whitehead", "--example"],
        ["homology", "dj", "--complex", "SUBST", "--up-to", "5", "--format", "json"],
        ["cobar", "spheres", "--complex", "SUBST", "--format", "json"],
    ],
)
def test_deterministic_output(capsys, files, argv):
    argv = [files["subst"] if a == "SUBST" else a for a in argv]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "polycobar", "cobar", "cpn", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "d = a1*a1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "polycobar", "complex", "show", "--complex", files["bad"]],
                          capture_output=True, text=True)
    assert proc.returncode == 1


def test_homology_json_matches_library(capsys):
    from polycobar.cobar import ah_cpn
    from polycobar.homology import homology

    code, out, _ = run(capsys, "homology", "cpn", "3", "--up-to", "7", "--format", "json")
    assert json.loads(out) == homology(ah_cpn(3, 8), 7).to_dict()


def test_invariant_violation_exit_code(capsys, monkeypatch):
    import polycobar.cli as cli
    from polycobar.errors import InvariantViolation

    def broken(*args, **kwargs):
        raise InvariantViolation("routes disagree")

    monkeypatch.setattr(cli, "iterated_example_chain", broken)
    code, _, err = run(capsys, "whitehead", "--example")
    assert code == 3 and "routes disagree" in err
