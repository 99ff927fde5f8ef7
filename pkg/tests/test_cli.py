import json

import pytest

from esakialab.cli import run
from esakialab.heyting import dual_algebra
from esakialab.poset_core import make_delta0, make_ladder, make_medvedev, strong_regularization


@pytest.fixture()
def written(tmp_path, p1, c2, fork, w3, diamond):
    paths = {}
    for P in (p1, c2, fork, w3, diamond):
        path = tmp_path / f"{P.name.lower()}.json"
        path.write_text(P.to_json() + "\n", encoding="utf-8")
        paths[P.name] = str(path)
    for n in (2, 3):
        F = make_delta0(n)
        path = tmp_path / f"f{n}.json"
        path.write_text(F.to_json(), encoding="utf-8")
        paths[F.name] = str(path)
    return paths


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_families(capsys):
    code, out, err = invoke(capsys, "gen", "medvedev", "2")
    assert code == 0 and err == ""
    assert out == make_medvedev(2).to_json() + "\n"
    code, out, _ = invoke(capsys, "gen", "ladder", "5", "--kind", "R2")
    assert code == 0
    assert json.loads(out)["name"] == "R2@5"
    assert len(json.loads(out)["points"]) == 18


def test_gen_starify(capsys, written):
    code, out, _ = invoke(capsys, "gen", "starify", written["C2"])
    assert code == 0
    star, _ = strong_regularization(
        __import__("esakialab").FinitePoset.from_json(
            open(written["C2"], encoding="utf-8").read()
        )
    )
    assert out == star.to_json() + "\n"


def test_gen_usage_errors(capsys):
    code, _, err = invoke(capsys, "gen", "medvedev", "x")
    assert code == 2 and "integer size" in err
    code, _, err = invoke(capsys, "gen", "medvedev", "0")
    assert code == 2 and err.startswith("error:")
    code, _, _ = invoke(capsys, "gen", "mystery", "3")
    assert code == 2


def test_dual_summary(capsys, written):
    code, out, _ = invoke(capsys, "dual", written["V"])
    assert code == 0
    assert out == "size: 5\nregulars: 4\nregularly generated: yes\n"
    code, out, _ = invoke(capsys, "dual", written["C2"], "--json")
    assert code == 0
    assert json.loads(out) == {
        "size": 3,
        "regulars": 2,
        "regularly_generated": False,
    }


def test_check_regular_contract_line(capsys, tmp_path):
    path = tmp_path / "f2.json"
    path.write_text(make_delta0(2).to_json(), encoding="utf-8")
    code, out, _ = invoke(capsys, "check-regular", str(path))
    assert code == 0
    assert out == "regular: yes (structural=yes, sim-infty=yes, algebraic=yes)\n"


def test_check_regular_small_poset_adds_morphism(capsys, written):
    code, out, _ = invoke(capsys, "check-regular", written["V"])
    assert code == 0
    assert out == (
        "regular: yes (structural=yes, sim-infty=yes,"
        " algebraic=yes, morphism=yes)\n"
    )
    code, out, _ = invoke(capsys, "check-regular", written["C2"])
    assert code == 0
    assert out.startswith("regular: no (structural=no")


def test_check_regular_json(capsys, written):
    code, out, _ = invoke(capsys, "check-regular", written["D4"], "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["agree"] is True and payload["regular"] is False
    assert set(payload) == {
        "agree", "algebraic", "morphism", "regular", "sim_infty", "structural",
    }


def test_quotient(capsys, written):
    code, out, _ = invoke(capsys, "quotient", written["D4"], "--n", "inf")
    assert code == 0
    assert json.loads(out)["points"] == ["{o,a,b,t}"]
    code, out, _ = invoke(capsys, "quotient", written["V"], "--n", "0")
    assert code == 0
    assert json.loads(out)["points"] == ["r", "a", "b"]
    assert invoke(capsys, "quotient", written["V"], "--n", "-1")[0] == 2
    assert invoke(capsys, "quotient", written["V"], "--n", "x")[0] == 2


def test_validate_modes(capsys, written):
    code, out, _ = invoke(capsys, "validate", written["C2"], "--formula", "p -> p")
    assert (code, out) == (0, "algebraic: valid\n")
    code, out, _ = invoke(capsys, "validate", written["C2"], "--formula", "p | ~p")
    assert (code, out) == (1, "algebraic: invalid\n")
    code, out, _ = invoke(
        capsys, "validate", written["C2"], "--formula", "~~p -> p", "--dna"
    )
    assert (code, out) == (0, "dna: valid\n")
    code, out, _ = invoke(
        capsys, "validate", written["C2"], "--formula", "p (+) ~p", "--team", "1"
    )
    assert (code, out) == (0, "team k=1: valid\n")
    code, out, _ = invoke(
        capsys, "validate", written["C2"], "--formula", "p | ~p", "--json"
    )
    assert code == 1
    assert json.loads(out) == {"mode": "algebraic", "valid": False}


def test_validate_accepts_algebra_files(capsys, written, tmp_path, fork):
    path = tmp_path / "algebra.json"
    path.write_text(dual_algebra(fork).to_json(), encoding="utf-8")
    code, out, _ = invoke(capsys, "validate", str(path), "--formula", "p -> ~~p")
    assert (code, out) == (0, "algebraic: valid\n")


def test_validate_guard_and_usage(capsys, written):
    code, _, err = invoke(
        capsys, "validate", written["C2"], "--formula", "p", "--team", "3"
    )
    assert code == 2 and "force" in err
    code, _, err = invoke(capsys, "validate", written["C2"], "--formula", "p &")
    assert code == 2 and "bad formula" in err
    code, _, _ = invoke(
        capsys, "validate", written["C2"], "--formula", "p", "--dna", "--team", "1"
    )
    assert code == 2


def test_jankov_output(capsys, written):
    code, out, _ = invoke(capsys, "jankov", written["V"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "atoms: p0={} p1={a} p2={b} p4={r,a,b}"
    assert lines[1] == "second greatest: {a,b}"
    assert lines[2].startswith("chi: ")
    code, out, _ = invoke(capsys, "jankov", written["V"], "--json")
    assert code == 0
    assert set(json.loads(out)) == {"source", "atom_map", "chi"}


def test_jankov_error_codes(capsys, written):
    code, _, err = invoke(capsys, "jankov", written["C2"])
    assert code == 1 and "not regularly generated" in err
    code, _, err = invoke(capsys, "jankov", written["W3"])
    assert code == 2 and "force" in err
    code, out, _ = invoke(capsys, "jankov", written["W3"], "--force")
    assert code == 0 and out.startswith("atoms:")


def test_leq(capsys, written):
    code, out, _ = invoke(capsys, "leq", written["C2"], written["D4"])
    assert (code, out) == (0, "leq: yes\n")
    code, out, _ = invoke(capsys, "leq", written["V"], written["C2"])
    assert (code, out) == (0, "leq: no\n")
    code, out, _ = invoke(capsys, "leq", written["C2"], written["D4"], "--json")
    assert code == 0 and json.loads(out) == {"leq": True}


def test_antichain(capsys, written):
    code, out, _ = invoke(capsys, "antichain", written["F2"], written["F3"])
    assert code == 0
    assert "comparable pairs: none" in out
    assert out.endswith("antichain: yes\n")
    code, out, _ = invoke(capsys, "antichain", written["C2"], written["D4"])
    assert code == 1
    assert "comparable pairs: (C2,D4)" in out
    assert out.endswith("antichain: no\n")
    assert invoke(capsys, "antichain", written["C2"])[0] == 2


def test_antichain_json(capsys, written):
    code, out, _ = invoke(
        capsys, "antichain", written["C2"], written["D4"], "--json"
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["antichain"] is False
    assert payload["comparable_pairs"] == [[0, 1]]
    assert payload["posets"] == ["C2", "D4"]


def test_dot(capsys, written):
    code, out, _ = invoke(capsys, "dot", written["V"])
    assert code == 0
    assert out.startswith("digraph") and '"r" -> "a"' in out


def test_file_errors(capsys, tmp_path, written):
    assert invoke(capsys, "dual", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert invoke(capsys, "dual", str(bad))[0] == 2
    shape = tmp_path / "shape.json"
    shape.write_text('{"rows": []}', encoding="utf-8")
    assert invoke(capsys, "dual", str(shape))[0] == 2


def test_no_subcommand_is_usage_error(capsys):
    assert invoke(capsys, )[0] == 2


def test_byte_determinism(capsys, written):
    first = invoke(capsys, "jankov", written["V"], "--json")
    second = invoke(capsys, "jankov", written["V"], "--json")
    assert first == second
    a = invoke(capsys, "check-regular", written["D4"], "--json")
    b = invoke(capsys, "check-regular", written["D4"], "--json")
    assert a == b
