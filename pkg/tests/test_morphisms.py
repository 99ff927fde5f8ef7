import itertools

import pytest

from esakialab.poset_core import (
    FinitePoset,
    PMorphism,
    ReductionError,
    apply_reduction,
    enumerate_reductions,
    enumerate_surjective_p_morphisms,
    iter_surjective_p_morphisms,
    make_delta0,
    make_ladder,
    p_morphism_violation,
    strong_regularization,
    validate_p_morphism,
)
from esakialab.regularity import is_strongly_regular

from corpus import canonical_key


def test_from_dict_and_validate(fork, c2):
    f = PMorphism.from_dict(fork, c2, {"r": "r", "a": "m", "b": "m"})
    assert validate_p_morphism(f)
    assert f.is_surjective
    assert p_morphism_violation(f) is None


def test_monotonicity_violation(c2, a2):
    # r < m collapses onto an antichain point pair: not monotone
    f = PMorphism.from_dict(c2, a2, {"r": "u", "m": "v"})
    assert not validate_p_morphism(f)
    kind, _, _ = p_morphism_violation(f)
    assert kind == "monotone"


def test_back_condition_violation(c2):
    f = PMorphism.from_dict(c2, c2, {"r": "r", "m": "r"})
    assert not validate_p_morphism(f)
    kind, _, _ = p_morphism_violation(f)
    assert kind == "back"


def test_surjective_morphism_counts(p1, c2, c3, fork, a2):
    expectations = [
        (fork, c2, 1),
        (c2, p1, 1),
        (p1, p1, 1),
        (a2, p1, 1),
        (c3, c2, 2),
    ]
    for src, tgt, want in expectations:
        got = enumerate_surjective_p_morphisms(src, tgt)
        assert len(got) == want, (src.name, tgt.name)
        for f in got:
            assert validate_p_morphism(f) and f.is_surjective


def test_enumeration_matches_brute_force(c3, c2):
    brute = 0
    for m in itertools.product(range(2), repeat=3):
        f = PMorphism(c3, c2, m)
        if validate_p_morphism(f) and f.is_surjective:
            brute += 1
    assert brute == len(enumerate_surjective_p_morphisms(c3, c2)) == 2


def test_iterator_agrees_with_list(fork, c2):
    assert list(iter_surjective_p_morphisms(fork, c2)) == enumerate_surjective_p_morphisms(
        fork, c2
    )


def test_alpha_reduction_on_chain(c2):
    # r has the single cover m with m's upset = r's strict upset
    reds = enumerate_reductions(c2)
    assert ("alpha", "r", "m") in reds
    Q, f = apply_reduction(c2, "alpha", "r", "m")
    assert len(Q) == 1
    assert validate_p_morphism(f) and f.is_surjective


def test_beta_reduction_on_antichain(a2):
    reds = enumerate_reductions(a2)
    assert ("beta", "u", "v") in reds and ("beta", "v", "u") in reds
    Q, f = apply_reduction(a2, "beta", "u", "v")
    assert len(Q) == 1
    assert validate_p_morphism(f)


def test_beta_reduction_on_fork(fork):
    Q, f = apply_reduction(fork, "beta", "a", "b")
    assert len(Q) == 2
    assert validate_p_morphism(f) and f.is_surjective
    # the image is a 2-chain
    assert sorted(len(list(filter(None, (Q.up[i] >> j & 1 for j in range(2))))) for i in range(2)) == [1, 2]


def test_reduction_side_condition_enforced(c3):
    with pytest.raises(ReductionError):
        apply_reduction(c3, "alpha", "x", "z")


def test_fan_tower_reductions_are_maximal_collapses():
    F1 = make_delta0(1)
    reds = enumerate_reductions(F1)
    assert len(reds) == 6
    tops = {"a0", "b0", "c0"}
    for kind, x, y in reds:
        assert kind == "beta"
        assert {x, y} <= tops


def test_reductions_of_regular_poset_collapse_maximals(corpus6):
    from esakialab.regularity import is_regular_structural

    for P in corpus6:
        if not is_regular_structural(P):
            continue
        maximal = P.maximal_mask
        for kind, x, y in enumerate_reductions(P):
            assert maximal >> P.index(x) & 1
            assert maximal >> P.index(y) & 1


def test_strong_regularization_fixtures(p1, c2, diamond):
    star, f = strong_regularization(p1)
    assert star == p1
    assert f.is_surjective

    star, f = strong_regularization(c2)
    assert len(star) == 3
    assert is_strongly_regular(star)
    assert validate_p_morphism(f) and f.is_surjective

    star, f = strong_regularization(diamond)
    assert len(star) == 7
    assert is_strongly_regular(star)
    assert validate_p_morphism(f) and f.is_surjective


def test_starred_ladder_matches_double_rail():
    for levels in (2, 3):
        plain = make_ladder("R0", levels)
        double = make_ladder("R2", levels)
        star, _ = strong_regularization(plain)
        assert canonical_key(star) == canonical_key(double)
    for levels in (4, 5, 6):
        plain = make_ladder("R0", levels)
        star, _ = strong_regularization(plain)
        assert len(star) == len(make_ladder("R2", levels))
        assert is_strongly_regular(star)


def test_double_rail_collapses_onto_plain():
    for levels in (2, 3, 4):
        plain = make_ladder("R0", levels)
        double = make_ladder("R2", levels)
        # stars are maximal, so they must land on maximal points of the image
        assignment = {p: p for p in plain.points}
        for i in range(levels - 1):
            assignment[f"c{i}"] = "a0"
            assignment[f"d{i}"] = "b0"
        f = PMorphism.from_dict(double, plain, assignment)
        assert validate_p_morphism(f) and f.is_surjective
