import pytest
from hypothesis import given, strategies as st

import oracles
from buildings.coxeter import (build_root_system, enumerate_weyl_group, format_word, gallery_distance,
                               parse_word, reflect)

TYPES = ["A1", "A2", "B2"]

# frozen from oracles.root_closure / oracles.weyl_group
EXPECTED = {
    "A1": {"positive": 1, "order": 2, "diameter": 1},
    "A2": {"positive": 3, "order": 6, "diameter": 3},
    "B2": {"positive": 4, "order": 8, "diameter": 4},
}


@pytest.mark.parametrize("t", TYPES)
def test_frozen_values_match_oracle(t):
    lengths = oracles.weyl_group(t)
    assert len(oracles.positive_roots(t)) == EXPECTED[t]["positive"]
    assert len(lengths) == EXPECTED[t]["order"]
    assert max(lengths.values()) == EXPECTED[t]["diameter"]


@pytest.mark.parametrize("t", TYPES)
def test_counts(t):
    phi = build_root_system(t)
    elements, diam = enumerate_weyl_group(phi)
    assert phi.n_positive == EXPECTED[t]["positive"]
    assert len(elements) == EXPECTED[t]["order"]
    assert diam == EXPECTED[t]["diameter"]
    assert len(phi.roots) == 2 * phi.n_positive


@pytest.mark.parametrize("t", TYPES)
def test_positive_roots_match_oracle(t):
    phi = build_root_system(t)
    ours = sorted(tuple(int(c) for c in co) for co in phi.positive_coefficients)
    assert ours == sorted(oracles.positive_roots(t))
    for co, f in zip(phi.positive_coefficients, phi.positive_roots):
        assert tuple(f) == oracles.root_functional(t, tuple(int(c) for c in co))


@pytest.mark.parametrize("t", TYPES)
def test_length_equals_inversion_count(t):
    """Word length of w equals the number of positive roots w sends negative."""
    phi = build_root_system(t)
    for e in phi.elements:
        inversions = sum(1 for b in range(phi.n_positive) if not phi.is_positive(phi.root_action[e.index][b]))
        assert e.length == inversions


def test_a2_reflect_simple_root():
    phi = build_root_system("A2")
    s1 = phi.element_from_word((0,))
    # positive roots sorted by height: a1, a2, a1+a2
    assert phi.root_action[s1][1] == 2
    assert tuple(int(c) for c in phi.positive_coefficients[2]) == (1, 1)


def test_reflect_coordinates():
    phi = build_root_system("A1")
    assert reflect(phi, 0, (5,)) == (-5,)
    phi = build_root_system("A2")
    assert reflect(phi, 0, (1, 0)) == (-1, 0)
    # s1(alpha2^vee) = alpha2^vee - <alpha1, alpha2^vee> alpha1^vee = alpha1^vee + alpha2^vee
    assert reflect(phi, 0, (0, 1)) == (1, 1)


def test_words_round_trip():
    assert format_word(()) == "e"
    assert format_word((0, 1)) == "1.2"
    assert parse_word("2.1") == (1, 0)
    assert parse_word("e") == ()


def test_unknown_type():
    with pytest.raises(ValueError):
        build_root_system("G3")


@pytest.mark.parametrize("t", TYPES)
def test_parabolic_cosets_partition(t):
    phi = build_root_system(t)
    for j in range(phi.rank):
        face = frozenset([j])
        reps = {phi.coset_rep(w, face) for w in range(phi.order)}
        assert len(reps) == phi.order // 2


@given(st.sampled_from(TYPES), st.data())
def test_gallery_distance_is_metric(t, data):
    phi = build_root_system(t)
    a, b, c = (data.draw(st.integers(0, phi.order - 1)) for _ in range(3))
    assert gallery_distance(phi, a, a) == 0
    assert gallery_distance(phi, a, b) == gallery_distance(phi, b, a)
    assert gallery_distance(phi, a, c) <= gallery_distance(phi, a, b) + gallery_distance(phi, b, c)
    assert gallery_distance(phi, a, b) <= phi.diameter


@given(st.sampled_from(TYPES), st.data())
def test_weyl_action_permutes_roots(t, data):
    phi = build_root_system(t)
    w = data.draw(st.integers(0, phi.order - 1))
    images = phi.root_action[w]
    assert sorted(images) == list(range(len(phi.roots)))
    for b in range(len(phi.roots)):
        assert images[phi.negate(b)] == phi.negate(images[b])
