from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from buildings.atlas import (BPoint, LoadError, dumps_instance, ec_closure, generate, loads_instance, load, save,
                             star, star_seed, thin, validate_atlas, replay_validation)
from buildings.lambda_core import Z
from buildings.model_space import AffineMap, Point
from conftest import p1


def tree_point(B, p):
    """Where an A1 star chart point sits in the tree of branches.

    Chart ``A_ij`` shows branch ``i`` on the positive side and ``j`` on the
    negative side, so this is computed from the chart labels alone.
    """
    i, j = (int(c) for c in B.labels()[p.chart][1:])
    v = p.local.coords[0]
    if v.is_zero():
        return ("o", 0)
    return (i, v) if v > 0 else (j, -v)


@pytest.mark.parametrize("branches", [3, 4])
def test_same_point_matches_tree(branches):
    B = star("A1", "Z", branches)
    pts = [p1(c, v) for c in range(B.n) for v in range(-4, 5)]
    for p in pts:
        for q in pts:
            assert B.same_point(p, q) == (tree_point(B, p) == tree_point(B, q)), (p, q)


def test_star3_examples(star3):
    assert star3.same_point(p1(0, -2), p1(2, 2))
    assert not star3.same_point(p1(0, 1), p1(2, 1))
    assert star3.transport(p1(1, -3), 2) == Point([Z(-3)])
    assert star3.transport(p1(0, 2), 2) is None


def test_generators_validate():
    for B in [thin(t, lam) for t in ("A1", "A2", "B2") for lam in ("Z", "Q", "QxQ_lex")] + [
            star("A1", "Z", 3), star("A1", "Z", 5), star("A2", "Q", 3), star("B2", "Z", 3, root=2),
            star("A1", "QxQ_lex", 3), star_seed("A1", "Z", 4)]:
        rep = validate_atlas(B)
        assert rep.passed, (B.name, rep.detail)


@pytest.mark.parametrize("branches", [3, 4, 5])
def test_closure_of_seed_recovers_all_pairs(branches):
    """Each closed chart is a line between two ends; every pair shows up once."""
    seed = star_seed("A1", "Z", branches)
    C = ec_closure(seed)
    assert C.n == branches * (branches - 1) // 2
    assert validate_atlas(C).passed

    def end(c, v):
        hits = [d for d in C.charts_containing(p1(c, v)) if d < seed.n]
        return 0 if len(hits) == seed.n else hits[0] + 1

    pairs = {frozenset((end(c, 50), end(c, -50))) for c in range(C.n)}
    assert pairs == {frozenset(p) for p in combinations(range(branches), 2)}
    assert ec_closure(C).n == C.n


def test_closure_rank2_seed():
    C = ec_closure(star_seed("A2", "Q", 3))
    assert C.n == 3
    assert validate_atlas(C).passed


def test_round_trip(tmp_path):
    for B in [star("A1", "Z", 3), star("A2", "Q", 3), thin("B2", "QxQ_lex")]:
        path = tmp_path / f"{B.name}.json"
        save(B, path)
        B2 = load(path)
        assert dumps_instance(B2) == dumps_instance(B)


def test_load_errors():
    good = dumps_instance(star("A1", "Z", 3))
    with pytest.raises(LoadError) as exc:
        loads_instance(good.replace('"A1"', '"G7"'))
    assert exc.value.line is not None
    with pytest.raises(LoadError) as exc:
        loads_instance(good[:40])
    assert exc.value.line is not None
    with pytest.raises(LoadError):
        loads_instance(good.replace('"root": 1', '"root": 5', 1))


def test_mutations_are_caught(star3):
    doubled = star3.with_map(0, 1, AffineMap(star3.phi, [[2]], Point([Z(0)])))
    rep = validate_atlas(doubled)
    assert rep.witness["kind"] == "non_weyl_map"
    assert replay_validation(doubled, rep.witness)
    flat = star3.with_map(0, 2, AffineMap.identity(star3.phi, Z))
    rep = validate_atlas(flat)
    assert rep.witness["kind"] == "cocycle"
    assert replay_validation(flat, rep.witness)


def test_lattice_mode_rejects_fractional_translation():
    B = star("A1", "Z", 3, t_mode="lattice")
    assert validate_atlas(B).passed
    half = B.with_map(0, 1, AffineMap.from_weyl(B.phi, 0, Point([Z(1) / 2])))
    rep = validate_atlas(half)
    assert rep.witness["kind"] == "translation"
    assert replay_validation(half, rep.witness)


def test_unknown_generator():
    with pytest.raises(ValueError):
        generate("ring")


@given(st.data())
def test_transport_path_independent(data):
    """Transport to a chart does not depend on the chart a point starts in."""
    B = ec_closure(star_seed("A1", "Z", 4))
    c = data.draw(st.integers(0, B.n - 1))
    v = data.draw(st.integers(-8, 8))
    p = p1(c, v)
    found = B.charts_containing(p)
    for d, y in found.items():
        assert B.charts_containing(BPoint(d, y)) == found


@given(st.integers(0, 2), st.integers(-6, 6), st.integers(0, 2), st.integers(-6, 6))
def test_same_point_is_equivalence(a, x, b, y):
    B = star("A1", "Z", 3)
    p, q = p1(a, x), p1(b, y)
    assert B.same_point(p, p)
    assert B.same_point(p, q) == B.same_point(q, p)
