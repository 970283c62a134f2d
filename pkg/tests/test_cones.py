"""Cone membership, lineality and decomposition tests."""

import itertools
import random
from fractions import Fraction

import pytest

from cones import Cone, decompose, farkas_by_arbitrage, is_pointed, lineality, member, split_point
from lpcore import farkas, verify_outcome
from models import DimensionError, MembershipError, RatMatrix
from ratmath import dot, in_span

F = Fraction


def vec(*values):
    return tuple(F(v) for v in values)


E1, E2 = vec(1, 0), vec(0, 1)
NEG_E1, NEG_E2 = vec(-1, 0), vec(0, -1)


def test_member_examples():
    assert member(Cone((E1, E2)), vec(1, 1)) == (True, vec(1, 1))
    assert member(Cone((E1, E2)), vec(-1, 0)) == (False, None)
    assert member(Cone((vec(1, 1),)), vec(2, 2)) == (True, vec(2))


def test_member_dimension_mismatch():
    with pytest.raises(DimensionError):
        member(Cone((E1, E2)), vec(1, 1, 1))


def test_cone_rejects_mixed_dimensions():
    with pytest.raises(DimensionError):
        Cone((E1, vec(1, 2, 3)))


@pytest.mark.parametrize("generators, dimension", [
    ((E1, NEG_E1, E2), 1),
    ((E1, E2), 0),
    ((E1, NEG_E1, E2, NEG_E2), 2),
    ((vec(1, 0, 1), vec(0, 1, 1), vec(-1, -1, 3)), 0),
    ((vec(1, 1),), 0),
])
def test_lineality_dimension(generators, dimension):
    cone = Cone(generators)
    assert len(lineality(cone)) == dimension
    assert is_pointed(cone) == (dimension == 0)


def test_lineality_of_half_plane():
    assert lineality(Cone((E1, NEG_E1, E2))) == [E1]


def test_decompose_half_plane():
    decomposition = decompose(Cone((E1, NEG_E1, E2)))
    assert decomposition.lineality_basis == (E1,)
    assert decomposition.slice_generators == (vec(0, 0), vec(0, 0), E2)


def test_decompose_pointed_cone_is_identity():
    generators = (vec(1, 0, 1), vec(0, 1, 1), vec(-1, -1, 3))
    decomposition = decompose(Cone(generators))
    assert decomposition.lineality_basis == ()
    assert decomposition.slice_generators == generators


def test_decompose_full_space():
    decomposition = decompose(Cone((E1, NEG_E1, E2, NEG_E2)))
    assert len(decomposition.lineality_basis) == 2
    assert all(g == vec(0, 0) for g in decomposition.slice_generators)


def test_split_point_examples():
    decomposition = decompose(Cone((E1, NEG_E1, E2)))
    assert split_point(decomposition, vec(3, 2)) == (vec(0, 2), vec(3, 0))
    assert split_point(decomposition, vec(-5, 0)) == (vec(0, 0), vec(-5, 0))

    pointed = decompose(Cone((E1, E2)))
    assert split_point(pointed, vec(2, 7)) == (vec(2, 7), vec(0, 0))


def test_split_point_outside_cone():
    with pytest.raises(MembershipError):
        split_point(decompose(Cone((E1, NEG_E1, E2))), vec(0, -1))


def random_generators(rng, m, n, bound):
    return tuple(tuple(F(rng.randint(-bound, bound)) for _ in range(m)) for _ in range(n))


def combine(weights, gens):
    m = len(gens[0])
    return tuple(sum((w * g[k] for w, g in zip(weights, gens)), F(0)) for k in range(m))


def test_random_decompositions_split_members():
    """100 cones with m <= 4 and up to 6 generators in [-3,3], 10 members each."""
    rng = random.Random(77)
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        gens = random_generators(rng, m, n, 3)
        decomposition = decompose(Cone(gens))
        basis = decomposition.lineality_basis
        assert is_pointed(decomposition.slice_cone)
        for _ in range(10):
            x = combine([F(rng.randint(0, 4)) for _ in gens], gens)
            u, v = split_point(decomposition, x)
            assert tuple(a + b for a, b in zip(u, v)) == x
            assert dot(u, v) == 0
            assert all(dot(u, b) == 0 for b in basis)


def test_random_cones_with_a_line():
    rng = random.Random(78)
    for _ in range(40):
        gens = list(random_generators(rng, 3, 4, 2))
        if all(a == 0 for a in gens[0]):
            continue
        gens.append(tuple(-a for a in gens[0]))
        decomposition = decompose(Cone(tuple(gens)))
        assert in_span(decomposition.lineality_basis, gens[0])
        assert is_pointed(decomposition.slice_cone)

        x = combine([F(rng.randint(0, 3)) for _ in gens], gens)
        u, v = split_point(decomposition, x)
        assert tuple(a + b for a, b in zip(u, v)) == x
        assert dot(u, v) == 0


def test_split_is_unique():
    """Moving u along any nonzero slice generator pushes x - u out of the lineality space."""
    rng = random.Random(79)
    for _ in range(40):
        gens = list(random_generators(rng, 3, 4, 2))
        gens.append(tuple(-a for a in gens[0]))
        decomposition = decompose(Cone(tuple(gens)))
        basis = decomposition.lineality_basis
        x = combine([F(rng.randint(0, 3)) for _ in gens], gens)
        u, v = split_point(decomposition, x)
        for s in decomposition.slice_generators:
            if all(a == 0 for a in s):
                continue
            for eps in (F(1, 5), F(-3)):
                moved = tuple(a + eps * b for a, b in zip(u, s))
                assert not in_span(basis, tuple(a - b for a, b in zip(x, moved)))


def has_line_by_enumeration(gens, max_coefficient=4):
    """A nonnegative integer combination summing to zero with a nonzero term means C contains a line."""
    for weights in itertools.product(range(max_coefficient + 1), repeat=len(gens)):
        if not any(w and any(g) for w, g in zip(weights, gens)):
            continue
        if all(a == 0 for a in combine(weights, gens)):
            return True
    return False


def test_lineality_agrees_with_enumeration():
    # entries in [-1,1] keep every minimal zero combination within coefficient 4 for m <= 3
    rng = random.Random(80)
    for _ in range(150):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        gens = random_generators(rng, m, n, 1)
        assert bool(lineality(Cone(gens))) == has_line_by_enumeration(gens), f"generators {gens}"


def test_pointed_cones_have_no_normalized_zero_combination():
    rng = random.Random(81)
    checked = 0
    for _ in range(120):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        gens = tuple(g for g in random_generators(rng, m, n, 2) if any(g))
        if not gens:
            continue
        A = RatMatrix.from_rows([list(row) for row in zip(*gens)] + [[1] * len(gens)])
        target = tuple(F(0) for _ in range(m)) + (F(1),)
        outcome = farkas(A, target)
        assert verify_outcome(A, target, outcome)
        assert outcome.is_combination != is_pointed(Cone(gens))
        checked += is_pointed(Cone(gens))
    assert checked > 10


def test_farkas_by_arbitrage_agrees_with_simplex():
    rng = random.Random(31)
    for _ in range(150):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        A = RatMatrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)])
        b = tuple(F(rng.randint(-3, 3)) for _ in range(m))
        via_arbitrage = farkas_by_arbitrage(A, b)
        assert verify_outcome(A, b, via_arbitrage)
        assert via_arbitrage.tag == farkas(A, b).tag


def test_farkas_by_arbitrage_with_lineality():
    A = RatMatrix.from_columns([E1, NEG_E1, E2])
    assert farkas_by_arbitrage(A, vec(-4, 1)).is_combination
    outcome = farkas_by_arbitrage(A, vec(1, -1))
    assert not outcome.is_combination
    assert verify_outcome(A, vec(1, -1), outcome)


def test_farkas_by_arbitrage_full_space_and_zero():
    A = RatMatrix.from_columns([E1, NEG_E1, E2, NEG_E2])
    assert farkas_by_arbitrage(A, vec(-3, 5)).is_combination
    zero = RatMatrix.from_columns([vec(0, 0)])
    assert farkas_by_arbitrage(zero, vec(0, 0)).is_combination
    assert not farkas_by_arbitrage(zero, vec(1, 0)).is_combination
