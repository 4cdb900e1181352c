import itertools
import math
from collections import Counter
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from precycles import exact, perm

perms = st.integers(min_value=1, max_value=30).flatmap(
    lambda n: st.permutations(list(range(1, n + 1)))
).map(lambda images: perm.Permutation(tuple(images)))


def _compose(g: perm.Permutation, h: perm.Permutation) -> perm.Permutation:
    return perm.Permutation(tuple(g.images[x - 1] for x in h.images))


def _power(g: perm.Permutation, e: int) -> perm.Permutation:
    out = perm.identity(g.degree)
    for _ in range(e):
        out = _compose(g, out)
    return out


def _inversions(images) -> int:
    count = 0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if images[i] > images[j]:
                count += 1
    return count


def test_permutation_validates():
    with pytest.raises(ValueError):
        perm.Permutation((1, 1))
    with pytest.raises(ValueError):
        perm.Permutation((0, 1))
    with pytest.raises(ValueError):
        perm.Permutation((2, 3))


def test_cycles_ordered_by_smallest_point():
    g = perm.parse_cycles("(4,5)(1,2,3)", 6)
    assert g.cycles() == [[1, 2, 3], [4, 5], [6]]
    assert perm.format_cycles(g) == "(1,2,3)(4,5)"
    assert perm.format_cycles(perm.identity(4)) == "()"


def test_cycle_type_example():
    g = perm.parse_cycles("(1,2,3)(4,5)", 6)
    t = perm.cycle_type(g)
    assert t.counts == {3: 1, 2: 1, 1: 1}
    assert t.num_cycles == 3
    assert t.sign == -1
    assert t.multiplicity(3) == 1 and t.multiplicity(4) == 0


@given(perms)
def test_one_line_round_trip(g):
    assert perm.parse_one_line(perm.format_one_line(g)) == g


@given(perms)
def test_cycle_notation_round_trip(g):
    assert perm.parse_cycles(perm.format_cycles(g), g.degree) == g
    assert perm.parse_permutation(perm.format_cycles(g), g.degree) == g


def test_parse_cycles_degree_inference():
    g = perm.parse_cycles("(1,3)(2,5)")
    assert g.degree == 5
    assert g.images == (3, 5, 1, 4, 2)


def test_parse_errors():
    with pytest.raises(ValueError):
        perm.parse_one_line("")
    with pytest.raises(ValueError):
        perm.parse_one_line("1 2 2")
    with pytest.raises(ValueError):
        perm.parse_cycles("(1,2)(2,3)")
    with pytest.raises(ValueError):
        perm.parse_cycles("no parens here")
    with pytest.raises(ValueError):
        perm.parse_cycles("(1,2)", 1)


@given(perms)
def test_sign_matches_inversion_parity(g):
    t = perm.cycle_type(g)
    want = -1 if _inversions(g.images) % 2 else 1
    assert t.sign == want


def test_sample_uniform_derangement_rate():
    rng = np.random.default_rng(4021)
    m = 20_000
    hits = 0
    for _ in range(m):
        g = perm.sample_uniform(5, "any", rng)
        if all(g(i) != i for i in range(1, 6)):
            hits += 1
    p = 44 / 120
    sigma = math.sqrt(p * (1 - p) / m)
    assert abs(hits / m - p) < 4 * sigma


def test_sample_uniform_even_parity():
    rng = np.random.default_rng(88)
    m = 20_000
    double = 0
    for _ in range(m):
        g = perm.sample_uniform(4, "even", rng)
        t = perm.cycle_type(g)
        assert t.sign == 1
        if t.counts == {2: 2}:
            double += 1
    # A_4 has 3 double transpositions among 12 elements
    p = 3 / 12
    sigma = math.sqrt(p * (1 - p) / m)
    assert abs(double / m - p) < 4 * sigma


def test_sample_uniform_rejects_small_even():
    with pytest.raises(ValueError):
        perm.sample_uniform(2, "even", np.random.default_rng(0))


def test_sample_uniform_type_distribution_chi_square():
    """Goodness of fit over all 11 cycle types of S_6 at significance
    1e-3; deterministic via the fixed seed."""
    n, m = 6, 30_000
    expected = {}

    def visit(parts, cent, num):
        key = tuple(sorted(k for k, mult in parts for _ in range(mult)))
        expected[key] = m / cent

    exact.sweep_partitions(n, visit)
    assert len(expected) == 11
    rng = np.random.default_rng(1729)
    observed = Counter()
    for _ in range(m):
        g = perm.sample_uniform(n, "any", rng)
        lens = sorted(
            k for k, mult in perm.cycle_type(g).counts.items()
            for _ in range(mult))
        observed[tuple(lens)] += 1
    chi2 = sum(
        (observed[key] - exp) ** 2 / exp for key, exp in expected.items())
    df = len(expected) - 1
    p_value = float(mp.gammainc(df / 2, chi2 / 2, mp.inf, regularized=True))
    assert p_value > 1e-3, (chi2, p_value)


def test_pre_cycle_targets_examples():
    t = perm.cycle_type(perm.parse_cycles("(1,2,3)(4,5)", 6))
    assert perm.pre_cycle_targets(t) == {2, 3}
    t = perm.cycle_type(perm.parse_cycles("(1,2)(3,4,5,6)", 6))
    assert perm.pre_cycle_targets(t) == frozenset()
    t = perm.cycle_type(perm.parse_cycles("(1,2,3,4,5)", 10))
    assert perm.pre_cycle_targets(t) == {5}
    assert perm.pre_cycle_targets(perm.cycle_type(perm.identity(4))) == \
        frozenset()


def _brute_power_targets(g: perm.Permutation) -> set[int]:
    """All k >= 2 such that some power of g is a single k-cycle."""
    order = 1
    for c in g.cycles():
        order = math.lcm(order, len(c))
    out = set()
    h = g
    for _ in range(1, order + 1):
        lens = sorted(len(c) for c in h.cycles() if len(c) >= 2)
        if len(lens) == 1:
            out.add(lens[0])
        h = _compose(g, h)
    return out


@pytest.mark.parametrize("n", range(1, 8))
def test_targets_match_brute_force_powering(n):
    for images in itertools.permutations(range(1, n + 1)):
        g = perm.Permutation(images)
        want = _brute_power_targets(g)
        got = set(perm.pre_cycle_targets(perm.cycle_type(g)))
        assert got == want, perm.format_cycles(g)


def test_targets_match_powering_random_n8():
    rng = np.random.default_rng(505)
    for _ in range(2000):
        g = perm.sample_uniform(8, "any", rng)
        assert set(perm.pre_cycle_targets(perm.cycle_type(g))) == \
            _brute_power_targets(g)


def test_extract_cycle_power_example():
    g = perm.parse_cycles("(1,2,3)(4,5)", 6)
    ell, witness = perm.extract_cycle_power(g, 3)
    assert ell == 2
    assert witness == _power(g, 2)
    assert perm.format_cycles(witness) == "(1,3,2)"


@given(perms)
def test_extract_cycle_power_is_genuine(g):
    for k in perm.pre_cycle_targets(perm.cycle_type(g)):
        ell, witness = perm.extract_cycle_power(g, k)
        assert ell >= 1
        counts = perm.cycle_type(witness).counts
        assert counts.get(k) == 1
        assert set(counts) <= {1, k}
        order = math.lcm(*(len(c) for c in g.cycles()))
        assert witness == _power(g, ell % order or order)


def test_extract_cycle_power_errors():
    g = perm.parse_cycles("(1,2,3)(4,5)", 6)
    with pytest.raises(ValueError, match="no usable cycle"):
        perm.extract_cycle_power(g, 4)
    h = perm.parse_cycles("(1,2)(3,4)", 4)
    with pytest.raises(ValueError, match="need exactly one"):
        perm.extract_cycle_power(h, 2)
    f = perm.parse_cycles("(1,2)(3,4,5,6)", 6)
    with pytest.raises(ValueError, match="shares factor"):
        perm.extract_cycle_power(f, 4)
