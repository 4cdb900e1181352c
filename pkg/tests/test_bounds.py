import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from precycles import bounds, exact, primes


def test_constant_brackets():
    lo, hi = bounds.gamma_bounds()
    assert hi - lo == Fraction(1, 10 ** 30)
    with mp.workdps(50):
        gamma = mp.euler
        assert mp.mpf(lo.numerator) / lo.denominator < gamma
        assert mp.mpf(hi.numerator) / hi.denominator > gamma
    lo, hi = bounds.meissel_mertens_bounds()
    with mp.workdps(50):
        m = mp.mertens
        assert mp.mpf(lo.numerator) / lo.denominator < m
        assert mp.mpf(hi.numerator) / hi.denominator > m


def test_avoidance_bounds_values():
    ab = bounds.avoidance_bounds(1.0)
    assert ab.mu_inverse == 1.0
    assert ab.e_one_minus_mu == 1.0
    assert abs(ab.e_gamma_minus_mu - 0.65521992581610357) < 1e-12
    ab0 = bounds.avoidance_bounds(0.0)
    assert ab0.mu_inverse == math.inf
    assert abs(ab0.e_one_minus_mu - math.e) < 1e-12


def test_certify_avoidance_bound():
    # exactly at mu = 1 the bound value is e^(gamma-1) ~ 0.65522
    assert bounds.certify_avoidance_bound(Fraction(13, 20), 1)
    assert not bounds.certify_avoidance_bound(Fraction(2, 3), 1)
    assert bounds.certify_avoidance_bound(Fraction(13, 10), 1, factor=2)
    # q may be Fraction or float
    assert bounds.certify_avoidance_bound(0.5, Fraction(1, 1))


@given(st.floats(min_value=0.01, max_value=30))
def test_gamma_dominance(mu):
    assert bounds.verify_gamma_dominance(mu)


def test_prime_sum_bounds_values():
    psb = bounds.prime_sum_bounds(12, 12)
    want = (2.22 - 1.61) / (12 * math.log(12))
    assert abs(psb.recip_sq_upper - want) < 1e-12
    assert abs(psb.recip_sq_upper - 0.0204573) < 1e-6

    psb2 = bounds.prime_sum_bounds(2, 4)
    assert psb2.recip_sq_upper is None
    assert psb2.recip_lower < 0 < psb2.recip_upper
    assert abs(psb2.recip_upper - 2.2540) < 1e-3

    psb3 = bounds.prime_sum_bounds(11.9, 100)
    assert psb3.recip_sq_upper is None
    assert psb3.recip_lower is not None


def test_check_recip_sq_upper(table_small):
    for a, b in ((12, 12), (12, 100), (50, 9000), (500, 501)):
        rep = bounds.check_recip_sq_upper(table_small, a, b)
        assert rep.holds, (a, b)
        assert rep.margin >= 0
        assert rep.lhs <= rep.rhs


def test_check_recip_bounds(table_small):
    for a, b in ((2, 4), (2, 10_000), (12, 500), (100, 101)):
        lo_rep, hi_rep = bounds.check_recip_bounds(table_small, a, b)
        assert lo_rep.holds and hi_rep.holds, (a, b)
        true_sum = float(primes.sum_recip_exact(table_small, a, b))
        assert lo_rep.lhs <= true_sum + 1e-12
        assert true_sum <= hi_rep.rhs + 1e-12


def test_pair_sweeps_hold(table_small):
    rep = bounds.verify_recip_sq_upper_all(table_small, 12, 400)
    assert rep.holds
    assert rep.checked == (400 - 12 + 1) * (400 - 12 + 2) // 2
    rep2 = bounds.verify_recip_bounds_all(table_small, 2, 400)
    assert rep2.holds
    assert rep2.checked == 2 * (400 - 2 + 1) * (400 - 2 + 2) // 2


def test_pi_bounds_range(table_small):
    rep = bounds.verify_pi_bounds_range(table_small, 11, 10_000)
    assert rep.holds
    assert rep.checked == 10_000 - 11 + 1
    with pytest.raises(ValueError):
        bounds.verify_pi_bounds_range(table_small, 10, 100)


def test_report_shapes(table_small):
    rep = bounds.check_recip_sq_upper(table_small, 12, 40)
    d = rep.to_json_dict()
    assert set(d) >= {"name", "inputs", "lhs", "rhs", "holds", "margin"}


def test_harmonic_gap():
    assert bounds.harmonic_number(5) == pytest.approx(137 / 60, abs=1e-12)
    for n in (1, 2, 10, 1000, 10 ** 6):
        gap = bounds.harmonic_gap(n)
        assert 0 < gap < 1 / (2 * n)
    rep = bounds.verify_harmonic_gap(20_000)
    assert rep.holds
    assert rep.checked == 20_000


def test_floor_sweep_small(table_small):
    sweep = bounds.density_floor_sweep(table_small, 10)
    assert {rec.n for rec in sweep.exceptions} == {5, 6, 7}
    for rec in sweep.exceptions:
        assert rec.exact == 0  # those windows hold no primes at all
    sweep2 = bounds.density_floor_sweep(table_small, 10_000)
    assert sweep2.holds_from_11
    # spot values: (5, 7] holds only 7, (4, 5] holds only 5
    ns = {rec.n for rec in sweep2.exceptions}
    assert ns == {5, 6, 7}
    assert primes.sum_recip_exact(table_small, 5, 7) == Fraction(1, 7)
    assert primes.sum_recip_exact(table_small, 4, 5) == Fraction(1, 5)


def test_floor_record_json(table_small):
    sweep = bounds.density_floor_sweep(table_small, 10)
    d = sweep.exceptions[0].to_json_dict()
    assert d["n"] == 5
    assert d["exact"] == "0/1"


def test_window_density_lower_bound_desk_value():
    n = 10 ** 6
    v = bounds.window_density_lower_bound(
        n, math.log(n), math.log(math.log(n)), 1)
    assert v == pytest.approx(-0.7242, abs=1e-3)


def test_window_density_lower_bound_preconditions():
    with pytest.raises(ValueError):
        bounds.window_density_lower_bound(10 ** 6, 11.9, 2.0, 1)
    with pytest.raises(ValueError):
        bounds.window_density_lower_bound(10 ** 6, 20, 1.0, 1)
    with pytest.raises(ValueError):
        bounds.window_density_lower_bound(10 ** 4, 100, 3.0, 1)
    with pytest.raises(ValueError):
        bounds.window_density_lower_bound(10 ** 6, 20, 2.0, 3)


def test_headline_bounds():
    with pytest.raises(ValueError):
        bounds.headline_bounds(15)
    hb = bounds.headline_bounds(162_755, 1)
    assert hb.asserted
    assert hb.refined == pytest.approx(0.01639, abs=1e-4)
    assert not bounds.headline_bounds(162_754, 1).asserted
    assert bounds.headline_bounds(10 ** 6, 1).simple < \
        bounds.headline_bounds(10 ** 7, 1).simple
    assert bounds.headline_bounds(10 ** 6, 1, "proof").simple > \
        bounds.headline_bounds(10 ** 6, 1, "stated").simple


def test_headline_bounds_huge_degree():
    """Integer degrees far beyond float range must still evaluate."""
    n = 10 ** 500
    hb = bounds.headline_bounds(n, 1)
    loglog = math.log(math.log(n))
    assert hb.simple == pytest.approx(1 - 5 / loglog, rel=1e-12)
    assert hb.simple > 0.29
    hb2 = bounds.headline_bounds(10 ** 400, 2, "proof")
    assert hb2.c == 6.9


def test_sample_count_values():
    assert bounds.sample_count(1, Fraction(1, 19)) == 0
    assert bounds.sample_count(Fraction(1, 100), Fraction(1, 19)) == 86
    assert bounds.sample_count(Fraction(1, 100), Fraction(1, 20)) == 90
    assert bounds.sample_count(Fraction(1, 2), Fraction(999, 1000)) == 1
    # boundary sharpness at the worked pair
    assert (Fraction(18, 19) ** 86) <= Fraction(1, 100)
    assert (Fraction(18, 19) ** 85) > Fraction(1, 100)


@given(
    st.fractions(min_value=Fraction(1, 10 ** 6), max_value=Fraction(99, 100),
                 max_denominator=10 ** 6),
    st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100),
                 max_denominator=100),
)
def test_sample_count_is_minimal(epsilon, c0):
    m = bounds.sample_count(epsilon, c0)
    assert (1 - c0) ** m <= epsilon
    if m > 0:
        assert (1 - c0) ** (m - 1) > epsilon


def test_sample_count_validation():
    with pytest.raises(ValueError):
        bounds.sample_count(0, Fraction(1, 19))
    with pytest.raises(ValueError):
        bounds.sample_count(Fraction(1, 10), 0)
    with pytest.raises(ValueError):
        bounds.sample_count(Fraction(1, 10), 1)


def test_exact_value_exceeds_positive_floor(table_small):
    """Degrees where the floor applies: the floor really is below the
    exact proportion."""
    for n in (30, 45, 60):
        floor = primes.sum_recip_exact(table_small, n // 2, n - 3)
        rho = exact.pre_prime_cycle_proportion(n, "sym")
        assert rho >= floor >= Fraction(1, 19)
