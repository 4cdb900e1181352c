"""Closed-form bounds, inequality verifiers, and certified sweeps.

Everything here is float-first with an escalation story: a comparison
that lands within ``MARGIN`` (1e-9) of its boundary is re-run, with
exact rationals when both sides are rational (reciprocal prime sums
against 1/19) and with 50-to-200-digit arithmetic when one side is
transcendental.  Decimal constants are stored to 30 significant digits
and bracketed, so each inequality can pick the rounding direction that
makes its own check conservative.

The verifiers cover:

* the prime-counting bounds x/log x <= pi(x) <= (x/log x)(1 + 3/(2 log x)),
* upper bounds on sum 1/p**2 and two-sided bounds on sum 1/p over
  half-open prime intervals (a, b],
* harmonic-number control 0 < H_n - log n - gamma < 1/(2n),
* the density floor sum_{n/2 < p <= n-3} 1/p >= 1/19 swept over n, and
* the closed-form lower bounds for the pre-p-cycle proportion, both the
  window form and the two headline shapes, all of which go negative at
  desk-scale n (they only bite for astronomically large degrees).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .primes import (
    MARGIN,
    PrimeTable,
    sum_recip,
    sum_recip_exact,
    sum_recip_sq,
    sum_recip_sq_exact,
    verify_pi_bounds,
)

# Truncated (rounded toward zero) 30-significant-digit decimals; the
# true constants lie strictly between value and value + 1e-30.
EULER_MASCHERONI = "0.577215664901532860606512090082"
MEISSEL_MERTENS = "0.261497212847642783755426838608"

_ULP30 = Fraction(1, 10**30)

# Smallest integer n with n >= e**12; the headline bounds are asserted
# from here on and merely evaluated below it.
ASSERTED_FROM = 162755


def gamma_bounds() -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] around the Euler-Mascheroni constant."""
    lo = Fraction(EULER_MASCHERONI)
    return lo, lo + _ULP30


def meissel_mertens_bounds() -> tuple[Fraction, Fraction]:
    """Rational bracket around the Meissel-Mertens constant."""
    lo = Fraction(MEISSEL_MERTENS)
    return lo, lo + _ULP30


def _to_mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)
    return mpmath.mpf(x)


def _certified_less(lhs: Callable[[], mpmath.mpf], rhs: Callable[[], mpmath.mpf]):
    """True/False when lhs() < rhs() is decidable at 50 or 200 digits,
    None when the two sides stay inseparable."""
    for dps in (50, 200):
        with mpmath.workdps(dps):
            a, b = lhs(), rhs()
            sep = mpmath.mpf(10) ** (8 - dps) * (1 + abs(a) + abs(b))
            if b - a > sep:
                return True
            if a - b > sep:
                return False
    return None


# ---------------------------------------------------------------------------
# Report records.


@dataclass(frozen=True)
class BoundReport:
    """One checked inequality: lhs <op> rhs with its signed margin."""

    name: str
    inputs: dict
    lhs: float
    rhs: float
    holds: bool
    margin: float

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": dict(self.inputs),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class SweepReport:
    """Summary of a bulk inequality sweep."""

    name: str
    checked: int
    failures: tuple[BoundReport, ...]
    min_margin: float
    argmin: dict
    escalations: int = 0

    @property
    def holds(self) -> bool:
        return not self.failures


# ---------------------------------------------------------------------------
# Avoidance bounds.


class AvoidanceBounds(NamedTuple):
    """The three upper bounds for an avoidance proportion with
    reciprocal weight mu."""

    mu_inverse: float
    e_one_minus_mu: float
    e_gamma_minus_mu: float


def avoidance_bounds(mu) -> AvoidanceBounds:
    """Evaluate 1/mu, e**(1-mu), and e**(gamma-mu) at mu >= 0."""
    m = float(mu)
    if m < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    inv = math.inf if m == 0 else 1.0 / m
    gamma = float(Fraction(EULER_MASCHERONI))
    return AvoidanceBounds(inv, math.exp(1.0 - m), math.exp(gamma - m))


def certify_avoidance_bound(q: Fraction, mu, factor: int = 1) -> bool:
    """Certify q < factor * e**(gamma - mu) against the true constant.

    Uses the bracketed gamma: below the lower evaluation certifies
    True, above the upper evaluation certifies False, and the 1e-30
    sliver in between raises ArithmeticError rather than guessing.
    """
    glo, ghi = gamma_bounds()
    mu_f = mu if isinstance(mu, Fraction) else Fraction(mu)
    against_lo = _certified_less(
        lambda: _to_mpf(q),
        lambda: factor * mpmath.exp(_to_mpf(glo) - _to_mpf(mu_f)),
    )
    if against_lo:
        return True
    against_hi = _certified_less(
        lambda: _to_mpf(q),
        lambda: factor * mpmath.exp(_to_mpf(ghi) - _to_mpf(mu_f)),
    )
    if against_hi is False:
        return False
    raise ArithmeticError(
        f"q = {q} is inseparable from {factor}*e**(gamma - {mu}) at 200 digits"
    )


def verify_gamma_dominance(mu) -> bool:
    """Certify e**(gamma-mu) < e**(1-mu), and < 2/(3 mu) when mu >= 1.

    Conservative direction: the left side uses the upper gamma bracket.
    """
    _, ghi = gamma_bounds()
    if not ghi < 1:
        return False
    mu_f = mu if isinstance(mu, Fraction) else Fraction(mu)
    if mu_f < 1:
        return True
    res = _certified_less(
        lambda: mpmath.exp(_to_mpf(ghi) - _to_mpf(mu_f)),
        lambda: mpmath.mpf(2) / (3 * _to_mpf(mu_f)),
    )
    return bool(res)


# ---------------------------------------------------------------------------
# Reciprocal prime-sum bounds over (a, b].


@dataclass(frozen=True)
class PrimeSumBounds:
    """Closed-form bounds for reciprocal prime sums over (a, b].

    ``recip_sq_upper`` bounds sum 1/p**2 and needs a >= 12;
    ``recip_lower``/``recip_upper`` bracket sum 1/p and need a >= 2.
    Fields are None where the precondition fails.
    """

    a: float
    b: float
    recip_sq_upper: float | None
    recip_lower: float | None
    recip_upper: float | None


def prime_sum_bounds(a: float, b: float) -> PrimeSumBounds:
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    sq = None
    if a >= 12:
        fa, fb = math.floor(a), math.floor(b)
        sq = 2.22 / (fa * math.log(fa)) - 1.61 / (fb * math.log(fb))
    lo = hi = None
    if a >= 2:
        la, lb = math.log(a), math.log(b)
        core = math.log(lb / la)
        lo = core - 0.5 / (lb * lb) - 1.0 / (la * la)
        hi = core + 1.0 / (lb * lb) + 0.5 / (la * la)
    return PrimeSumBounds(float(a), float(b), sq, lo, hi)


def check_recip_sq_upper(table: PrimeTable, a: float, b: float) -> BoundReport:
    """sum 1/p**2 over (a, b] against its closed-form upper bound."""
    if a < 12:
        raise ValueError(f"the square-sum bound needs a >= 12, got a={a}")
    lhs = sum_recip_sq(table, a, b)
    rhs = prime_sum_bounds(a, b).recip_sq_upper
    margin = rhs - lhs
    holds = margin >= 0
    if abs(margin) <= MARGIN:
        holds = _escalate_sq(table, a, b)
    return BoundReport(
        "recip_sq_upper", {"a": a, "b": b}, lhs, rhs, holds, margin
    )


def check_recip_bounds(
    table: PrimeTable, a: float, b: float
) -> tuple[BoundReport, BoundReport]:
    """sum 1/p over (a, b] against its two-sided closed-form bracket."""
    if a < 2:
        raise ValueError(f"the reciprocal-sum bracket needs a >= 2, got a={a}")
    s = sum_recip(table, a, b)
    pb = prime_sum_bounds(a, b)
    lo_margin = s - pb.recip_lower
    hi_margin = pb.recip_upper - s
    lo_holds = lo_margin > 0
    hi_holds = hi_margin > 0
    if abs(lo_margin) <= MARGIN:
        lo_holds = _escalate_recip(table, a, b, lower=True)
    if abs(hi_margin) <= MARGIN:
        hi_holds = _escalate_recip(table, a, b, lower=False)
    return (
        BoundReport("recip_lower", {"a": a, "b": b}, pb.recip_lower, s, lo_holds, lo_margin),
        BoundReport("recip_upper", {"a": a, "b": b}, s, pb.recip_upper, hi_holds, hi_margin),
    )


def _escalate_sq(table: PrimeTable, a: float, b: float) -> bool:
    exact = sum_recip_sq_exact(table, a, b)
    fa, fb = math.floor(a), math.floor(b)
    res = _certified_less(
        lambda: _to_mpf(exact),
        lambda: mpmath.mpf("2.22") / (fa * mpmath.log(fa))
        - mpmath.mpf("1.61") / (fb * mpmath.log(fb)),
    )
    # The bound is non-strict; inseparable-from-equal counts as holding
    # only if a 200-digit evaluation refused to call it False.
    return res is not False


def _escalate_recip(table: PrimeTable, a: float, b: float, lower: bool) -> bool:
    exact = sum_recip_exact(table, a, b)

    def closed(sign_lo: bool):
        la, lb = mpmath.log(a), mpmath.log(b)
        core = mpmath.log(lb / la)
        if sign_lo:
            return core - 1 / (2 * lb * lb) - 1 / (la * la)
        return core + 1 / (lb * lb) + 1 / (2 * la * la)

    if lower:
        return _certified_less(lambda: closed(True), lambda: _to_mpf(exact)) is True
    return _certified_less(lambda: _to_mpf(exact), lambda: closed(False)) is True


def _suffix_extreme(values: np.ndarray, use_max: bool) -> np.ndarray:
    rev = values[::-1]
    acc = np.maximum.accumulate(rev) if use_max else np.minimum.accumulate(rev)
    return acc[::-1]


def verify_recip_sq_upper_all(
    table: PrimeTable, a_lo: int = 12, b_hi: int | None = None
) -> SweepReport:
    """Check the square-sum upper bound for every pair a <= b in range.

    Rearranged so one suffix-max pass covers all (b_hi - a_lo + 1)
    choose-2 pairs: s2[b] + 1.61/(b log b) must never exceed
    s2[a] + 2.22/(a log a) for b >= a.
    """
    b_hi = table.limit if b_hi is None else b_hi
    if not 12 <= a_lo <= b_hi <= table.limit:
        raise ValueError(f"need 12 <= a_lo <= b_hi <= limit, got {a_lo}, {b_hi}")
    xs = np.arange(a_lo, b_hi + 1)
    logs = np.log(xs)
    s2 = table.s2_prefix[a_lo : b_hi + 1]
    f = s2 + 1.61 / (xs * logs)
    g = s2 + 2.22 / (xs * logs)
    margins = g - _suffix_extreme(f, use_max=True)
    return _finish_pair_sweep(
        table, "recip_sq_upper_all", xs, margins,
        lambda a, b: check_recip_sq_upper(table, a, b),
        lambda a: int(xs[np.argmax(f[a - a_lo :]) + (a - a_lo)]),
    )


def verify_recip_bounds_all(
    table: PrimeTable, a_lo: int = 2, b_hi: int | None = None
) -> SweepReport:
    """Check the two-sided reciprocal-sum bracket for every pair a <= b.

    Same suffix-extremum rearrangement as the square-sum sweep, one
    pass per side.
    """
    b_hi = table.limit if b_hi is None else b_hi
    if not 2 <= a_lo <= b_hi <= table.limit:
        raise ValueError(f"need 2 <= a_lo <= b_hi <= limit, got {a_lo}, {b_hi}")
    xs = np.arange(a_lo, b_hi + 1)
    loglogs = np.log(np.log(xs))
    inv2 = 1.0 / np.log(xs) ** 2
    s1 = table.s1_prefix[a_lo : b_hi + 1]
    # lower side: s1[b] - (loglog b - inv2[b]/2) > s1[a] - (loglog a + inv2[a])
    low_f = s1 - loglogs + 0.5 * inv2
    low_g = s1 - loglogs - inv2
    low_margins = _suffix_extreme(low_f, use_max=False) - low_g
    # upper side: s1[b] - (loglog b + inv2[b]) < s1[a] - (loglog a - inv2[a]/2)
    hi_f = s1 - loglogs - inv2
    hi_g = s1 - loglogs + 0.5 * inv2
    hi_margins = hi_g - _suffix_extreme(hi_f, use_max=True)
    low = _finish_pair_sweep(
        table, "recip_lower_all", xs, low_margins,
        lambda a, b: check_recip_bounds(table, a, b)[0],
        lambda a: int(xs[np.argmin(low_f[a - a_lo :]) + (a - a_lo)]),
    )
    high = _finish_pair_sweep(
        table, "recip_upper_all", xs, hi_margins,
        lambda a, b: check_recip_bounds(table, a, b)[1],
        lambda a: int(xs[np.argmax(hi_f[a - a_lo :]) + (a - a_lo)]),
    )
    return SweepReport(
        name="recip_bounds_all",
        checked=low.checked + high.checked,
        failures=low.failures + high.failures,
        min_margin=min(low.min_margin, high.min_margin),
        argmin=low.argmin if low.min_margin <= high.min_margin else high.argmin,
        escalations=low.escalations + high.escalations,
    )


def _finish_pair_sweep(
    table: PrimeTable,
    name: str,
    xs: np.ndarray,
    margins: np.ndarray,
    recheck: Callable[[int, int], BoundReport],
    witness_b: Callable[[int], int],
) -> SweepReport:
    """Common tail: escalate near-margin a values via their witness b."""
    failures: list[BoundReport] = []
    escalations = 0
    idx = np.flatnonzero(margins <= MARGIN)
    for i in idx.tolist():
        a = int(xs[i])
        report = recheck(a, witness_b(a))
        escalations += 1
        if not report.holds:
            failures.append(report)
    k = int(np.argmin(margins))
    n_vals = len(xs)
    return SweepReport(
        name=name,
        checked=n_vals * (n_vals + 1) // 2,
        failures=tuple(failures),
        min_margin=float(margins[k]),
        argmin={"a": int(xs[k]), "b": witness_b(int(xs[k]))},
        escalations=escalations,
    )


def verify_pi_bounds_range(
    table: PrimeTable, lo: int = 11, hi: int | None = None
) -> SweepReport:
    """Check the prime-counting bounds for every integer in [lo, hi]."""
    hi = table.limit if hi is None else hi
    if not 11 <= lo <= hi <= table.limit:
        raise ValueError(f"need 11 <= lo <= hi <= limit, got {lo}, {hi}")
    xs = np.arange(lo, hi + 1)
    logs = np.log(xs)
    base = xs / logs
    pis = table.pi_prefix[lo : hi + 1].astype(float)
    low_margin = pis - base
    high_margin = base * (1.0 + 1.5 / logs) - pis
    margins = np.minimum(low_margin, high_margin)
    failures = []
    escalations = 0
    for i in np.flatnonzero(margins <= MARGIN).tolist():
        x = int(xs[i])
        escalations += 1
        if not verify_pi_bounds(table, x):
            failures.append(
                BoundReport(
                    "pi_bounds", {"x": x}, float(pis[i]), float(base[i]),
                    False, float(margins[i]),
                )
            )
    k = int(np.argmin(margins))
    return SweepReport(
        name="pi_bounds_range",
        checked=len(xs),
        failures=tuple(failures),
        min_margin=float(margins[k]),
        argmin={"x": int(xs[k])},
        escalations=escalations,
    )


# ---------------------------------------------------------------------------
# Harmonic-number control.

# Certified float error for the compensated harmonic sweep: Kahan error
# is at most 2*eps*H_n ~ 3.2e-15 at n = 1e6, plus one ulp for log n and
# the rounding of gamma.  8e-15 covers all of it with headroom; the
# tightest true margin in range is 1/(12 n**2) ~ 8.3e-14.
_HARMONIC_BUDGET = 8e-15


def harmonic_number(n: int) -> float:
    """H_n by compensated summation."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    total = comp = 0.0
    for i in range(1, n + 1):
        y = 1.0 / i - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def harmonic_gap(n: int) -> float:
    """H_n - log n - gamma, which lies strictly in (0, 1/(2n))."""
    return harmonic_number(n) - math.log(n) - float(Fraction(EULER_MASCHERONI))


def _harmonic_gap_holds_mp(n: int) -> bool:
    with mpmath.workdps(40):
        gap = mpmath.harmonic(n) - mpmath.log(n) - mpmath.euler
        return bool(0 < gap < mpmath.mpf(1) / (2 * n))


def verify_harmonic_gap(n_max: int) -> SweepReport:
    """Check 0 < H_n - log n - gamma < 1/(2n) for all 1 <= n <= n_max."""
    if n_max < 1:
        raise ValueError(f"need n_max >= 1, got {n_max}")
    logs = np.log(np.arange(1, n_max + 1, dtype=float))
    gamma = float(Fraction(EULER_MASCHERONI))
    total = comp = 0.0
    failures = []
    escalations = 0
    min_margin = math.inf
    argmin = 0
    for n in range(1, n_max + 1):
        y = 1.0 / n - comp
        s = total + y
        comp = (s - total) - y
        total = s
        gap = total - logs[n - 1] - gamma
        margin = min(gap, 0.5 / n - gap)
        if margin < min_margin:
            min_margin = margin
            argmin = n
        if margin <= _HARMONIC_BUDGET:
            escalations += 1
            if not _harmonic_gap_holds_mp(n):
                failures.append(
                    BoundReport(
                        "harmonic_gap", {"n": n}, gap, 0.5 / n, False, margin
                    )
                )
    return SweepReport(
        name="harmonic_gap",
        checked=n_max,
        failures=tuple(failures),
        min_margin=float(min_margin),
        argmin={"n": argmin},
        escalations=escalations,
    )


# ---------------------------------------------------------------------------
# Density floor sweep: sum of 1/p over n/2 < p <= n-3 against 1/19.


@dataclass(frozen=True)
class FloorRecord:
    """One degree whose density floor fell below the threshold."""

    n: int
    value: float
    exact: Fraction

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "value": self.value,
            "exact": f"{self.exact.numerator}/{self.exact.denominator}",
        }


@dataclass(frozen=True)
class FloorSweep:
    """Result of sweeping the large-prime density floor over [5, n_max]."""

    n_max: int
    threshold: Fraction
    exceptions: tuple[FloorRecord, ...]
    min_value: float
    argmin_n: int
    escalations: int = 0

    @property
    def holds_from_11(self) -> bool:
        return all(r.n < 11 for r in self.exceptions)


def density_floor_sweep(
    table: PrimeTable,
    n_max: int,
    threshold: Fraction = Fraction(1, 19),
    threads: int = 1,
) -> FloorSweep:
    """Sweep sum_{n/2 < p <= n-3} 1/p >= threshold for n in [5, n_max].

    Every permutation with a cycle of prime length p in (n/2, n-3]
    powers to a p-cycle, and for such large p the density of that event
    is exactly 1/p, so this sum is a certified floor for the
    pre-p-cycle proportion.  Exceptions carry the exact rational sum.
    ``threads`` is accepted for interface symmetry; the sweep is a
    single vectorized pass and ignores it.
    """
    if n_max < 5:
        raise ValueError(f"need n_max >= 5, got {n_max}")
    if n_max > table.limit:
        raise ValueError(f"n_max {n_max} exceeds sieve limit {table.limit}")
    ns = np.arange(5, n_max + 1)
    vals = table.s1_prefix[ns - 3] - table.s1_prefix[ns // 2]
    thr = float(threshold)
    exceptions: list[FloorRecord] = []
    escalations = 0
    suspect = np.flatnonzero(vals < thr + MARGIN)
    for i in suspect.tolist():
        n = int(ns[i])
        exact = sum_recip_exact(table, n // 2, n - 3)
        if abs(float(vals[i]) - thr) <= MARGIN:
            escalations += 1
        if exact < threshold:
            exceptions.append(FloorRecord(n=n, value=float(vals[i]), exact=exact))
    # Report the minimum over the asserted range n >= 11 (or the whole
    # sweep when it stops earlier); the below-threshold degrees are all
    # in the exceptions list regardless.
    lo = min(11 - 5, len(vals) - 1)
    k = lo + int(np.argmin(vals[lo:]))
    return FloorSweep(
        n_max=n_max,
        threshold=threshold,
        exceptions=tuple(exceptions),
        min_value=float(vals[k]),
        argmin_n=int(ns[k]),
        escalations=escalations,
    )


# ---------------------------------------------------------------------------
# Closed-form lower bounds for the pre-p-cycle proportion.


def window_density_lower_bound(n: int, a: float, d: float, delta: int) -> float:
    """Lower bound for the pre-p-cycle proportion over primes in
    (a, a**d], for S_n (delta=1) or A_n (delta=2).

    Requires a >= 12, d > 1, and a**d <= n.  The value is
    1 - 2.287 delta / d
      - 2.22 (log n - 1) / (floor(a) log floor(a))
      - 4.4 delta log n / (a log(a) n)
    and is negative for every degree small enough to enumerate.
    """
    if delta not in (1, 2):
        raise ValueError(f"delta must be 1 or 2, got {delta}")
    if a < 12:
        raise ValueError(f"need a >= 12, got a={a}")
    if d <= 1:
        raise ValueError(f"need d > 1, got d={d}")
    logn = math.log(n)
    if d * math.log(a) > logn * (1 + 1e-12) + 1e-12:
        raise ValueError(f"need a**d <= n, got a={a}, d={d}, n={n}")
    fa = math.floor(a)
    return (
        1.0
        - 2.287 * delta / d
        - 2.22 * (logn - 1.0) / (fa * math.log(fa))
        - 4.4 * delta * logn / (a * math.log(a) * n)
    )


@dataclass(frozen=True)
class HeadlineBounds:
    """The two closed-form lower bounds at degree n.

    ``simple`` is 1 - c/loglog n; ``refined`` is
    1 - (4.58 delta + 0.17) loglog n / log(n - 3).  Both are asserted
    to hold only for n >= ASSERTED_FROM; below that they are evaluated
    anyway (and are far below zero at desk scale).
    """

    n: int
    delta: int
    c: float
    simple: float
    refined: float
    asserted: bool


_SIMPLE_C = {"stated": {1: 5.0, 2: 7.0}, "proof": {1: 4.6, 2: 6.9}}


def headline_bounds(n: int, delta: int = 1, variant: str = "stated") -> HeadlineBounds:
    """Evaluate both headline lower bounds at degree n >= 16.

    ``variant`` picks the constant c in 1 - c/loglog n: the stated
    values (5 and 7) or the slightly sharper ones the derivation
    actually yields (4.6 and 6.9).
    """
    if delta not in (1, 2):
        raise ValueError(f"delta must be 1 or 2, got {delta}")
    if variant not in _SIMPLE_C:
        raise ValueError(f"variant must be one of {sorted(_SIMPLE_C)}, got {variant!r}")
    if n < 16:
        raise ValueError(f"headline bounds are evaluated for n >= 16, got {n}")
    loglog = math.log(math.log(n))
    c = _SIMPLE_C[variant][delta]
    simple = 1.0 - c / loglog
    refined = 1.0 - (4.58 * delta + 0.17) * loglog / math.log(n - 3)
    return HeadlineBounds(
        n=n,
        delta=delta,
        c=c,
        simple=simple,
        refined=refined,
        asserted=n >= ASSERTED_FROM,
    )


# ---------------------------------------------------------------------------
# Sampling budget.


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    raise TypeError(f"expected a number, got {x!r}")


def sample_count(epsilon, c0) -> int:
    """Smallest m with (1 - c0)**m <= epsilon (0 when epsilon = 1).

    Drawing m independent elements, each a pre-p-cycle with probability
    at least c0, fails to find one with probability at most epsilon.
    Computed at 60 digits with an exact rational fix-up near integer
    boundaries, so the count is never off by one.
    """
    eps = _as_fraction(epsilon)
    c = _as_fraction(c0)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    if not 0 < c < 1:
        raise ValueError(f"c0 must be in (0, 1), got {c0}")
    if eps == 1:
        return 0
    base = 1 - c
    with mpmath.workdps(60):
        ratio = mpmath.log(_to_mpf(eps)) / mpmath.log(_to_mpf(base))
        floor_r = int(mpmath.floor(ratio))
        near_integer = ratio - floor_r < mpmath.mpf("1e-40")
    m = floor_r if near_integer else floor_r + 1
    m = max(m, 1)
    # Exact adjustment when the bigint powers stay affordable.
    cost = m * (base.numerator.bit_length() + base.denominator.bit_length())
    if cost <= 4_000_000:
        while m > 0 and base ** (m - 1) <= eps:
            m -= 1
        while base**m > eps:
            m += 1
    return m
