"""Exact class-counting statistics in S_n and A_n.

Every function here returns plain ``fractions.Fraction`` values (always
checked to lie in [0, 1] when they are proportions).  Two independent
routes are kept deliberately separate so they can cross-check each
other in the test suite:

* a coefficient recurrence for cycle-length avoidance, integerized as
  N_m = m! * q_m so the hot loop is pure bigint arithmetic, and
* a partition sweep that enumerates cycle types directly with an
  incrementally maintained centralizer order.

Proportions over A_n weight each even class by 2/|C(lambda)|; the
recurrence route gets a signed companion sequence for the same thing.

Degrees above ``ENUMERATION_BOUND`` are refused by the sweep-based
functions with :class:`EnumerationCapacityError`; Monte Carlo
estimation (:mod:`precycles.montecarlo`) is the fallback at that scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, NamedTuple

from .perm import CycleType
from .primes import PrimeTable, is_prime_trial

ENUMERATION_BOUND = 60

# Windows with at most this many primes get a primality re-check on
# construction; larger ones are trusted to their generating sieve.
_WINDOW_CHECK_LIMIT = 1000


class EnumerationCapacityError(ValueError):
    """Degree too large for exact partition enumeration."""

    def __init__(self, n: int, bound: int):
        super().__init__(
            f"degree {n} exceeds the exact enumeration bound {bound}; "
            "use precycles.montecarlo.estimate_event for estimates at this scale"
        )
        self.n = n
        self.bound = bound


def _check_group(group: str, n: int) -> None:
    if group not in ("sym", "alt"):
        raise ValueError(f"group must be 'sym' or 'alt', got {group!r}")
    if group == "alt" and n < 2:
        raise ValueError("group='alt' requires n >= 2")


def _check_unit_interval(q: Fraction) -> Fraction:
    if not 0 <= q <= 1:
        raise AssertionError(f"proportion {q} outside [0, 1]")
    return q


@dataclass(frozen=True)
class ForbiddenSet:
    """A set of forbidden cycle lengths inside {1..n}."""

    n: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        if self.n < 0:
            raise ValueError(f"degree must be >= 0, got {self.n}")
        for a in self.members:
            if not isinstance(a, int) or not 1 <= a <= self.n:
                raise ValueError(f"forbidden length {a!r} outside 1..{self.n}")

    @cached_property
    def mu(self) -> Fraction:
        """sum of 1/a over the forbidden lengths."""
        return sum((Fraction(1, a) for a in self.members), Fraction(0))


@dataclass(frozen=True)
class PrimeWindow:
    """The primes in a half-open interval (lo, hi].

    ``primes`` must be exactly the primes of the interval, ascending;
    the factories below build complete windows, and construction
    re-checks primality for windows of moderate size.
    """

    lo: float
    hi: float
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"window ({self.lo}, {self.hi}] is inverted")
        prev = 0
        for p in self.primes:
            if p <= prev:
                raise ValueError("window primes must be strictly ascending")
            if not self.lo < p <= self.hi:
                raise ValueError(f"prime {p} outside ({self.lo}, {self.hi}]")
            prev = p
        if len(self.primes) <= _WINDOW_CHECK_LIMIT:
            for p in self.primes:
                if not is_prime_trial(p):
                    raise ValueError(f"window member {p} is not prime")


def prime_window(lo: float, hi: float, table: PrimeTable | None = None) -> PrimeWindow:
    """Complete window of the primes in (lo, hi].

    Uses ``table`` when given, trial division otherwise.
    """
    if table is not None:
        ps = [int(p) for p in table.primes_between(lo, hi)]
    else:
        ps = [
            k
            for k in range(max(2, math.floor(lo) + 1), math.floor(hi) + 1)
            if is_prime_trial(k)
        ]
    return PrimeWindow(lo=float(lo), hi=float(hi), primes=tuple(ps))


def centralizer_order(t: CycleType) -> int:
    """|C(lambda)| = prod k**m_k * m_k! for a cycle type lambda."""
    out = 1
    for k, m in t.parts:
        out *= k**m * math.factorial(m)
    return out


# ---------------------------------------------------------------------------
# Partition sweep.


def sweep_partitions(
    n: int, visit: Callable[[list[tuple[int, int]], int, int], None]
) -> None:
    """Enumerate the partitions of n, largest part first (reverse-lex).

    ``visit(parts, centralizer, num_parts)`` receives the live stack of
    (length, multiplicity) pairs in descending length order together
    with the centralizer order of the class; callers must not retain or
    mutate the stack.  The centralizer order is maintained
    incrementally, one small multiplication per enumeration edge.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    parts: list[tuple[int, int]] = []

    def rec(remaining: int, max_part: int, cent: int, num: int) -> None:
        if remaining == 0:
            visit(parts, cent, num)
            return
        for k in range(min(max_part, remaining), 0, -1):
            c = cent
            for m in range(1, remaining // k + 1):
                c *= k * m
                parts.append((k, m))
                rec(remaining - k * m, k - 1, c, num + m)
                parts.pop()

    rec(n, n, 1, 0)


def _sweep_proportion(
    n: int,
    group: str,
    accept: Callable[[list[tuple[int, int]]], bool],
    enumeration_bound: int = ENUMERATION_BOUND,
) -> Fraction:
    """Total class proportion of the accepted cycle types."""
    _check_group(group, n)
    if n > enumeration_bound:
        raise EnumerationCapacityError(n, enumeration_bound)
    nf = math.factorial(n)
    total = 0
    if group == "sym":

        def visit(parts, cent, num):
            nonlocal total
            if accept(parts):
                total += nf // cent

    else:

        def visit(parts, cent, num):
            nonlocal total
            if (n - num) % 2 == 0 and accept(parts):
                total += 2 * (nf // cent)

    sweep_partitions(n, visit)
    return _check_unit_interval(Fraction(total, nf))


# ---------------------------------------------------------------------------
# Cycle-length avoidance.


def _avoidance_counts(
    n: int, allowed: list[bool], signed: bool
) -> tuple[int, int | None]:
    """N_n = n! q_n (and the signed companion) for length avoidance.

    q_n is the S_n proportion with no cycle length j having
    allowed[j] == False.  Differentiating the exponential generating
    function gives m q_m = sum_{j<=m, allowed} q_{m-j}; here everything
    is scaled by m! so the loop stays in integers.  The signed variant
    carries an extra (-1)**(j-1) per term and yields
    N~_n = n! * sum_over_even_classes 1/C - n! * sum_over_odd_classes 1/C.
    """
    cols = [1]  # cols[k] = N_k * (m-1)!/k! for the current m
    scols = [1] if signed else None
    n_m = 1
    s_m: int | None = 1 if signed else None
    allowed_j = [j for j in range(1, n + 1) if allowed[j]]
    for m in range(1, n + 1):
        total = 0
        for j in allowed_j:
            if j > m:
                break
            total += cols[m - j]
        n_m = total
        if signed:
            stotal = 0
            for j in allowed_j:
                if j > m:
                    break
                stotal += scols[m - j] if j % 2 else -scols[m - j]
            s_m = stotal
        if m < n:
            cols = [c * m for c in cols]
            cols.append(n_m)
            if signed:
                scols = [c * m for c in scols]
                scols.append(s_m)
    return n_m, s_m


def avoid_proportion(fs: ForbiddenSet, group: str = "sym") -> Fraction:
    """Proportion of the group with no cycle length in ``fs.members``.

    For A_n this is q_n + q~_n: even classes counted at twice their S_n
    weight via the signed companion recurrence.
    """
    n = fs.n
    _check_group(group, n)
    allowed = [j not in fs.members for j in range(n + 1)]
    nf = math.factorial(n)
    if group == "sym":
        count, _ = _avoidance_counts(n, allowed, signed=False)
        return _check_unit_interval(Fraction(count, nf))
    count, signed_count = _avoidance_counts(n, allowed, signed=True)
    return _check_unit_interval(Fraction(count + signed_count, nf))


def avoid_proportion_by_sweep(fs: ForbiddenSet, group: str = "sym") -> Fraction:
    """Same statistic by direct partition enumeration.

    Kept as an independent route for cross-checking the recurrence;
    subject to the enumeration bound.
    """
    members = fs.members
    return _sweep_proportion(
        fs.n, group, lambda parts: all(k not in members for k, _ in parts)
    )


# ---------------------------------------------------------------------------
# Pre-p-cycle densities.


def coprime_order_density(m: int, p: int) -> Fraction:
    """Proportion of S_m whose order is coprime to the prime p.

    Equals prod_{i=1..floor(m/p)} (1 - 1/(i*p)); in particular 1 when
    m < p.
    """
    if not is_prime_trial(p):
        raise ValueError(f"p must be prime, got {p}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    out = Fraction(1)
    for i in range(1, m // p + 1):
        out *= 1 - Fraction(1, i * p)
    return _check_unit_interval(out)


def pre_cycle_density(n: int, p: int) -> Fraction:
    """Exact S_n proportion of permutations some power of which is a p-cycle.

    Requires p prime with p <= n; the value is (1/p) times the density
    of order-coprime-to-p permutations on the remaining n - p points.
    """
    if not is_prime_trial(p):
        raise ValueError(f"p must be prime, got {p}")
    if p > n:
        raise ValueError(f"need p <= n, got p={p}, n={n}")
    return _check_unit_interval(Fraction(1, p) * coprime_order_density(n - p, p))


def _window_accept(
    n: int, primes: tuple[int, ...]
) -> Callable[[list[tuple[int, int]]], bool]:
    prime_set = set(primes)
    multiples = {p: range(2 * p, n + 1, p) for p in primes}

    def accept(parts: list[tuple[int, int]]) -> bool:
        d: dict[int, int] | None = None
        for k, m in parts:
            if m == 1 and k in prime_set:
                if d is None:
                    d = dict(parts)
                if not any(d.get(q) for q in multiples[k]):
                    return True
        return False

    return accept


def window_proportion(
    n: int,
    window: PrimeWindow,
    group: str = "sym",
    enumeration_bound: int = ENUMERATION_BOUND,
) -> Fraction:
    """Exact proportion of pre-p-cycles for some prime p in the window.

    A class qualifies when some window prime p has multiplicity exactly
    1 and no multiple of p appears as another cycle length.
    """
    _check_window(n, window)
    if not window.primes:
        _check_group(group, n)
        return Fraction(0)
    return _sweep_proportion(
        n, group, _window_accept(n, window.primes), enumeration_bound
    )


class WindowHitStats(NamedTuple):
    """Class proportions of window-prime hits and of repeated hits."""

    hit: Fraction
    repeat: Fraction


def _check_window(n: int, window: PrimeWindow) -> None:
    for p in window.primes:
        if p > n:
            raise ValueError(f"window prime {p} exceeds degree {n}")


def window_hit_proportions(
    n: int,
    window: PrimeWindow,
    group: str = "sym",
    enumeration_bound: int = ENUMERATION_BOUND,
) -> WindowHitStats:
    """Proportions (hit, repeat) for a prime window.

    ``hit``: some window prime occurs as a cycle length.  ``repeat``:
    some window prime p occurs and the total count of p-divisible cycle
    lengths is at least 2.  hit - repeat is a lower bound for
    :func:`window_proportion` (the difference set consists only of
    pre-p-cycles), and window_proportion <= hit.
    """
    _check_group(group, n)
    _check_window(n, window)
    if n > enumeration_bound:
        raise EnumerationCapacityError(n, enumeration_bound)
    if not window.primes:
        return WindowHitStats(Fraction(0), Fraction(0))
    prime_set = set(window.primes)
    multiples = {p: range(2 * p, n + 1, p) for p in window.primes}
    nf = math.factorial(n)
    hit_total = 0
    repeat_total = 0
    alt = group == "alt"

    def visit(parts, cent, num):
        nonlocal hit_total, repeat_total
        if alt and (n - num) % 2:
            return
        d: dict[int, int] | None = None
        hit = False
        repeat = False
        for k, m in parts:
            if k in prime_set:
                hit = True
                if d is None:
                    d = dict(parts)
                if m + sum(d.get(q, 0) for q in multiples[k]) >= 2:
                    repeat = True
                    break
        if hit:
            w = 2 * (nf // cent) if alt else nf // cent
            hit_total += w
            if repeat:
                repeat_total += w

    sweep_partitions(n, visit)
    return WindowHitStats(
        _check_unit_interval(Fraction(hit_total, nf)),
        _check_unit_interval(Fraction(repeat_total, nf)),
    )


def pre_prime_cycle_proportion(
    n: int,
    group: str = "sym",
    enumeration_bound: int = ENUMERATION_BOUND,
) -> Fraction:
    """Exact proportion of pre-p-cycles over all primes 2 <= p <= n - 3."""
    _check_group(group, n)
    return window_proportion(
        n, prime_window(1, max(n - 3, 1)), group, enumeration_bound
    )


def cycle_proportion(n: int) -> Fraction:
    """Proportion of S_n that is a single cycle of length >= 2 (n >= 2).

    Equals sum_{k=2..n} 1/(k * (n-k)!); n times this tends to e.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    total = sum(
        (Fraction(1, k * math.factorial(n - k)) for k in range(2, n + 1)),
        Fraction(0),
    )
    return _check_unit_interval(total)
