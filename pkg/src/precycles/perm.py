"""Permutations, cycle types, and cycle-power witnesses.

A permutation g of degree n "powers to a k-cycle" when some power g**e
is a single k-cycle fixing everything else.  That holds exactly when g
has one cycle of length k and every other cycle length is coprime to k;
this module finds those target lengths and constructs the witness power
in O(n) from the cycle decomposition.

Points are 1-based everywhere in the public API, matching the two text
notations: disjoint cycles ``(1,2,3)(4,5)`` and one-line images
``2 3 1 5 4``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Dense image arrays above this degree are refused; cycle-type-only
# code paths carry no such bound.
DEGREE_CAP = 10**7


def coerce_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    """Accept a Generator, an int seed, or None (fresh OS entropy)."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def cycle_length_counts(images0: Sequence[int]) -> dict[int, int]:
    """Map cycle length -> multiplicity for a 0-based image list."""
    n = len(images0)
    seen = bytearray(n)
    counts: dict[int, int] = {}
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = images0[j]
            length += 1
        counts[length] = counts.get(length, 0) + 1
    return counts


@dataclass(frozen=True)
class CycleType:
    """Cycle type of a degree-n permutation as (length, multiplicity) pairs.

    ``parts`` is ascending by length, multiplicities >= 1, and the
    lengths (with multiplicity) sum to n.  Fixed points appear as
    length-1 parts.
    """

    n: int
    parts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        total = 0
        prev = 0
        for length, mult in self.parts:
            if length <= prev:
                raise ValueError("parts must be strictly ascending by length")
            if mult < 1:
                raise ValueError(f"multiplicity for length {length} must be >= 1")
            total += length * mult
            prev = length
        if total != self.n:
            raise ValueError(f"parts sum to {total}, expected n={self.n}")

    @classmethod
    def from_counts(cls, n: int, counts: dict[int, int]) -> "CycleType":
        parts = tuple(sorted((k, m) for k, m in counts.items() if m))
        return cls(n=n, parts=parts)

    def multiplicity(self, k: int) -> int:
        for length, mult in self.parts:
            if length == k:
                return mult
        return 0

    @property
    def counts(self) -> dict[int, int]:
        return dict(self.parts)

    @property
    def num_cycles(self) -> int:
        return sum(m for _, m in self.parts)

    @property
    def sign(self) -> int:
        """+1 for even permutations, -1 for odd."""
        return -1 if (self.n - self.num_cycles) % 2 else 1


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} stored as the tuple of images of 1..n."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n > DEGREE_CAP:
            raise ValueError(f"degree {n} exceeds cap {DEGREE_CAP}")
        seen = bytearray(n)
        for v in self.images:
            if not isinstance(v, int) or not 1 <= v <= n:
                raise ValueError(f"image {v!r} outside 1..{n}")
            if seen[v - 1]:
                raise ValueError(f"image {v} repeated; not a bijection")
            seen[v - 1] = 1

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def cycles(self) -> list[list[int]]:
        """Disjoint cycles (fixed points included), each starting at its
        smallest point, ordered by that point."""
        n = self.degree
        seen = bytearray(n)
        out: list[list[int]] = []
        for i in range(1, n + 1):
            if seen[i - 1]:
                continue
            cyc = []
            j = i
            while not seen[j - 1]:
                seen[j - 1] = 1
                cyc.append(j)
                j = self.images[j - 1]
            out.append(cyc)
        return out


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def cycle_type(g: Permutation) -> CycleType:
    counts = cycle_length_counts([v - 1 for v in g.images])
    return CycleType.from_counts(g.degree, counts)


def sample_uniform(
    n: int,
    parity: str = "any",
    rng: np.random.Generator | int | None = None,
) -> Permutation:
    """Uniform draw from S_n (parity="any") or A_n (parity="even").

    Fisher-Yates via the generator's permutation method; for A_n an odd
    draw has two fixed positions' images swapped, which maps the odd
    coset bijectively onto A_n, so no rejection loop is needed.
    """
    if parity not in ("any", "even"):
        raise ValueError(f"parity must be 'any' or 'even', got {parity!r}")
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if parity == "even" and n < 3:
        raise ValueError("parity='even' requires n >= 3")
    gen = coerce_rng(rng)
    images0 = gen.permutation(n).tolist()
    if parity == "even":
        counts = cycle_length_counts(images0)
        if (n - sum(counts.values())) % 2:
            images0[0], images0[1] = images0[1], images0[0]
    return Permutation(tuple(v + 1 for v in images0))


def pre_cycle_targets(t: CycleType) -> frozenset[int]:
    """All k such that some power of a permutation of type t is a k-cycle.

    These are the lengths k >= 2 of multiplicity exactly 1 with every
    other cycle length coprime to k.
    """
    out = []
    for k, mult in t.parts:
        if k < 2 or mult != 1:
            continue
        if all(j == k or math.gcd(j, k) == 1 for j, _ in t.parts):
            out.append(k)
    return frozenset(out)


def extract_cycle_power(g: Permutation, k: int) -> tuple[int, Permutation]:
    """Exponent ell and witness g**ell, a single k-cycle.

    ell is the lcm of the cycle lengths other than k; it is coprime to
    k whenever k is a valid target, so the witness really is a k-cycle.
    Raises ValueError naming the failed condition otherwise.
    """
    t = cycle_type(g)
    mult = t.multiplicity(k)
    if k < 2 or mult == 0:
        raise ValueError(f"no usable cycle of length {k} in type {t.parts}")
    if mult > 1:
        raise ValueError(f"{mult} cycles of length {k}; need exactly one")
    for j, _ in t.parts:
        if j != k and math.gcd(j, k) > 1:
            raise ValueError(
                f"cycle length {j} shares factor {math.gcd(j, k)} with {k}"
            )
    others = [j for j, _ in t.parts if j != k]
    ell = math.lcm(*others) if others else 1
    shift = ell % k
    images = list(range(1, g.degree + 1))
    for cyc in g.cycles():
        if len(cyc) == k:
            for i, point in enumerate(cyc):
                images[point - 1] = cyc[(i + shift) % k]
            break
    return ell, Permutation(tuple(images))


# ---------------------------------------------------------------------------
# Text notations.

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def format_one_line(g: Permutation) -> str:
    return " ".join(str(v) for v in g.images)


def parse_one_line(text: str) -> Permutation:
    tokens = text.split()
    if not tokens:
        raise ValueError("empty one-line permutation")
    try:
        images = tuple(int(tok) for tok in tokens)
    except ValueError as exc:
        raise ValueError(f"bad one-line permutation {text!r}") from exc
    return Permutation(images)


def format_cycles(g: Permutation) -> str:
    parts = [
        "(" + ",".join(str(p) for p in cyc) + ")"
        for cyc in g.cycles()
        if len(cyc) > 1
    ]
    return "".join(parts) if parts else "()"


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse disjoint-cycle notation; omitted points are fixed.

    The degree defaults to the largest point mentioned; pass ``n`` to
    embed into a larger symmetric group.
    """
    stripped = text.replace(" ", "")
    if not stripped:
        raise ValueError("empty cycle notation")
    if _CYCLE_RE.sub("", stripped):
        raise ValueError(f"malformed cycle notation {text!r}")
    cycles: list[list[int]] = []
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            continue
        try:
            points = [int(tok) for tok in body.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad cycle {body!r}") from exc
        if any(p < 1 for p in points):
            raise ValueError(f"points must be >= 1 in cycle {body!r}")
        cycles.append(points)
    top = max((max(c) for c in cycles), default=0)
    degree = top if n is None else n
    if degree < top:
        raise ValueError(f"degree {n} smaller than largest point {top}")
    images = list(range(1, degree + 1))
    used: set[int] = set()
    for cyc in cycles:
        for p in cyc:
            if p in used:
                raise ValueError(f"point {p} appears in two cycles")
            used.add(p)
        for i, p in enumerate(cyc):
            images[p - 1] = cyc[(i + 1) % len(cyc)]
    return Permutation(tuple(images))


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    """Parse either notation, dispatching on a leading parenthesis."""
    if text.lstrip().startswith("("):
        return parse_cycles(text, n=n)
    g = parse_one_line(text)
    if n is not None and n != g.degree:
        raise ValueError(f"one-line permutation has degree {g.degree}, expected {n}")
    return g
