"""Exact model of the finite two-player hat game.

Conventions (the single wire format used everywhere):

* A stack of ``h`` hats is identified with a word ``w`` in ``[0, 2**h)``;
  hat ``i`` (1-indexed, hat 1 at the bottom) is bit ``h - i`` of ``w``.
  Stacks are enumerated in lexicographic order by the index
  ``j = w + 1``, so index 1 is the all-white stack and index ``2**h``
  the all-black one.
* Index ``j`` corresponds to the dyadic interval
  ``[(j-1)/2**h, j/2**h)`` when stacks are read as binary expansions of
  a real in ``[0, 1)``.
* A strategy is a table of length ``2**h``: entry ``j-1`` is the hat
  index (in ``1..h``) chosen after observing the teammate stack ``j``.
* Outcome grids are indexed ``(i, j)`` with ``i`` the first player's
  stack (columns, left to right) and ``j`` the second player's stack
  (rows, bottom up).

All probabilities are exact ``fractions.Fraction`` values; floats only
appear in convenience accessors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ratpoly import ONE_MINUS_P, P, Poly

# exact rational probabilities; stdlib Fractions are always in lowest
# terms with positive denominator
Rat = Fraction


@dataclass(frozen=True)
class Stack:
    """One stack of ``h`` hats, packed into the bits of a word."""

    h: int
    bits: int

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if not 0 <= self.bits < (1 << self.h):
            raise ValueError(f"bits out of range for h={self.h}")

    def hat(self, i: int) -> int:
        """Color of hat ``i`` (1 = black)."""
        if not 1 <= i <= self.h:
            raise ValueError(f"hat index {i} not in 1..{self.h}")
        return (self.bits >> (self.h - i)) & 1

    def hats(self) -> tuple[int, ...]:
        return tuple(self.hat(i) for i in range(1, self.h + 1))

    @property
    def blacks(self) -> int:
        return bin(self.bits).count("1")

    def interval(self) -> tuple[Fraction, Fraction]:
        """Dyadic interval of reals whose expansion starts with this stack."""
        lo = Fraction(self.bits, 1 << self.h)
        return lo, lo + Fraction(1, 1 << self.h)


def stack_index(s: Stack) -> int:
    """Lexicographic index in ``1..2**h``."""
    return s.bits + 1


def stack_from_index(h: int, j: int) -> Stack:
    if not 1 <= j <= (1 << h):
        raise ValueError(f"index {j} not in 1..{1 << h}")
    return Stack(h, j - 1)


@dataclass(frozen=True)
class HStrategy:
    """Choice table for one player: observed stack index -> hat index."""

    h: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if len(self.table) != (1 << self.h):
            raise ValueError(f"table must have length {1 << self.h}")
        if any(not 1 <= k <= self.h for k in self.table):
            raise ValueError(f"entries must lie in 1..{self.h}")

    def pick(self, j: int) -> int:
        """Chosen hat index after observing stack ``j`` (1-indexed)."""
        return self.table[j - 1]

    def to_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    @classmethod
    def constant(cls, h: int, k: int) -> "HStrategy":
        return cls(h, (k,) * (1 << h))


@dataclass(frozen=True)
class BiasedMeasure:
    """Product measure where each hat is black with probability ``p``."""

    p: Fraction

    def __post_init__(self):
        p = Fraction(self.p)
        object.__setattr__(self, "p", p)
        if not 0 < p < 1:
            raise ValueError("p must lie strictly between 0 and 1")

    def weight(self, s: Stack) -> Fraction:
        b = s.blacks
        return self.p**b * (1 - self.p) ** (s.h - b)


@dataclass(frozen=True, eq=False)
class DeltaGrid:
    """Binary outcome matrix; ``cells[i-1, j-1]`` is the value at (i, j)."""

    h: int
    cells: np.ndarray

    def cell(self, i: int, j: int) -> int:
        return int(self.cells[i - 1, j - 1])

    @property
    def black_count(self) -> int:
        return int(self.cells.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeltaGrid):
            return NotImplemented
        return self.h == other.h and np.array_equal(self.cells, other.cells)


def hat_bits(h: int) -> np.ndarray:
    """Matrix B with B[w, k] = hat (k+1) of stack word w, shape (2**h, h)."""
    words = np.arange(1 << h, dtype=np.int64)
    shifts = np.arange(h - 1, -1, -1, dtype=np.int64)
    return ((words[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def _check_pair(k1: HStrategy, k2: HStrategy) -> int:
    if k1.h != k2.h:
        raise ValueError(f"mismatched heights: {k1.h} != {k2.h}")
    return k1.h


def delta_grids(k1: HStrategy, k2: HStrategy) -> tuple[DeltaGrid, DeltaGrid, DeltaGrid]:
    """Individual outcome grids and their pointwise product.

    dA[i, j] = hat k1(a_j) of stack a_i, dB[i, j] = hat k2(a_i) of a_j.
    """
    h = _check_pair(k1, k2)
    bits = hat_bits(h)
    t1 = k1.to_array() - 1
    t2 = k2.to_array() - 1
    d_a = bits[:, t1]          # d_a[i, j] = bits[i, k1[j]-1]
    d_b = bits[:, t2].T        # d_b[i, j] = bits[j, k2[i]-1]
    joint = d_a * d_b
    return (
        DeltaGrid(h, d_a.astype(np.uint8)),
        DeltaGrid(h, d_b.astype(np.uint8)),
        DeltaGrid(h, joint.astype(np.uint8)),
    )


def win_count(k1: HStrategy, k2: HStrategy) -> int:
    """Number of winning configuration pairs out of 4**h."""
    h = _check_pair(k1, k2)
    bits = hat_bits(h)
    d_a = bits[:, k1.to_array() - 1]
    d_b = bits[:, k2.to_array() - 1].T
    return int((d_a * d_b).sum())


def win_prob(k1: HStrategy, k2: HStrategy) -> Fraction:
    """Exact joint win probability under the uniform measure."""
    return Fraction(win_count(k1, k2), 4 ** k1.h)


def _joint_black_counts(
    k1: HStrategy, k2: HStrategy, keep: np.ndarray | None = None
) -> list[int]:
    """c[t] = number of winning pairs (i, j) with t black hats in total.

    ``keep`` optionally restricts both i and j to a boolean subset of
    stack words (used for the non-monochromatic restriction).
    """
    h = _check_pair(k1, k2)
    bits = hat_bits(h)
    d_a = bits[:, k1.to_array() - 1]
    d_b = bits[:, k2.to_array() - 1].T
    joint = d_a * d_b
    if keep is not None:
        joint = joint * (keep[:, None] & keep[None, :])
    pops = bits.sum(axis=1)
    total = pops[:, None] + pops[None, :]
    return np.bincount(total[joint == 1], minlength=2 * h + 1).tolist()


def win_prob_biased(k1: HStrategy, k2: HStrategy, m: BiasedMeasure) -> Fraction:
    """Exact joint win probability when hats are black with probability p."""
    h = _check_pair(k1, k2)
    p = m.p
    q = 1 - p
    counts = _joint_black_counts(k1, k2)
    return sum(
        (c * p**t * q ** (2 * h - t) for t, c in enumerate(counts) if c),
        Fraction(0),
    )


def win_prob_joint_poly(k1: HStrategy, k2: HStrategy) -> Poly:
    """Joint win probability as an exact polynomial in p (degree <= 2h)."""
    h = _check_pair(k1, k2)
    counts = _joint_black_counts(k1, k2)
    out = Poly()
    for t, c in enumerate(counts):
        if c:
            out = out + c * P**t * ONE_MINUS_P ** (2 * h - t)
    return out


def embed_check(k1: HStrategy, k2: HStrategy, depth: int) -> bool:
    """Check the finite grid against its embedding into [0,1)^2.

    Each coordinate cell of the 2**depth grid is sampled at its dyadic
    midpoint (never a boundary); the embedded evaluation
    eps(2**k1(y) * x) * eps(2**k2(x) * y) must reproduce the finite tile
    value at every sample.  Integer arithmetic throughout, so the
    comparison is exact.
    """
    h = _check_pair(k1, k2)
    if depth < h:
        raise ValueError(f"depth {depth} < h {h}")
    n = 1 << depth
    cells = np.arange(n, dtype=np.int64)
    # midpoint of cell c is (2c+1) / 2**(depth+1); bit k of it is
    # ((2c+1) >> (depth+1-k)) & 1 for k <= depth+1
    mid = 2 * cells + 1
    tiles = cells >> (depth - h)                      # finite tile per cell
    k1_of_y = k1.to_array()[tiles]                    # choice given y's tile
    k2_of_x = k2.to_array()[tiles]
    # eps(2**k1(y) * x): bit k1(y) of x's midpoint
    bit_a = (mid[:, None] >> (depth + 1 - k1_of_y[None, :])) & 1
    bit_b = (mid[:, None] >> (depth + 1 - k2_of_x[None, :])) & 1
    embedded = bit_a * bit_b.T                        # [x_cell, y_cell]
    _, _, joint = delta_grids(k1, k2)
    expected = joint.cells.astype(np.int64)[tiles[:, None], tiles[None, :]]
    return bool(np.array_equal(embedded, expected))


def save_strategy(path, k1: HStrategy, k2: HStrategy | None = None) -> None:
    """Write the JSON strategy file format ({"h":..,"k1":[..],"k2":[..]})."""
    doc = {"h": k1.h, "k1": list(k1.table)}
    if k2 is not None and k2.table != k1.table:
        _check_pair(k1, k2)
        doc["k2"] = list(k2.table)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_strategy(path) -> tuple[HStrategy, HStrategy]:
    """Read the JSON strategy file; a missing "k2" defaults to "k1"."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        h = int(doc["h"])
        k1 = HStrategy(h, tuple(int(v) for v in doc["k1"]))
        k2_table = doc.get("k2", doc["k1"])
        k2 = HStrategy(h, tuple(int(v) for v in k2_table))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed strategy file: {exc}") from exc
    return k1, k2
