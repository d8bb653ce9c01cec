"""Recursive strategies on unbounded stacks and the bounds they induce.

A recursive pair of order t scans the observed stack in batches of t
hats, skipping monochromatic batches (both all-black and all-white), and
applies its finite base pair to the first retained batch, offset by the
number of skipped hats.  Conditioning on whether each player's first
batch is monochromatic gives an affine fixed-point equation for the win
probability and, applied to an arbitrary tail strategy, a family of
lower-bound recurrences for the finite game.

The first-black-hat strategy is the degenerate order-1 case whose skip
set is only the all-white batch; it is handled specially throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import HStrategy, Rat, hat_bits, win_prob
from .presets import K33_PAIR, K55_PAIR, NONSYM5_PAIR
from .ratpoly import Poly

SKIP_MONOCHROMATIC = "monochromatic"
SKIP_ALL_WHITE = "all_white"  # first-black-hat rule, order 1 only


@dataclass(frozen=True)
class RecursivePair:
    t: int
    base: tuple[HStrategy, HStrategy]
    skip: str = SKIP_MONOCHROMATIC

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("order must be >= 1")
        k1, k2 = self.base
        if k1.h != self.t or k2.h != self.t:
            raise ValueError("base strategies must have h equal to the order")
        if self.skip not in (SKIP_MONOCHROMATIC, SKIP_ALL_WHITE):
            raise ValueError(f"unknown skip rule {self.skip!r}")
        if self.skip == SKIP_ALL_WHITE and self.t != 1:
            raise ValueError("the all-white skip rule is the order-1 special case")
        if self.skip == SKIP_MONOCHROMATIC and self.t == 1:
            raise ValueError(
                "order 1 with the monochromatic rule skips every batch"
            )

    @property
    def is_fbh(self) -> bool:
        return self.skip == SKIP_ALL_WHITE


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Bound step: a value v at height h yields a*v + b at height h + t."""

    a: Fraction
    b: Fraction
    t: int

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("contraction factor must lie in (0, 1)")

    @property
    def name(self) -> str:
        return f"K{self.t}"


FBH_RECURSIVE = RecursivePair(
    1, (HStrategy(1, (1, 1)), HStrategy(1, (1, 1))), skip=SKIP_ALL_WHITE
)
K3_RECURSIVE = RecursivePair(3, K33_PAIR)
K5_RECURSIVE = RecursivePair(5, K55_PAIR)
NONSYM5_RECURSIVE = RecursivePair(5, NONSYM5_PAIR)


def _nonmono_mask(t: int) -> np.ndarray:
    mask = np.ones(1 << t, dtype=bool)
    mask[0] = False
    mask[-1] = False
    return mask


def nonmono_win_prob(rp: RecursivePair) -> Fraction:
    """Win probability of the base pair conditioned on both observed
    batches being non-monochromatic."""
    if rp.is_fbh:
        return Fraction(1)  # given both batches are the single black hat
    t = rp.t
    k1, k2 = rp.base
    bits = hat_bits(t)
    d_a = bits[:, k1.to_array() - 1]
    d_b = bits[:, k2.to_array() - 1].T
    keep = _nonmono_mask(t)
    wins = int((d_a * d_b)[np.ix_(keep, keep)].sum())
    n = (1 << t) - 2
    return Fraction(wins, n * n)


def recursive_coefficients(rp: RecursivePair) -> tuple[Fraction, Fraction, Fraction]:
    """(a, b, w_nm) of the fixed-point equation V = a*V + b.

    With q the probability that one batch is skipped: both skipped
    recurse (a = q**2); both retained win with the conditional base
    probability w_nm; exactly one skipped wins only when the skipped
    batch is all black and the other player's fresh hat is black.
    """
    w_nm = nonmono_win_prob(rp)
    if rp.is_fbh:
        # skip only all-white, so the one-skipped cases are lost
        q = Fraction(1, 2)
        return q * q, (1 - q) ** 2 * w_nm, w_nm
    q = Fraction(2, 1 << rp.t)
    a = q * q
    b = (1 - q) ** 2 * w_nm + q * (1 - q) * Fraction(1, 2)
    return a, b, w_nm


def recursive_value(rp: RecursivePair) -> Fraction:
    """Exact win probability of the recursive pair: b / (1 - a)."""
    a, b, _ = recursive_coefficients(rp)
    return b / (1 - a)


def recurrence_for(rp: RecursivePair) -> RecurrenceCoeffs:
    """The lower-bound step obtained by playing the base pair on the
    first batch and an arbitrary pair on the tail."""
    if rp.is_fbh:
        raise ValueError("the all-white rule does not give a bound step")
    a, b, _ = recursive_coefficients(rp)
    return RecurrenceCoeffs(a, b, rp.t)


def finite_decomposition_check(rp: RecursivePair, w_nm: Rat | None = None) -> bool:
    """Verify the counting identity linking the base pair's finite win
    probability to its monochromatic case split.

    ``w_nm`` defaults to the conditional probability computed from the
    tables; pass an externally computed value to cross-check it instead.
    """
    if rp.is_fbh:
        raise ValueError("decomposition applies to the monochromatic rule")
    t = rp.t
    q = Fraction(2, 1 << t)
    if w_nm is None:
        w_nm = nonmono_win_prob(rp)
    lhs = win_prob(*rp.base)
    rhs = (1 - q) ** 2 * Fraction(w_nm) + 2 * (1 - q) * Fraction(1, 1 << t) * Fraction(1, 2)
    rhs += Fraction(1, 4**t)
    return lhs == rhs


def joint_nonmono_poly(rp: RecursivePair) -> Poly:
    """Probability (in p) that both batches are non-monochromatic and
    the base pair wins on them; the weights are not renormalized."""
    from .core import _joint_black_counts
    from .ratpoly import ONE_MINUS_P, P

    if rp.is_fbh:
        raise ValueError("defined for the monochromatic rule")
    t = rp.t
    counts = _joint_black_counts(*rp.base, keep=_nonmono_mask(t))
    out = Poly()
    for tot, c in enumerate(counts):
        if c:
            out = out + c * P**tot * ONE_MINUS_P ** (2 * t - tot)
    return out


def required_base_prob(t: int) -> Fraction:
    """Finite win probability a base pair of order t must reach for the
    recursive value to be 7/20: (1/4**t) * (1 + (7/5)(4**(t-1) - 1))."""
    if t < 3:
        raise ValueError("t must be >= 3")
    return Fraction(1, 4**t) * (1 + Fraction(7, 5) * (4 ** (t - 1) - 1))


def kt_parity_feasible(t: int) -> bool:
    """Whether required_base_prob(t) is a multiple of 1/4**t, i.e.
    whether 5 divides 4**(t-1) - 1; holds exactly for odd t."""
    if t < 3:
        raise ValueError("t must be >= 3")
    return (required_base_prob(t) * 4**t).denominator == 1


def gap_lemma_check(v: Rat, h: int) -> bool:
    """|7/20 - v| >= 1/(5*4**h) for any achievable value v at height h.

    7/20 itself is not a multiple of 1/4**h, which the precondition
    enforces.
    """
    v = Fraction(v)
    if (v * 4**h).denominator != 1:
        raise ValueError(f"{v} is not a multiple of 1/4**{h}")
    return abs(Fraction(7, 20) - v) >= Fraction(1, 5 * 4**h)


def fbh_value(t_max: int) -> Fraction:
    """Partial sum of the first-black-hat win probability, sum of 4**-m
    for m = 1..t_max; tends to 1/3."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    return sum((Fraction(1, 4**m) for m in range(1, t_max + 1)), Fraction(0))


# --- lower-bound propagation -------------------------------------------------

K3_RECURRENCE = RecurrenceCoeffs(Fraction(1, 16), Fraction(21, 64), 3)
K5_RECURRENCE = RecurrenceCoeffs(Fraction(1, 256), Fraction(357, 1024), 5)


def published_base() -> dict[int, Fraction]:
    """Frozen preset of published lower bounds for heights 1..5 (exact
    dyadics; heights 1..3 are the exhaustive optima)."""
    return {
        1: Fraction(1, 4),
        2: Fraction(5, 16),
        3: Fraction(22, 64),
        4: Fraction(1424, 4096),
        5: Fraction(358, 1024),
    }


@dataclass(frozen=True)
class BoundRow:
    h: int
    value: Fraction
    provenance: str  # "base" | "mono" | recurrence name


def propagate_rows(
    base: dict[int, Rat],
    recurrences: list[RecurrenceCoeffs],
    h_max: int,
) -> list[BoundRow]:
    """Close the base values under monotonicity and the recurrences.

    Iterates v[h] = max(base[h], v[h-1], a*v[h-t] + b) to a fixed point
    and reports, for each height, the best value and which rule last
    improved it.
    """
    if not base:
        raise ValueError("base values required")
    if min(base) != 1:
        raise ValueError("base must cover h = 1")
    best: dict[int, Fraction] = {h: Fraction(v) for h, v in base.items() if h <= h_max}
    prov = {h: "base" for h in best}
    changed = True
    while changed:
        changed = False
        for h in range(1, h_max + 1):
            cand = best.get(h, Fraction(0))
            who = prov.get(h, "base")
            if h - 1 in best and best[h - 1] > cand:
                cand = best[h - 1]
                who = "mono"
            for rec in recurrences:
                if h - rec.t in best:
                    v = rec.a * best[h - rec.t] + rec.b
                    if v > cand:
                        cand = v
                        who = rec.name
            if cand > best.get(h, Fraction(-1)):
                best[h] = cand
                prov[h] = who
                changed = True
    return [BoundRow(h, best[h], prov[h]) for h in sorted(best)]


def propagate_lower_bounds(
    base: dict[int, Rat],
    recurrences: list[RecurrenceCoeffs],
    h_max: int,
) -> dict[int, Fraction]:
    """Pointwise-maximal closure of the base bounds; see propagate_rows."""
    return {row.h: row.value for row in propagate_rows(base, recurrences, h_max)}
