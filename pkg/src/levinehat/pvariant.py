"""Lower bounds for the game where hats are black with probability p.

``u1`` and ``u2`` are the previously known bounds (reuse of good
uniform-measure strategies under the deformed measure); ``u3`` is the
bound induced by the order-5 recursive pair, which beats both on a
left neighbourhood of the crossover near p = 0.312.  All three are
exact rational functions; the crossover is isolated by bisection with
exact sign evaluations.
"""

from __future__ import annotations

from fractions import Fraction

from .ratpoly import Poly, RationalFn
from .recursive import K5_RECURSIVE, joint_nonmono_poly


def u1() -> RationalFn:
    """Known bound, sharp side p <= 1/2."""
    return RationalFn(
        Poly([0, 1, 1, 1, 3, -3, 1]),
        Poly([2, 1, 1, 1, -1]),
    )


def u2() -> RationalFn:
    """Known bound, sharp side p >= 1/2."""
    return RationalFn(
        Poly([0, 1, 5, -10, 10, -5, 1]),
        Poly([4, -2, -2, 3, -1]),
    )


def u3() -> RationalFn:
    """Bound from the order-5 recursive pair."""
    return RationalFn(
        Poly([0, 5, -20, 51, -82, 85, -52, 10, 10, -7]),
        Poly([10, -45, 120, -210, 250, -200, 100, -25]),
    )


def k5_nm_poly() -> Poly:
    """Joint non-monochromatic win polynomial of the order-5 base pair,
    recomputed from the tables (not transcribed)."""
    return joint_nonmono_poly(K5_RECURSIVE)


def k5_p_rationalfn() -> RationalFn:
    """Win probability of the order-5 recursive pair as a function of p.

    Solves the affine fixed point
    V = NM(p) + 2 p**6 (1 - p**5 - q**5) + (p**5 + q**5)**2 V,  q = 1-p:
    both batches retained, exactly one skipped batch all black, both
    skipped.
    """
    p = Poly([0, 1])
    q = Poly([1, -1])
    p5q5 = p**5 + q**5
    num = k5_nm_poly() + 2 * p**6 * (1 - p5q5)
    den = 1 - p5q5 * p5q5
    return RationalFn(num, den)


def k5_p_value(p) -> Fraction:
    """Exact evaluation of the order-5 recursive win probability at p."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    return k5_p_rationalfn()(p)


def fbh_p_infinite(p) -> Fraction:
    """First-black-hat win probability under bias p.

    Both first black hats land on index m with probability
    (q**(m-1) p)**2; the geometric sum is p / (2 - p).
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    return p / (2 - p)


def crossover(tolerance) -> tuple[Fraction, Fraction]:
    """Bracket of width <= tolerance around the smallest root of
    u3 - u1 in (0, 1/2).

    A scan on a 1/1000 grid locates the first sign change (u2 is
    dominated by u1 on this side), then bisection shrinks the bracket.
    All sign evaluations are exact.
    """
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    f1, f3 = u1(), u3()

    def sign(p: Fraction) -> Fraction:
        return f3(p) - f1(p)

    bracket = None
    prev_p = None
    prev_s = None
    for k in range(1, 500):
        p = Fraction(k, 1000)
        s = sign(p)
        if s == 0:
            return p, p  # exact root on the grid
        if s < 0 and prev_s is not None and prev_s > 0:
            bracket = (prev_p, p)
            break
        prev_p, prev_s = p, s
    if bracket is None:
        raise ValueError("no sign change of u3 - u1 found in (0, 1/2)")
    lo, hi = bracket

    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if sign(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def curve_rows(grid: list[Fraction]) -> list[tuple]:
    """(p, u1, u2, u3, k5) rows for CSV output; floats for plotting."""
    f1, f2, f3 = u1(), u2(), u3()
    k5 = k5_p_rationalfn()
    rows = []
    for p in grid:
        p = Fraction(p)
        rows.append(
            (float(p), float(f1(p)), float(f2(p)), float(f3(p)), float(k5(p)))
        )
    return rows
