"""The continuous game: parity primitives, exact interval integrals,
Monte Carlo evaluation, and the best-response machinery for the
first-black-hat strategy.

Hat colors on real-indexed stacks reduce to the parity indicator
eps(x) = floor(x) - 2*floor(x/2); its antiderivative defect
gamma(a) = a/2 - integral of eps over [0, a] is a 2-periodic sawtooth,
which turns every one-dimensional eps integral into closed form.  This
module works in binary64 with explicit tolerances; exact rationals live
in the finite-game modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import HStrategy

M_MAX_DEFAULT = 40  # series truncation for first-black-hat integrals; error <= 2**-40

_MC_CHUNK = 1 << 16  # fixed shard size so results do not depend on thread count


def eps(x: float) -> int:
    """Parity of floor(x), the hat color at real index x."""
    if x < 0:
        raise ValueError("eps is defined for nonnegative inputs")
    return int(math.floor(x)) & 1


def gamma(a: float) -> float:
    """a/2 minus the integral of eps over [0, a]; 2-periodic, in [0, 1/2]."""
    if a < 0:
        raise ValueError("gamma is defined for nonnegative inputs")
    r = math.fmod(a, 2.0)
    return 0.5 * r if r <= 1.0 else 1.0 - 0.5 * r


def black_prob_1d(a: float) -> float:
    """Integral of eps(a*x) over x in [0, 1]: 1/2 - gamma(a)/a."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    if a == 0:
        return 0.0
    return 0.5 - gamma(a) / a


def eps_interval_measure(u: float, lo: float, hi: float) -> float:
    """Measure of {y in [lo, hi) : eps(u*y) = 1}."""
    if u <= 0:
        raise ValueError("u must be positive")
    if not 0 <= lo <= hi:
        raise ValueError("need 0 <= lo <= hi")
    return (hi - lo) / 2.0 - (gamma(u * hi) - gamma(u * lo)) / u


def p_m(m: int) -> float:
    """Two-player win probability of the common strategy m*x*y.

    Equals the double integral of eps(m*x*y), reduced to
    1/2 - (1/m) * integral of gamma(t)/t over [0, m]; gamma is piecewise
    linear with integer breakpoints, so each segment integrates in
    closed form (log terms).  Absolute error is float rounding only.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    total = 0.0
    for s in range(m):
        if s == 0:
            total += 0.5
        elif s % 2 == 0:
            # gamma rising from 0: (t - s)/2 on [s, s+1]
            total += 0.5 * (1.0 - s * math.log((s + 1.0) / s))
        else:
            # gamma falling to 0: (s + 1 - t)/2 on [s, s+1]
            total += 0.5 * ((s + 1.0) * math.log((s + 1.0) / s) - 1.0)
    return 0.5 - total / m


# --- strategies for the continuous game --------------------------------------


@dataclass(frozen=True)
class FirstBlackHat:
    """y -> 2**(-floor(log2 y)): the index of the teammate's first black
    hat, read off the leading zeros of the binary expansion."""

    def value(self, y: float) -> float:
        if y <= 0.0:
            return 0.0
        _, e = math.frexp(y)
        return 2.0 ** (1 - e)

    def values(self, y: np.ndarray) -> np.ndarray:
        return _kernels._fbh_value_np(np.asarray(y, dtype=np.float64))


@dataclass(frozen=True)
class DyadicStep:
    """Constant on the 2**level dyadic cells of [0, 1)."""

    level: int
    table: tuple[float, ...]

    def __post_init__(self):
        if self.level < 0 or len(self.table) != 1 << self.level:
            raise ValueError(f"table must have length {1 << self.level}")
        if any(v < 0 for v in self.table):
            raise ValueError("values must be nonnegative")

    def value(self, y: float) -> float:
        cell = min(int(y * len(self.table)), len(self.table) - 1)
        return self.table[cell]

    def values(self, y: np.ndarray) -> np.ndarray:
        arr = np.asarray(self.table, dtype=np.float64)
        cell = np.minimum((y * len(arr)).astype(np.int64), len(arr) - 1)
        return arr[cell]


@dataclass(frozen=True)
class ProductScaled:
    """(x_1, .., x_{n-1}) -> m * x_1 * .. * x_{n-1}; defined for any n."""

    m: float

    def value(self, *coords: float) -> float:
        f = self.m
        for c in coords:
            f *= c
        return f

    def values(self, y: np.ndarray) -> np.ndarray:
        return self.m * np.asarray(y, dtype=np.float64)


@dataclass(frozen=True)
class PowerOfTwoLift:
    """A finite strategy read on the first h bits: y -> 2**k(stack(y))."""

    strategy: HStrategy

    def value(self, y: float) -> float:
        h = self.strategy.h
        cell = min(int(y * (1 << h)), (1 << h) - 1)
        return float(1 << self.strategy.table[cell])

    def values(self, y: np.ndarray) -> np.ndarray:
        h = self.strategy.h
        table = np.ldexp(1.0, self.strategy.to_array())
        cell = np.minimum((y * (1 << h)).astype(np.int64), (1 << h) - 1)
        return table[cell]


ImaginaryStrategy = FirstBlackHat | DyadicStep | ProductScaled | PowerOfTwoLift


def _encode(strategies, n):
    kinds = np.empty(n, dtype=np.int64)
    scalars = np.zeros(n, dtype=np.float64)
    raw_tables = []
    for i, s in enumerate(strategies):
        if isinstance(s, FirstBlackHat):
            kinds[i] = 0
            raw_tables.append(())
        elif isinstance(s, DyadicStep):
            kinds[i] = 1
            raw_tables.append(tuple(float(v) for v in s.table))
        elif isinstance(s, PowerOfTwoLift):
            kinds[i] = 1
            raw_tables.append(tuple(float(1 << k) for k in s.strategy.table))
        elif isinstance(s, ProductScaled):
            kinds[i] = 2
            scalars[i] = float(s.m)
            raw_tables.append(())
        else:
            raise TypeError(f"not a strategy: {s!r}")
        if kinds[i] != 2 and n != 2:
            raise ValueError("only the scaled product is defined for n > 2")
    width = max(1, max(len(t) for t in raw_tables))
    tables = np.zeros((n, width), dtype=np.float64)
    tlens = np.ones(n, dtype=np.int64)
    for i, t in enumerate(raw_tables):
        if t:
            tables[i, : len(t)] = t
            tlens[i] = len(t)
    return kinds, scalars, tables, tlens


def mc_win_estimate(
    strategies, n: int, samples: int, seed: int, threads: int = 1
) -> tuple[float, float]:
    """Monte Carlo estimate of the joint win integral and its standard
    error; deterministic given the seed (thread count does not matter,
    shards read disjoint slices of one counter stream)."""
    if n < 2:
        raise ValueError("need n >= 2")
    if len(strategies) != n:
        raise ValueError(f"need one strategy per player, got {len(strategies)}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    kinds, scalars, tables, tlens = _encode(strategies, n)

    chunks = [
        (start, min(_MC_CHUNK, samples - start))
        for start in range(0, samples, _MC_CHUNK)
    ]

    def run(chunk):
        start, size = chunk
        return _kernels.mc_wins(
            kinds, scalars, tables, tlens, n, size, seed, start * n
        )

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            wins = sum(pool.map(run, chunks))
    else:
        wins = sum(map(run, chunks))

    est = wins / samples
    stderr = math.sqrt(est * (1.0 - est) / samples)
    return est, stderr


# --- best response to the first-black-hat strategy ----------------------------


def fbh_response_value(x: float, u: float, m_max: int = M_MAX_DEFAULT) -> float:
    """Integral over y of eps(f(y) x) eps(u y) for the first-black-hat f.

    f is 2**m on the dyadic band [2**-m, 2**-m+1), so the integral is a
    sum of band measures; truncation after m_max bands leaves at most
    2**-m_max.
    """
    if not 0 < x < 1:
        raise ValueError("x must lie strictly between 0 and 1")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if u < 0:
        raise ValueError("u must be nonnegative")
    if u == 0:
        return 0.0
    total = 0.0
    for m in range(1, m_max + 1):
        if eps(math.ldexp(x, m)):
            total += eps_interval_measure(u, math.ldexp(1.0, -m), math.ldexp(1.0, -m + 1))
    return total


@dataclass(frozen=True)
class ProfileCell:
    x_lo: float
    x_hi: float
    best_u: float
    value: float


@dataclass(frozen=True)
class ProfileResult:
    p_levels: int
    cells: tuple[ProfileCell, ...]
    aggregate: float  # lower bound on the best-response win probability


def default_u_grid(max_pow: int = 20, per_octave: int = 64) -> np.ndarray:
    """Powers of two up to 2**max_pow plus a log fill of each octave.

    The exact winners sit on powers of two; the fill is there to catch
    hypothetical off-grid maxima.
    """
    points = [2.0**k for k in range(max_pow + 1)]
    for k in range(max_pow):
        for i in range(1, per_octave):
            points.append(2.0 ** (k + i / per_octave))
    return np.array(sorted(points))


def fbh_best_response_profile(
    p_levels: int,
    u_grid,
    m_max: int = M_MAX_DEFAULT,
) -> ProfileResult:
    """Grid search for the best response to the first-black-hat strategy.

    For each dyadic x-cell at level p_levels (sampled at its midpoint)
    the response integral is maximized over u_grid; integrating the
    per-cell maxima lower-bounds the best-response value (1/3, attained
    by the strategy itself).
    """
    if p_levels < 1:
        raise ValueError("p_levels must be >= 1")
    u = np.asarray(u_grid, dtype=np.float64)
    if u.ndim != 1 or len(u) == 0 or (u <= 0).any():
        raise ValueError("u_grid must be a nonempty 1-d array of positives")
    ncells = 1 << p_levels
    m_cap = min(m_max, p_levels + 1)
    # band measures seg[iu, m-1] = measure of {y in band m : eps(u y) = 1}
    m_idx = np.arange(1, m_cap + 1)
    lo = np.ldexp(1.0, -m_idx)
    hi = np.ldexp(1.0, 1 - m_idx)
    g = np.vectorize(gamma)
    seg = (hi - lo)[None, :] / 2.0 - (g(u[:, None] * hi[None, :]) - g(u[:, None] * lo[None, :])) / u[:, None]
    # midpoint bit m of cell q: bit (p+1-m) of 2q+1
    q = np.arange(ncells, dtype=np.int64)
    bits = ((2 * q[:, None] + 1) >> (p_levels + 1 - m_idx[None, :])) & 1
    values = bits.astype(np.float64) @ seg.T              # [cell, u]
    best_iu = np.argmax(values, axis=1)
    best_val = values[np.arange(ncells), best_iu]
    width = 1.0 / ncells
    cells = tuple(
        ProfileCell(qi * width, (qi + 1) * width, float(u[best_iu[qi]]), float(best_val[qi]))
        for qi in range(ncells)
    )
    return ProfileResult(p_levels, cells, float(best_val.sum() * width))
