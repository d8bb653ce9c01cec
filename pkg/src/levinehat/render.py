"""Deterministic strategy images.

Grids follow the convention of :mod:`.core`: the first player's stack
runs along columns (left to right), the second player's along rows
(bottom up).  Pixels are sampled at cell midpoints, never on dyadic
boundaries.  The canonical byte-exact format is binary PPM (P6);
finite grids can also be emitted as SVG rectangles.

Pixels that a truncated recursive scan cannot settle are painted gray
and excluded from black-fraction statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .core import HStrategy, delta_grids
from .recursive import RecursivePair

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)
GRAY = (128, 128, 128)
GRIDLINE = (200, 200, 200)

_PALETTE = np.array([WHITE, BLACK, GRAY], dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class Raster:
    """RGB image; pixels[row, col], row 0 at the top."""

    pixels: np.ndarray

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def to_ppm_bytes(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + self.pixels.tobytes()

    def write_ppm(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_ppm_bytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)


def _grid_to_raster(grid: np.ndarray) -> Raster:
    """grid[cx, cy] with cy bottom-up, values 0 white / 1 black / 2 gray."""
    img = _PALETTE[grid.T[::-1, :]]
    return Raster(np.ascontiguousarray(img))


def black_fraction(raster: Raster) -> float:
    """Black share of the non-gray pixels."""
    px = raster.pixels
    black = np.all(px == BLACK, axis=-1).sum()
    white = np.all(px == WHITE, axis=-1).sum()
    if black + white == 0:
        return 0.0
    return black / (black + white)


_WHICH = ("deltaA", "deltaB", "delta")


def render_finite(
    k1: HStrategy,
    k2: HStrategy,
    which: str = "delta",
    tile_px: int = 32,
    gridlines: bool = False,
) -> Raster:
    """Checkerboard of one outcome grid, each tile tile_px pixels."""
    if tile_px < 1:
        raise ValueError("tile_px must be >= 1")
    if which not in _WHICH:
        raise ValueError(f"which must be one of {_WHICH}")
    grids = dict(zip(_WHICH, delta_grids(k1, k2)))
    cells = grids[which].cells.astype(np.uint8)
    grid = np.repeat(np.repeat(cells, tile_px, axis=0), tile_px, axis=1)
    raster = _grid_to_raster(grid)
    if gridlines and tile_px > 1:
        px = raster.pixels.copy()
        px[::tile_px, :] = GRIDLINE
        px[:, ::tile_px] = GRIDLINE
        return Raster(px)
    return raster


def render_finite_svg(
    k1: HStrategy, k2: HStrategy, which: str = "delta", tile_px: int = 32
) -> str:
    """The same checkerboard as an SVG document (black tiles on white)."""
    if which not in _WHICH:
        raise ValueError(f"which must be one of {_WHICH}")
    grids = dict(zip(_WHICH, delta_grids(k1, k2)))
    cells = grids[which].cells
    n = cells.shape[0]
    size = n * tile_px
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for i in range(n):
        for j in range(n):
            if cells[i, j]:
                x = i * tile_px
                y = (n - 1 - j) * tile_px
                parts.append(
                    f'<rect x="{x}" y="{y}" width="{tile_px}" height="{tile_px}" fill="black"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _res_log2(resolution: int) -> int:
    r = resolution.bit_length() - 1
    if resolution < 2 or (1 << r) != resolution:
        raise ValueError("resolution must be a power of two >= 2")
    return r


def render_recursive(rp: RecursivePair, depth: int, resolution: int) -> Raster:
    """Fractal image of a recursive pair.

    Each coordinate's batch scan reads the pixel midpoint's known bits,
    capped at min(depth, log2(resolution) // t) batches; unsettled
    pixels are gray.
    """
    r = _res_log2(resolution)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if r < rp.t:
        raise ValueError("resolution too small to settle even one batch")
    skip_mono = not rp.is_fbh
    key1 = _kernels.scan_levels(r, rp.t, depth, rp.base[0].to_array(), skip_mono)
    key2 = _kernels.scan_levels(r, rp.t, depth, rp.base[1].to_array(), skip_mono)
    return _grid_to_raster(_kernels.joint_grid(key1, key2, r))


def render_biased(
    k, p, resolution: int, depth: int | None = None
) -> Raster:
    """Symmetric joint outcome under the measure with black probability p.

    Pixel coordinates are decoded into stacks by iterated biased
    splitting (split point 1-p instead of 1/2), then colored by the
    decoded outcome; at p = 1/2 this is the plain binary expansion, and
    for the first-black-hat pair the image matches render_recursive at
    the same depth (for depth <= log2 resolution).

    ``k`` is a finite strategy (rendered as the symmetric pair) or the
    order-1 first-black-hat pair.
    """
    p = float(Fraction(p))
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    fbh = isinstance(k, RecursivePair) and k.is_fbh
    if not fbh and not isinstance(k, HStrategy):
        raise ValueError("k must be a finite strategy or the first-black-hat pair")

    if fbh:
        nbits = depth if depth is not None else 40
    else:
        nbits = k.h
    bits = _kernels.biased_bits(resolution, p, nbits)

    if fbh:
        any_black = bits.any(axis=1)
        key = np.where(any_black, bits.argmax(axis=1) + 1, -1).astype(np.int64)
    else:
        weights = 1 << np.arange(k.h - 1, -1, -1, dtype=np.int64)
        words = (bits.astype(np.int64) * weights[None, :]).sum(axis=1)
        key = k.to_array()[words]

    safe = np.maximum(key, 1)
    picked = bits[:, safe - 1]           # picked[c, d] = decoded hat key[d] of c
    grid = (picked & picked.T).astype(np.uint8)
    gray = (key[:, None] < 0) | (key[None, :] < 0)
    grid[gray] = 2
    return _grid_to_raster(grid)


def render_continuous(f1, f2, resolution: int) -> Raster:
    """Joint outcome of two continuous-game strategies at pixel midpoints."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    mid = (2.0 * np.arange(resolution) + 1.0) / (2.0 * resolution)
    v1 = f1.values(mid)                  # first player's index given y
    v2 = f2.values(mid)                  # second player's index given x
    e_a = (np.floor(np.outer(mid, v1)).astype(np.int64) & 1) == 1   # [cx, cy]
    e_b = (np.floor(np.outer(mid, v2)).astype(np.int64) & 1) == 1   # [cy, cx]
    grid = (e_a & e_b.T).astype(np.uint8)
    return _grid_to_raster(grid)
