"""Built-in strategy tables.

The two 5-hat tables and the asymmetric 3-hat pair are the published
ones for this game; the first-black-hat table is generated.  Tables are
in lexicographic stack order (entry ``j-1`` is the choice after
observing stack ``j``).
"""

from __future__ import annotations

from .core import HStrategy


def fbh_strategy(h: int) -> HStrategy:
    """First-black-hat choice table.

    The entry for the all-white observed stack is arbitrary (that
    opponent has already lost); we fill it with ``h`` so tables and
    rendered images are deterministic.
    """
    table = []
    for w in range(1 << h):
        if w == 0:
            table.append(h)
        else:
            # first black hat = position of the highest set bit
            table.append(h - w.bit_length() + 1)
    return HStrategy(h, tuple(table))


K33_PAIR = (
    HStrategy(3, (1, 3, 2, 2, 1, 3, 1, 1)),
    HStrategy(3, (1, 3, 2, 3, 1, 1, 2, 1)),
)

_K55_TABLE = (
    2, 3, 2, 3, 5, 5, 5, 5, 4, 3, 2, 3, 5, 5, 5, 5,
    1, 3, 1, 3, 1, 5, 1, 1, 1, 3, 1, 3, 1, 4, 1, 5,
)
K55_STRATEGY = HStrategy(5, _K55_TABLE)
K55_PAIR = (K55_STRATEGY, K55_STRATEGY)

NONSYM5_PAIR = (
    HStrategy(5, (1, 5, 4, 5, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3,
                  1, 1, 1, 1, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 4, 1)),
    HStrategy(5, (1, 5, 4, 4, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3,
                  1, 1, 1, 1, 2, 2, 2, 2, 1, 1, 1, 1, 2, 5, 3, 1)),
)


def preset_pair(name: str, h: int | None = None) -> tuple[HStrategy, HStrategy]:
    """Look up a named strategy pair; ``fbh`` takes the height from ``h``."""
    key = name.strip().lower()
    if key == "fbh":
        kf = fbh_strategy(h if h is not None else 3)
        return kf, kf
    if key in ("fbh3",):
        kf = fbh_strategy(3)
        return kf, kf
    if key == "k33":
        return K33_PAIR
    if key == "k55":
        return K55_PAIR
    if key in ("ns5", "nonsym5"):
        return NONSYM5_PAIR
    raise ValueError(f"unknown preset {name!r} (fbh, k33, k55, ns5)")
