"""The numba and numpy twins must be bit-identical, not just close."""

import numpy as np
import pytest

from levinehat import _kernels as K
from levinehat.core import hat_bits
from levinehat.presets import K33_PAIR

numba_available = K._HAVE_NUMBA
needs_numba = pytest.mark.skipif(not numba_available, reason="numba not importable")


def test_backend_reports_a_name():
    assert K.backend() in ("numba", "numpy")


@needs_numba
@pytest.mark.parametrize("h,seed", [(2, 1), (3, 12345), (4, 2**63 + 11)])
def test_climb_twins_identical(h, seed):
    bits = hat_bits(h)
    c_np = K._climb_np(bits, h, seed)
    c_nb = K._climb_nb(bits, h, np.uint64(seed))
    assert int(c_np[0]) == int(c_nb[0])
    assert c_np[1].tolist() == c_nb[1].tolist()
    assert c_np[2].tolist() == c_nb[2].tolist()
    assert int(c_np[3]) == int(c_nb[3])


@needs_numba
@pytest.mark.parametrize("h", [1, 2, 3])
def test_brute_force_twins_identical(h):
    bits = hat_bits(h)
    b_np = K._brute_force_np(bits, h)
    b_nb = K._brute_force_nb(bits, h)
    assert int(b_np[0]) == int(b_nb[0])
    assert b_np[1].tolist() == b_nb[1].tolist()
    assert b_np[2].tolist() == b_nb[2].tolist()


@needs_numba
def test_mc_twins_identical():
    kinds = np.array([0, 1], dtype=np.int64)
    scalars = np.zeros(2)
    tables = np.zeros((2, 8))
    tables[1, :] = [2.0, 4.0, 8.0, 2.0, 4.0, 2.0, 8.0, 2.0]
    tlens = np.array([1, 8], dtype=np.int64)
    for seed in (7, 2**63 + 5):
        w_np = K._mc_wins_np(kinds, scalars, tables, tlens, 2, 50_000, seed, 123)
        w_nb = K._mc_wins_nb(kinds, scalars, tables, tlens, 2, 50_000, np.uint64(seed), 123)
        assert w_np == w_nb


@needs_numba
def test_mc_twins_identical_three_players():
    kinds = np.full(3, 2, dtype=np.int64)
    scalars = np.full(3, 55.0)
    tables = np.zeros((3, 1))
    tlens = np.ones(3, dtype=np.int64)
    w_np = K._mc_wins_np(kinds, scalars, tables, tlens, 3, 30_000, 9, 0)
    w_nb = K._mc_wins_nb(kinds, scalars, tables, tlens, 3, 30_000, np.uint64(9), 0)
    assert w_np == w_nb


@needs_numba
def test_scan_and_grid_twins_identical():
    ktable = K33_PAIR[0].to_array()
    for depth in (1, 2, 3):
        s_np = K._scan_levels_np(9, 3, depth, ktable, True)
        s_nb = K._scan_levels_nb(9, 3, depth, ktable, True)
        assert s_np.tolist() == s_nb.tolist()
    k2t = K33_PAIR[1].to_array()
    a = K._scan_levels_np(9, 3, 3, ktable, True)
    b = K._scan_levels_np(9, 3, 3, k2t, True)
    assert np.array_equal(K._joint_grid_np(a, b, 9), K._joint_grid_nb(a, b, 9))


@needs_numba
@pytest.mark.parametrize("p", [0.5, 0.75, 1 / 3])
def test_biased_bits_twins_identical(p):
    assert np.array_equal(
        K._biased_bits_np(128, p, 12), K._biased_bits_nb(128, p, 12)
    )


def test_scan_levels_respects_depth_cap():
    ktable = K33_PAIR[0].to_array()
    got = K._scan_levels_np(9, 3, 1, ktable, True)
    # only level-1 scans allowed: anything monochromatic up front is unresolved
    assert got[0] == -1          # all-zero prefix
    assert got[-1] == -1         # all-one prefix
    assert (got >= -1).all()
    deeper = K._scan_levels_np(9, 3, 3, ktable, True)
    settled = got >= 0
    assert np.array_equal(got[settled], deeper[settled])


def test_fbh_value_handles_edge_cases():
    vals = K._fbh_value_np(np.array([0.0, 0.25, 0.5, 0.999]))
    assert vals.tolist() == [0.0, 4.0, 2.0, 2.0]
