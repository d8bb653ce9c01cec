"""Acceptance suite: one test per shipped criterion, each printing its
own pass line.  Backed by the same checks as ``levinehat verify``; the
golden-image comparison additionally pins the committed PPM bytes.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

from pathlib import Path

import pytest

from levinehat import verify
from levinehat.presets import K33_PAIR, K55_PAIR, NONSYM5_PAIR, fbh_strategy
from levinehat.render import render_finite

GOLDEN_DIR = Path(__file__).parent / "golden"


def _run(name, fn):
    passed, detail = fn()
    print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    assert passed, detail


@pytest.fixture(scope="module", autouse=True)
def _fresh_audit_trail():
    verify._produced.clear()
    yield


def test_criterion_01_golden_values():
    _run("golden_values", verify.check_golden_values)


def test_criterion_02_brute_force():
    _run("brute_force", verify.check_brute_force)


def test_criterion_03_recursive_fixed_points():
    _run("recursive_fixed_points", verify.check_recursive_fixed_points)


def test_criterion_04_kt_theory():
    _run("kt_theory", verify.check_kt_theory)


def test_criterion_05_bound_propagation():
    _run("bound_propagation", verify.check_bound_propagation)


def test_criterion_07_hill_climbing():
    # runs before the gap audit so its values are on the trail
    _run("hill_climbing", verify.check_hill_climbing)


def test_criterion_06_gap_lemma():
    _run("gap_lemma", verify.check_gap_lemma)


def test_criterion_08_pvariant():
    _run("pvariant", verify.check_pvariant)


def test_criterion_09_continuous():
    _run("continuous", verify.check_continuous)


def test_criterion_10_equivalence():
    _run("equivalence", verify.check_equivalence)


def test_criterion_11_rendering():
    _run("rendering", verify.check_rendering)


def test_criterion_11_golden_images_byte_exact():
    f3 = fbh_strategy(3)
    renders = {
        "fbh3_delta_32.ppm": (f3, f3),
        "k33_delta_32.ppm": K33_PAIR,
        "k55_delta_128.ppm": K55_PAIR,
        "ns5_delta_128.ppm": NONSYM5_PAIR,
    }
    for name, (k1, k2) in renders.items():
        expected = (GOLDEN_DIR / name).read_bytes()
        got = render_finite(k1, k2, "delta", tile_px=4).to_ppm_bytes()
        assert got == expected, f"{name} drifted from the committed bytes"
    print("PASS golden_images: 4 committed PPM files reproduced byte-exactly")
