"""Self-contained modified Bessel layer against an arbitrary-precision oracle."""

import math

import numpy as np
import pytest

from kwcflow import bessel

mpmath = pytest.importorskip("mpmath")

XS = np.logspace(math.log10(1e-3), math.log10(50.0), 100)


def _oracle(x):
    with mpmath.workdps(40):
        return (float(mpmath.besseli(0, x)), float(mpmath.besseli(1, x)),
                float(mpmath.besselk(0, x)), float(mpmath.besselk(1, x)))


def test_relative_accuracy_across_range():
    worst = 0.0
    for x in XS:
        e = bessel.eval_all(float(x))
        for got, ref in zip((e.i0, e.i1, e.k0, e.k1), _oracle(float(x))):
            worst = max(worst, abs(got - ref) / abs(ref))
    assert worst <= 1e-12


def test_spot_values():
    e = bessel.eval_all(1.0)
    assert e.i0 == pytest.approx(1.2660658777520, abs=1e-12)
    assert e.k0 == pytest.approx(0.4210244382407, abs=1e-12)
    # small-x limits
    tiny = bessel.eval_all(1e-3)
    assert tiny.i0 == pytest.approx(1.0, abs=1e-6)
    assert tiny.i1 == pytest.approx(5e-4, rel=1e-6)


def test_wronskian_identity():
    for x in XS:
        assert abs(x * bessel.b_combo(float(x), float(x)) - 1.0) <= 1e-12


def test_structural_inequalities():
    for x in XS:
        e = bessel.eval_all(float(x))
        assert e.i0 >= 1.0
        assert e.i1 > 0.0 and e.k0 > 0.0 and e.k1 > 0.0
        assert e.i0 >= e.i1
        assert e.k1 >= e.k0


def test_monotonicity():
    i0 = [bessel.i0(float(x)) for x in XS]
    k0 = [bessel.k0(float(x)) for x in XS]
    assert all(b >= a for a, b in zip(i0, i0[1:]))
    assert all(b <= a for a, b in zip(k0, k0[1:]))


@pytest.mark.parametrize("x", [0.1, 1.0, 1.9, 2.1, 5.0, 20.0, 49.0])
def test_derivative_recurrences_by_finite_differences(x):
    # I0' = I1 and K0' = -K1; below x ~ 0.1 central differences are
    # roundoff-limited, and that region is covered by the oracle sweep
    eps = 1e-5 * x
    di0 = (bessel.i0(x + eps) - bessel.i0(x - eps)) / (2 * eps)
    dk0 = (bessel.k0(x + eps) - bessel.k0(x - eps)) / (2 * eps)
    assert di0 == pytest.approx(bessel.i1(x), rel=1e-7)
    assert dk0 == pytest.approx(-bessel.k1(x), rel=1e-7)


def test_branch_crossover_is_seamless():
    # series and quadrature branches meet at the cutover without a jump
    lo = bessel.eval_all(2.0 - 1e-9)
    hi = bessel.eval_all(2.0 + 1e-9)
    assert hi.k0 == pytest.approx(lo.k0, rel=1e-8)
    assert hi.k1 == pytest.approx(lo.k1, rel=1e-8)


def test_ratio_t():
    assert bessel.ratio_t(0, 1.0) == pytest.approx(
        bessel.i0(1.0) / bessel.k0(1.0), rel=1e-14
    )
    assert bessel.ratio_t(1, 2.0) > bessel.ratio_t(1, 1.0)
    assert bessel.ratio_t(1, 1e-3) < 1e-5  # T1 -> 0 as r -> 0+
    with pytest.raises(ValueError):
        bessel.ratio_t(2, 1.0)


def test_b_combo_and_derivative():
    with mpmath.workdps(40):
        ref = float(mpmath.besseli(0, 2) * mpmath.besselk(1, 1)
                    + mpmath.besseli(1, 1) * mpmath.besselk(0, 2))
    assert bessel.b_combo(1.0, 2.0) == pytest.approx(ref, rel=1e-12)
    eps = 1e-6
    for x, y in ((1.0, 2.0), (3.0, 0.5), (5.0, 10.0)):
        fd = (bessel.b_combo(x, y + eps) - bessel.b_combo(x, y - eps)) / (2 * eps)
        assert bessel.b_combo_dy(x, y) == pytest.approx(fd, rel=1e-6, abs=1e-8)


@pytest.mark.parametrize("x", [0.0, 1e-4, 50.1, -1.0])
def test_out_of_range_rejected(x):
    with pytest.raises(ValueError):
        bessel.eval_all(x)
