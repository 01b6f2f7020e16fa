import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import kv

from ris2x2.special import (
    DEFAULT_QUADRATURE,
    MeijerGError,
    MeijerParams,
    QuadratureSpec,
    bessel_k,
    meijer_g,
    weighted_bessel_integral,
)


def _bessel_integral_oracle(order, x):
    """K_order(x) = int_0^inf exp(-x cosh t) cosh(order t) dt."""
    import warnings
    from scipy.integrate import IntegrationWarning

    with warnings.catch_warnings():
        # the oracle asks for near-machine tolerances; roundoff chatter is fine
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(
            lambda t: np.exp(-x * np.cosh(t)) * np.cosh(order * t),
            0.0,
            40.0,
            epsabs=1e-15,
            epsrel=1e-14,
            limit=400,
        )
    return val


def test_bessel_k_against_integral_representation():
    for order, x in [(0, 1.0), (1, 1.0), (2, 0.5), (0, 0.1), (1, 10.0), (2, 3.0)]:
        oracle = _bessel_integral_oracle(order, x)
        assert bessel_k(order, x) == pytest.approx(oracle, rel=1e-12)


def test_bessel_k0_at_one():
    # frozen from the integral-representation oracle
    assert bessel_k(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-13)


def test_bessel_recurrence():
    for x in (0.1, 1.0, 10.0):
        lhs = bessel_k(2, x)
        rhs = bessel_k(0, x) + (2.0 / x) * bessel_k(1, x)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_bessel_asymptotic_form():
    # K0(x) ~ sqrt(pi/(2x)) e^{-x} (1 - 1/(8x) + ...); at x = 20 the
    # leading-order product deviates by 1/(8x) ~ 6.1e-3 (oracle-computed)
    prod20 = bessel_k(0, 20.0) * np.exp(20.0) * np.sqrt(40.0 / np.pi)
    assert prod20 == pytest.approx(1.0, abs=1e-2)
    assert prod20 == pytest.approx(1.0 - 1.0 / 160.0, abs=2e-4)
    prod200 = bessel_k(0, 200.0) * np.exp(200.0) * np.sqrt(400.0 / np.pi)
    assert prod200 == pytest.approx(1.0, abs=1e-3)


def test_bessel_monotone_positive():
    xs = np.linspace(0.05, 12.0, 200)
    vals = np.array([bessel_k(1, x) for x in xs])
    assert np.all(vals > 0.0)
    assert np.all(np.diff(vals) < 0.0)
    # log-convex: midpoint inequality on the grid
    lv = np.log(vals)
    assert np.all(lv[:-2] + lv[2:] >= 2.0 * lv[1:-1])


def test_bessel_k_validation():
    with pytest.raises(ValueError):
        bessel_k(3, 1.0)
    with pytest.raises(ValueError):
        bessel_k(0, 0.0)


def test_meijer_g_bessel_reduction():
    # G^{2,0}_{0,2}(z | b1, b2) = 2 z^{(b1+b2)/2} K_{b1-b2}(2 sqrt z)
    for b1, b2, z in [(0.5, -0.5, 1.0), (1.0, 0.0, 1.0), (0.0, 0.0, 0.25), (1.5, -0.5, 4.0)]:
        params = MeijerParams(2, 0, 0, 2, (), (b1, b2))
        mine = meijer_g(params, z)
        ref = 2.0 * z ** ((b1 + b2) / 2.0) * kv(b1 - b2, 2.0 * np.sqrt(z))
        assert mine == pytest.approx(ref, rel=1e-9)


_G30 = lambda a: MeijerParams(3, 0, 1, 3, (0.0,), (-1.0, -float(a), -2.0))
_G31 = MeijerParams(3, 1, 1, 3, (0.0,), (0.0, 1.0, 0.0))
_G41 = MeijerParams(4, 1, 2, 4, (-2.0, 0.0), (-2.0, -1.0, -1.0, -2.0))


def test_meijer_g_contour_shift_invariance():
    for params, z in [
        (_G30(1), 0.25),
        (_G30(1), 4.0),
        (_G30(-1), 1.0),
        (_G31, 10.0),
        (_G41, 0.4),
    ]:
        base = meijer_g(params, z)
        for shift in (-0.2, 0.2):
            assert meijer_g(params, z, contour_shift=shift) == pytest.approx(
                base, rel=1e-9
            )


def test_meijer_g_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    cases = [
        (_G30(1), [[], [0]], [[-1, -1, -2], []], 0.25),
        (_G30(1), [[], [0]], [[-1, -1, -2], []], 20.0),
        (_G30(-1), [[], [0]], [[-1, 1, -2], []], 1.0),
        (_G31, [[0], []], [[0, 1, 0], []], 0.1),
        (_G31, [[0], []], [[0, 1, 0], []], 1000.0),
        (_G41, [[-2], [0]], [[-2, -1, -1, -2], []], 0.0126),
        (_G41, [[-2], [0]], [[-2, -1, -1, -2], []], 12.6),
    ]
    for params, a_spec, b_spec, z in cases:
        ref = float(mp.meijerg(a_spec, b_spec, z))
        assert meijer_g(params, z) == pytest.approx(ref, rel=1e-9)


def test_meijer_g_small_argument_limit():
    # 16 z^2 G^{3,0}_{1,3}(4z | 0; -1,-1,-2) -> 1 as z -> 0+, at the rate
    # set by the saturating outage it represents (~ z log^2 z); the value
    # at z = 1e-8 is pinned by the independent quadrature oracle.
    from ris2x2.analytic import outage_quadrature
    from ris2x2.sysmodel import Mode

    deviations = []
    for z in (1e-8, 1e-9, 1e-10):
        val = 16.0 * z**2 * meijer_g(_G30(1), 4.0 * z)
        deviations.append(abs(val - 1.0))
    assert deviations == sorted(deviations, reverse=True)
    assert deviations[-1] < 1e-6
    val8 = 16.0 * 1e-16 * meijer_g(_G30(1), 4e-8)
    oracle = 1.0 - outage_quadrature(Mode(2, 2, False), 1e-8)
    assert val8 == pytest.approx(oracle, abs=1e-9)


def test_meijer_g_rejects_unsupported():
    with pytest.raises(ValueError):
        meijer_g(_G31, -1.0)
    # no decaying vertical contour for this order combination
    with pytest.raises(MeijerGError):
        meijer_g(MeijerParams(1, 0, 1, 1, (0.0,), (0.0,)), 1.0)
    # no separating line when a pole ladders overlap
    with pytest.raises(MeijerGError):
        meijer_g(MeijerParams(2, 1, 1, 2, (3.0,), (0.0, 1.0)), 1.0)


def _alignment_weight(th):
    return 0.5 * np.sin(2.0 * th) - th * np.cos(2.0 * th)


def _weighted_integral_oracle(a, alpha, gam, x):
    """Brute-force double quadrature of the defining integral over the
    compensated alignment density and an exponential weight."""

    def inner(th):
        u = np.sin(th) ** 2
        val, _ = quad(
            lambda w: u ** (-a) * w ** (alpha - 1) * np.exp(-x / (u * w) - gam * w),
            0.0,
            np.inf,
            epsabs=1e-13,
            epsrel=1e-11,
            limit=300,
        )
        return val * _alignment_weight(th)

    total, _ = quad(inner, 0.0, np.pi / 2, epsabs=1e-12, epsrel=1e-9, limit=300)
    return total


def test_weighted_bessel_integral_against_double_quadrature():
    rng = np.random.default_rng(42)
    for _ in range(5):
        a = int(rng.choice([0, 2]))
        alpha = int(rng.choice([-1, 0, 1, 2, 3]))
        gam = float(rng.choice([1.0, 2.0]))
        x = float(rng.uniform(0.05, 2.0))
        mine = weighted_bessel_integral(a, alpha, gam, x)
        oracle = _weighted_integral_oracle(a, alpha, gam, x)
        assert mine == pytest.approx(oracle, rel=1e-6, abs=1e-9)


def test_weighted_bessel_integral_vanishes_for_large_argument():
    # Bessel decay kills both terms, roughly like exp(-2 sqrt(x))
    v100 = weighted_bessel_integral(0, 1, 1.0, 100.0)
    v200 = weighted_bessel_integral(0, 1, 1.0, 200.0)
    assert 0.0 < v200 < v100 < 1e-8
    assert v200 < 1e-11


def test_weighted_bessel_integral_validation():
    with pytest.raises(ValueError):
        weighted_bessel_integral(1, 1, 1.0, 1.0)
    with pytest.raises(ValueError):
        weighted_bessel_integral(0, 4, 1.0, 1.0)
    with pytest.raises(ValueError):
        weighted_bessel_integral(0, 1, 1.0, -1.0)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
    assert DEFAULT_QUADRATURE.abs_tol == 1e-12
