"""Closed-form statistics of the mode SNRs and their quadrature oracles.

The mode SNR factors as gamma = gamma_bar * lambda_j * omega_i * z with
independent pieces, so every distributional quantity reduces to integrals
over three known laws:

* z with the surface compensated:  F(z) = z - sqrt(z(1-z)) asin(sqrt z);
* z with a fixed surface:          F(z) = z (uniform on [0, 1]);
* squared singular values of a 2x2 complex Gaussian matrix:
      F_largest(y)  = 1 - 2 e^{-y} - y^2 e^{-y} + e^{-2y},
      F_smallest(y) = 1 - e^{-2y},
  with means 7/2 and 1/2.

Outage is computed twice on purpose: ``outage_quadrature`` integrates the
defining expectation directly (the reference implementation), while
``outage_closed_form`` assembles the Bessel/Meijer-G expressions; the two
routes are required to agree to well below 1e-6.  Throughput follows the
identity R = E ln(1 + gamma) = int (1 - P(z/gamma_bar))/(1+z) dz; the
default evaluation integrates the squared-singular-value law analytically
first (an exponential-integral kernel), which is exactly the same integral
with the order of integration exchanged, and the literal nested form is
kept as a cross-check method.
"""

from __future__ import annotations

import numpy as np
from scipy.special import exp1, kv

from .special import (
    DEFAULT_QUADRATURE,
    MeijerParams,
    QuadratureSpec,
    _integrate_quad,
    meijer_g,
    weighted_bessel_integral,
)
from .sysmodel import Mode

__all__ = [
    "GAIN_LINEAR",
    "REPORTED_GAP_DB",
    "z_factor_cdf",
    "eigenvalue_cdf",
    "eigenvalue_pdf",
    "eigenvalue_mean",
    "mean_z",
    "snr_gain_linear",
    "snr_gain_db",
    "consecutive_mode_gap_db",
    "mean_mode_snr",
    "outage_quadrature",
    "outage_closed_form",
    "throughput",
    "throughput_closed_r22",
    "throughput_closed_r22_cmp",
]

# Mean-SNR improvement of phase compensation, E{z_comp} / E{z_plain}.
GAIN_LINEAR = 1.0 + np.pi**2 / 16.0

# 10*log10(6) ~ 7.78 dB is sometimes quoted for the gap between
# consecutive modes; the eigenvalue means above give 10*log10(7) ~ 8.45 dB.
# Kept as a display-only reference, never asserted.
REPORTED_GAP_DB = 10.0 * np.log10(6.0)


def z_factor_cdf(z, compensated: bool = True):
    """CDF of the alignment factor z, clamped outside [0, 1]."""
    z = np.asarray(z, dtype=np.float64)
    zc = np.clip(z, 0.0, 1.0)
    if compensated:
        val = zc - np.sqrt(zc * (1.0 - zc)) * np.arcsin(np.sqrt(zc))
    else:
        val = zc
    return val if val.ndim else float(val)


def eigenvalue_cdf(y, which: str = "largest"):
    """CDF of the largest/smallest squared singular value of a 2x2
    complex Gaussian matrix (unit-variance entries)."""
    y = np.asarray(y, dtype=np.float64)
    yc = np.maximum(y, 0.0)
    if which == "largest":
        val = 1.0 - 2.0 * np.exp(-yc) - yc**2 * np.exp(-yc) + np.exp(-2.0 * yc)
    elif which == "smallest":
        val = 1.0 - np.exp(-2.0 * yc)
    else:
        raise ValueError("which must be 'largest' or 'smallest'")
    val = np.where(y < 0.0, 0.0, val)
    return val if val.ndim else float(val)


def eigenvalue_pdf(y, which: str = "largest"):
    y = np.asarray(y, dtype=np.float64)
    yc = np.maximum(y, 0.0)
    if which == "largest":
        val = (
            2.0 * np.exp(-yc)
            - 2.0 * yc * np.exp(-yc)
            + yc**2 * np.exp(-yc)
            - 2.0 * np.exp(-2.0 * yc)
        )
    elif which == "smallest":
        val = 2.0 * np.exp(-2.0 * yc)
    else:
        raise ValueError("which must be 'largest' or 'smallest'")
    val = np.where(y < 0.0, 0.0, val)
    return val if val.ndim else float(val)


def eigenvalue_mean(which: str = "largest") -> float:
    """Exact means: integrating the survival functions gives 7/2 and 1/2."""
    if which == "largest":
        return 3.5
    if which == "smallest":
        return 0.5
    raise ValueError("which must be 'largest' or 'smallest'")


def mean_z(compensated: bool = True) -> float:
    return 0.5 * GAIN_LINEAR if compensated else 0.5


def snr_gain_linear() -> float:
    return GAIN_LINEAR


def snr_gain_db() -> float:
    return 10.0 * np.log10(GAIN_LINEAR)


def consecutive_mode_gap_db():
    """Mean-SNR gap between consecutive modes, as (derived_db, reported_db).

    The ratio of consecutive mean SNRs equals the ratio of the eigenvalue
    means, 3.5 / 0.5 = 7, hence 10*log10(7); the quoted reference value
    10*log10(6) is returned alongside for display.
    """
    ratio = eigenvalue_mean("largest") / eigenvalue_mean("smallest")
    return 10.0 * np.log10(ratio), REPORTED_GAP_DB


def mean_mode_snr(mode: Mode, gamma_bar: float) -> float:
    """E{gamma} of a mode: (gamma_bar) * E{lambda_j} E{omega_i} E{z}."""
    lam = eigenvalue_mean("largest" if mode.rx == 1 else "smallest")
    om = eigenvalue_mean("largest" if mode.tx == 1 else "smallest")
    return gamma_bar * lam * om * mean_z(mode.compensated)


def _outer_substituted(inner, which: str, spec: QuadratureSpec, what: str) -> float:
    """int_0^inf f_omega(w) inner(w) dw via w = u/(1-u)."""

    def integrand(u):
        if u >= 1.0:
            return 0.0
        w = u / (1.0 - u)
        density = eigenvalue_pdf(w, which)
        if density == 0.0:
            return 0.0
        return density * inner(w) / (1.0 - u) ** 2

    return _integrate_quad(integrand, 0.0, 1.0, spec, what)


def _z_average(fn, compensated: bool, spec: QuadratureSpec, what: str) -> float:
    """E over the alignment law of fn(z).

    The compensated density is singular at z = 1; substituting z = sin^2 t
    turns the weight into the smooth sin(2t)/2 - t cos(2t).
    """
    if compensated:

        def integrand(t):
            weight = 0.5 * np.sin(2.0 * t) - t * np.cos(2.0 * t)
            return fn(np.sin(t) ** 2) * weight

        return _integrate_quad(integrand, 0.0, np.pi / 2.0, spec, what)
    return _integrate_quad(fn, 0.0, 1.0, spec, what)


def _averaged_eig_cdf(
    b: float, lam_law: str, compensated: bool, spec: QuadratureSpec
) -> float:
    """E over the alignment law of F_lambda(b / z).

    Integrating by parts gives F_lambda(b) + int_b^inf f_lambda(t) F_z(b/t)
    dt, which has no boundary layer for small b and no singular weight; the
    remaining sqrt cusp of the compensated CDF at t = b is absorbed by
    t = b + v^2.
    """
    if b >= 600.0:  # survival beyond this underflows; outage is saturated
        return 1.0
    base = eigenvalue_cdf(b, lam_law)

    def integrand(v):
        t = b + v * v
        return 2.0 * v * eigenvalue_pdf(t, lam_law) * z_factor_cdf(b / t, compensated)

    tail = _integrate_quad(integrand, 0.0, np.inf, spec, "outage inner")
    return base + tail


def outage_quadrature(
    mode: Mode, x: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Outage probability P{lambda_j omega_i z <= x} by direct quadrature
    of E{F_lambda(x / (omega z))}; the reference implementation."""
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    lam_law = "largest" if mode.rx == 1 else "smallest"
    om_law = "largest" if mode.tx == 1 else "smallest"
    inner_spec = QuadratureSpec(
        spec.abs_tol / 10.0, spec.rel_tol, spec.max_subdivisions
    )

    def inner(w):
        return _averaged_eig_cdf(x / w, lam_law, mode.compensated, inner_spec)

    return _outer_substituted(inner, om_law, spec, f"outage({mode.label})")


def _calg(z: float, a: float, spec: QuadratureSpec) -> float:
    """G^{3,0}_{1,3}(z | 0; -1, -a, -2), the block of the plain-surface
    outage expressions."""
    return meijer_g(MeijerParams(3, 0, 1, 3, (0.0,), (-1.0, -a, -2.0)), z, spec)


def outage_closed_form(
    mode: Mode, x: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Closed-form outage, mode-by-mode assembly of the Bessel and
    Meijer-G expressions; validated against :func:`outage_quadrature`."""
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    z = float(x)
    j, i = mode.rx, mode.tx
    if mode.compensated:
        cal = lambda a, alpha, gam, arg: weighted_bessel_integral(a, alpha, gam, arg, spec)
        if (j, i) == (1, 1):
            return (
                1.0
                - 4.0 * cal(0, 1, 1.0, z)
                + 4.0 * cal(0, 2, 1.0, z)
                - 2.0 * cal(0, 3, 1.0, z)
                + 4.0 * cal(0, 1, 2.0, z)
                - 2.0 * z**2 * cal(2, -1, 1.0, z)
                + 2.0 * z**2 * cal(2, 0, 1.0, z)
                - z**2 * cal(2, 1, 1.0, z)
                + 2.0 * z**2 * cal(2, -1, 2.0, z)
                + 2.0 * cal(0, 1, 1.0, 2.0 * z)
                - 2.0 * cal(0, 2, 1.0, 2.0 * z)
                + cal(0, 3, 1.0, 2.0 * z)
                - 2.0 * cal(0, 1, 2.0, 2.0 * z)
            )
        if (j, i) in ((2, 1), (1, 2)):
            return (
                1.0
                - 4.0 * cal(0, 1, 2.0, z)
                - 2.0 * z**2 * cal(2, -1, 2.0, z)
                + 2.0 * cal(0, 1, 2.0, 2.0 * z)
            )
        return 1.0 - 2.0 * cal(0, 1, 2.0, 2.0 * z)

    sz = np.sqrt(z)
    if (j, i) == (1, 1):
        return (
            1.0
            - 4.0 * z**2 * _calg(z, 1.0, spec)
            + 8.0 * sz * kv(1, 2.0 * sz)
            - 2.0 * z**2 * _calg(z, -1.0, spec)
            + 8.0 * z**2 * _calg(2.0 * z, 1.0, spec)
            - 4.0 * z * kv(0, 2.0 * sz)
            + 4.0 * z * sz * kv(1, 2.0 * sz)
            - 2.0 * z**2 * kv(2, 2.0 * sz)
            + 4.0 * z * kv(0, 2.0 * np.sqrt(2.0 * z))
            + 8.0 * z**2 * _calg(2.0 * z, 1.0, spec)
            - 4.0 * np.sqrt(2.0 * z) * kv(1, 2.0 * np.sqrt(2.0 * z))
            + 4.0 * z**2 * _calg(2.0 * z, -1.0, spec)
            - 16.0 * z**2 * _calg(4.0 * z, 1.0, spec)
        )
    if (j, i) in ((2, 1), (1, 2)):
        return (
            1.0
            - 8.0 * z**2 * _calg(2.0 * z, 1.0, spec)
            - 4.0 * z * kv(0, np.sqrt(8.0 * z))
            + 16.0 * z**2 * _calg(4.0 * z, 1.0, spec)
        )
    return 1.0 - 16.0 * z**2 * _calg(4.0 * z, 1.0, spec)


def _scaled_exp1(x):
    """exp(x) * E1(x) for x > 0, stable for large x via the standard
    continued fraction (the plain product overflows past x ~ 700)."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = x <= 50.0
    out[small] = np.exp(x[small]) * exp1(x[small])
    xl = x[~small]
    if xl.size:
        cf = np.zeros_like(xl)
        for k in range(60, 0, -1):
            cf = (k * k) / (xl + 2.0 * k + 1.0 - cf)
        out[~small] = 1.0 / (xl + 1.0 - cf)
    return float(out[0]) if scalar else out


def _capacity_kernel(c: float, which: str) -> float:
    """int_0^inf S_lambda(u) * c / (1 + c u) du, the per-eigenvalue part of
    E ln(1 + gamma) after exchanging the order of integration."""
    if c <= 0.0:
        return 0.0
    if which == "smallest":
        return _scaled_exp1(2.0 / c)
    a01 = _scaled_exp1(1.0 / c)
    a02 = _scaled_exp1(2.0 / c)
    a21 = 1.0 - 1.0 / c + a01 / c**2
    return 2.0 * a01 + a21 - a02


def throughput(
    mode: Mode,
    gamma_bar: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    method: str = "separable",
) -> float:
    """Average throughput E ln(1 + gamma) in nats/s/Hz.

    ``separable`` (default) integrates the eigenvalue law analytically and
    quadratures the remaining two dimensions; ``outage-integral`` evaluates
    the defining int_0^inf (1 - P(z/gamma_bar))/(1+z) dz literally on top
    of :func:`outage_quadrature` (slow; kept as an independent route).
    """
    if gamma_bar <= 0.0:
        raise ValueError("gamma_bar must be positive")
    if method == "outage-integral":
        outer_spec = QuadratureSpec(
            max(spec.abs_tol, 1e-9), max(spec.rel_tol, 1e-7), spec.max_subdivisions
        )
        inner_spec = QuadratureSpec(
            outer_spec.abs_tol / 10.0, outer_spec.rel_tol / 10.0, spec.max_subdivisions
        )

        def integrand(u):
            if u >= 1.0:
                return 0.0
            zz = u / (1.0 - u)
            return (1.0 - outage_quadrature(mode, zz / gamma_bar, inner_spec)) / (
                1.0 - u
            )

        return _integrate_quad(
            integrand, 0.0, 1.0, outer_spec, f"throughput({mode.label})"
        )
    if method != "separable":
        raise ValueError("method must be 'separable' or 'outage-integral'")

    lam_law = "largest" if mode.rx == 1 else "smallest"
    om_law = "largest" if mode.tx == 1 else "smallest"
    inner_spec = QuadratureSpec(
        spec.abs_tol / 10.0, spec.rel_tol, spec.max_subdivisions
    )

    def inner(w):
        return _z_average(
            lambda z: _capacity_kernel(gamma_bar * w * z, lam_law),
            mode.compensated,
            inner_spec,
            "throughput inner",
        )

    return _outer_substituted(inner, om_law, spec, f"throughput({mode.label})")


def throughput_closed_r22(
    gamma_bar: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Closed form of the plain-surface (2,2)-mode throughput,
    (16/gamma_bar^2) G^{4,1}_{2,4}(4/gamma_bar | -2,0; -2,-1,-1,-2)."""
    if gamma_bar <= 0.0:
        raise ValueError("gamma_bar must be positive")
    params = MeijerParams(4, 1, 2, 4, (-2.0, 0.0), (-2.0, -1.0, -1.0, -2.0))
    return 16.0 / gamma_bar**2 * meijer_g(params, 4.0 / gamma_bar, spec)


def throughput_closed_r22_cmp(
    gamma_bar: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Closed form of the compensated (2,2)-mode throughput: a single
    G^{3,1}_{1,3} tail integral plus half the plain-surface value."""
    if gamma_bar <= 0.0:
        raise ValueError("gamma_bar must be positive")
    params = MeijerParams(3, 1, 1, 3, (0.0,), (0.0, 1.0, 0.0))

    def tail(u):
        t = 1.0 + u * u
        return (
            2.0
            * (1.0 - u * u)
            / t**2
            * np.arcsin(1.0 / np.sqrt(t))
            * meijer_g(params, 4.0 * t / gamma_bar, spec)
        )

    integral = _integrate_quad(tail, 0.0, np.inf, spec, "throughput_closed_r22_cmp")
    return 0.5 * integral + 0.5 * throughput_closed_r22(gamma_bar, spec)
