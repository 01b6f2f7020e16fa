"""Transmission modes, instantaneous SNR, and surface phase compensation.

The link is y = G Phi H x + n with diagonal reflection matrix
Phi = diag(exp(j*phi1), exp(j*phi2)).  A transmission mode (i, j) sends
along the i-th right singular vector of H and combines along the j-th left
singular vector of G, which factors the SNR as

    gamma = gamma_bar * lambda_j * omega_i * z,     z = |v_j^H Phi w_i|^2,

with lambda/omega the squared singular values of G/H, v_j a right singular
vector of G and w_i a left singular vector of H.  Compensation picks the
tile phases that align the two reflected paths, turning z into the squared
sum of moduli (the triangle-inequality bound).  Without compensation the
surface keeps a fixed reference configuration, identity by default; the
law of z does not depend on that fixed choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampling import ChannelRealization

__all__ = [
    "PhaseConfig",
    "Mode",
    "SnrSample",
    "MODES",
    "REFERENCE_PHASES",
    "phase_matrix",
    "mode_vectors",
    "compensated_phases",
    "instantaneous_snr",
    "mode_snr",
    "mode_z_factors",
]

_PI = np.pi


def _wrap_phase(phi: float) -> float:
    """Wrap to [-pi, pi)."""
    return float((phi + _PI) % (2.0 * _PI) - _PI)


@dataclass(frozen=True)
class PhaseConfig:
    """Constant phase shifts of the two tiles, each in [-pi, pi)."""

    phi1: float
    phi2: float

    def __post_init__(self):
        for name, p in (("phi1", self.phi1), ("phi2", self.phi2)):
            if not (-_PI <= p < _PI):
                raise ValueError(f"{name}={p} outside [-pi, pi)")


REFERENCE_PHASES = PhaseConfig(0.0, 0.0)


@dataclass(frozen=True)
class Mode:
    """A transmission strategy: transmit index i, combine index j, and
    whether the surface phases track the channel."""

    tx: int  # i: column of the right singular basis of H
    rx: int  # j: column of the left singular basis of G
    compensated: bool = False

    def __post_init__(self):
        if self.tx not in (1, 2) or self.rx not in (1, 2):
            raise ValueError("mode indices must be 1 or 2")

    @property
    def label(self) -> str:
        return f"j{self.rx}i{self.tx}" + ("-cmp" if self.compensated else "")


MODES = tuple(
    Mode(tx=i, rx=j, compensated=c)
    for c in (False, True)
    for j in (1, 2)
    for i in (1, 2)
)


@dataclass(frozen=True)
class SnrSample:
    """Instantaneous SNR gamma = gamma_bar * lambda_j * omega_i * z."""

    gamma: float
    lambda_j: float
    omega_i: float
    z: float


def phase_matrix(phi: PhaseConfig) -> np.ndarray:
    return np.diag(np.exp(1j * np.array([phi.phi1, phi.phi2])))


def mode_vectors(ch: ChannelRealization, mode: Mode):
    """Unit transmit and combining vectors (a, b) of a mode."""
    a = ch.svd_h.v[..., :, mode.tx - 1]
    b = ch.svd_g.u[..., :, mode.rx - 1]
    return a, b


def compensated_phases(v_j: np.ndarray, w_i: np.ndarray) -> PhaseConfig:
    """Tile phases aligning the two reflected paths for the given singular
    vector pair: phi_k = -arg(conj(v_jk) * w_ik).

    A vanishing product leaves that tile's phase at zero (the SNR does not
    depend on it there).
    """
    prod = np.conjugate(np.asarray(v_j)) * np.asarray(w_i)
    phis = []
    for k in range(2):
        if abs(prod[k]) < 1e-300:
            phis.append(0.0)
        else:
            phis.append(_wrap_phase(-np.angle(prod[k])))
    return PhaseConfig(phis[0], phis[1])


def instantaneous_snr(g, h, phi: PhaseConfig, a, b, gamma_bar: float) -> float:
    """gamma_bar * |b^H G Phi H a|^2 for unit vectors a, b."""
    a = np.asarray(a)
    b = np.asarray(b)
    if abs(np.linalg.norm(a) - 1.0) > 1e-10 or abs(np.linalg.norm(b) - 1.0) > 1e-10:
        raise ValueError("a and b must be unit vectors")
    if gamma_bar <= 0.0:
        raise ValueError("gamma_bar must be positive")
    amp = np.conjugate(b) @ np.asarray(g) @ phase_matrix(phi) @ np.asarray(h) @ a
    return float(gamma_bar) * float(np.abs(amp) ** 2)


def mode_snr(
    ch: ChannelRealization,
    mode: Mode,
    gamma_bar: float,
    reference: PhaseConfig = REFERENCE_PHASES,
) -> SnrSample:
    """SNR sample of a mode on one channel realization.

    Compensated modes use the channel-matched phases; uncompensated modes
    use the fixed ``reference`` configuration.
    """
    j = mode.rx - 1
    i = mode.tx - 1
    lam = float(ch.svd_g.sigma[j]) ** 2
    om = float(ch.svd_h.sigma[i]) ** 2
    v_j = ch.svd_g.v[:, j]
    w_i = ch.svd_h.u[:, i]
    if mode.compensated:
        z = float(np.sum(np.abs(v_j) * np.abs(w_i)) ** 2)
    else:
        amp = np.conjugate(v_j) @ phase_matrix(reference) @ w_i
        z = float(np.abs(amp) ** 2)
    z = min(z, 1.0)
    gamma = float(gamma_bar) * lam * om * z
    return SnrSample(gamma=gamma, lambda_j=lam, omega_i=om, z=z)


def mode_z_factors(ch: ChannelRealization, reference: PhaseConfig = REFERENCE_PHASES):
    """All eight z factors of a (stacked) realization at once.

    Returns (z_plain, z_comp), each indexed [..., j-1, i-1]:
    z_plain = |(V^H Phi_ref W)_{ji}|^2 and z_comp = ((|V|^T |W|)_{ji})^2,
    where V collects right singular vectors of G and W left singular
    vectors of H.
    """
    v = ch.svd_g.v
    w = ch.svd_h.u
    ref = np.exp(1j * np.array([reference.phi1, reference.phi2]))
    cross = np.einsum("...kj,k,...ki->...ji", np.conjugate(v), ref, w)
    z_plain = cross.real**2 + cross.imag**2
    amps = np.einsum("...kj,...ki->...ji", np.abs(v), np.abs(w))
    z_comp = amps**2
    return np.minimum(z_plain, 1.0), np.minimum(z_comp, 1.0)
