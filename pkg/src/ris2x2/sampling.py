"""Seedable, counter-based random generation of channels and unitaries.

Randomness is keyed by ``RngState(seed, stream)`` and a draw index: draw k
of a given kind touches a fixed window of Philox counter blocks, so the
k-th draw is a pure function of (seed, stream, k).  Splitting a batch into
chunks or workers therefore cannot change any value, and every sequence is
bit-for-bit reproducible.

Normals come from Box-Muller applied to the raw uniform stream (fixed
consumption of uniforms per draw, no rejection), matrix entries are
CN(0, 1), and Haar unitaries are assembled from the angle densities of the
U(2) parameterization (theta12 with density sin 2*theta via inverse CDF,
the three phase angles uniform on [0, 2*pi)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg2 import Svd2, UnitaryAngles, svd2, unitary_from_angles

__all__ = [
    "RngState",
    "ChannelRealization",
    "sample_gaussian_channel",
    "gaussian_channels",
    "sample_channel_realization",
    "channel_realizations",
    "sample_haar_unitary",
    "haar_unitaries",
    "haar_angles",
    "angle_diff_pdf",
    "angle_diff_cdf",
    "angle_sum_pdf",
]

# Philox-4x64 emits 4 raw uint64 words per counter increment.
_WORDS_PER_BLOCK = 4
# One 2x2 complex Gaussian matrix consumes 8 uniforms (16 normals / 2).
_BLOCKS_PER_MATRIX = 2
# A (G, H) channel pair consumes 16 uniforms.
_BLOCKS_PER_PAIR = 4


@dataclass(frozen=True)
class RngState:
    """Key of a counter-based random stream (64-bit seed and stream id)."""

    seed: int
    stream: int = 0

    def child(self, stream: int) -> "RngState":
        return RngState(self.seed, stream)


@dataclass(frozen=True)
class ChannelRealization:
    """One draw (or a stack of draws) of the two Rayleigh channel matrices
    with their cached decompositions."""

    g: np.ndarray
    h: np.ndarray
    svd_g: Svd2
    svd_h: Svd2


def _uniform_blocks(state: RngState, start_block: int, n_blocks: int) -> np.ndarray:
    """Uniforms in [0, 1) from counter blocks [start_block, start_block+n)."""
    key = np.array(
        [state.seed & 0xFFFFFFFFFFFFFFFF, state.stream & 0xFFFFFFFFFFFFFFFF],
        dtype=np.uint64,
    )
    bitgen = np.random.Philox(key=key, counter=int(start_block))
    raw = bitgen.random_raw(n_blocks * _WORDS_PER_BLOCK)
    return (raw >> np.uint64(11)) * (2.0 ** -53)


def _box_muller(u: np.ndarray) -> np.ndarray:
    """Standard normals from consecutive uniform pairs (last axis even)."""
    u1 = u[..., 0::2]
    u2 = u[..., 1::2]
    r = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 in (0, 1], no log(0)
    ang = (2.0 * np.pi) * u2
    out = np.empty_like(u)
    out[..., 0::2] = r * np.cos(ang)
    out[..., 1::2] = r * np.sin(ang)
    return out


def _matrices_from_uniforms(u: np.ndarray) -> np.ndarray:
    """Map rows of 8 uniforms to 2x2 CN(0,1) matrices (row-major entries)."""
    z = _box_muller(u)
    entries = (z[..., 0::2] + 1j * z[..., 1::2]) / np.sqrt(2.0)
    return entries.reshape(u.shape[:-1] + (-1, 2, 2))


def gaussian_channels(state: RngState, n: int, start: int = 0) -> np.ndarray:
    """Draws start..start+n-1 of a 2x2 matrix with i.i.d. CN(0,1) entries."""
    u = _uniform_blocks(state, _BLOCKS_PER_MATRIX * start, _BLOCKS_PER_MATRIX * n)
    return _matrices_from_uniforms(u.reshape(n, 8)).reshape(n, 2, 2)


def sample_gaussian_channel(state: RngState, index: int = 0) -> np.ndarray:
    return gaussian_channels(state, 1, start=index)[0]


def channel_realizations(state: RngState, n: int, start: int = 0) -> ChannelRealization:
    """Draws start..start+n-1 of channel pairs (g, h) with cached SVDs.

    Pair t consumes counter blocks [4t, 4t+4): the first 8 uniforms build
    g, the next 8 build h.
    """
    u = _uniform_blocks(state, _BLOCKS_PER_PAIR * start, _BLOCKS_PER_PAIR * n)
    mats = _matrices_from_uniforms(u.reshape(n, 16))
    g = mats[:, 0]
    h = mats[:, 1]
    return ChannelRealization(g=g, h=h, svd_g=svd2(g), svd_h=svd2(h))


def sample_channel_realization(state: RngState, index: int = 0) -> ChannelRealization:
    batch = channel_realizations(state, 1, start=index)
    return ChannelRealization(
        g=batch.g[0],
        h=batch.h[0],
        svd_g=Svd2(batch.svd_g.u[0], batch.svd_g.sigma[0], batch.svd_g.v[0]),
        svd_h=Svd2(batch.svd_h.u[0], batch.svd_h.sigma[0], batch.svd_h.v[0]),
    )


def haar_angles(state: RngState, n: int, start: int = 0) -> UnitaryAngles:
    """Angles of n Haar draws; draw k consumes counter block start + k."""
    u = _uniform_blocks(state, start, n).reshape(n, 4)
    return UnitaryAngles(
        theta11=(2.0 * np.pi) * u[:, 0],
        theta12=np.arcsin(np.sqrt(u[:, 3])),  # inverse CDF of sin(2*theta)
        theta21=(2.0 * np.pi) * u[:, 1],
        theta22=(2.0 * np.pi) * u[:, 2],
    )


def haar_unitaries(state: RngState, n: int, start: int = 0) -> np.ndarray:
    """Haar-distributed U(2) draws start..start+n-1."""
    return unitary_from_angles(haar_angles(state, n, start=start))


def sample_haar_unitary(state: RngState, index: int = 0) -> np.ndarray:
    return haar_unitaries(state, 1, start=index)[0]


def angle_diff_pdf(x):
    """Density of the difference of two independent angles with density
    sin(2*theta) on [0, pi/2]; supported on [-pi/2, pi/2], zero outside."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    val = 0.5 * (
        (np.pi / 2.0) * np.cos(2.0 * x)
        - ax * np.cos(2.0 * x)
        + 0.5 * np.sin(2.0 * ax)
    )
    out = np.where(ax <= np.pi / 2.0, val, 0.0)
    return out if out.ndim else float(out)


def angle_diff_cdf(x):
    """Antiderivative of :func:`angle_diff_pdf`, clamped to [0, 1]."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.clip(np.abs(x), 0.0, np.pi / 2.0)
    half = (
        (np.pi / 8.0) * np.sin(2.0 * ax)
        - (ax / 4.0) * np.sin(2.0 * ax)
        - 0.25 * np.cos(2.0 * ax)
        + 0.25
    )
    out = 0.5 + np.sign(x) * half
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def angle_sum_pdf(x):
    """Density of the sum of two independent angles with density
    sin(2*theta) on [0, pi/2]; supported on [0, pi], zero outside."""
    x = np.asarray(x, dtype=np.float64)
    low = 0.25 * np.sin(2.0 * x) - 0.5 * x * np.cos(2.0 * x)
    high = -0.25 * np.sin(2.0 * x) - 0.5 * (np.pi - x) * np.cos(2.0 * x)
    val = np.where(x < np.pi / 2.0, low, high)
    out = np.where((x >= 0.0) & (x <= np.pi), val, 0.0)
    return out if out.ndim else float(out)
