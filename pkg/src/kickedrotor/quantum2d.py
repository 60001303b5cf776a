"""Exact quantum evolution of the planar (2D) kicked rotor.

The state is a free-rotor Fourier packet Psi(theta) =
(2 pi)^{-1/2} sum_n c_n exp(i n theta).  A delta kick multiplies Psi by
exp(iP cos theta) (dipole) or exp(iP cos^2 theta) (polarization), which in
the coefficient picture is a Bessel-weighted convolution; free evolution
multiplies c_n by exp(-i n^2 tau / 2).  Packets are immutable; every
operation returns a new one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import Coupling
from .profiles import DensityProfile
from .specfun import bessel_jn_array

__all__ = [
    "FourierPacket2D",
    "KickSpec",
    "TruncationError",
    "ResolutionError",
    "ground_packet",
    "apply_kick",
    "free_evolve",
    "wavefunction",
    "density",
    "REVIVAL_PERIOD",
]

REVIVAL_PERIOD = 4.0 * math.pi

NORM_TOL = 1e-10
TAIL_TOL = 1e-12


class TruncationError(RuntimeError):
    """Post-kick coefficients carry weight beyond the truncation order."""


class ResolutionError(ValueError):
    """Grid too coarse for the requested normalization check."""


def kick_order_margin(P):
    """Truncation rule: orders up to P + 8 P^(1/3) + 20 carry the kick."""
    return int(math.ceil(P + 8.0 * P ** (1.0 / 3.0) + 20.0)) if P > 0 else 20


@dataclass(frozen=True)
class KickSpec:
    """Dimensionless kick strength and coupling type."""

    strength: float
    coupling: Coupling = Coupling.DIPOLE

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError("kick strength must be >= 0")


@dataclass(frozen=True)
class FourierPacket2D:
    """Fourier coefficients c_n, n in [-n_max, n_max], at time tau."""

    n_max: int
    coeffs: np.ndarray  # complex, length 2*n_max + 1
    time: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2 * self.n_max + 1,):
            raise ValueError("coefficient array length must be 2*n_max + 1")
        object.__setattr__(self, "coeffs", c)
        c.setflags(write=False)

    @property
    def orders(self):
        return np.arange(-self.n_max, self.n_max + 1)

    def norm(self):
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def check(self):
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"packet norm {self.norm()} deviates from 1")
        if self.n_max > 0 and max(abs(self.coeffs[0]), abs(self.coeffs[-1])) >= TAIL_TOL:
            raise TruncationError("edge coefficients exceed the truncation floor")
        return self


def ground_packet(n_max=32):
    """Rotational ground state: c_0 = 1, uniform density 1/(2 pi)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    c = np.zeros(2 * n_max + 1, dtype=complex)
    c[n_max] = 1.0
    return FourierPacket2D(n_max=n_max, coeffs=c, time=0.0)


def _padded(packet, extra):
    if extra <= 0:
        return packet.coeffs, packet.n_max
    c = np.zeros(2 * (packet.n_max + extra) + 1, dtype=complex)
    c[extra:extra + 2 * packet.n_max + 1] = packet.coeffs
    return c, packet.n_max + extra


_I_POW = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])


def _jacobi_anger_kernel(order, z):
    """K_k = i^k J_k(z) for k in [-order, order] (exact unit phases)."""
    jn = bessel_jn_array(order, z)
    k = np.arange(-order, order + 1)
    jk = jn[np.abs(k)] * np.where((k < 0) & (k % 2 != 0), -1.0, 1.0)
    return _I_POW[k % 4] * jk


def apply_kick(packet, kick):
    """Apply exp(iP cos theta) or exp(iP cos^2 theta) to the packet.

    Dipole:       c_n <- sum_m i^(n-m) J_{n-m}(P) c_m
    Polarization: c_n <- e^{iP/2} sum_k i^k J_k(P/2) c_{n-2k}
    The truncation order grows by the kick margin; norm is preserved.
    """
    P = kick.strength
    if P == 0.0:
        return packet

    if kick.coupling is Coupling.DIPOLE:
        margin = kick_order_margin(P)
        c, n_max = _padded(packet, margin)
        kernel = _jacobi_anger_kernel(margin, P)
        new = np.convolve(c, kernel)[margin:-margin]
    else:
        half = kick_order_margin(P / 2.0)
        margin = 2 * half
        c, n_max = _padded(packet, margin)
        kernel2 = _jacobi_anger_kernel(half, P / 2.0)
        # harmonics step by 2: c_n <- sum_k K_k c_{n-2k}
        kernel = np.zeros(2 * margin + 1, dtype=complex)
        kernel[::2] = kernel2
        new = np.exp(1j * P / 2.0) * np.convolve(c, kernel)[margin:-margin]

    out = FourierPacket2D(n_max=n_max, coeffs=new, time=packet.time)
    if abs(out.norm() - 1.0) > NORM_TOL and abs(packet.norm() - 1.0) < NORM_TOL:
        raise TruncationError("kick leaked probability past the truncation order")
    return out


def free_evolve(packet, dtau):
    """Free rotor phase: c_n <- c_n exp(-i n^2 dtau / 2)."""
    if not math.isfinite(dtau):
        raise ValueError("dtau must be finite")
    n = packet.orders
    c = packet.coeffs * np.exp(-0.5j * n * n * dtau)
    return FourierPacket2D(n_max=packet.n_max, coeffs=c, time=packet.time + dtau)


def wavefunction(packet, grid):
    """Psi(theta) on the given angles, by direct coefficient summation."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    phases = np.exp(1j * np.outer(grid, packet.orders))
    return phases @ packet.coeffs / math.sqrt(2.0 * math.pi)


def density(packet, grid, check_norm=False):
    """|Psi|^2 on the grid.

    With check_norm=True the grid must be uniform on [0, 2 pi) with at
    least 4*n_max points; the trapezoidal integral is then verified to be
    1 within 1e-8.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    vals = np.abs(wavefunction(packet, grid)) ** 2
    if check_norm:
        if grid.size < 4 * packet.n_max:
            raise ResolutionError(
                f"normalization check needs >= {4 * packet.n_max} uniform points")
        dth = np.diff(grid)
        if grid.size > 1 and (np.max(dth) - np.min(dth)) > 1e-9 * np.max(dth):
            raise ResolutionError("normalization check needs a uniform grid")
        total = np.sum(vals) * (grid[1] - grid[0])
        if abs(total - 1.0) > 1e-8:
            raise ResolutionError(f"density integrates to {total}, not 1")
    return DensityProfile(grid=grid, values=vals, geometry="circle")
