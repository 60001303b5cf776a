"""Exact quantum evolution of the axially symmetric 3D rigid rotor.

A vertically polarized kick preserves m = 0, so the state is a sum over
spherical harmonics Y_l^0 with energies l(l+1)/2.  The dipole kick on the
ground state populates c_l = i^l sqrt(2l+1) j_l(P); the polarization kick
needs the Legendre re-expansion P_l(cos 2 theta) = sum_L d_{L,l} P_L(cos
theta), built once by recurrence and cached.

The free phase is exp(-i l(l+1) tau / 2) with the same sign as the 2D
rotor; the opposite sign is equivalent to kicking with -P and would focus
the packet at theta = pi instead of theta = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import DensityProfile
from .quantum2d import NORM_TOL, TAIL_TOL, ResolutionError, TruncationError, kick_order_margin
from .specfun import spherical_jn_array

_I_POW = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])

__all__ = [
    "LegendrePacket3D",
    "RecurrenceTable",
    "dipole_kick_ground",
    "build_recurrence",
    "polarization_kick_ground",
    "free_evolve_3d",
    "wavefunction_3d",
    "density_3d",
    "REVIVAL_PERIOD_3D",
]

REVIVAL_PERIOD_3D = 2.0 * math.pi  # l(l+1) is even, so exp(-i l(l+1) pi) = 1


@dataclass(frozen=True)
class LegendrePacket3D:
    """Coefficients over Y_l^0, l in [0, l_max], at time tau."""

    l_max: int
    coeffs: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.l_max + 1,):
            raise ValueError("coefficient array length must be l_max + 1")
        object.__setattr__(self, "coeffs", c)
        c.setflags(write=False)

    @property
    def orders(self):
        return np.arange(self.l_max + 1)

    def norm(self):
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def check(self):
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"packet norm {self.norm()} deviates from 1")
        if self.l_max > 0 and abs(self.coeffs[-1]) >= TAIL_TOL:
            raise TruncationError("top coefficient exceeds the truncation floor")
        return self


def dipole_kick_ground(P, l_max=None):
    """Ground state kicked by exp(iP cos theta): c_l = i^l sqrt(2l+1) j_l(P)."""
    if P < 0:
        raise ValueError("P must be >= 0")
    need = kick_order_margin(P)
    if l_max is None:
        l_max = need
    if l_max < need:
        raise ValueError(f"l_max must be at least {need} for P={P}")
    l = np.arange(l_max + 1)
    jl = spherical_jn_array(l_max, P)
    c = _I_POW[l % 4] * np.sqrt(2 * l + 1.0) * jl
    # spherical-Bessel sum rule: sum (2l+1) j_l^2 = 1; renormalize the
    # truncated tail away
    c = c / math.sqrt(float(np.sum(np.abs(c) ** 2)))
    packet = LegendrePacket3D(l_max=l_max, coeffs=c, time=0.0)
    if abs(np.sum((2 * l + 1.0) * jl ** 2) - 1.0) > 1e-10:
        raise TruncationError("spherical-Bessel tail mass exceeds 1e-10")
    return packet


@dataclass(frozen=True)
class RecurrenceTable:
    """d[L, l] with P_l(2x^2 - 1) = sum_L d[L, l] P_L(x).

    Only even L contribute; every column sums to 1 because P_L(1) = 1.
    """

    d: np.ndarray

    @property
    def L_max(self):
        return self.d.shape[0] - 1

    @property
    def l_max(self):
        return self.d.shape[1] - 1


def _n_matrix_element(L, Lp):
    # <P_L | x^2 | P_Lp> with the 2/(2L+1) normalization kept in
    if Lp == L:
        diag = (L + 1) ** 2 / (2 * L + 3.0) + (L * L / (2 * L - 1.0) if L > 0 else 0.0)
        return 2.0 / (2 * L + 1) ** 2 * diag
    if Lp == L + 2:
        return 2.0 * (L + 1) * (L + 2) / ((2 * L + 1.0) * (2 * L + 3.0) * (2 * L + 5.0))
    if Lp == L - 2:
        return 2.0 * L * (L - 1) / ((2 * L - 3.0) * (2 * L - 1.0) * (2 * L + 1.0))
    return 0.0


_TABLE_CACHE = {}


def build_recurrence(L_max):
    """Legendre re-expansion table, computed once per L_max and cached.

    Column l+1 follows from columns l and l-1:
      d_{L,l+1} = (2l+1)(2L+1)/(l+1) sum_{L'} d_{L',l} N_{L,L'}
                  - (2l+1)/(l+1) d_{L,l} - l/(l+1) d_{L,l-1}
    seeded by P_0 -> 1 and P_1(2x^2-1) = 2x^2 - 1 = (4 P_2 - P_0)/3.
    """
    if L_max < 2 or L_max % 2:
        raise ValueError("L_max must be even and >= 2")
    if L_max in _TABLE_CACHE:
        return _TABLE_CACHE[L_max]
    l_max = L_max // 2
    d = np.zeros((L_max + 1, l_max + 1))
    d[0, 0] = 1.0
    if l_max >= 1:
        d[0, 1] = -1.0 / 3.0
        d[2, 1] = 4.0 / 3.0
    for l in range(1, l_max):
        for L in range(0, min(L_max, 2 * l + 2) + 1, 2):
            acc = 0.0
            for Lp in (L - 2, L, L + 2):
                if 0 <= Lp <= L_max and d[Lp, l] != 0.0:
                    acc += d[Lp, l] * _n_matrix_element(L, Lp)
            d[L, l + 1] = ((2 * l + 1.0) * (2 * L + 1.0) / (l + 1.0) * acc
                           - (2 * l + 1.0) / (l + 1.0) * d[L, l]
                           - l / (l + 1.0) * d[L, l - 1])
    table = RecurrenceTable(d=d)
    d.setflags(write=False)
    _TABLE_CACHE[L_max] = table
    return table


def polarization_kick_ground(P, l_max=None):
    """Ground state kicked by exp(iP cos^2 theta); even harmonics only.

    The coefficient of Y_{2l}^0 is
      e^{iP/2} (4l+1)^{-1/2} sum_m i^m (2m+1) j_m(P/2) d_{2l, m};
    the (2m+1) weight comes from the plane-wave expansion of
    exp(i(P/2) cos 2 theta) and is required for the projection rule
    <Y_{2l}| e^{iP cos^2} |Y_0> to hold.
    """
    if P < 0:
        raise ValueError("P must be >= 0")
    if P == 0.0:
        c = np.zeros((l_max if l_max is not None else 8) + 1, dtype=complex)
        c[0] = 1.0
        return LegendrePacket3D(l_max=len(c) - 1, coeffs=c, time=0.0)
    half = kick_order_margin(P / 2.0)
    L_max = 2 * half
    if l_max is None:
        l_max = L_max
    if l_max < L_max:
        raise ValueError(f"l_max must be at least {L_max} for P={P}")
    table = build_recurrence(L_max)
    m = np.arange(table.l_max + 1)
    jm = spherical_jn_array(table.l_max, P / 2.0)
    weights = _I_POW[m % 4] * (2 * m + 1.0) * jm
    c = np.zeros(l_max + 1, dtype=complex)
    for L in range(0, L_max + 1, 2):
        c[L] = np.exp(1j * P / 2.0) / math.sqrt(2.0 * L + 1.0) * np.sum(weights * table.d[L, :])
    packet = LegendrePacket3D(l_max=l_max, coeffs=c, time=0.0)
    if abs(packet.norm() - 1.0) > 1e-8:
        raise TruncationError("polarization kick coefficients lost norm")
    return packet


def free_evolve_3d(packet, dtau):
    """Free phase c_l <- c_l exp(-i l(l+1) dtau / 2)."""
    if not math.isfinite(dtau):
        raise ValueError("dtau must be finite")
    l = packet.orders
    c = packet.coeffs * np.exp(-0.5j * l * (l + 1.0) * dtau)
    return LegendrePacket3D(l_max=packet.l_max, coeffs=c, time=packet.time + dtau)


def wavefunction_3d(packet, grid):
    """psi(theta) = sum_l c_l Y_l^0(theta) via a Legendre-coefficient sum."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    l = packet.orders
    ph = packet.coeffs * np.sqrt((2 * l + 1.0) / (4.0 * math.pi))
    # Clenshaw evaluation of sum ph_l P_l(cos theta)
    return np.polynomial.legendre.legval(np.cos(grid), ph)


def density_3d(packet, grid, check_norm=False):
    """|psi(theta)|^2 plus the solid-angle-weighted 2 pi sin(theta)|psi|^2."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(grid < -1e-12) or np.any(grid > math.pi + 1e-12):
        raise ValueError("3D grid angles must lie in [0, pi]")
    vals = np.abs(wavefunction_3d(packet, grid)) ** 2
    weighted = 2.0 * math.pi * np.sin(grid) * vals
    if check_norm:
        if grid.size < 4 * packet.l_max:
            raise ResolutionError(
                f"normalization check needs >= {4 * packet.l_max} uniform points")
        dth = np.diff(grid)
        if grid.size > 1 and (np.max(dth) - np.min(dth)) > 1e-9 * np.max(dth):
            raise ResolutionError("normalization check needs a uniform grid")
        # |psi|^2 is a polynomial of degree 2 l_max in cos(theta), so
        # Gauss-Legendre in x = cos(theta) evaluates the norm exactly
        x, w = np.polynomial.legendre.leggauss(packet.l_max + 2)
        total = float(2.0 * math.pi
                      * np.sum(w * np.abs(wavefunction_3d(packet, np.arccos(x))) ** 2))
        if abs(total - 1.0) > 1e-8:
            raise ResolutionError(f"weighted density integrates to {total}, not 1")
    return DensityProfile(grid=grid, values=vals, geometry="sphere", weighted=weighted)
