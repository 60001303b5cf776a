"""Semiclassical approximations for the kicked rotor catastrophes.

The planar model treats the polar region of the sphere as a flat disc of
area 4*pi (radius 2) whose wave function is kicked radially; its integral

  psi(theta,tau) = e^{i(P + theta^2/2tau)} / (i tau sqrt(4 pi))
                   * int_0^L dt t J0(theta t / tau)
                     exp[i(t^2 (1/tau - P)/2 + P t^4/24)]

is the quadrature oracle for the 3D asymptotics.  On top of it sit the
catastrophe approximations: Pearcey cusp (2D and 3D), Airy rainbow (2D),
uniform Airy (3D rainbow, full-cosine phase), uniform Bessel (3D glory,
quartic phase) and its Ford-Wheeler limit.

Two amplitude conventions are fixed against independent checks rather
than taken from intermediate printed forms: the azimuthal stationary
phase step of the uniform Airy reduction carries weight
2*sqrt(2 pi tau / (2 theta)) (verified against the focal norm integral),
and the rainbow Airy argument is eta = [2/(P sin tb)]^(1/3)(theta -
theta_r)/tau, oscillatory on the lit side theta < theta_r.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .classical import rainbow_angle
from .specfun import (
    ConvergenceError,
    airy,
    bessel_j0,
    bessel_j1,
    gamma_fn,
    gauss_segment,
    hyp1f1_focus,
    pearcey,
)

__all__ = [
    "DISC_RADIUS",
    "Validity",
    "planar_psi",
    "focal_density_closed_form",
    "focal_density_asymptotic",
    "pearcey_focus_2d",
    "pearcey_focus_2d_full",
    "focal_sum_2d",
    "pearcey_cusp_3d",
    "airy_rainbow_2d",
    "airy_rainbow_2d_full",
    "uniform_airy_3d",
    "uniform_bessel_glory",
    "ford_wheeler_glory",
    "glory_angle_planar",
    "stationary_points_3d",
    "StationaryPointSet3D",
    "annotate_validity",
]

DISC_RADIUS = 2.0  # radius of the flat disc of area 4*pi


class Validity(enum.Enum):
    INSIDE = "inside"
    EDGE = "edge"
    OUTSIDE = "outside"


# ----------------------------------------------------------------------
# Planar-model quadrature (the 3D oracle)
# ----------------------------------------------------------------------

def planar_psi(theta, tau, P, radius=DISC_RADIUS):
    """Planar-model wave function by oscillatory quadrature (1e-8 abs).

    radius is the disc radius; the default 2 matches the disc of area
    4*pi.  For late times (P*tau >~ 3) the glory ring migrates past
    radius 2 and a larger radius is needed for the ring physics to be
    inside the integration domain.
    """
    if tau <= 0:
        raise ValueError("planar_psi requires tau > 0")
    a = 0.5 * (1.0 / tau - P)
    b = P / 24.0
    L = float(radius)
    slope = 2.0 * abs(a) * L + 4.0 * b * L ** 3 + abs(theta) / tau

    def f(t):
        tr = t.real
        return tr * bessel_j0(theta * tr / tau) * np.exp(1j * (a * tr * tr + b * tr ** 4))

    n_pan = max(24, int(slope * L / 3.0))
    I = gauss_segment(f, 0.0 + 0.0j, L + 0.0j, n_pan)
    pref = cmath.exp(1j * (P + theta * theta / (2.0 * tau))) / (1j * tau * math.sqrt(4.0 * math.pi))
    return pref * I


def focal_density_closed_form(P, radius=DISC_RADIUS):
    """|psi(0, 1/P)|^2 of the planar model, via the confluent
    hypergeometric closed form I = (P L^2/2) 1F1(1/2, 3/2, i P L^4/24)."""
    if P <= 0:
        raise ValueError("P must be > 0")
    L = float(radius)
    z = P * L ** 4 / 24.0
    I = (P * L * L / 2.0) * hyp1f1_focus(z)
    return abs(I) ** 2 / (4.0 * math.pi)


def focal_density_asymptotic(P, radius=DISC_RADIUS):
    """Large-P focal density of the planar model,

      (3P/8pi) [pi + 24/(P L^4) + sqrt(96 pi/(P L^4)) cos(P L^4/24 - 3pi/4)],

    approaching 3P/8 as P -> infinity.  (The finite-size cross term is
    rederived from the exact 1F1 asymptotics; its weight is twice, and its
    phase conjugate to, a commonly quoted form.)"""
    if P <= 0:
        raise ValueError("P must be > 0")
    L = float(radius)
    A = P * L ** 4 / 24.0
    bracket = (math.pi + 24.0 / (P * L ** 4)
               + math.sqrt(96.0 * math.pi / (P * L ** 4)) * math.cos(A - 0.75 * math.pi))
    return 3.0 * P / (8.0 * math.pi) * bracket


# ----------------------------------------------------------------------
# Pearcey focusing, 2D
# ----------------------------------------------------------------------

def _cusp_variables(theta, tau, P):
    x = math.sqrt(6.0 / P) * (1.0 / tau - P)
    beta = math.sqrt(2.0) * (theta / tau) * (6.0 / P) ** 0.25
    return float(x), float(beta)


def pearcey_focus_2d(theta, tau, P):
    """Cusp-branch wave function near focusing,

      psi~ = (1/(pi sqrt(2 i tau))) (6/P)^(1/4)
             exp[i(theta^2/2tau + P)] Pearcey(x, beta).

    This is the single branch tied to the cusp at theta = 0; it is the
    quantitatively reliable object (the mirror branch of the full
    symmetrized form carries an unreliable far-tail phase).
    """
    if tau <= 0 or P <= 0:
        raise ValueError("pearcey_focus_2d requires tau, P > 0")
    x, beta = _cusp_variables(theta, tau, P)
    pref = (1.0 / (math.pi * cmath.sqrt(2.0j * tau))) * (6.0 / P) ** 0.25
    pref *= cmath.exp(1j * (theta * theta / (2.0 * tau) + P))
    return pref * pearcey(x, beta)


def pearcey_focus_2d_full(theta, tau, P):
    """Symmetrized wave function psi~(theta) + psi~(2 pi - theta)."""
    return pearcey_focus_2d(theta, tau, P) + pearcey_focus_2d(2.0 * math.pi - theta, tau, P)


def focal_sum_2d(theta, P, n_terms=200):
    """Focal-time (P*tau = 1) branch wave function by the single sum

      psi~ = (6P)^(1/4)/(2 pi sqrt(2i)) e^{iP(1+theta^2/2)}
             sum_n beta^(2n)/(2n)! Gamma[(2n+1)/4] e^{i pi(10n+1)/8},

    an independent code path against pearcey_focus_2d at x = 0.
    """
    if P <= 0:
        raise ValueError("P must be > 0")
    beta = float(math.sqrt(2.0) * theta * P * (6.0 / P) ** 0.25)
    with mpmath.workdps(40):
        B = mpmath.mpf(repr(float(beta)))
        acc = mpmath.mpc(0)
        for n in range(n_terms):
            term = (B ** (2 * n) / mpmath.factorial(2 * n)
                    * mpmath.gamma(mpmath.mpf(2 * n + 1) / 4)
                    * mpmath.expjpi(mpmath.mpf(10 * n + 1) / 8))
            acc += term
            if n > 4 and abs(term) < mpmath.mpf("1e-25") * max(abs(acc), mpmath.mpf(1)):
                break
        else:
            raise ConvergenceError("focal_sum_2d did not converge")
        s = complex(acc)
    pref = (6.0 * P) ** 0.25 / (2.0 * math.pi * cmath.sqrt(2.0j))
    pref *= cmath.exp(1j * P * (1.0 + theta * theta / 2.0))
    return pref * s


def focal_peak_2d(P):
    """|psi~(0, 1/P)|^2 = sqrt(6P) Gamma(1/4)^2 / (8 pi^2) ~ 0.4078 sqrt(P)."""
    return math.sqrt(6.0 * P) * gamma_fn(0.25) ** 2 / (8.0 * math.pi ** 2)


def focal_tail_2d(theta):
    """Large-angle focal-time density 1/(pi (6 theta)^(2/3)), P-independent."""
    return 1.0 / (math.pi * (6.0 * theta) ** (2.0 / 3.0))


# ----------------------------------------------------------------------
# Pearcey focusing, 3D
# ----------------------------------------------------------------------

def pearcey_cusp_3d(theta, tau, P):
    """3D cusp wave function from the azimuthally integrated Pearcey
    derivative,

      psi = -(6/P)^(1/2) e^{i(P + theta^2/2tau)} / (4 sqrt(pi) tau)
            * sum_{n,m} x^m/m! beta^(2n)/(2n)! [(2n-1)!!/(2n)!!]
              Gamma[(n+m+1)/2] e^{i pi (5n+3m+3)/4}.

    At theta = 0, P*tau = 1 the density is exactly 3P/8.
    """
    if tau <= 0 or P <= 0:
        raise ValueError("pearcey_cusp_3d requires tau, P > 0")
    x, beta = _cusp_variables(theta, tau, P)
    if abs(x) > 40 or abs(beta) > 40:
        raise ConvergenceError("pearcey_cusp_3d arguments outside the series domain")
    with mpmath.workdps(50):
        X = mpmath.mpf(repr(float(x)))
        B = mpmath.mpf(repr(float(beta)))
        total = mpmath.mpc(0)
        quiet_rows = 0
        dfac = mpmath.mpf(1)  # (2n-1)!!/(2n)!!
        for n in range(300):
            if n > 0:
                dfac *= mpmath.mpf(2 * n - 1) / (2 * n)
            bpow = B ** (2 * n) / mpmath.factorial(2 * n) * dfac
            row = mpmath.mpc(0)
            quiet = 0
            for m in range(300):
                term = (bpow * X ** m / mpmath.factorial(m)
                        * mpmath.gamma(mpmath.mpf(n + m + 1) / 2)
                        * mpmath.expjpi(mpmath.mpf(5 * n + 3 * m + 3) / 4))
                row += term
                if abs(term) < mpmath.mpf("1e-25") * max(abs(total + row), mpmath.mpf(1)):
                    quiet += 1
                    if quiet >= 4 and m > 4:
                        break
                else:
                    quiet = 0
            else:
                raise ConvergenceError("pearcey_cusp_3d inner sum exhausted")
            total += row
            if n > 4 and abs(row) < mpmath.mpf("1e-25") * max(abs(total), mpmath.mpf(1)):
                quiet_rows += 1
                if quiet_rows >= 10:
                    break
            else:
                quiet_rows = 0
        else:
            raise ConvergenceError("pearcey_cusp_3d row budget exhausted")
        s = complex(total)
    pref = -math.sqrt(6.0 / P) / (4.0 * math.sqrt(math.pi) * tau)
    pref *= cmath.exp(1j * (P + theta * theta / (2.0 * tau)))
    return pref * s


def focal_peak_3d(P):
    """|psi(0, 1/P)|^2 = 3P/8 for the 3D cusp."""
    return 3.0 * P / 8.0


# ----------------------------------------------------------------------
# Rainbow: 2D Airy
# ----------------------------------------------------------------------

def _rainbow_geometry(s):
    tbar = math.acos(1.0 / s)
    thr = math.sqrt(s * s - 1.0) - tbar
    return tbar, thr


def airy_fringe_width(tau, P):
    """Angular distance from theta_r to the first Airy zero."""
    s = P * tau
    tbar, _ = _rainbow_geometry(s)
    c = (2.0 / (P * math.sin(tbar))) ** (1.0 / 3.0)
    return 2.3381074104597670 * tau / c


def airy_rainbow_2d(theta, tau, P):
    """Rainbow-branch wave function

      psi_r = (1/sqrt(i tau)) [2/(P sin tb)]^(1/3)
              exp[i(2 + (theta - tb)^2)/(2 tau)] Ai(eta),

    with eta = [2/(P sin tb)]^(1/3) (theta - theta_r)/tau: oscillatory on
    the lit side theta < theta_r, decaying beyond it.
    """
    s = P * tau
    if s <= 1.0:
        raise ValueError("airy_rainbow_2d requires P*tau > 1")
    tbar, thr = _rainbow_geometry(s)
    c = (2.0 / (P * math.sin(tbar))) ** (1.0 / 3.0)
    eta = c * (theta - thr) / tau
    ai, _ = airy(max(min(eta, 20.0), -60.0))
    pref = (1.0 / cmath.sqrt(1j * tau)) * c
    pref *= cmath.exp(1j * (2.0 + (theta - tbar) ** 2) / (2.0 * tau))
    return pref * ai


def airy_rainbow_2d_full(theta, tau, P):
    """Two-rainbow superposition psi_r(theta) + psi_r(2 pi - theta)."""
    return airy_rainbow_2d(theta, tau, P) + airy_rainbow_2d(2.0 * math.pi - theta, tau, P)


# ----------------------------------------------------------------------
# Rainbow: uniform Airy, 3D (full-cosine phase)
# ----------------------------------------------------------------------

def _bisect(f, a, b, tol=1e-14):
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ValueError("no sign change in bracket")
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def _fullcos_pair(theta, tau, P):
    """Roots of t - s sin t = -theta flanking tbar (the pi-azimuth pair)."""
    s = P * tau
    tbar = math.acos(1.0 / s)
    f = lambda t: t - s * math.sin(t) + theta
    t2 = _bisect(f, 1e-14, tbar)
    t3 = _bisect(f, tbar, math.pi)
    return t2, t3, tbar


def _phi_fullcos(t, theta, tau, P):
    return (theta + t) ** 2 / (2.0 * tau) + P * math.cos(t)


def _phi_fullcos_diff(t2, t3, theta, tau, P):
    """Phi(t3) - Phi(t2) as the path integral of Phi', cancellation-free."""
    def dphi(t):
        tr = np.real(t)
        return (theta + tr) / tau - P * np.sin(tr)
    return gauss_segment(dphi, complex(t2), complex(t3), 8).real


def _ua_coefficients(theta, tau, P):
    t2, t3, tbar = _fullcos_pair(theta, tau, P)
    dF = _phi_fullcos_diff(t2, t3, theta, tau, P)  # Phi3 - Phi2 (negative)
    A = _phi_fullcos(t2, theta, tau, P) + 0.5 * dF
    xi = -abs(0.75 * dF) ** (2.0 / 3.0)
    c2 = math.sqrt(t2 / abs(math.cos(tbar) - math.cos(t2)))
    c3 = math.sqrt(t3 / abs(math.cos(tbar) - math.cos(t3)))
    root = math.sqrt(2.0 / P) * math.pi
    g1 = root * abs(xi) ** 0.25 * (c2 + c3)
    g2 = root * abs(xi) ** -0.25 * (c3 - c2)
    return A, xi, g1, g2


_UA_LIMIT_CACHE = {}
_UA_MERGE_BAND = 1e-7  # relative distance to theta_r where the limit form takes over


def _ua_limit_coefficients(tau, P):
    """(G1, G2): the theta -> theta_r limits of (g1, g2).

    G1 has the closed form 2 pi [2/(P sin tb)]^(1/3) sqrt(tb); G2 tends to
    a finite constant (it vanishes only as P -> infinity) and is kept so
    the composite and the beyond-fold form join smoothly.  G2 is frozen
    from the composite just inside the fold, where its evaluation is still
    cancellation-free.
    """
    key = (tau, P)
    if key in _UA_LIMIT_CACHE:
        return _UA_LIMIT_CACHE[key]
    s = P * tau
    tbar, thr = _rainbow_geometry(s)
    G1 = 2.0 * math.pi * (2.0 / (P * math.sin(tbar))) ** (1.0 / 3.0) * math.sqrt(tbar)
    _, _, _, g2 = _ua_coefficients(thr * (1.0 - 1e-6), tau, P)
    _UA_LIMIT_CACHE[key] = (G1, g2)
    return G1, g2


def uniform_airy_3d_limit_form(theta, tau, P):
    """Fold-limit wave function: limit coefficients (G1, G2) on the
    rainbow Airy variable eta.  This is the beyond-fold branch of
    uniform_airy_3d, exposed separately; usable in a neighborhood of
    theta_r on either side."""
    s = P * tau
    tbar, thr = _rainbow_geometry(s)
    G1, G2 = _ua_limit_coefficients(tau, P)
    c = (2.0 / (P * math.sin(tbar))) ** (1.0 / 3.0)
    eta = c * (theta - thr) / tau
    A = _phi_fullcos(tbar, theta, tau, P)
    ai, aip = airy(max(min(eta, 20.0), -60.0))
    pref = 2.0 * cmath.sqrt(-1j * math.pi * tau / (2.0 * theta)) / (4j * tau * math.pi ** 1.5)
    return pref * cmath.exp(1j * A) * (G1 * ai - 1j * G2 * aip)


def uniform_airy_3d(theta, tau, P):
    """Uniform Airy rainbow wave function on the sphere.

    Inside the fold (theta < theta_r) the composite
      psi = pref * e^{iA} [g1 Ai(xi) - i g2 Ai'(xi)]
    uses the full-cosine stationary pair; at and beyond the fold the limit
    coefficients (G1, G2) ride the rainbow Airy variable eta.  The
    prefactor is 2 sqrt(-i pi tau / 2 theta) / (4 i tau pi^(3/2)); the
    factor 2 restores the azimuthal stationary-phase weight.  Diverges as
    1/sqrt(theta) toward the pole.
    """
    s = P * tau
    if s <= 1.0:
        raise ValueError("uniform_airy_3d requires P*tau > 1")
    if theta <= 0.0 or theta > math.pi:
        raise ValueError("uniform_airy_3d requires 0 < theta <= pi")
    tbar, thr = _rainbow_geometry(s)
    if theta >= thr * (1.0 - _UA_MERGE_BAND):
        return uniform_airy_3d_limit_form(theta, tau, P)
    A, xi, g1, g2 = _ua_coefficients(theta, tau, P)
    ai, aip = airy(max(min(xi, 20.0), -60.0))
    pref = 2.0 * cmath.sqrt(-1j * math.pi * tau / (2.0 * theta)) / (4j * tau * math.pi ** 1.5)
    return pref * cmath.exp(1j * A) * (g1 * ai - 1j * g2 * aip)


def uniform_airy_3d_coefficients(theta, tau, P):
    """(A, xi, g1, g2), exposed for the fold-merge diagnostics."""
    return _ua_coefficients(theta, tau, P)


def uniform_airy_norm(tau, P, n_grid=4000):
    """2 pi int |Psi_UA|^2 sin(theta) dtheta over (0, pi]."""
    grid = (np.arange(n_grid) + 0.5) * (math.pi / n_grid)
    vals = np.array([abs(uniform_airy_3d(t, tau, P)) ** 2 for t in grid])
    return float(2.0 * math.pi * np.sum(vals * np.sin(grid)) * (math.pi / n_grid))


# ----------------------------------------------------------------------
# Glory: uniform Bessel and Ford-Wheeler (quartic phase)
# ----------------------------------------------------------------------

def glory_angle_planar(tau, P):
    """Quartic-model glory feed angle theta_g = sqrt(6 (P tau - 1)/(P tau))."""
    s = P * tau
    if s <= 1.0:
        raise ValueError("glory exists only for P*tau > 1")
    return math.sqrt(6.0 * (s - 1.0) / s)


def _quartic_phase(t, theta, tau, P, azim_sign):
    # azim_sign = -1 on the phi0 = 0 branch, +1 on phi0 = pi
    return P * t ** 4 / 24.0 + 0.5 * (1.0 / tau - P) * t * t + azim_sign * theta * t / tau


def _quartic_glory_pair(theta, tau, P):
    """Stationary points flanking the quartic glory angle."""
    s = P * tau
    tg = glory_angle_planar(tau, P)
    if theta == 0.0:
        return tg, tg, tg
    f0 = lambda t: (P / 6.0) * t ** 3 + (1.0 / tau - P) * t - theta / tau
    fpi = lambda t: (P / 6.0) * t ** 3 + (1.0 / tau - P) * t + theta / tau
    t01 = _bisect(f0, tg, tg + 3.0)
    lo = tg / math.sqrt(3.0)  # quartic fold angle, where the pair is born
    if fpi(lo) > 0.0:
        raise ValueError("theta beyond the quartic rainbow; glory pair is gone")
    t02 = _bisect(fpi, lo, tg)
    return t01, t02, tg


def uniform_bessel_glory(theta, tau, P):
    """Uniform Bessel glory wave function (quartic planar phase),

      psi = e^{i(P + theta^2/2tau)}/(4 i pi^(3/2) tau)
            * 2 pi sqrt(2 pi tau) e^{i(a - chi)} [p+ J0(b) - i p- J1(b)],

    built from the stationary pair flanking the glory angle.  Valid for
    small theta; p+- diverge as theta approaches the quartic rainbow.
    """
    s = P * tau
    if s <= 1.0:
        raise ValueError("uniform_bessel_glory requires P*tau > 1")
    if theta < 0:
        raise ValueError("theta must be >= 0")
    t01, t02, tg = _quartic_glory_pair(theta, tau, P)
    F1 = _quartic_phase(t01, theta, tau, P, -1.0)
    F2 = _quartic_phase(t02, theta, tau, P, +1.0)
    a = 0.5 * (F2 + F1)
    b = 0.5 * (F2 - F1)
    D1 = (1.0 - s) + 0.5 * s * t01 * t01
    D2 = (1.0 - s) + 0.5 * s * t02 * t02
    chi = -0.25 * math.pi if D1 > 0 else 0.25 * math.pi
    if theta < 1e-12:
        pp = tg / math.sqrt(abs(D1))
        pm = 0.0
        b = 0.0
    else:
        base = 0.5 * math.sqrt(abs(b) * tau / theta)
        pp = base * (math.sqrt(t01 / abs(D1)) + math.sqrt(t02 / abs(D2)))
        pm = base * (math.sqrt(t01 / abs(D1)) - math.sqrt(t02 / abs(D2)))
    I = 2.0 * math.pi * math.sqrt(2.0 * math.pi * tau) * cmath.exp(1j * (a - chi)) \
        * (pp * bessel_j0(b) - 1j * pm * bessel_j1(b))
    pref = cmath.exp(1j * (P + theta * theta / (2.0 * tau))) / (4j * math.pi ** 1.5 * tau)
    return pref * I


def ford_wheeler_glory(theta, tau, P):
    """Glory limit form theta_g J0(theta_g theta / tau)/sqrt(D) with the
    quartic glory angle; agrees with uniform_bessel_glory as theta -> 0."""
    s = P * tau
    if s <= 1.0:
        raise ValueError("ford_wheeler_glory requires P*tau > 1")
    tg = glory_angle_planar(tau, P)
    D = 1.0 - s + 0.5 * s * tg * tg  # = 2 (s - 1) > 0
    a = _quartic_phase(tg, theta, tau, P, +1.0) * 0.5 + _quartic_phase(tg, theta, tau, P, -1.0) * 0.5
    chi = -0.25 * math.pi
    amp = tg * bessel_j0(tg * theta / tau) / math.sqrt(D)
    phase = cmath.exp(1j * (a - chi)) * cmath.exp(
        1j * (P + theta * theta / (2.0 * tau)
              + 0.5 * (1.0 / tau - P) * tg * tg + P * tg ** 4 / 24.0))
    return phase * amp / (1j * math.sqrt(2.0 * tau))


# ----------------------------------------------------------------------
# Stationary points of the quartic planar phase
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class StationaryPointSet3D:
    """Real stationary points of the quartic phase at one final angle.

    theta01 lives on the phi0 = 0 azimuth; theta02 (near the glory angle)
    and theta03 (the direct polar branch) on phi0 = pi.  Entries are None
    where the corresponding branch has no real root.
    """

    theta01: float | None
    theta02: float | None
    theta03: float | None
    phases: tuple


def _real_cubic_roots(c3, c1, c0):
    roots = np.roots([c3, 0.0, c1, c0])
    out = []
    for r in roots:
        if abs(r.imag) < 1e-9 * max(1.0, abs(r.real)):
            x = r.real
            # two Newton polishing steps
            for _ in range(2):
                fx = c3 * x ** 3 + c1 * x + c0
                dfx = 3.0 * c3 * x * x + c1
                if dfx != 0.0:
                    x -= fx / dfx
            out.append(x)
    return sorted(out)


def stationary_points_3d(theta, tau, P):
    """Classified real roots of P t^3/6 + (1/tau - P) t -+ theta/tau = 0."""
    if tau <= 0 or P <= 0:
        raise ValueError("stationary_points_3d requires tau, P > 0")
    s = P * tau
    c3 = P / 6.0
    c1 = 1.0 / tau - P
    # phi0 = 0 branch: constant -theta/tau; keep positive roots
    r0 = [r for r in _real_cubic_roots(c3, c1, -theta / tau) if r >= -1e-12]
    # phi0 = pi branch: constant +theta/tau
    rpi = [r for r in _real_cubic_roots(c3, c1, theta / tau) if r >= -1e-12]

    theta01 = theta02 = theta03 = None
    if s > 1.0:
        tg = glory_angle_planar(tau, P)
        if r0:
            theta01 = max(r0)
        if theta == 0.0:
            # the glory pair merges at tg; the direct branch sits at the pole
            theta01 = tg
            theta02 = tg
            theta03 = 0.0
        else:
            pos = sorted(r for r in rpi if r > 1e-12)
            if len(pos) == 2:
                theta03, theta02 = pos
            elif len(pos) == 1:
                theta03 = pos[0]
    else:
        if r0:
            theta01 = max(r0)
    phases = tuple(
        _quartic_phase(t, theta, tau, P, sgn)
        for t, sgn in ((theta01, -1.0), (theta02, 1.0), (theta03, 1.0))
        if t is not None
    )
    return StationaryPointSet3D(theta01=theta01, theta02=theta02,
                                theta03=theta03, phases=phases)


# ----------------------------------------------------------------------
# Validity annotations
# ----------------------------------------------------------------------

def annotate_validity(method, theta, tau, P):
    """Coarse inside/edge/outside window annotation for each approximation."""
    s = P * tau
    if method in ("pearcey", "pearcey2d"):
        if 0.7 <= s <= 1.25:
            return Validity.INSIDE
        return Validity.EDGE if s <= 1.45 else Validity.OUTSIDE
    if method in ("pearcey3d", "cusp3d"):
        if 1.0 <= s <= 1.4:
            return Validity.INSIDE
        return Validity.EDGE if 0.9 <= s <= 1.6 else Validity.OUTSIDE
    if method == "airy":
        if s <= 1.0:
            return Validity.OUTSIDE
        thr = rainbow_angle(s)
        w = airy_fringe_width(tau, P)
        d = abs(theta - thr)
        if d <= 2.0 * w:
            return Validity.INSIDE
        return Validity.EDGE if d <= 4.0 * w else Validity.OUTSIDE
    if method == "uniform-airy":
        if s <= 1.0 or theta <= 0:
            return Validity.OUTSIDE
        return Validity.INSIDE if theta >= 0.5 else Validity.EDGE
    if method == "uniform-bessel":
        if s <= 1.0:
            return Validity.OUTSIDE
        tg = glory_angle_planar(tau, P)
        thr_q = (2.0 / 3.0) * (s - 1.0) * math.sqrt(2.0 * (s - 1.0) / s)
        if theta < 0.6 * thr_q:
            return Validity.INSIDE
        return Validity.EDGE if theta < 0.85 * thr_q else Validity.OUTSIDE
    if method == "ford-wheeler":
        if s <= 1.0:
            return Validity.OUTSIDE
        if s <= 1.5 and theta * glory_angle_planar(tau, P) / tau < 6.0:
            return Validity.INSIDE
        return Validity.EDGE
    if method == "planar":
        return Validity.INSIDE if s <= 2.0 else Validity.EDGE
    raise ValueError(f"unknown method {method!r}")
