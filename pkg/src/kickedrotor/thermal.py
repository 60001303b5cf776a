"""Classical 3D kicked-rotor ensembles at finite temperature.

Momenta are measured in units of the thermal momentum, so the initial
distribution is exp[-(p_theta'^2 + p_phi'^2/sin^2 theta)/2] with theta
distributed as sin(theta)/2.  Free motion conserves p_phi' and the energy
(p_theta'^2 + p_phi'^2/sin^2 theta)/2; cos(theta) evolves harmonically
with frequency omega = sqrt(p_theta'^2 + p_phi'^2/sin^2 theta(0)):

    cos theta(t') = cos theta0 cos(omega t')
                    - (p_theta'/omega) sin theta0 sin(omega t')

(the sign of the second term is fixed by theta_dot = +p_theta').  A kick
of strength P' adds -P' sin(theta) (dipole) or -P' sin(2 theta)
(polarization) to p_theta'.

Sampling uses a counter-based Philox generator keyed by (seed), so an
ensemble is reproducible regardless of how the work is split afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .classical import Coupling
from .profiles import DensityProfile

__all__ = [
    "ThermalEnsemble",
    "sample_ensemble",
    "kick",
    "evolve",
    "angular_histogram",
    "orientation_alignment",
]


@dataclass(frozen=True)
class ThermalEnsemble:
    """Particle arrays (theta, phi, p_theta, p_phi) plus kick strength."""

    theta: np.ndarray
    phi: np.ndarray
    p_theta: np.ndarray
    p_phi: np.ndarray
    kick_strength: float
    seed: int

    def __post_init__(self):
        n = len(self.theta)
        if n < 1:
            raise ValueError("ensemble needs at least one particle")
        for name in ("phi", "p_theta", "p_phi"):
            if len(getattr(self, name)) != n:
                raise ValueError("particle arrays must share one length")

    @property
    def n(self):
        return len(self.theta)

    def energy(self):
        """Per-particle free energy (p_theta'^2 + p_phi'^2/sin^2 theta)/2."""
        return 0.5 * (self.p_theta ** 2 + (self.p_phi / np.sin(self.theta)) ** 2)


def sample_ensemble(n, seed, kick_strength=1.0, temperature=1.0):
    """Draw n particles from the thermal equilibrium distribution.

    theta ~ sin(theta)/2 on [0, pi], phi uniform, p_theta' standard
    normal, and p_phi' normal with standard deviation sin(theta) (so the
    conjugate velocity p_phi'/sin theta is standard normal).
    temperature=0 collapses the momentum spread (the P' -> infinity
    limit, where only the product P' t' matters).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed))
    u = rng.random(n)
    theta = np.arccos(1.0 - 2.0 * u)
    phi = rng.random(n) * 2.0 * math.pi
    scale = math.sqrt(temperature)
    p_theta = rng.standard_normal(n) * scale
    p_phi = rng.standard_normal(n) * np.sin(theta) * scale
    return ThermalEnsemble(theta=theta, phi=phi, p_theta=p_theta, p_phi=p_phi,
                           kick_strength=float(kick_strength), seed=int(seed))


def kick(ensemble, coupling=Coupling.DIPOLE):
    """Instantaneous kick at the current positions: only p_theta changes."""
    P = ensemble.kick_strength
    if coupling is Coupling.POLARIZATION:
        dp = -P * np.sin(2.0 * ensemble.theta)
    else:
        dp = -P * np.sin(ensemble.theta)
    return replace(ensemble, p_theta=ensemble.p_theta + dp)


def evolve(ensemble, dt):
    """Free flight for dimensionless time dt (>= 0).

    cos(theta) rotates harmonically at each particle's omega; sin(theta)
    is recovered from the energy invariant and p_theta from the analytic
    time derivative, which also makes passage through a pole (possible
    only for p_phi = 0) reflect the momentum automatically.
    """
    if dt < 0:
        raise ValueError("dt must be >= 0")
    if dt == 0:
        return ensemble
    th0 = ensemble.theta
    p0 = ensemble.p_theta
    sin0 = np.sin(th0)
    omega = np.sqrt(p0 ** 2 + (ensemble.p_phi / sin0) ** 2)
    moving = omega > 0
    w = np.where(moving, omega, 1.0)
    c = np.cos(th0) * np.cos(w * dt) - (p0 / w) * sin0 * np.sin(w * dt)
    # d(cos theta)/dt, used to recover sin(theta) and the momentum sign
    cdot = -w * np.cos(th0) * np.sin(w * dt) - p0 * sin0 * np.cos(w * dt)
    c = np.clip(c, -1.0, 1.0)
    # energy invariant: sin^2(theta) = (cdot^2 + p_phi^2)/omega^2, which
    # stays well conditioned when the trajectory grazes a pole (the
    # direct sqrt(1 - c^2) loses half the digits there)
    sin_new = np.sqrt(cdot ** 2 + ensemble.p_phi ** 2) / w
    theta = np.arctan2(sin_new, c)
    safe = sin_new > 1e-300
    p_theta = np.where(safe, -cdot / np.where(safe, sin_new, 1.0), -p0)
    theta = np.where(moving, theta, th0)
    p_theta = np.where(moving, p_theta, p0)
    return replace(ensemble, theta=theta, p_theta=p_theta)


def angular_histogram(ensemble, bins):
    """Histogram of theta, normalized so sum(density * dtheta) = 1.

    This is the plotted f(theta): no 1/sin(theta) weighting, so the
    isotropic ensemble shows the sin(theta)/2 profile.
    """
    if bins < 2:
        raise ValueError("need at least 2 bins")
    counts, edges = np.histogram(ensemble.theta, bins=bins, range=(0.0, math.pi))
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    dens = counts / (ensemble.n * width)
    return DensityProfile(grid=centers, values=dens, geometry="sphere")


def orientation_alignment(ensemble):
    """(O, A) = (<1 - cos theta>, <1 - cos^2 theta>).

    Reductions use pairwise summation (numpy's default), so the result is
    independent of any outer parallel split of the particle arrays.
    """
    c = np.cos(ensemble.theta)
    O = float(np.mean(1.0 - c))
    A = float(np.mean(1.0 - c * c))
    return O, A
