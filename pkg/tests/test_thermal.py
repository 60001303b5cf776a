"""Thermal ensembles: sampling moments, free flight against an ODE
oracle, conservation laws, histograms, determinism."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from kickedrotor import thermal as th
from kickedrotor.classical import Coupling


@pytest.fixture(scope="module")
def big_ensemble():
    return th.sample_ensemble(10 ** 6, seed=2024)


class TestSampling:
    def test_isotropic_orientation(self, big_ensemble):
        O, A = th.orientation_alignment(big_ensemble)
        assert O == pytest.approx(1.0, abs=0.005)
        assert A == pytest.approx(2.0 / 3.0, abs=0.005)

    def test_unit_thermal_variance(self, big_ensemble):
        assert np.mean(big_ensemble.p_theta ** 2) == pytest.approx(1.0, abs=0.01)
        ratio = big_ensemble.p_phi / np.sin(big_ensemble.theta)
        assert np.mean(ratio ** 2) == pytest.approx(1.0, abs=0.01)

    def test_theta_marginal_matches_half_sine(self, big_ensemble):
        counts, edges = np.histogram(big_ensemble.theta, bins=50, range=(0, math.pi))
        centers = 0.5 * (edges[:-1] + edges[1:])
        dens = counts / (10 ** 6 * np.diff(edges))
        ref = np.sin(centers) / 2
        tol = 0.02 + 4.0 / np.sqrt(np.maximum(counts, 1))  # sampling noise
        assert np.all(np.abs(dens - ref) / ref < tol)

    def test_determinism(self):
        a = th.sample_ensemble(1000, seed=5)
        b = th.sample_ensemble(1000, seed=5)
        assert np.array_equal(a.theta, b.theta)
        assert np.array_equal(a.p_phi, b.p_phi)
        c = th.sample_ensemble(1000, seed=6)
        assert not np.array_equal(a.theta, c.theta)

    def test_zero_temperature(self):
        e = th.sample_ensemble(100, seed=1, temperature=0.0)
        assert np.all(e.p_theta == 0.0)
        assert np.all(e.p_phi == 0.0)


class TestKick:
    def test_zero_strength_identity(self):
        e = th.sample_ensemble(100, seed=1, kick_strength=0.0)
        k = th.kick(e)
        assert np.array_equal(k.p_theta, e.p_theta)

    def test_momentum_transfer(self):
        e = th.ThermalEnsemble(
            theta=np.array([math.pi / 2]), phi=np.array([0.0]),
            p_theta=np.array([0.0]), p_phi=np.array([0.0]),
            kick_strength=10.0, seed=0)
        assert th.kick(e).p_theta[0] == pytest.approx(-10.0)

    def test_positions_unchanged(self):
        e = th.sample_ensemble(50, seed=3, kick_strength=4.0)
        k = th.kick(e)
        assert np.array_equal(k.theta, e.theta)
        assert np.array_equal(k.phi, e.phi)
        assert np.array_equal(k.p_phi, e.p_phi)

    def test_polarization_double_angle(self):
        e = th.ThermalEnsemble(
            theta=np.array([0.3]), phi=np.array([0.0]),
            p_theta=np.array([0.0]), p_phi=np.array([0.0]),
            kick_strength=2.0, seed=0)
        k = th.kick(e, Coupling.POLARIZATION)
        assert k.p_theta[0] == pytest.approx(-2.0 * math.sin(0.6))


class TestEvolve:
    def test_zero_time_identity(self):
        e = th.sample_ensemble(10, seed=1)
        assert th.evolve(e, 0.0) is e

    def test_planar_rotation_when_p_phi_zero(self):
        c = 0.37
        e = th.ThermalEnsemble(
            theta=np.array([1.0]), phi=np.array([0.0]),
            p_theta=np.array([c]), p_phi=np.array([0.0]),
            kick_strength=1.0, seed=0)
        ev = th.evolve(e, 1.5)
        assert ev.theta[0] == pytest.approx(1.0 + c * 1.5, abs=1e-12)
        assert ev.p_theta[0] == pytest.approx(c, abs=1e-12)

    def test_zero_temperature_map(self):
        # kicked motionless rotor follows theta(t) = theta0 - P t sin(theta0)
        th0 = 1.1
        e = th.ThermalEnsemble(
            theta=np.array([th0]), phi=np.array([0.0]),
            p_theta=np.array([0.0]), p_phi=np.array([0.0]),
            kick_strength=3.0, seed=0)
        ev = th.evolve(th.kick(e), 0.2)
        assert ev.theta[0] == pytest.approx(th0 - 3.0 * 0.2 * math.sin(th0), abs=1e-12)

    def test_against_ode_oracle(self):
        # integrate theta'' = p_phi^2 cos/sin^3 directly
        th0, p0, pphi = 1.1, 0.7, 0.4
        e = th.ThermalEnsemble(
            theta=np.array([th0]), phi=np.array([0.0]),
            p_theta=np.array([p0]), p_phi=np.array([pphi]),
            kick_strength=1.0, seed=0)
        sol = solve_ivp(
            lambda t, y: [y[1], pphi ** 2 * math.cos(y[0]) / math.sin(y[0]) ** 3],
            (0.0, 2.0), [th0, p0], rtol=1e-11, atol=1e-13, dense_output=True)
        for t in (0.3, 1.0, 2.0):
            ev = th.evolve(e, t)
            ref_th, ref_p = sol.sol(t)
            assert ev.theta[0] == pytest.approx(ref_th, abs=1e-9)
            assert ev.p_theta[0] == pytest.approx(ref_p, abs=1e-8)

    def test_energy_and_p_phi_conserved(self, big_ensemble):
        e = th.kick(big_ensemble)
        e0 = e.energy()
        ev = th.evolve(e, 0.9)
        assert np.max(np.abs(ev.energy() - e0)) < 1e-9
        assert np.array_equal(ev.p_phi, e.p_phi)

    def test_pole_reflection(self):
        # p_phi = 0 particle passing theta = 0 reflects
        e = th.ThermalEnsemble(
            theta=np.array([0.3]), phi=np.array([0.0]),
            p_theta=np.array([-1.0]), p_phi=np.array([0.0]),
            kick_strength=1.0, seed=0)
        ev = th.evolve(e, 0.5)
        assert ev.theta[0] == pytest.approx(0.2, abs=1e-12)
        assert ev.p_theta[0] == pytest.approx(1.0, abs=1e-12)


class TestHistogram:
    def test_isotropic_half_sine(self, big_ensemble):
        prof = th.angular_histogram(big_ensemble, 50)
        width = prof.grid[1] - prof.grid[0]
        assert np.sum(prof.values) * width == pytest.approx(1.0, rel=1e-12)
        ref = np.sin(prof.grid) / 2
        counts = prof.values * (10 ** 6 * width)
        tol = 0.02 + 4.0 / np.sqrt(np.maximum(counts, 1))
        assert np.all(np.abs(prof.values - ref) / ref < tol)

    def test_focal_hole_at_strong_kick(self):
        # P' = 10 at P't' = 1: peak near the pole but a hole at theta = 0
        ens = th.sample_ensemble(10 ** 6, seed=42, kick_strength=10.0)
        ens = th.evolve(th.kick(ens), 0.1)
        prof = th.angular_histogram(ens, 400)
        peak_zone = prof.values[prof.grid < 0.3]
        assert prof.values[0] < 0.1 * peak_zone.max()
        assert peak_zone.max() == prof.values.max()

    def test_weak_kick_near_equilibrium(self):
        # P' = 1 bends the half-sine but produces no focal spike, unlike
        # the strong kick at the same P't'
        weak = th.sample_ensemble(200000, seed=7, kick_strength=1.0)
        weak = th.evolve(th.kick(weak), 1.0)
        strong = th.sample_ensemble(200000, seed=7, kick_strength=10.0)
        strong = th.evolve(th.kick(strong), 0.1)
        prof_w = th.angular_histogram(weak, 50)
        prof_s = th.angular_histogram(strong, 50)
        equilibrium_peak = 0.5
        assert prof_w.values.max() < 2.0 * equilibrium_peak
        assert prof_s.values.max() > 2.0 * prof_w.values.max()

    def test_rejects_single_bin(self):
        e = th.sample_ensemble(10, seed=1)
        with pytest.raises(ValueError):
            th.angular_histogram(e, 1)


class TestZeroTemperatureDegeneration:
    def test_histogram_matches_classical_density(self):
        # T = 0 ensemble kicked and evolved to P't' = 2 reproduces the
        # zero-temperature classical density at map strength s = 2
        from kickedrotor import classical as cl
        from scipy.integrate import quad
        s = 2.0
        ens = th.sample_ensemble(10 ** 6, seed=33, kick_strength=1.0,
                                 temperature=0.0)
        ens = th.evolve(th.kick(ens), s)
        prof = th.angular_histogram(ens, 100)
        width = prof.grid[1] - prof.grid[0]
        params = cl.MapParams(s, geometry=cl.Geometry.SPHERE_3D)
        thr = cl.rainbow_angle(s)
        for c0, val in zip(prof.grid, prof.values):
            if min(abs(c0), abs(c0 - thr)) < 0.12:
                continue
            ref = quad(lambda t: cl.density_classical(t, params)
                       * 2 * math.pi * math.sin(t),
                       c0 - width / 2, c0 + width / 2, limit=200)[0] / width
            counts = val * 10 ** 6 * width
            tol = 0.02 + 4.0 / math.sqrt(max(counts, 1.0))
            assert val == pytest.approx(ref, rel=tol)


class TestOrientationAlignment:
    def test_point_mass_at_pole(self):
        e = th.ThermalEnsemble(
            theta=np.zeros(4), phi=np.zeros(4),
            p_theta=np.zeros(4), p_phi=np.zeros(4),
            kick_strength=1.0, seed=0)
        O, A = th.orientation_alignment(e)
        assert O == 0.0 and A == 0.0

    def test_strong_kick_first_minimum(self):
        # P' = 10 squeezes O well below the isotropic value 1
        ens = th.sample_ensemble(200000, seed=9, kick_strength=10.0)
        ens = th.kick(ens)
        best = min(th.orientation_alignment(th.evolve(ens, t))[0]
                   for t in np.linspace(0.05, 0.3, 26))
        assert best < 0.3
