"""Exact 2D quantum evolution against propagator quadrature and
closed-form focal values."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import jv

from kickedrotor import quantum2d as q2
from kickedrotor.classical import Coupling

TWO_PI = 2.0 * math.pi


def kicked_ground(P, coupling=Coupling.DIPOLE):
    return q2.apply_kick(q2.ground_packet(0), q2.KickSpec(P, coupling))


class TestGroundPacket:
    def test_normalized(self):
        g = q2.ground_packet(64)
        assert g.norm() == 1.0

    def test_uniform_density(self):
        g = q2.ground_packet(16)
        d = q2.density(g, np.linspace(0, TWO_PI, 200, endpoint=False))
        assert np.allclose(d.values, 1.0 / TWO_PI, atol=1e-14)

    def test_stationary_under_free_evolution(self):
        g = q2.ground_packet(8)
        ev = q2.free_evolve(g, 3.7)
        d0 = q2.density(g, np.linspace(0, TWO_PI, 64, endpoint=False)).values
        d1 = q2.density(ev, np.linspace(0, TWO_PI, 64, endpoint=False)).values
        assert np.allclose(d0, d1, atol=1e-15)


class TestApplyKick:
    def test_dipole_ground_reproduces_bessel_coefficients(self):
        P = 85.0
        packet = kicked_ground(P)
        n = packet.orders
        # i^n J_n(P) = i^|n| J_|n|(P) since i^(-n) (-1)^n = i^n
        expected = (1j) ** np.abs(n) * jv(np.abs(n), P)
        assert np.max(np.abs(packet.coeffs - expected)) < 1e-12

    def test_zero_strength_is_identity(self):
        g = q2.ground_packet(12)
        assert q2.apply_kick(g, q2.KickSpec(0.0)) is g

    def test_kick_is_pure_phase_at_time_zero(self):
        packet = kicked_ground(1.0)
        d = q2.density(packet, np.linspace(0, TWO_PI, 128, endpoint=False))
        assert np.allclose(d.values, 1.0 / TWO_PI, atol=1e-12)

    def test_norm_preserved(self):
        for P in (1.0, 20.0, 85.0):
            for c in (Coupling.DIPOLE, Coupling.POLARIZATION):
                packet = kicked_ground(P, c)
                assert abs(packet.norm() - 1.0) < 1e-10

    def test_polarization_even_harmonics_only(self):
        packet = kicked_ground(10.0, Coupling.POLARIZATION)
        n = packet.orders
        odd = packet.coeffs[n % 2 != 0]
        assert np.max(np.abs(odd)) == 0.0

    def test_polarization_against_projection_oracle(self):
        # c_n = (1/2pi) int e^{iP cos^2 th} e^{-i n th} dth
        P = 7.0
        packet = kicked_ground(P, Coupling.POLARIZATION)
        for n in (0, 2, 6):
            f = lambda t: np.exp(1j * (P * np.cos(t) ** 2 - n * t)) / TWO_PI
            re, _ = quad(lambda t: f(t).real, 0, TWO_PI, limit=200)
            im, _ = quad(lambda t: f(t).imag, 0, TWO_PI, limit=200)
            mine = packet.coeffs[n + packet.n_max]
            assert mine == pytest.approx(complex(re, im), abs=1e-10)


class TestFreeEvolve:
    def test_identity_at_zero(self):
        p = kicked_ground(10.0)
        ev = q2.free_evolve(p, 0.0)
        assert np.array_equal(ev.coeffs, p.coeffs)

    def test_full_revival(self):
        p = q2.free_evolve(kicked_ground(30.0), 0.37)
        rev = q2.free_evolve(p, q2.REVIVAL_PERIOD)
        grid = np.linspace(0, TWO_PI, 512, endpoint=False)
        d0 = q2.density(p, grid).values
        d1 = q2.density(rev, grid).values
        assert np.max(np.abs(d0 - d1)) < 1e-8

    def test_focal_peak_value(self):
        P = 85.0
        p = q2.free_evolve(kicked_ground(P), 1.0 / P)
        d0 = q2.density(p, np.array([0.0])).values[0]
        assert d0 == pytest.approx(0.4078 * math.sqrt(P), rel=0.05)

    def test_norm_conserved(self):
        p = q2.free_evolve(kicked_ground(50.0), 0.123)
        assert abs(p.norm() - 1.0) < 1e-10


class TestDensity:
    def test_parity_of_kicked_packet(self):
        p = q2.free_evolve(kicked_ground(40.0), 0.05)
        th = np.linspace(0.1, 3.0, 37)
        d1 = q2.density(p, th).values
        d2 = q2.density(p, TWO_PI - th).values
        assert np.max(np.abs(d1 - d2)) < 1e-10

    def test_norm_check_passes_on_fine_grid(self):
        p = q2.free_evolve(kicked_ground(20.0), 0.4)
        grid = np.linspace(0, TWO_PI, 4 * p.n_max + 8, endpoint=False)
        q2.density(p, grid, check_norm=True)

    def test_norm_check_rejects_coarse_grid(self):
        p = kicked_ground(20.0)
        with pytest.raises(q2.ResolutionError):
            q2.density(p, np.linspace(0, TWO_PI, 16, endpoint=False), check_norm=True)

    def test_two_symmetric_rainbow_maxima(self):
        # P = 85 at P tau = 2: maxima straddle +-theta_r(2)
        from kickedrotor.classical import rainbow_angle
        from kickedrotor.semiclassical import airy_fringe_width
        P = 85.0
        tau = 2.0 / P
        thr = rainbow_angle(2.0)
        w = airy_fringe_width(tau, P)
        p = q2.free_evolve(kicked_ground(P), tau)
        grid = np.linspace(0.05, TWO_PI - 0.05, 2400)
        d = q2.density(p, grid).values
        peak1 = grid[np.argmax(np.where(grid < np.pi, d, 0))]
        peak2 = grid[np.argmax(np.where(grid > np.pi, d, 0))]
        assert abs(peak1 - thr) < w
        assert abs(peak2 - (TWO_PI - thr)) < w
        assert abs((TWO_PI - peak2) - peak1) < 0.02  # mirror symmetry

    def test_fractional_revival_snapshot(self):
        # half-revival of the focused packet: structured, normalized, even
        P = 85.0
        p = q2.free_evolve(kicked_ground(P), 1.0 / P + q2.REVIVAL_PERIOD / 2)
        grid = np.linspace(0, TWO_PI, 4 * p.n_max + 8, endpoint=False)
        d = q2.density(p, grid, check_norm=True)
        assert d.values.max() > 3.0 * d.values.mean()
        sym = np.abs(d.values[1:] - d.values[1:][::-1])
        assert np.max(sym) < 1e-9


def _line_propagator_psi(theta, tau, P, n_periods=16):
    """Direct quadrature of the unrestricted free propagator applied to
    the kicked ground state:

      psi(th) = (1/(2 pi sqrt(i tau))) int dth0 e^{i(P cos th0
                + (th - th0)^2/(2 tau))},

    truncated W past the stationary zone (composite Gauss panels sized to
    the local phase slope) with two integration-by-parts boundary terms
    closing the Fresnel tails."""
    W = math.pi * math.ceil((P * tau + 12 * math.sqrt(tau) + n_periods * math.pi) / math.pi)
    xs, ws = np.polynomial.legendre.leggauss(24)
    slope = P + 2 * W / tau
    n_pan = max(64, int(slope * 2 * W / 5.0))
    edges = np.linspace(theta - W, theta + W, n_pan + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * (edges[1] - edges[0])
    t = (mid + half * xs[None, :]).ravel()
    f = np.exp(1j * (P * np.cos(t) + (theta - t) ** 2 / (2 * tau)))
    I = np.sum(f * np.broadcast_to(ws, (n_pan, 24)).ravel()) * half

    def boundary(u, order):
        th0 = theta + u
        g = np.exp(1j * P * np.cos(th0))
        gp = -1j * P * np.sin(th0) * g
        phase = np.exp(1j * u * u / (2 * tau))
        phi_p = u / tau
        if order == 1:
            return phase * g / (1j * phi_p)
        # second-order IBP term: d/du[g/(i phi')] / (i phi')
        d = (gp / (1j * phi_p) - g / (1j * phi_p ** 2) / tau) / (1j * phi_p)
        return phase * d

    tail = -boundary(W, 1) + boundary(-W, 1) + boundary(W, 2) - boundary(-W, 2)
    return (I + tail) / (2 * math.pi * np.sqrt(1j * tau))


class TestPropagatorOracle:
    def test_exact_matches_line_quadrature(self):
        P = 50.0
        tau = 1.0 / P
        p = q2.free_evolve(kicked_ground(P), tau)
        for th in (0.0, 0.3, 1.0, 2.0):
            exact = q2.density(p, np.array([th])).values[0]
            oracle = abs(_line_propagator_psi(th, tau, P)) ** 2
            assert exact == pytest.approx(oracle, abs=1e-6)
