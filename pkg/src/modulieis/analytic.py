"""Floating-point lattice sums cross-checking the exact algebra.

Everything here works over the lattice Z + Z*tau in double precision:
the doubly periodic functions and their quasi-periods, weight-1
division values, and the chord-slope formula that ties the slope
invariants to those division values.  Sums run over symmetric shells
(max-norm order) restricted to |w| <= R, so odd powers of w cancel
exactly and the truncation error decays fast as R grows; an O(1/R)
bound is reported alongside each value.
"""

import cmath
import math

import numpy as np

from .errors import DegenerateTriple, PoleProximity, ZeroTorsionIndex


class LatticeConfig:
    """Lattice Z + Z tau with a truncation radius and tolerance."""

    __slots__ = ("tau", "level", "radius", "tol")

    def __init__(self, tau, level=1, radius=200.0, tol=1e-6):
        tau = complex(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        if radius < 10:
            raise ValueError("radius must be at least 10")
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        self.tau = tau
        self.level = level
        self.radius = float(radius)
        self.tol = float(tol)


class AnalyticReport:
    __slots__ = ("quantity", "value", "truncation_estimate", "residual")

    def __init__(self, quantity, value, truncation_estimate, residual):
        self.quantity = quantity
        self.value = value
        self.truncation_estimate = truncation_estimate
        self.residual = abs(residual)

    def to_json(self):
        def c2j(z):
            if isinstance(z, complex):
                return [z.real, z.imag]
            return z

        return {
            "quantity": self.quantity,
            "value": c2j(self.value),
            "truncation_estimate": self.truncation_estimate,
            "residual": self.residual,
        }

    def __repr__(self):
        return f"AnalyticReport({self.quantity}, residual={self.residual:.3e})"


class LatticeSums:
    """Cached symmetric-disk lattice for one configuration."""

    def __init__(self, cfg):
        self.cfg = cfg
        tau, R = cfg.tau, cfg.radius
        m_max = int(R / tau.imag) + 2
        n_max = int(R + abs(tau.real) * m_max) + 2
        ms, ns = np.meshgrid(
            np.arange(-m_max, m_max + 1), np.arange(-n_max, n_max + 1), indexing="ij"
        )
        w = ms * tau + ns
        absw = np.abs(w)
        mask = (absw <= R) & (absw > 0)
        order = np.argsort(absw[mask], kind="stable")
        self.omegas = w[mask][order]
        boundary = self.omegas[np.abs(self.omegas) > R - max(1.0, abs(tau))]
        self.tail_estimate = float(len(boundary)) / max(R * R, 1.0)
        self._eta = None

    # -- basic functions ---------------------------------------------------

    def _check_pole(self, z):
        tau = self.cfg.tau
        # distance to the lattice via reduction
        m = round(z.imag / tau.imag)
        z0 = z - m * tau
        n = round(z0.real)
        if abs(z0 - n) < max(self.cfg.tol, 1e-12):
            raise PoleProximity(f"probe {z} is within tolerance of the lattice")

    def zeta(self, z):
        """Weierstrass zeta by the regrouped absolutely convergent sum."""
        self._check_pole(z)
        w = self.omegas
        terms = z * z / ((z - w) * w * w)
        return 1.0 / z + complex(np.sum(terms))

    def wp(self, z):
        self._check_pole(z)
        w = self.omegas
        terms = 1.0 / ((z - w) ** 2) - 1.0 / (w * w)
        return 1.0 / (z * z) + complex(np.sum(terms))

    def wp_prime(self, z):
        self._check_pole(z)
        w = self.omegas
        terms = 1.0 / ((z - w) ** 3)
        return -2.0 * (1.0 / (z ** 3) + complex(np.sum(terms)))

    def eisenstein_even(self, k):
        """sum over nonzero w of w^-k for even k >= 4."""
        return complex(np.sum(self.omegas ** float(-k)))

    def curve_coefficients(self):
        """(a, b) with (wp')^2 / 4 = wp^3 + a wp + b."""
        return -15.0 * self.eisenstein_even(4), -35.0 * self.eisenstein_even(6)

    # -- quasi-periods -----------------------------------------------------

    def quasi_periods(self, probe=None):
        """(eta1, eta2): translation constants of zeta for 1 and tau."""
        if self._eta is not None and probe is None:
            return self._eta
        z = probe if probe is not None else 0.3725 + 0.2871j * self.cfg.tau
        eta1 = (self.zeta(z + 1) - self.zeta(z)) / 2.0
        eta2 = (self.zeta(z + self.cfg.tau) - self.zeta(z)) / 2.0
        if probe is None:
            self._eta = (eta1, eta2)
        return eta1, eta2


def weierstrass_functions(cfg, z, sums=None):
    """(wp, wp', zeta) at one probe, with a truncation report."""
    s = sums or LatticeSums(cfg)
    return s.wp(z), s.wp_prime(z), s.zeta(z)


def quasi_periods(cfg, sums=None):
    """(eta1, eta2) plus the residual of 2 eta1 tau - 2 eta2 = 2 pi i."""
    s = sums or LatticeSums(cfg)
    eta1, eta2 = s.quasi_periods()
    legendre = 2 * eta1 * cfg.tau - 2 * eta2 - 2j * math.pi
    return eta1, eta2, AnalyticReport("legendre", (eta1, eta2), s.tail_estimate, legendre)


def eisenstein_weight1(cfg, i, j, sums=None):
    """Weight-1 division value at alpha = (i tau + j) / level.

    zeta(alpha) - (i / level) 2 eta2 - (j / level) 2 eta1; well defined
    on the torsion class of (i, j).
    """
    ell = cfg.level
    if i % ell == 0 and j % ell == 0:
        raise ZeroTorsionIndex("(i, j) must be nonzero modulo the level")
    s = sums or LatticeSums(cfg)
    alpha = (i * cfg.tau + j) / ell
    eta1, eta2 = s.quasi_periods()
    return s.zeta(alpha) - (i / ell) * 2 * eta2 - (j / ell) * 2 * eta1


def check_slope_formula(cfg, alpha, beta, sums=None):
    """Residual of the chord-slope formula at gamma = -alpha - beta.

    -(1/2) (wp'(a) - wp'(b)) / (wp(a) - wp(b)) = zeta(a) + zeta(b) + zeta(c).
    If both probes are level-division points, the slope is also checked
    against the negated sum of weight-1 division values.
    """
    s = sums or LatticeSums(cfg)
    gamma = -alpha - beta
    wa, wb = s.wp(alpha), s.wp(beta)
    if abs(wa - wb) < 1e-9:
        raise DegenerateTriple("wp(alpha) = wp(beta); chord undefined")
    lhs = -0.5 * (s.wp_prime(alpha) - s.wp_prime(beta)) / (wa - wb)
    rhs = s.zeta(alpha) + s.zeta(beta) + s.zeta(gamma)
    primary = AnalyticReport("chord_slope_vs_zeta", lhs, s.tail_estimate, lhs - rhs)
    division = None
    ell = cfg.level
    ij_a = _division_index(cfg, alpha)
    ij_b = _division_index(cfg, beta)
    if ell > 1 and ij_a is not None and ij_b is not None:
        ij_c = (-ij_a[0] - ij_b[0], -ij_a[1] - ij_b[1])
        e1 = sum(
            eisenstein_weight1(cfg, i, j, s)
            for (i, j) in (ij_a, ij_b, ij_c)
        )
        # slope of the curve points (wp, wp'/2)
        slope = 0.5 * (s.wp_prime(alpha) - s.wp_prime(beta)) / (wa - wb)
        division = AnalyticReport(
            "division_slope_vs_weight1", slope, s.tail_estimate, slope + e1
        )
    return primary, division


def _division_index(cfg, z):
    """Integer (i, j) with z = (i tau + j) / level, or None."""
    ell = cfg.level
    w = z * ell
    i = round(w.imag / cfg.tau.imag)
    rem = w - i * cfg.tau
    j = round(rem.real)
    if abs(rem - j) < 1e-8 and abs(rem.imag - 0.0) < 1e-8 * (1 + abs(i)):
        return (i, j)
    return None
