"""Slow, independent lattice-sum oracles used only by the tests.

Everything here works from the defining lattice sums/products at float64,
summing symmetric +-omega pairs so the tails fall off like 1/R^2.  Accuracy
is truncation-limited (~1e-5 at the default radii), which is exactly what
these are for: catching wrong prefactors, branches and signs in the fast
q-series paths, not validating eps-level accuracy (precision doubling and
the transformation laws take care of that).
"""

import numpy as np


def _half_lattice(tau: complex, radius: int) -> np.ndarray:
    """One representative of each +-pair of nonzero lattice points m*tau+n."""
    ms, ns = np.meshgrid(
        np.arange(-radius, radius + 1), np.arange(-radius, radius + 1),
        indexing="ij",
    )
    keep = (ms > 0) | ((ms == 0) & (ns > 0))
    return (ms[keep] * tau + ns[keep]).astype(complex)


def wp_lattice(z: complex, tau: complex, radius: int = 400) -> complex:
    w = _half_lattice(tau, radius)
    return 1 / z**2 + np.sum(1 / (z - w) ** 2 + 1 / (z + w) ** 2 - 2 / w**2)


def zeta_lattice(z: complex, tau: complex, radius: int = 400) -> complex:
    w = _half_lattice(tau, radius)
    return 1 / z + np.sum(2 * z**3 / ((z * z - w * w) * w * w))


def sigma_lattice(z: complex, tau: complex, radius: int = 400) -> complex:
    w = _half_lattice(tau, radius)
    return z * np.prod((1 - z * z / (w * w)) * np.exp(z * z / (w * w)))


def quasi_periods(tau: complex, radius: int = 400) -> tuple[complex, complex]:
    """(eta1, eta2) = (2 zeta(tau/2), 2 zeta(1/2)) for the lattice [tau, 1]."""
    return 2 * zeta_lattice(tau / 2, tau, radius), 2 * zeta_lattice(0.5, tau, radius)


def klein_lattice(r1: float, r2: float, tau: complex, radius: int = 400) -> complex:
    """Klein form: exp(-(r1 eta1 + r2 eta2) z / 2) * sigma(z), z = r1 tau + r2."""
    e1, e2 = quasi_periods(tau, radius)
    z = r1 * tau + r2
    return np.exp(-0.5 * (r1 * e1 + r2 * e2) * z) * sigma_lattice(z, tau, radius)


def g2g3_lattice(tau: complex, radius: int = 400) -> tuple[complex, complex]:
    w = _half_lattice(tau, radius)
    return 120 * np.sum(w**-4.0), 280 * np.sum(w**-6.0)
