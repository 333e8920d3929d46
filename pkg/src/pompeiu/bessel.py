"""Bessel functions J0 and J1 for real and complex arguments.

Power series inside |z| <= 12, large-argument (Hankel) expansion outside.
Both branches accept numpy arrays.  The splitting radius keeps the series
cancellation below ~1e-12 while the asymptotic remainder at |z| = 12 is
already below 1e-13, so the two branches agree well inside the 1e-10
tolerances used elsewhere.  Arguments in the left half plane are reflected
with J0(-z) = J0(z), J1(-z) = -J1(z).
"""

from __future__ import annotations

import numpy as np

SERIES_RADIUS = 12.0
_SERIES_TERMS = 48
_ASYMPTOTIC_TERMS = 19


def _series_j0(z: np.ndarray) -> np.ndarray:
    q = -(z * z) / 4.0
    term = np.ones_like(q)
    acc = np.ones_like(q)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        acc = acc + term
    return acc


def _series_j1(z: np.ndarray) -> np.ndarray:
    # J1(z) = (z/2) * sum_k (-z^2/4)^k / (k! (k+1)!)
    q = -(z * z) / 4.0
    term = np.ones_like(q)
    acc = np.ones_like(q)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + 1))
        acc = acc + term
    return acc * z / 2.0


def _asymptotic(nu: int, z: np.ndarray) -> np.ndarray:
    mu = 4 * nu * nu
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    sign_cycle = (1.0, 1.0, -1.0, -1.0)       # signs of the k-th term in (P, Q)
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0) / z
        s = sign_cycle[k % 4]
        if k % 2 == 0:
            p = p + s * term
        else:
            q = q + s * term
    omega = z - (nu / 2.0 + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * z)) * (p * np.cos(omega) - q * np.sin(omega))


def _eval(nu: int, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    flip = z.real < 0
    z[flip] = -z[flip]
    out = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS
    if small.any():
        out[small] = (_series_j0 if nu == 0 else _series_j1)(z[small])
    if (~small).any():
        out[~small] = _asymptotic(nu, z[~small])
    if nu == 1:
        out[flip] = -out[flip]
    return out[0] if scalar else out


def besselj0(z):
    """J0 at real or complex z (scalar or array)."""
    return _eval(0, z)


def besselj1(z):
    """J1 at real or complex z (scalar or array)."""
    return _eval(1, z)


def j1_over_z(z):
    """J1(z)/z, an even entire function with value 1/2 at z = 0."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    tiny = np.abs(z) < 1e-8
    if tiny.any():
        out[tiny] = 0.5 - z[tiny] ** 2 / 16.0
    rest = ~tiny
    if rest.any():
        out[rest] = besselj1(z[rest]) / z[rest]
    return out[0] if scalar else out


def sinc(z):
    """sin(z)/z with the removable singularity filled in; complex-safe."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    tiny = np.abs(z) < 1e-6
    if tiny.any():
        t2 = z[tiny] ** 2
        out[tiny] = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    rest = ~tiny
    if rest.any():
        out[rest] = np.sin(z[rest]) / z[rest]
    return out[0] if scalar else out


def ball3_profile(z):
    """(sin z - z cos z)/z^3, even and entire, value 1/3 at z = 0.

    This is the radial transform profile of the unit ball in three
    dimensions up to the 4*pi factor.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    small = np.abs(z) < 0.5
    if small.any():
        u2 = z[small] ** 2
        # sum_{k>=1} (-1)^{k+1} 2k u^{2k-2} / (2k+1)!
        term = np.full_like(u2, 1.0 / 3.0)
        acc = term.copy()
        for k in range(2, 12):
            term = term * (-u2) * (2 * k) / ((2 * k - 2) * (2 * k) * (2 * k + 1))
            acc = acc + term
        out[small] = acc
    rest = ~small
    if rest.any():
        zr = z[rest]
        out[rest] = (np.sin(zr) - zr * np.cos(zr)) / zr ** 3
    return out[0] if scalar else out
