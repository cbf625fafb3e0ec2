"""Quadrature helpers used by the physics core.

Two schemes cover the integrals that occur here: spectrally convergent
trapezoid sums for smooth periodic integrands (azimuthal integrals), and
composite Gauss-Legendre panels for oscillatory radial integrands, with
panel widths tied to the oscillation period.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import QuadratureError


def periodic_trapezoid(
    f: Callable[[np.ndarray], np.ndarray],
    period: float = 2.0 * np.pi,
    rtol: float = 1e-10,
    atol: float = 1e-14,
    n0: int = 16,
    n_max: int = 1 << 18,
) -> np.ndarray:
    """Integrate a smooth periodic (vector-valued) integrand over one period.

    ``f`` must accept an array of sample points and return an array whose
    last axis matches it. Sample count doubles until two successive
    estimates agree to ``rtol``/``atol``; non-convergence raises
    QuadratureError with the achieved error estimate attached.
    """
    n = n0
    x = np.linspace(0.0, period, n, endpoint=False)
    prev = np.asarray(f(x)).sum(axis=-1) * (period / n)
    while n <= n_max:
        n *= 2
        x = np.linspace(0.0, period, n, endpoint=False)
        cur = np.asarray(f(x)).sum(axis=-1) * (period / n)
        err = float(np.max(np.abs(cur - prev)))
        scale = max(1.0, float(np.max(np.abs(cur))))
        if err <= max(atol, rtol * scale):
            return cur
        prev = cur
    raise QuadratureError("periodic quadrature did not converge", err)


def gauss_legendre_panels(a: float, b: float, n_panels: int, n_nodes: int = 12):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    xg, wg = np.polynomial.legendre.leggauss(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def oscillatory_panel_count(a: float, b: float, wavenumber: float, per_period: int = 4) -> int:
    """Panel count resolving oscillations of the given wavenumber on [a, b].

    At least ``per_period`` panels per oscillation period 2 pi / wavenumber;
    never fewer than one panel.
    """
    if wavenumber <= 0:
        return 1
    periods = (b - a) * wavenumber / (2.0 * np.pi)
    return max(1, int(np.ceil(per_period * periods)) + 1)


def band_nodes(
    a: float, b: float, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights for a smooth integral over [a, b]."""
    xg, wg = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * xg, half * wg
