"""Numba hot loops for the Metropolis sampler.

Spins are int8 in {-1, +1}; on the open lattice the last entry is the
clamped ghost spin (+1, never updated). ``nbrs[k, d]`` is the d-th
neighbor of free spin k and ``bonds[k, d]`` the coupling J_e on that
edge, so each edge appears once from each endpoint.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def metropolis_sweeps(spins, nbrs, bonds, beta, rand):
    """Sequential raster sweeps; rand has shape (n_sweeps, n_free)."""
    n_free = nbrs.shape[0]
    for t in range(rand.shape[0]):
        for k in range(n_free):
            h = 0.0
            for d in range(nbrs.shape[1]):
                h += bonds[k, d] * spins[nbrs[k, d]]
            d_e = 2.0 * spins[k] * h
            if d_e <= 0.0 or rand[t, k] < np.exp(-beta * d_e):
                spins[k] = -spins[k]


@njit(cache=True, nogil=True)
def greedy_quench(spins, nbrs, bonds, max_sweeps):
    """Deterministic energy descent: flip whenever it strictly lowers E."""
    n_free = nbrs.shape[0]
    for _ in range(max_sweeps):
        changed = False
        for k in range(n_free):
            h = 0.0
            for d in range(nbrs.shape[1]):
                h += bonds[k, d] * spins[nbrs[k, d]]
            if 2.0 * spins[k] * h < 0.0:
                spins[k] = -spins[k]
                changed = True
        if not changed:
            break


@njit(cache=True, nogil=True)
def run_with_measurements(spins, nbrs, bonds, beta, rand, n_equil, interval, n_meas, center):
    """Equilibrate, then record the center spin and the site-averaged
    magnetization every ``interval`` sweeps.

    rand must hold n_equil + n_meas * interval sweeps of uniforms.
    Returns (center_series, avg_series).
    """
    n_free = nbrs.shape[0]
    center_series = np.empty(n_meas)
    avg_series = np.empty(n_meas)
    metropolis_sweeps(spins, nbrs, bonds, beta, rand[:n_equil])
    pos = n_equil
    for i in range(n_meas):
        metropolis_sweeps(spins, nbrs, bonds, beta, rand[pos : pos + interval])
        pos += interval
        center_series[i] = spins[center]
        s = 0.0
        for k in range(n_free):
            s += spins[k]
        avg_series[i] = s / n_free
    return center_series, avg_series
