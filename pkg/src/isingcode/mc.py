"""Metropolis Monte Carlo for the random-bond Ising model.

Quenched disorder is averaged at the outer level: each realization owns
a private (seed, "disorder", i) / (seed, "spin", i) stream pair, runs
independently (optionally on a thread pool; the kernels release the
GIL), and results are reduced in realization order, so outputs are
bit-identical at any thread count.

Beyond beta*J = 15 Metropolis freezes; runs are replaced by a
deterministic greedy quench from the all-up state, which is the
clamped-boundary ground-state limit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from isingcode import _kernels
from isingcode.errors import NotBracketedError
from isingcode.exact import CouplingAssignment, beta_j_from_q
from isingcode.gf2 import BitVector
from isingcode.lattice import Boundary, Lattice2D, build_square_lattice
from isingcode.results import McEstimate, ScanCell, ScanResult, combine_disorder_estimates
from isingcode.rng import bernoulli_bitvector, stream

BETA_J_CAP = 15.0
N_BLOCKS = 16


@dataclass(frozen=True)
class McParams:
    linear_size: int
    boundary: Boundary
    beta_j: float
    disorder_p: float
    n_disorder: int = 1
    n_equilibration_sweeps: int = 500
    n_measure_sweeps: int = 1000
    measure_interval: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.disorder_p <= 0.5:
            raise ValueError(f"disorder_p = {self.disorder_p} outside [0, 1/2]")
        if min(self.n_disorder, self.n_equilibration_sweeps, self.n_measure_sweeps) < 1:
            raise ValueError("sweep and sample counts must be >= 1")
        if self.measure_interval < 1:
            raise ValueError("measure_interval must be >= 1")

    @property
    def n_measurements(self) -> int:
        return max(1, self.n_measure_sweeps // self.measure_interval)

    def lattice(self) -> Lattice2D:
        return build_square_lattice(self.linear_size, self.linear_size, self.boundary)


@dataclass(frozen=True)
class RunStats:
    """Thermal estimates from one Metropolis run on one bond sample."""

    center: McEstimate
    site_avg_abs: McEstimate
    m2: float
    m4: float
    m2_blocks: np.ndarray
    m4_blocks: np.ndarray


def sample_disorder(
    lattice: Lattice2D, p: float, rng: np.random.Generator, beta_j: float = 0.0, j: float = 1.0
) -> CouplingAssignment:
    """Independent -J bonds with probability p, reproducible per stream."""
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p = {p} outside [0, 1/2]")
    signs = bernoulli_bitvector(lattice.n_edges, p, rng)
    return CouplingAssignment(lattice, signs, beta=beta_j / j, j=j)


def _neighbor_tables(couplings: CouplingAssignment) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """(spins, nbrs, bonds, n_free); spins start all-up, ghost clamped last."""
    lat = couplings.lattice
    n_free = lat.width * lat.height
    ghost = lat.ghost
    n_spins = n_free + (1 if ghost is not None else 0)
    spins = np.ones(n_spins, dtype=np.int8)
    nbrs = np.empty((n_free, 4), dtype=np.int32)
    bonds = np.empty((n_free, 4), dtype=np.float64)
    for v in range(n_free):
        for d, e in enumerate(lat.vertex_edges[v]):
            a, b = lat.edges[e]
            nbrs[v, d] = b if a == v else a
            bonds[v, d] = couplings.edge_coupling(e)
    return spins, nbrs, bonds, n_free


def _blocked(series: np.ndarray) -> McEstimate:
    """Mean with a blocking error bar and a crude autocorrelation hint."""
    n = len(series)
    mean = float(series.mean())
    if n < 2:
        return McEstimate(mean, 0.0, max(n, 1))
    naive_var = float(series.var(ddof=1)) / n
    nb = min(N_BLOCKS, n)
    blocks = np.array([b.mean() for b in np.array_split(series, nb)])
    block_var = float(blocks.var(ddof=1)) / nb if nb > 1 else naive_var
    se = math.sqrt(max(block_var, 0.0))
    hint = block_var / naive_var if naive_var > 0 else 1.0
    return McEstimate(mean, se, n, autocorrelation_hint=hint)


def _run_stats(couplings: CouplingAssignment, params: McParams, rng: np.random.Generator) -> RunStats:
    spins, nbrs, bonds, n_free = _neighbor_tables(couplings)
    lat = couplings.lattice
    center = lat.center_site
    n_meas = params.n_measurements

    if couplings.beta_j > BETA_J_CAP:
        _kernels.greedy_quench(spins, nbrs, bonds, 16 * n_free)
        c = float(spins[center])
        m = float(spins[:n_free].mean())
        one = McEstimate(c, 0.0, 1)
        return RunStats(
            center=one,
            site_avg_abs=McEstimate(abs(m), 0.0, 1),
            m2=m * m,
            m4=m**4,
            m2_blocks=np.array([m * m]),
            m4_blocks=np.array([m**4]),
        )

    # Ordered start: decorrelates within a few sweeps in the disordered
    # phase and avoids the slow domain-wall coarsening a random start
    # suffers on the torus deep in the ordered phase.
    total_sweeps = params.n_equilibration_sweeps + n_meas * params.measure_interval
    rand = rng.random((total_sweeps, n_free))
    center_series, avg_series = _kernels.run_with_measurements(
        spins, nbrs, bonds, couplings.beta, rand,
        params.n_equilibration_sweeps, params.measure_interval, n_meas, center,
    )
    nb = min(N_BLOCKS, n_meas)
    m2_blocks = np.array([b.mean() for b in np.array_split(avg_series**2, nb)])
    m4_blocks = np.array([b.mean() for b in np.array_split(avg_series**4, nb)])
    return RunStats(
        center=_blocked(center_series),
        site_avg_abs=_blocked(np.abs(avg_series)),
        m2=float((avg_series**2).mean()),
        m4=float((avg_series**4).mean()),
        m2_blocks=m2_blocks,
        m4_blocks=m4_blocks,
    )


def metropolis_run(couplings: CouplingAssignment, params: McParams) -> McEstimate:
    """Open lattice: <s_center> with the +1-clamped boundary.
    Torus: <|m|> over all spins."""
    rng = stream(params.seed, "spin", 0)
    stats = _run_stats(couplings, params, rng)
    if couplings.lattice.boundary is Boundary.OPEN:
        return stats.center
    return stats.site_avg_abs


def _disorder_stats(
    lattice: Lattice2D, p: float, beta_j: float, params: McParams, threads: int = 1
) -> list[RunStats]:
    def one(i: int) -> RunStats:
        couplings = sample_disorder(lattice, p, stream(params.seed, "disorder", i), beta_j=beta_j)
        return _run_stats(couplings, params, stream(params.seed, "spin", i))

    indices = range(params.n_disorder)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, indices))
    return [one(i) for i in indices]


def disorder_averaged_m(
    lattice: Lattice2D,
    p: float,
    beta_j: float,
    params: McParams,
    observable: str = "auto",
    threads: int = 1,
) -> McEstimate:
    """Quenched mean of the order parameter over n_disorder bond samples.

    observable: "center" (open-lattice central spin), "site_average"
    (<|m|>), or "auto" (center on Open, site average on Torus).
    """
    if observable == "auto":
        observable = "center" if lattice.boundary is Boundary.OPEN else "site_average"
    stats = _disorder_stats(lattice, p, beta_j, params, threads)
    if observable == "center":
        return combine_disorder_estimates([s.center for s in stats])
    if observable == "site_average":
        return combine_disorder_estimates([s.site_avg_abs for s in stats])
    raise ValueError(f"unknown observable {observable!r}")


def _binder(m2: float, m4: float) -> float:
    return 1.0 - m4 / (3.0 * m2 * m2)


def binder_estimate(
    size: int, p: float, beta_j: float, params: McParams, threads: int = 1
) -> tuple[float, float]:
    """U = 1 - <m^4> / 3<m^2>^2 with a jackknife error bar.

    Moments are disorder-averaged before forming the ratio; the
    jackknife runs over disorder samples (over thermal blocks when
    n_disorder = 1).
    """
    lattice = build_square_lattice(size, size, Boundary.TORUS)
    stats = _disorder_stats(lattice, p, beta_j, params, threads)
    if len(stats) > 1:
        m2s = np.array([s.m2 for s in stats])
        m4s = np.array([s.m4 for s in stats])
    else:
        m2s, m4s = stats[0].m2_blocks, stats[0].m4_blocks
    u = _binder(float(m2s.mean()), float(m4s.mean()))
    n = len(m2s)
    if n < 2:
        return u, 0.0
    jack = np.array(
        [
            _binder(float(np.delete(m2s, i).mean()), float(np.delete(m4s, i).mean()))
            for i in range(n)
        ]
    )
    se = math.sqrt((n - 1) / n * float(((jack - jack.mean()) ** 2).sum()))
    return u, se


def _interpolate_crossing(
    xs: Sequence[float], d: Sequence[float], d_err: Sequence[float]
) -> tuple[float, float]:
    """First sign change of d(x), linearly interpolated, with the error
    propagated through the local slope."""
    for i in range(len(xs) - 1):
        if d[i] == 0.0:
            return xs[i], d_err[i] / max(abs(d[i + 1] - d[i]) / (xs[i + 1] - xs[i]), 1e-12)
        if d[i] * d[i + 1] < 0.0:
            slope = (d[i + 1] - d[i]) / (xs[i + 1] - xs[i])
            x_star = xs[i] - d[i] / slope
            sigma = math.hypot(d_err[i], d_err[i + 1])
            return x_star, sigma / abs(slope)
    raise NotBracketedError(f"no cumulant crossing inside [{xs[0]}, {xs[-1]}]")


def binder_crossing(
    sizes: Sequence[int],
    p: float,
    beta_j_values: Sequence[float],
    params: McParams,
    threads: int = 1,
) -> tuple[float, float]:
    """Critical beta*J from pairwise Binder-cumulant crossings."""
    if len(sizes) < 2:
        raise ValueError("need at least 2 sizes for a crossing")
    sizes = sorted(sizes)
    curves = {
        size: [binder_estimate(size, p, bj, params, threads) for bj in beta_j_values]
        for size in sizes
    }
    crossings = []
    for a, b in zip(sizes, sizes[1:]):
        d = [curves[b][k][0] - curves[a][k][0] for k in range(len(beta_j_values))]
        derr = [math.hypot(curves[b][k][1], curves[a][k][1]) for k in range(len(beta_j_values))]
        crossings.append(_interpolate_crossing(list(beta_j_values), d, derr))
    mean = sum(c for c, _ in crossings) / len(crossings)
    err = math.sqrt(sum(e**2 for _, e in crossings)) / len(crossings)
    return mean, err


def nishimori_scan(
    sizes: Sequence[int],
    p_values: Sequence[float],
    params: McParams,
    threads: int = 1,
) -> tuple[ScanResult, float, float]:
    """Binder cumulant along the Nishimori line p = q and its size
    crossing; returns (per-(p, size) scan, p_c, p_c error). The scan's
    y axis is the linear size."""
    if not all(0.0 < p < 0.5 for p in p_values):
        raise ValueError("p range must lie inside (0, 1/2)")
    sizes = sorted(sizes)
    scan = ScanResult(tuple(p_values), tuple(float(s) for s in sizes), y_axis="L")
    curves: dict[int, list[tuple[float, float]]] = {s: [] for s in sizes}
    for p in p_values:
        beta_j = beta_j_from_q(p)
        for size in sizes:
            u, se = binder_estimate(size, p, beta_j, params, threads)
            curves[size].append((u, se))
            scan.add(
                ScanCell(
                    p=p, y=float(size), mean=u, stderr=se,
                    n_disorder=params.n_disorder,
                    sweeps=params.n_equilibration_sweeps + params.n_measure_sweeps,
                    seed=params.seed,
                )
            )
    crossings = []
    for a, b in zip(sizes, sizes[1:]):
        # U_big - U_small flips from + (ordered, small p) to - (disordered).
        d = [curves[b][k][0] - curves[a][k][0] for k in range(len(p_values))]
        derr = [math.hypot(curves[b][k][1], curves[a][k][1]) for k in range(len(p_values))]
        crossings.append(_interpolate_crossing(list(p_values), d, derr))
    p_c = sum(c for c, _ in crossings) / len(crossings)
    err = math.sqrt(sum(e**2 for _, e in crossings)) / len(crossings)
    return scan, p_c, err


def phase_diagram_scan(
    size: int,
    p_values: Sequence[float],
    q_values: Sequence[float],
    params: McParams,
    boundary: Boundary = Boundary.TORUS,
    observable: str = "auto",
    threads: int = 1,
) -> ScanResult:
    """Disorder-averaged order parameter on a (p, q) grid, with
    beta*J = (1/2) ln((1-q)/q) per column; failed cells are recorded
    and the scan continues."""
    lattice = build_square_lattice(size, size, boundary)
    scan = ScanResult(tuple(p_values), tuple(q_values), y_axis="q")
    sweeps = params.n_equilibration_sweeps + params.n_measure_sweeps
    for p in p_values:
        for q in q_values:
            try:
                est = disorder_averaged_m(
                    lattice, p, beta_j_from_q(q), params, observable=observable, threads=threads
                )
                scan.add(
                    ScanCell(p=p, y=q, mean=est.mean, stderr=est.std_error,
                             n_disorder=params.n_disorder, sweeps=sweeps, seed=params.seed)
                )
            except Exception:
                scan.add(
                    ScanCell(p=p, y=q, mean=math.nan, stderr=math.nan,
                             n_disorder=params.n_disorder, sweeps=sweeps,
                             seed=params.seed, ok=False)
                )
    return scan


def extract_qth(scan: ScanResult, level: float = 0.5) -> list[tuple[float, Optional[float], Optional[float]]]:
    """Per p column, the q where the order parameter crosses ``level``
    (linear interpolation), with a propagated error; (p, None, None)
    when the column never crosses."""
    out = []
    for p in scan.p_values:
        qs, ms, es = [], [], []
        for q in scan.y_values:
            c = scan.cell(p, q)
            if c is not None and c.ok and not math.isnan(c.mean):
                qs.append(q)
                ms.append(c.mean - level)
                es.append(c.stderr)
        try:
            q_th, err = _interpolate_crossing(qs, ms, es)
            out.append((p, q_th, err))
        except NotBracketedError:
            out.append((p, None, None))
    return out
