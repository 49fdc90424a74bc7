"""Two-channel bit-flip experiment on the code state.

The first channel's error pattern eta is quenched (it is what the face
measurement reveals) and sampled directly at Bernoulli(p); the second
channel is never sampled — its Bernoulli(q) sum is evaluated exactly on
small instances or through the random-bond Ising duality on large ones,
with beta*J = (1/2) ln((1-q)/q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from isingcode.errors import InstanceTooLargeError
from isingcode.exact import (
    ENUM_BOUND,
    beta_j_from_q,
    homology_distribution,
    loop_parity_weights,
    nishimori_coupling,
)
from isingcode.gf2 import BitVector
from isingcode.lattice import Boundary, Lattice2D, build_square_lattice, shortest_boundary_path
from isingcode.mc import McParams, _run_stats
from isingcode.results import McEstimate, combine_disorder_estimates
from isingcode.rng import bernoulli_bitvector, stream


@dataclass(frozen=True)
class ChannelSpec:
    """First-channel (quenched, measured) and second-channel (annealed,
    summed) flip probabilities."""

    p_quenched: float
    q_annealed: float

    def __post_init__(self):
        if not 0.0 <= self.p_quenched <= 0.5:
            raise ValueError(f"p = {self.p_quenched} outside [0, 1/2]")
        if not 0.0 < self.q_annealed <= 0.5:
            raise ValueError(f"q = {self.q_annealed} outside (0, 1/2]")

    @property
    def on_nishimori_line(self) -> bool:
        return abs(self.p_quenched - self.q_annealed) < 1e-12

    @property
    def beta_j(self) -> float:
        return beta_j_from_q(self.q_annealed)


@dataclass(frozen=True)
class SyndromeSet:
    """Faces whose checks anticommute with an error pattern."""

    flagged_faces: frozenset[int]

    def __len__(self) -> int:
        return len(self.flagged_faces)

    def __xor__(self, other: "SyndromeSet") -> "SyndromeSet":
        return SyndromeSet(self.flagged_faces ^ other.flagged_faces)


def sample_error_pattern(lattice: Lattice2D, p: float, rng) -> BitVector:
    """Independent X error on each edge qubit with probability p."""
    return bernoulli_bitvector(lattice.n_edges, p, rng)


def syndromes_of(lattice: Lattice2D, error: BitVector) -> SyndromeSet:
    """Face f is flagged iff the error overlaps its check support oddly."""
    if error.length != lattice.n_edges:
        raise ValueError("error length does not match the edge count")
    flagged = frozenset(
        f for f in range(len(lattice.faces))
        if lattice.face_support(f).overlap(error) % 2 == 1
    )
    return SyndromeSet(flagged)


def _exact_path_available(lattice: Lattice2D) -> bool:
    return len(lattice.loop_generators()) <= ENUM_BOUND and lattice.n_edges <= 64


def coherence_experiment(
    lattice: Lattice2D,
    site: int,
    spec: ChannelSpec,
    n_eta: int,
    mc_params: McParams,
    seed: int,
    threads: int = 1,
) -> McEstimate:
    """Quenched mean of the coherence order parameter O(p, q).

    Per sampled eta the order parameter is the even/odd loop-parity
    weight contrast, evaluated exactly when the instance fits the
    enumeration bound and through the Metropolis central-spin
    magnetization of the dual random-bond model otherwise. The eta
    stream matches the exact scan's (seed, "eta", i) streams.
    """
    exact_path = _exact_path_available(lattice)
    path = shortest_boundary_path(lattice, site) if exact_path else None
    estimates = []
    for i in range(n_eta):
        eta = sample_error_pattern(lattice, spec.p_quenched, stream(seed, "eta", i))
        if exact_path:
            order = loop_parity_weights(lattice, eta, spec.q_annealed, path).order
            estimates.append(McEstimate(order, 0.0, 1))
        else:
            couplings = nishimori_coupling(lattice, eta, spec.q_annealed)
            spins_rng = stream(seed, "spin", i)
            estimates.append(_run_stats(couplings, mc_params, spins_rng).center)
    return combine_disorder_estimates(estimates)


def threshold_experiment(
    linear_size: int,
    p_values,
    n_eta: int,
    seed: int,
) -> list[dict]:
    """Optimal-decoding success probability on the Nishimori line p = q.

    success(p) = mean over eta of the largest homology-class
    probability (maximum-likelihood over the four classes, computed by
    exact loop-group enumeration; torus sizes up to the bound only).
    """
    lattice = build_square_lattice(linear_size, linear_size, Boundary.TORUS)
    if len(lattice.loop_generators()) > ENUM_BOUND:
        raise InstanceTooLargeError(
            f"L = {linear_size} torus exceeds the exact homology bound"
        )
    def moments(vals):
        mean = sum(vals) / len(vals)
        var = sum((v - mean) ** 2 for v in vals) / max(len(vals) - 1, 1)
        return mean, math.sqrt(var / len(vals))

    rows = []
    for k, p in enumerate(p_values):
        if not 0.0 <= p <= 0.5:
            raise ValueError(f"p = {p} outside [0, 1/2]")
        q = max(p, 1e-6)  # p = 0 is noiseless; clamp the Bernoulli weight
        successes, corrects = [], []
        for i in range(n_eta):
            eta = sample_error_pattern(lattice, p, stream(seed, "eta", k, i))
            dist = homology_distribution(lattice, eta, q)
            successes.append(dist.max_prob)
            # Classes are labeled relative to eta, so (0, 0) is the class
            # the error actually belongs to.
            corrects.append(dist.prob(0, 0))
        s_mean, s_err = moments(successes)
        c_mean, c_err = moments(corrects)
        rows.append(
            {
                "p": p,
                "success_mean": s_mean,
                "success_stderr": s_err,
                "correct_mean": c_mean,
                "correct_stderr": c_err,
                "n_eta": n_eta,
                "L": linear_size,
            }
        )
    return rows


def threshold_knee(rows_by_size: dict[int, list[dict]]) -> tuple[float, float]:
    """Correctability-transition estimate from size crossings.

    The disorder-averaged true-class probability is scale-invariant at
    the transition, so curves for different sizes cross there. Returns
    the mean of all pairwise crossings and its propagated error.
    """
    from isingcode.mc import _interpolate_crossing

    sizes = sorted(rows_by_size)
    if len(sizes) < 2:
        raise ValueError("need at least 2 sizes for a crossing")
    grids = {s: [r["p"] for r in rows_by_size[s]] for s in sizes}
    if len({tuple(g) for g in grids.values()}) != 1:
        raise ValueError("size curves must share one p grid")
    ps = grids[sizes[0]]
    crossings = []
    for idx_a in range(len(sizes)):
        for idx_b in range(idx_a + 1, len(sizes)):
            a, b = rows_by_size[sizes[idx_a]], rows_by_size[sizes[idx_b]]
            d = [rb["correct_mean"] - ra["correct_mean"] for ra, rb in zip(a, b)]
            derr = [
                math.hypot(ra["correct_stderr"], rb["correct_stderr"])
                for ra, rb in zip(a, b)
            ]
            crossings.append(_interpolate_crossing(ps, d, derr))
    knee = sum(c for c, _ in crossings) / len(crossings)
    err = math.sqrt(sum(e**2 for _, e in crossings)) / len(crossings)
    return knee, err
