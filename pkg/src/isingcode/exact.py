"""Exact small-instance engines: the ground truth for everything else.

Two independent routes to every quantity:

* the direct route enumerates vertex-spin configurations and sums
  Boltzmann weights of H = -sum_e J_e s_i s_j;
* the quantum route enumerates the X-loop group span{A_v} (the
  stabilizer expansion of the code state in the Z basis) and sums
  per-edge weights, never materializing any 2^M-dimensional object.

All weights are accumulated with a running max-shift, so ratios stay
finite at any beta. Loop configurations are packed into single 64-bit
words (edge counts here never exceed 64), and popcounts do the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from isingcode.errors import InstanceTooLargeError, UnsupportedBoundaryError
from isingcode.gf2 import BitVector
from isingcode.lattice import Boundary, Lattice2D, StringPath, shortest_boundary_path, torus_logical_loops
from isingcode.results import McEstimate, combine_disorder_estimates
from isingcode.rng import bernoulli_bitvector, stream

ENUM_BOUND = 25  # max free spins / independent loop generators
_CHUNK_BITS = 20

Q_MIN = 1e-6  # callers clamp q=0 (beta = inf) to this


def beta_j_from_q(q: float) -> float:
    """Nishimori change of variables: beta*J = (1/2) ln((1-q)/q)."""
    if not 0.0 < q <= 0.5:
        raise ValueError(f"q = {q} outside (0, 1/2]")
    return 0.5 * math.log((1.0 - q) / q)


def q_from_beta_j(beta_j: float) -> float:
    """Inverse map q = e^{-2 beta J} / (1 + e^{-2 beta J})."""
    x = math.exp(-2.0 * beta_j)
    return x / (1.0 + x)


@dataclass(frozen=True)
class CouplingAssignment:
    """Quenched +-J bond signs with inverse temperature.

    Bit e of ``signs`` set means J_e = -J (the flipped set E2);
    unset means J_e = +J.
    """

    lattice: Lattice2D
    signs: BitVector
    beta: float
    j: float = 1.0

    def __post_init__(self):
        if self.signs.length != self.lattice.n_edges:
            raise ValueError(
                f"sign vector length {self.signs.length} != edge count {self.lattice.n_edges}"
            )
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.j <= 0:
            raise ValueError("J must be > 0")

    @property
    def beta_j(self) -> float:
        return self.beta * self.j

    def edge_coupling(self, e: int) -> float:
        return -self.j if self.signs.bit(e) else self.j


def nishimori_coupling(lattice: Lattice2D, eta: BitVector, q: float, j: float = 1.0) -> CouplingAssignment:
    """RBIM couplings dual to a quenched error pattern at annealed noise q."""
    return CouplingAssignment(lattice, eta, beta=beta_j_from_q(q) / j, j=j)


@dataclass(frozen=True)
class CoherenceResult:
    """Even/odd loop-crossing weights and their normalized difference."""

    w_plus: float
    w_minus: float
    order: float


@dataclass(frozen=True)
class HomologyDistribution:
    """Probabilities of the four torus homology classes (mu, nu).

    ``class_prob[mu][nu]`` is the normalized probability; the
    un-normalized trivial-class weight (the fidelity F*) and the class
    log-weights are retained for proportionality checks.
    """

    class_prob: tuple[tuple[float, float], tuple[float, float]]
    trivial_class_weight: float
    log_class_weights: tuple[tuple[float, float], tuple[float, float]]

    def prob(self, mu: int, nu: int) -> float:
        return self.class_prob[mu][nu]

    @property
    def max_prob(self) -> float:
        return max(self.class_prob[0] + self.class_prob[1])


class _ShiftedSum:
    """Streaming sum of exp(a_i) with optional +-1 signs, max-shifted."""

    def __init__(self):
        self.shift = -math.inf
        self.total = 0.0
        self.signed = 0.0

    def add(self, a: np.ndarray, signs: Optional[np.ndarray] = None) -> None:
        if a.size == 0:
            return
        amax = float(a.max())
        if amax > self.shift:
            scale = math.exp(self.shift - amax) if self.shift > -math.inf else 0.0
            self.total *= scale
            self.signed *= scale
            self.shift = amax
        w = np.exp(a - self.shift)
        self.total += float(w.sum())
        if signs is not None:
            self.signed += float((signs * w).sum())

    @property
    def log_total(self) -> float:
        if self.total <= 0.0:
            return -math.inf
        return self.shift + math.log(self.total)

    @property
    def value(self) -> float:
        return math.exp(self.shift) * self.total


def _check_enum_bound(k: int, what: str) -> None:
    if k > ENUM_BOUND:
        raise InstanceTooLargeError(f"{what} = {k} exceeds the enumeration bound {ENUM_BOUND}")


def _iter_masks(generators: Sequence[int]) -> Iterator[np.ndarray]:
    """All XOR combinations of ``generators`` as uint64 arrays, in chunks.

    Deterministic order: index i yields XOR of generators at the set
    bits of i.
    """
    k = len(generators)
    low = generators[: min(k, _CHUNK_BITS)]
    high = generators[min(k, _CHUNK_BITS) :]
    base = np.zeros(1, dtype=np.uint64)
    for g in low:
        base = np.concatenate([base, base ^ np.uint64(g)])
    for hi in range(1 << len(high)):
        offset = 0
        for b, g in enumerate(high):
            if (hi >> b) & 1:
                offset ^= g
        yield base ^ np.uint64(offset)


def _loop_group_masks(lattice: Lattice2D) -> Iterator[np.ndarray]:
    gens = lattice.loop_generators()
    _check_enum_bound(len(gens), "independent loop generators")
    if lattice.n_edges > 64:
        raise InstanceTooLargeError(f"{lattice.n_edges} edges exceed the 64-bit packing limit")
    return _iter_masks([g.mask for g in gens])


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr).astype(np.int64)


# ---------------------------------------------------------------------------
# Direct route: vertex-spin enumeration
# ---------------------------------------------------------------------------


def _iter_spin_energies(couplings: CouplingAssignment) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (configs, energies) chunks; energy = sum_e J_e s_i s_j with
    boundary spins clamped to +1. Config bit v set means s_v = -1."""
    lat = couplings.lattice
    n = lat.width * lat.height
    _check_enum_bound(n, "free spins")
    ghost = lat.ghost
    edge_j = np.array([couplings.edge_coupling(e) for e in range(lat.n_edges)])

    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, 1 << n, chunk):
        c = np.arange(start, start + chunk, dtype=np.uint64)
        energy = np.zeros(chunk)
        for e, (a, b) in enumerate(lat.edges):
            ba = (c >> np.uint64(a)) & np.uint64(1) if a != ghost else np.uint64(0)
            bb = (c >> np.uint64(b)) & np.uint64(1) if b != ghost else np.uint64(0)
            sign = 1.0 - 2.0 * (ba ^ bb).astype(np.float64)
            energy += edge_j[e] * sign
        yield c, energy


def _direct_sum(couplings: CouplingAssignment) -> _ShiftedSum:
    acc = _ShiftedSum()
    for _, energy in _iter_spin_energies(couplings):
        acc.add(couplings.beta * energy)
    return acc


def log_partition_function_direct(couplings: CouplingAssignment) -> float:
    return _direct_sum(couplings).log_total


def partition_function_direct(couplings: CouplingAssignment) -> float:
    """Z[J] by brute-force summation over all free-spin configurations."""
    return _direct_sum(couplings).value


def magnetization_direct(couplings: CouplingAssignment, site: int) -> float:
    """Thermal average <s_site> with +1-clamped boundary."""
    lat = couplings.lattice
    if not 0 <= site < lat.n_vertices:
        raise IndexError(f"site {site} out of range")
    if site == lat.ghost:
        return 1.0
    acc = _ShiftedSum()
    for c, energy in _iter_spin_energies(couplings):
        s = 1.0 - 2.0 * ((c >> np.uint64(site)) & np.uint64(1)).astype(np.float64)
        acc.add(couplings.beta * energy, signs=s)
    return acc.signed / acc.total


# ---------------------------------------------------------------------------
# Quantum route: X-loop group expansion
# ---------------------------------------------------------------------------


def _loop_exponent(masks: np.ndarray, eta_mask: int, m: int, eta_weight: int, beta_j: float) -> np.ndarray:
    """beta * sum_e J_e (-1)^{g_e} for each loop configuration g, using
    only popcounts (valid because |J_e| is uniform)."""
    overlap = _popcount(masks & np.uint64(eta_mask))
    g_weight = _popcount(masks)
    return beta_j * (m - 2 * eta_weight - 2 * g_weight + 4 * overlap)


def _quantum_sum(couplings: CouplingAssignment) -> _ShiftedSum:
    lat = couplings.lattice
    acc = _ShiftedSum()
    eta, ew = couplings.signs.mask, couplings.signs.weight
    for masks in _loop_group_masks(lat):
        acc.add(_loop_exponent(masks, eta, lat.n_edges, ew, couplings.beta_j))
    return acc


def _spin_configs_per_cut(lattice: Lattice2D) -> int:
    """Spin configurations per edge cut: the global flip doubles the
    count on the torus; the clamped ghost removes it on the open patch."""
    return 2 if lattice.boundary is Boundary.TORUS else 1


def log_partition_function_quantum(couplings: CouplingAssignment) -> float:
    return _quantum_sum(couplings).log_total + math.log(
        _spin_configs_per_cut(couplings.lattice)
    )


def partition_function_quantum(couplings: CouplingAssignment) -> float:
    """Z[J] as the product-state / code-state inner product, evaluated by
    expanding the code state over its X-loop group."""
    return _quantum_sum(couplings).value * _spin_configs_per_cut(couplings.lattice)


def magnetization_quantum(couplings: CouplingAssignment, path: StringPath) -> float:
    """<s_n> as a string-operator matrix element: loop configurations
    crossing the string an odd number of times contribute with sign -1."""
    if not path.anchored:
        raise ValueError("string path must be anchored at the fixed boundary")
    lat = couplings.lattice
    if lat.boundary is not Boundary.OPEN:
        raise UnsupportedBoundaryError("string magnetization requires an open lattice")
    gamma = np.uint64(path.edge_set.mask)
    eta, ew = couplings.signs.mask, couplings.signs.weight
    acc = _ShiftedSum()
    for masks in _loop_group_masks(lat):
        a = _loop_exponent(masks, eta, lat.n_edges, ew, couplings.beta_j)
        parity = (_popcount(masks & gamma) & 1).astype(np.float64)
        acc.add(a, signs=1.0 - 2.0 * parity)
    return acc.signed / acc.total


# ---------------------------------------------------------------------------
# Two-channel coherence weights
# ---------------------------------------------------------------------------


def loop_parity_weights(
    lattice: Lattice2D, eta: BitVector, q: float, path: StringPath
) -> CoherenceResult:
    """Bernoulli-weighted loop sums W+/W- split by crossing parity with
    the string, and their coherence order parameter.

    W_sigma = sum over loop configurations g with crossing parity sigma
    of q^{|g xor eta|} (1-q)^{M - |g xor eta|}.
    """
    if not 0.0 < q <= 0.5:
        raise ValueError(f"q = {q} outside (0, 1/2]")
    if eta.length != lattice.n_edges:
        raise ValueError("eta length does not match the edge count")
    if not path.anchored:
        raise ValueError("string path must be anchored at the fixed boundary")
    m = lattice.n_edges
    log_r = math.log(q) - math.log(1.0 - q)
    gamma = np.uint64(path.edge_set.mask)
    eta_mask = np.uint64(eta.mask)
    acc_plus, acc_minus = _ShiftedSum(), _ShiftedSum()
    for masks in _loop_group_masks(lattice):
        d = _popcount(masks ^ eta_mask)
        a = d * log_r
        odd = (_popcount(masks & gamma) & 1).astype(bool)
        acc_plus.add(a[~odd])
        acc_minus.add(a[odd])
    log_wp = acc_plus.log_total + m * math.log(1.0 - q)
    log_wm = acc_minus.log_total + m * math.log(1.0 - q)
    top = max(log_wp, log_wm)
    a = math.exp(log_wp - top)
    b = math.exp(log_wm - top) if log_wm > -math.inf else 0.0
    order = (a - b) / (a + b)
    return CoherenceResult(w_plus=math.exp(log_wp), w_minus=math.exp(log_wm), order=order)


def coherence_scan_exact(
    lattice: Lattice2D,
    site: int,
    p: float,
    q: float,
    n_eta_samples: int,
    seed: int,
) -> McEstimate:
    """Quenched mean of the coherence order parameter over eta ~ Bernoulli(p)."""
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p = {p} outside [0, 1/2]")
    path = shortest_boundary_path(lattice, site)
    orders = []
    for i in range(n_eta_samples):
        eta = bernoulli_bitvector(lattice.n_edges, p, stream(seed, "eta", i))
        orders.append(loop_parity_weights(lattice, eta, q, path).order)
    return combine_disorder_estimates(
        [McEstimate(mean=o, std_error=0.0, n_samples=1) for o in orders]
    )


# ---------------------------------------------------------------------------
# Torus homology classes
# ---------------------------------------------------------------------------


def homology_distribution(lattice: Lattice2D, eta: BitVector, q: float) -> HomologyDistribution:
    """Class weights of the four torus homology sectors of ``eta``.

    Class (mu, nu) weight = sum over loop configurations g of the
    Bernoulli probability of the pattern g xor eta xor mu*Tx1 xor nu*Tx2.
    """
    if lattice.boundary is not Boundary.TORUS:
        raise UnsupportedBoundaryError("homology classes require a torus")
    if not 0.0 < q <= 0.5:
        raise ValueError(f"q = {q} outside (0, 1/2]")
    if eta.length != lattice.n_edges:
        raise ValueError("eta length does not match the edge count")
    m = lattice.n_edges
    log_r = math.log(q) - math.log(1.0 - q)
    tx1, tx2 = torus_logical_loops(lattice)
    log_w = [[0.0, 0.0], [0.0, 0.0]]
    for mu in (0, 1):
        for nu in (0, 1):
            t = eta.mask
            if mu:
                t ^= tx1.mask
            if nu:
                t ^= tx2.mask
            acc = _ShiftedSum()
            for masks in _loop_group_masks(lattice):
                acc.add(_popcount(masks ^ np.uint64(t)) * log_r)
            log_w[mu][nu] = acc.log_total + m * math.log(1.0 - q)
    flat = [log_w[0][0], log_w[0][1], log_w[1][0], log_w[1][1]]
    top = max(flat)
    weights = [[math.exp(log_w[mu][nu] - top) for nu in (0, 1)] for mu in (0, 1)]
    norm = sum(weights[0]) + sum(weights[1])
    probs = tuple(tuple(w / norm for w in row) for row in weights)
    return HomologyDistribution(
        class_prob=probs,
        trivial_class_weight=math.exp(log_w[0][0]),
        log_class_weights=tuple(tuple(row) for row in log_w),
    )


def fidelity_vs_partition_proportionality(
    lattice: Lattice2D, eta_samples: Sequence[BitVector], q: float
) -> float:
    """Max relative spread of F*[eta] / Z[J(eta)] across the samples.

    F* is the un-normalized trivial-class weight; Z is the direct-route
    torus partition function at the Nishimori inverse temperature. The
    ratio must be an eta-independent constant.
    """
    if lattice.boundary is not Boundary.TORUS:
        raise UnsupportedBoundaryError("this check is defined on the torus")
    log_ratios = []
    for eta in eta_samples:
        dist = homology_distribution(lattice, eta, q)
        log_f = dist.log_class_weights[0][0]
        log_z = log_partition_function_direct(nishimori_coupling(lattice, eta, q))
        log_ratios.append(log_f - log_z)
    mid = sum(log_ratios) / len(log_ratios)
    ratios = [math.exp(lr - mid) for lr in log_ratios]
    return (max(ratios) - min(ratios)) / (sum(ratios) / len(ratios))
