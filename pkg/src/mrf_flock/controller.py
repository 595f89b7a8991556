"""Mean-field screening controller over a Markov random field of candidates.

Each agent is a node whose random variable ranges over its feasible candidate
predictions. Unary energies score the input cost and leader-velocity
tracking; pairwise energies couple graph neighbors through spacing and
alignment terms evaluated on predicted states. A synchronous mean-field
sweep refines per-agent beliefs (every update reads only the previous
sweep's beliefs, so agents could run in parallel with a barrier between
sweeps); the command is the input of the maximum-belief candidate, low-pass
filtered against the previous command.

The leader is not controlled: followers see it as a neighbor with a single
candidate (its state propagated along its current velocity) held with
probability one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control_space import (
    CandidateSet,
    ControlCandidate,
    DiscretizationConfig,
    _braking_fallback,
    _enumerate_cached,
    _feasible_mask,
    _predict_batch,
    generate_candidates,
)
from ._kernels import pair_tables as _fast_pair_tables
from .dynamics import AgentState, Bounds, predict_state
from .potentials import (
    ZERO_NORM_EPS,
    PotentialParams,
    _align_energy,
    _angle_from,
    psi_acc,
    psi_align,
    psi_attract_repulse,
    psi_vel,
)

# Belief vectors are probability distributions over a candidate list,
# represented as plain 1-D arrays.
Belief = np.ndarray


class NumericFailureError(ArithmeticError):
    """All candidate energies of some agent became non-finite."""


@dataclass
class NeighborGraph:
    """Per-agent neighbor index lists plus the distinguished leader index.

    Follower lists hold the k nearest other followers (by distance, ties to
    the lower index) with the leader appended; the leader's own list is
    empty because it follows its reference unconditionally.
    """

    neighbors: list[np.ndarray]
    leader_index: int

    def __len__(self) -> int:
        return len(self.neighbors)

    def as_padded(self, fill: int = -1) -> np.ndarray:
        """(N, max_degree) neighbor indices padded with ``fill``."""
        width = max((len(n) for n in self.neighbors), default=0)
        out = np.full((len(self.neighbors), width), fill, dtype=int)
        for i, nbrs in enumerate(self.neighbors):
            out[i, : len(nbrs)] = nbrs
        return out


@dataclass(frozen=True)
class ControllerConfig:
    """Neighborhood size, filter coefficient, sweep budget, and sub-configs."""

    k: int
    alpha: float
    discretization: DiscretizationConfig
    potentials: PotentialParams
    bounds: Bounds
    iterations: int = 3
    epsilon_converge: float = 1e-4

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.epsilon_converge < 0:
            raise ValueError("epsilon_converge must be >= 0")


def build_neighbor_graph(positions, k: int, leader_index: int) -> NeighborGraph:
    """k-nearest-follower graph with the leader forced into every list.

    Ties in distance break toward the lower agent index. The leader's own
    neighbor list is empty.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[1] != 2:
        raise ValueError("positions must have shape (n_agents, 2)")
    if not np.all(np.isfinite(positions)):
        raise ValueError("positions must be finite")
    n = positions.shape[0]
    if n < 1:
        raise ValueError("need at least one agent")
    if not 0 <= leader_index < n:
        raise ValueError("leader_index out of range")
    if k < 0:
        raise ValueError("k must be >= 0")

    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    np.fill_diagonal(dist, np.inf)
    dist[:, leader_index] = np.inf

    n_followers = n - 1
    count = min(k, max(n_followers - 1, 0))
    cols = np.broadcast_to(np.arange(n), (n, n))
    order = np.lexsort((cols, dist), axis=-1)

    # Nearest followers first, the leader appended; one (n, count+1) block
    # sliced per row keeps this cheap when rebuilt every tick.
    block = np.empty((n, count + 1), dtype=int)
    block[:, :count] = order[:, :count]
    block[:, count] = leader_index
    neighbors: list[np.ndarray] = [
        np.empty(0, dtype=int) if i == leader_index else block[i]
        for i in range(n)
    ]
    return NeighborGraph(neighbors=neighbors, leader_index=leader_index)


def init_beliefs(candidate_counts) -> list[Belief]:
    """Uniform belief 1/count over each agent's candidate list."""
    beliefs = []
    for count in candidate_counts:
        if count < 1:
            raise ValueError("candidate counts must be >= 1")
        beliefs.append(np.full(int(count), 1.0 / int(count)))
    return beliefs


def leader_candidate_set(state: AgentState, horizon: float) -> CandidateSet:
    """The leader's single planned candidate: its state coasted over the horizon."""
    pred = predict_state(state, np.zeros(2), horizon)
    return CandidateSet(
        inputs=np.zeros((1, 2)),
        positions=pred.position[None, :].copy(),
        velocities=pred.velocity[None, :].copy(),
    )


def candidate_energy(
    state: AgentState,
    candidate: ControlCandidate,
    neighbor_beliefs,
    neighbor_candidates,
    v_leader,
    params: PotentialParams,
) -> float:
    """Total energy of one candidate: unary terms plus the belief-weighted
    expectation of the pairwise terms over each neighbor's candidates."""
    energy = psi_acc(candidate.input, state.last_input, params)
    energy += psi_vel(candidate.predicted.velocity, v_leader, params)
    for q, cset in zip(neighbor_beliefs, neighbor_candidates):
        d = np.linalg.norm(candidate.predicted.position - cset.positions, axis=-1)
        pair = psi_attract_repulse(d, params)
        pair = pair + psi_align(candidate.predicted.velocity, cset.velocities, params)
        energy += float(np.asarray(q, dtype=float) @ pair)
    return float(energy)


# ---------------------------------------------------------------------------
# Padded-array core shared by mean_field_sweep and control_step. Candidate
# lists are ragged, so they are padded to a common width with a validity
# mask; padded slots copy candidate 0 (finite values) and carry zero belief,
# which leaves every sum over valid slots unchanged.
# ---------------------------------------------------------------------------


@dataclass
class _TickTables:
    unary: np.ndarray      # (N, M) energies (constant neighbor messages folded in)
    fwd: np.ndarray        # (P, M, M) pair energies seen from pair_a
    rev: np.ndarray        # (P, M, M) pair energies seen from pair_b
    pair_a: np.ndarray     # (P,) lower agent of each unordered pair
    pair_b: np.ndarray     # (P,) upper agent of each unordered pair
    scatter: np.ndarray    # (N, 2P) one-hot over present directed messages
    valid: np.ndarray      # (N, M) candidate-slot mask


def _pad_sets(candidate_sets):
    counts = np.array([len(cs) for cs in candidate_sets], dtype=int)
    n, width = len(candidate_sets), int(counts.max())
    u = np.zeros((n, width, 2))
    p = np.zeros((n, width, 2))
    v = np.zeros((n, width, 2))
    valid = np.zeros((n, width), dtype=bool)
    for i, cs in enumerate(candidate_sets):
        c = len(cs)
        u[i, :c], p[i, :c], v[i, :c] = cs.inputs, cs.positions, cs.velocities
        if c < width:
            u[i, c:], p[i, c:], v[i, c:] = cs.inputs[0], cs.positions[0], cs.velocities[0]
        valid[i, :c] = True
    return u, p, v, valid


def _build_tables(last_inputs, u, p, v, valid, graph: NeighborGraph, v_leader, params):
    n, width = valid.shape
    counts = valid.sum(axis=1)
    unary = psi_acc(u, last_inputs[:, None, :], params)
    unary = unary + psi_vel(v, np.asarray(v_leader, dtype=float), params)

    speeds = np.sqrt(np.einsum("nmx,nmx->nm", v, v))
    d_i = speeds * params.t_p  # alignment weight: distance covered over t_p

    # Single-candidate neighbors (the leader) hold a pinned belief, so their
    # message never changes across sweeps; fold it into the unary term.
    fold_i: list[int] = []
    fold_j: list[int] = []
    directed: list[tuple[int, int]] = []
    for i, nbrs in enumerate(graph.neighbors):
        for j in nbrs:
            j = int(j)
            if counts[j] == 1:
                fold_i.append(i)
                fold_j.append(j)
            else:
                directed.append((i, j))

    if fold_i:
        fi = np.asarray(fold_i, dtype=int)
        fj = np.asarray(fold_j, dtype=int)
        dvec = p[fi] - p[fj, 0][:, None, :]
        dist = np.sqrt(np.einsum("fmx,fmx->fm", dvec, dvec))
        contrib = psi_attract_repulse(dist, params)
        dots = np.einsum("fmx,fx->fm", v[fi], v[fj, 0])
        angle = _angle_from(dots, speeds[fi], speeds[fj, 0][:, None])
        contrib = contrib + _align_energy(d_i[fi], angle, params.k_l)
        np.add.at(unary, fi, contrib)

    if directed:
        # Distance and misalignment tables are direction-symmetric; compute
        # them once per unordered pair and emit both directed views.
        keys = sorted({(min(i, j), max(i, j)) for i, j in directed})
        slot = {key: s for s, key in enumerate(keys)}
        n_pairs = len(keys)
        a = np.array([key[0] for key in keys], dtype=int)
        b = np.array([key[1] for key in keys], dtype=int)
        if _fast_pair_tables is not None:
            fwd, rev = _fast_pair_tables(
                np.ascontiguousarray(p[a]),
                np.ascontiguousarray(p[b]),
                np.ascontiguousarray(v[a]),
                np.ascontiguousarray(v[b]),
                np.ascontiguousarray(speeds[a]),
                np.ascontiguousarray(speeds[b]),
                np.ascontiguousarray(d_i[a]),
                np.ascontiguousarray(d_i[b]),
                params.a,
                params.b,
                params.k_a,
                params.k_r,
                params.k_l,
                ZERO_NORM_EPS,
            )
        else:
            dvec = p[a][:, :, None, :] - p[b][:, None, :, :]
            dist = np.sqrt(np.einsum("pmnx,pmnx->pmn", dvec, dvec))
            psi_a = psi_attract_repulse(dist, params)
            dots = np.einsum("pmx,pnx->pmn", v[a], v[b])
            angle = _angle_from(dots, speeds[a][:, :, None], speeds[b][:, None, :])
            fwd = psi_a + _align_energy(d_i[a][:, :, None], angle, params.k_l)
            rev = psi_a.transpose(0, 2, 1) + _align_energy(
                d_i[b][:, :, None], angle.transpose(0, 2, 1), params.k_l
            )
        scatter = np.zeros((n, 2 * n_pairs))
        for i, j in directed:
            if i < j:
                scatter[i, slot[(i, j)]] = 1.0
            else:
                scatter[i, n_pairs + slot[(j, i)]] = 1.0
    else:
        n_pairs = 0
        fwd = np.zeros((0, width, width))
        rev = np.zeros((0, width, width))
        a = np.zeros(0, dtype=int)
        b = np.zeros(0, dtype=int)
        scatter = np.zeros((n, 0))
    # Invalid slots carry +inf energy: exp(-inf) = 0, so they drop out of
    # the softmax and their beliefs stay exactly zero without extra masking.
    unary[~valid] = np.inf
    return _TickTables(
        unary=unary, fwd=fwd, rev=rev, pair_a=a, pair_b=b, scatter=scatter, valid=valid
    )


def _sweep(tables: _TickTables, q: np.ndarray):
    if len(tables.pair_a):
        # Message toward pair_a weights the forward table by pair_b's belief
        # and vice versa; the scatter matrix keeps only present directions.
        msg_f = np.einsum("pcd,pd->pc", tables.fwd, q[tables.pair_b])
        msg_r = np.einsum("pcd,pd->pc", tables.rev, q[tables.pair_a])
        energy = tables.unary + tables.scatter @ np.concatenate([msg_f, msg_r])
    else:
        energy = tables.unary
    # Shift by the per-agent minimum before exponentiating; the normalizer
    # absorbs the shift, so only numerical range changes.
    with np.errstate(invalid="ignore"):
        shift = np.min(energy, axis=1, keepdims=True)
        weights = np.exp(-(energy - shift))
        total = weights.sum(axis=1, keepdims=True)
        if not np.all(total > 0):
            raise NumericFailureError("all candidate energies became non-finite")
        q_new = weights / total
    return q_new, float(np.max(np.abs(q_new - q)))


def mean_field_sweep(states, beliefs, candidates, graph: NeighborGraph, v_leader, params):
    """One synchronous belief update across all agents.

    Every agent's new belief is the softmax of its negated candidate
    energies computed from the *previous* beliefs of its neighbors. Returns
    the new per-agent beliefs and the maximum absolute entry change.
    """
    for q, cs in zip(beliefs, candidates):
        q = np.asarray(q, dtype=float)
        if q.shape != (len(cs),):
            raise ValueError("belief length must match the candidate count")
        if abs(float(q.sum()) - 1.0) > 1e-6 or np.any(q < 0):
            raise ValueError("beliefs must be normalized and non-negative")
    u, p, v, valid = _pad_sets(candidates)
    last_inputs = np.stack([s.last_input for s in states])
    tables = _build_tables(last_inputs, u, p, v, valid, graph, v_leader, params)
    width = valid.shape[1]
    q = np.zeros((len(states), width))
    for i, belief in enumerate(beliefs):
        q[i, : len(belief)] = belief
    q_new, change = _sweep(tables, q)
    return [q_new[i, : len(c)].copy() for i, c in enumerate(candidates)], change


def select_input(belief: Belief, candidates: CandidateSet) -> np.ndarray:
    """Input of the maximum-belief candidate; ties go to the lower index."""
    belief = np.asarray(belief, dtype=float)
    if belief.shape != (len(candidates),):
        raise ValueError("belief length must match the candidate count")
    return np.array(candidates.inputs[int(np.argmax(belief))])


def smooth_input(u, u_last, alpha: float) -> np.ndarray:
    """First-order low-pass filter (1 - alpha) * u_last + alpha * u.

    alpha = 1 is accepted and bypasses the filter.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    u = np.asarray(u, dtype=float)
    u_last = np.asarray(u_last, dtype=float)
    return (1.0 - alpha) * u_last + alpha * u


def velocity_command(v, u_star, dt: float) -> np.ndarray:
    """Convert an acceleration command into a velocity command v + u* dt."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return np.asarray(v, dtype=float) + np.asarray(u_star, dtype=float) * dt


def control_step(states, graph: NeighborGraph, v_leader, config: ControllerConfig):
    """Screen candidates for every follower and return their filtered commands.

    Pipeline per tick: generate feasible candidates, start from uniform
    beliefs, run up to ``iterations`` synchronous mean-field sweeps (early
    stop once the largest belief change drops below ``epsilon_converge``),
    pick the maximum-belief input, and low-pass filter it against the
    follower's last applied input. Returns an (n_followers, 2) array ordered
    by ascending agent index, the leader excluded.
    """
    positions = np.stack([s.position for s in states])
    velocities = np.stack([s.velocity for s in states])
    last_inputs = np.stack([s.last_input for s in states])
    return control_step_arrays(positions, velocities, last_inputs, graph, v_leader, config)


def control_step_arrays(positions, velocities, last_inputs, graph, v_leader, config):
    """control_step on stacked (n_agents, 2) state arrays (the hot path)."""
    n = positions.shape[0]
    leader = graph.leader_index
    followers = np.array([i for i in range(n) if i != leader], dtype=int)
    disc, bounds = config.discretization, config.bounds
    horizon = disc.horizon

    if not (
        np.all(np.isfinite(positions))
        and np.all(np.isfinite(velocities))
        and np.all(np.isfinite(last_inputs))
    ):
        raise ValueError("agent states must be finite")

    inputs = _enumerate_cached(disc.n_a, disc.delta_u, disc.u_max)
    width = inputs.shape[0]
    pred_p, pred_v = _predict_batch(positions[followers], velocities[followers], inputs, horizon)
    valid_f = _feasible_mask(inputs, pred_v, bounds)
    for row in np.flatnonzero(~valid_f.any(axis=1)):
        best = _braking_fallback(
            np.linalg.norm(pred_v[row], axis=-1),
            float(np.linalg.norm(velocities[followers[row]])),
        )
        valid_f[row, best] = True

    u = np.broadcast_to(inputs, (n, width, 2)).copy()
    p = np.empty((n, width, 2))
    v = np.empty((n, width, 2))
    valid = np.zeros((n, width), dtype=bool)
    p[followers], v[followers] = pred_p, pred_v
    valid[followers] = valid_f

    # Leader slot 0: its state coasted over the horizon, held with belief 1.
    u[leader] = 0.0
    p[leader] = positions[leader] + velocities[leader] * horizon
    v[leader] = velocities[leader]
    valid[leader, 0] = True

    # Compact away invalid slots (stable order keeps enumeration order, so
    # tie-breaking matches the public per-agent ops).
    counts = valid.sum(axis=1)
    packed = int(counts.max())
    if packed < width:
        take = np.argsort(~valid, axis=1, kind="stable")[:, :packed]
        u = np.take_along_axis(u, take[:, :, None], axis=1)
        p = np.take_along_axis(p, take[:, :, None], axis=1)
        v = np.take_along_axis(v, take[:, :, None], axis=1)
        valid = np.arange(packed)[None, :] < counts[:, None]

    tables = _build_tables(last_inputs, u, p, v, valid, graph, v_leader, config.potentials)

    q = valid / counts[:, None]
    for _ in range(config.iterations):
        q, change = _sweep(tables, q)
        if change < config.epsilon_converge:
            break

    # argmax lands on a valid slot (invalid beliefs are exactly zero) and
    # slot order matches the compacted candidate order of the public ops.
    chosen = u[followers, np.argmax(q[followers], axis=1)]
    return smooth_input(chosen, last_inputs[followers], config.alpha)
