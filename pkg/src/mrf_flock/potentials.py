"""Energy terms used to score candidate states.

Four potentials: attraction/repulsion over inter-agent distance (its minimum
defines the desired spacing), velocity alignment, control-input cost
(magnitude plus turn), and leader-velocity tracking. Lower energy means a
more desirable candidate. All functions broadcast over leading axes, with
vectors on the last axis, so they work on scalars and on candidate tables
alike.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Below this norm a vector has no usable direction; angles against it are
# defined as 0, the neutral (minimum-energy) choice.
ZERO_NORM_EPS = 1e-9


class NoMinimumError(ValueError):
    """The attraction/repulsion parameters admit no interior minimum."""


@dataclass(frozen=True)
class PotentialParams:
    """Amplitudes and length scales of the four energy terms.

    ``a, k_a`` shape attraction and ``b, k_r`` repulsion; ``a*k_r < b*k_a``
    must hold for a desired-distance minimum to exist. ``k_l`` scales
    alignment, ``k_c``/``k_d`` the input magnitude/turn costs, ``k_v`` the
    leader-velocity cost, and ``t_p`` is the planning horizon entering the
    alignment weight.
    """

    a: float
    b: float
    k_a: float
    k_r: float
    k_l: float
    k_c: float
    k_d: float
    k_v: float
    t_p: float

    def __post_init__(self):
        for name in ("a", "b", "k_a", "k_r", "k_l", "k_c", "k_d", "k_v", "t_p"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.a * self.k_r < self.b * self.k_a:
            raise ValueError("a*k_r < b*k_a must hold for a spacing minimum to exist")


def _norm(v) -> np.ndarray:
    return np.linalg.norm(v, axis=-1)


def _angle_from(dots, n1, n2):
    """Angle from precomputed dot products and norms (broadcasting)."""
    ok = (n1 >= ZERO_NORM_EPS) & (n2 >= ZERO_NORM_EPS)
    denom = np.where(ok, n1 * n2, 1.0)
    cos = np.where(ok, dots / denom, 1.0)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def _align_energy(d_i, angle, k_l):
    """Alignment energy from the travel weight and the misalignment angle."""
    return np.exp(d_i * angle / k_l)


def angle_between(v1, v2):
    """Angle in [0, pi] between vectors on the last axis.

    Defined as 0 when either vector's norm is below ZERO_NORM_EPS; the
    arccos argument is clamped so float overshoot cannot produce NaN.
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    angle = _angle_from(np.sum(v1 * v2, axis=-1), _norm(v1), _norm(v2))
    return float(angle) if angle.ndim == 0 else angle


def psi_attract_repulse(d, params: PotentialParams):
    """Spacing energy -a*exp(-d/k_a) + b*exp(-d/k_r) for distance d >= 0."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("distance must be non-negative")
    value = -params.a * np.exp(-d / params.k_a) + params.b * np.exp(-d / params.k_r)
    return float(value) if value.ndim == 0 else value


def desired_distance(params: PotentialParams) -> float:
    """The unique minimizer of the attraction/repulsion energy.

    Closed form: ln(b*k_a / (a*k_r)) / (1/k_r - 1/k_a). Requires
    a*k_r < b*k_a and k_r < k_a, otherwise there is no interior minimum.
    """
    if not (params.a * params.k_r < params.b * params.k_a and params.k_r < params.k_a):
        raise NoMinimumError(
            "attraction/repulsion parameters admit no minimum "
            "(need a*k_r < b*k_a and k_r < k_a)"
        )
    ratio = (params.b * params.k_a) / (params.a * params.k_r)
    return float(np.log(ratio) / (1.0 / params.k_r - 1.0 / params.k_a))


def psi_align(v_i, v_j, params: PotentialParams):
    """Alignment energy exp(d_i * angle / k_l) with d_i = |v_i| * t_p.

    The weight d_i is the distance agent i covers over the planning horizon,
    so misalignment costs more at speed.
    """
    v_i = np.asarray(v_i, dtype=float)
    d_i = _norm(v_i) * params.t_p
    value = _align_energy(d_i, angle_between(v_i, v_j), params.k_l)
    return float(value) if value.ndim == 0 else value


def psi_acc(u, u_last, params: PotentialParams):
    """Input cost exp(|u|/k_c) + exp(turn/k_d) against the previous input."""
    u = np.asarray(u, dtype=float)
    value = np.exp(_norm(u) / params.k_c) + np.exp(
        angle_between(u, u_last) / params.k_d
    )
    return float(value) if value.ndim == 0 else value


def psi_vel(v, v_leader, params: PotentialParams):
    """Leader-tracking energy exp(|v - v_leader| / k_v)."""
    v = np.asarray(v, dtype=float)
    v_leader = np.asarray(v_leader, dtype=float)
    value = np.exp(_norm(v - v_leader) / params.k_v)
    return float(value) if value.ndim == 0 else value
