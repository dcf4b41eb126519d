"""Flow map, jump sets and jump map of the scleral regulatory network.

Wiring (fixed):

* TIMP-2 (x1) is expressed while MMP-2 is high (q4).
* MT1-MMP (x2) is expressed while TIMP-2 is above th1 (q1) but not above
  th3 (q3).
* MMP-2 (x3) is expressed while MT1-MMP is above th2 (q2) and TIMP-2 is
  not above th3 (q3).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .core import Bits, HybridState, JumpPolicy, NetworkParams, Triple

# jump index -> coordinate (0-based) of the concentration it watches
WATCHED = {1: 0, 2: 1, 3: 0, 4: 2}


@dataclass(frozen=True)
class ModeDescriptor:
    q: Bits
    inputs: tuple[int, int, int]
    target: Triple
    rate: Triple


def effective_inputs(q: Bits) -> tuple[int, int, int]:
    q1, q2, q3, q4 = q
    return (q4, q1 * (1 - q3), q2 * (1 - q3))


def mode_target(q: Bits, p: NetworkParams) -> ModeDescriptor:
    """Per-coordinate fixed points ``k_i u_i / g_i`` of the mode ``q``."""
    u = effective_inputs(tuple(q))
    target = tuple(k * ui / g for k, ui, g in zip(p.k, u, p.gamma))
    return ModeDescriptor(tuple(q), u, target, p.gamma)


def flow_map(z: HybridState, p: NetworkParams) -> Triple:
    u1, u2, u3 = effective_inputs(z.q)
    return (
        p.k1 * u1 - p.g1 * z.x1,
        p.k2 * u2 - p.g2 * z.x2,
        p.k3 * u3 - p.g3 * z.x3,
    )


def switching_edge(i: int, qi: int, p: NetworkParams) -> float:
    """Level of the watched concentration at which ``q_i`` flips.

    A set bit switches off at the lower edge, a cleared bit switches on at
    the upper edge.
    """
    th, h = p.theta[i - 1], p.h[i - 1]
    return th - h if qi else th + h


def in_jump_set(i: int, z: HybridState, p: NetworkParams) -> bool:
    v = z.x[WATCHED[i]]
    qi = z.q[i - 1]
    edge = switching_edge(i, qi, p)
    return v <= edge if qi else v >= edge


def jump_set_membership(z: HybridState, p: NetworkParams) -> frozenset[int]:
    """Indices ``i`` with ``z`` in ``D_i`` (non-strict inequalities)."""
    return frozenset(i for i in (1, 2, 3, 4) if in_jump_set(i, z, p))


def jump_map(z: HybridState, active) -> dict[int, HybridState]:
    """Single-flip successors ``{i: g_i(z)}`` for every active index."""
    active = sorted(active)
    if not active:
        raise ValueError("jump map is undefined outside the jump set")
    for i in active:
        if i not in (1, 2, 3, 4):
            raise ValueError(f"no jump map with index {i}")
    return {i: z.flip(i) for i in active}


def resolve_jump(
    successors: Mapping[int, HybridState],
    policy: JumpPolicy = JumpPolicy.LOWEST_INDEX,
    rng: Optional[np.random.Generator] = None,
) -> tuple[int, HybridState]:
    """Pick one successor of the set-valued jump map.

    ``SEEDED_RANDOM`` draws uniformly from ``rng``, which the caller seeds
    once per run.
    """
    if not successors:
        raise ValueError("no successors to choose from")
    keys = sorted(successors)
    policy = JumpPolicy(policy)
    if policy is JumpPolicy.LOWEST_INDEX or len(keys) == 1:
        i = keys[0]
    else:
        if rng is None:
            raise ValueError("seeded random policy needs a generator")
        i = keys[int(rng.integers(len(keys)))]
    return i, successors[i]
