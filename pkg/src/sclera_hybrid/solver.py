"""Hybrid arcs by exact event times, plus a forward-Euler reference.

Within a mode every concentration relaxes exponentially toward a constant
target, so the time at which a watched concentration reaches a switching
edge has a closed form. :func:`simulate` chains those closed-form flows
with jumps and never takes a numerical step. :func:`simulate_oracle`
integrates the same system with fixed Euler steps and exists only to
cross-check the exact path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    HybridArc,
    HybridState,
    HybridTime,
    JumpEvent,
    JumpPolicy,
    NetworkParams,
    Segment,
    Termination,
    TrajectoryVerdict,
)
from .dynamics import (
    WATCHED,
    flow_map,
    jump_map,
    jump_set_membership,
    mode_target,
    resolve_jump,
    switching_edge,
)


@dataclass(frozen=True)
class SolverConfig:
    t_max: float = 100.0
    j_max: int = 10_000
    zeno_jumps: int = 50
    zeno_time: float = 1e-9
    policy: JumpPolicy = JumpPolicy.LOWEST_INDEX
    seed: int = 0
    cycle_tol: float = 1e-6
    corner_tol: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "policy", JumpPolicy(self.policy))
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.j_max < 1:
            raise ValueError("j_max must be at least 1")
        if self.zeno_jumps < 2 or not self.zeno_time > 0:
            raise ValueError("zeno window needs at least 2 jumps and a positive time span")
        if not self.cycle_tol > 0:
            raise ValueError("cycle_tol must be positive")


@dataclass(frozen=True)
class OracleConfig:
    dt: float = 1e-4
    interpolation_order: int = 1  # 0: jump at the first step past an edge

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.interpolation_order not in (0, 1):
            raise ValueError("interpolation_order must be 0 or 1")


def crossing_time(x0: float, target: float, rate: float, level: float) -> Optional[float]:
    """First ``t > 0`` at which ``target + (x0 - target) exp(-rate t)`` equals ``level``.

    Returns ``None`` when the level is never reached, including when the
    flow starts on it.
    """
    if not rate > 0:
        raise ValueError("rate must be positive")
    if x0 == level:
        return None
    gap0 = x0 - target
    gap1 = level - target
    if gap0 == 0.0 or gap1 == 0.0 or (gap0 > 0) != (gap1 > 0):
        return None
    if abs(gap1) >= abs(gap0):
        return None
    return math.log(gap0 / gap1) / rate


def flow_closed_form(x0, target, rate, s: float) -> tuple[float, float, float]:
    return tuple(
        xi * math.exp(-ri * s) + ti * -math.expm1(-ri * s)
        for xi, ti, ri in zip(x0, target, rate)
    )


def effective_jump_set(z: HybridState, p: NetworkParams) -> frozenset[int]:
    """Jump-set membership used by :func:`simulate`.

    Identical to :func:`jump_set_membership` except on a zero-width
    hysteresis edge (``h_i == 0`` and the watched concentration exactly at
    ``th_i``), where both branches of ``D_i`` hold. There ``i`` counts only
    if the flow does not carry the watched concentration straight out of the
    branch selected by ``q_i``; otherwise every flip would land back in
    ``D_i`` and the run would chatter at one instant.
    """
    active = jump_set_membership(z, p)
    if not active:
        return active
    keep = set()
    velocity = None
    for i in active:
        th, h = p.theta[i - 1], p.h[i - 1]
        w = WATCHED[i]
        if h == 0.0 and z.x[w] == th:
            if velocity is None:
                velocity = flow_map(z, p)
            v = velocity[w]
            leaving = v > 0 if z.q[i - 1] else v < 0
            if leaving:
                continue
        keep.add(i)
    return frozenset(keep)


def _zeno_window_fires(jumps: list[JumpEvent], cfg: SolverConfig) -> bool:
    n = cfg.zeno_jumps
    return len(jumps) >= n and jumps[-1].time.t - jumps[-n].time.t <= cfg.zeno_time


def simulate(
    z0: HybridState,
    p: NetworkParams,
    cfg: SolverConfig = SolverConfig(),
    detect_cycles: bool = True,
) -> tuple[HybridArc, TrajectoryVerdict]:
    """Solve the hybrid system from ``z0`` with jump priority on ``C ∩ D``.

    Returns the arc and a verdict. When the run stops without reaching an
    equilibrium, the arc is scanned for a recurring post-jump state and the
    verdict is upgraded to a limit cycle if one is found; failing that, an
    orbit collapsing onto a switching corner is reported as a sliding
    equilibrium.
    """
    if not isinstance(z0, HybridState):
        raise TypeError("z0 must be a HybridState")
    if not isinstance(p, NetworkParams):
        raise TypeError("p must be NetworkParams")
    rng = np.random.default_rng(cfg.seed)

    t, j, z = 0.0, 0, z0
    seg_start, seg_state = HybridTime(0.0, 0), z0
    segments: list[Segment] = []
    jumps: list[JumpEvent] = []
    limit_point = None

    def close(end_t, end_x, cause):
        mode = mode_target(seg_state.q, p)
        segments.append(Segment(
            seg_start, HybridTime(end_t, j), seg_state, mode.target, mode.rate,
            tuple(end_x), cause,
        ))

    while True:
        active = effective_jump_set(z, p)
        if active:
            if j >= cfg.j_max:
                reason = Termination.ZENO if _zeno_window_fires(jumps, cfg) else Termination.HORIZON
                close(t, z.x, None)
                break
            i, z_next = resolve_jump(jump_map(z, active), cfg.policy, rng)
            close(t, z.x, i)
            jumps.append(JumpEvent(HybridTime(t, j), i, z.x, z.q, z_next.q))
            j += 1
            z = z_next
            seg_start, seg_state = HybridTime(t, j), z
            if _zeno_window_fires(jumps, cfg):
                reason = Termination.ZENO
                close(t, z.x, None)
                break
            continue

        mode = mode_target(z.q, p)
        events = {}
        for i in (1, 2, 3, 4):
            w = WATCHED[i]
            tc = crossing_time(z.x[w], mode.target[w], mode.rate[w],
                               switching_edge(i, z.q[i - 1], p))
            if tc is not None:
                events[i] = tc

        if not events:
            reason = Termination.EQUILIBRIUM
            limit_point = mode.target
            end_t = max(t, cfg.t_max)
            x_end = flow_closed_form(z.x, mode.target, mode.rate, end_t - t)
            t, z = end_t, z.with_x(x_end)
            close(t, x_end, None)
            break

        dt = min(events.values())
        if t + dt >= cfg.t_max:
            reason = Termination.HORIZON
            x_end = flow_closed_form(z.x, mode.target, mode.rate, cfg.t_max - t)
            t, z = cfg.t_max, z.with_x(x_end)
            close(t, x_end, None)
            break

        x_new = list(flow_closed_form(z.x, mode.target, mode.rate, dt))
        for i, tc in events.items():
            if tc == dt:
                x_new[WATCHED[i]] = switching_edge(i, z.q[i - 1], p)
        t += dt
        z = z.with_x(x_new)

    arc = HybridArc(segments, jumps, z, HybridTime(t, j), reason)
    counts = arc.jump_counts()
    if reason is Termination.EQUILIBRIUM:
        verdict = TrajectoryVerdict(reason, z, limit_point=limit_point, jump_counts=counts)
    else:
        cycle = corner = None
        if detect_cycles and arc.n_jumps >= 4:
            from .analysis import detect_chattering_equilibrium, detect_cycle
            cycle = detect_cycle(arc, cfg.cycle_tol)
            if cycle is None and reason is Termination.HORIZON:
                corner = detect_chattering_equilibrium(arc, cfg.corner_tol)
        if cycle is not None:
            verdict = TrajectoryVerdict(Termination.LIMIT_CYCLE, z, cycle=cycle, jump_counts=counts)
        elif corner is not None:
            verdict = TrajectoryVerdict(Termination.EQUILIBRIUM, z, limit_point=corner[0],
                                        jump_counts=counts, sliding=True,
                                        limit_spread=corner[1])
        else:
            verdict = TrajectoryVerdict(reason, z, jump_counts=counts)
    return arc, verdict


def simulate_oracle(
    z0: HybridState,
    p: NetworkParams,
    cfg: SolverConfig = SolverConfig(),
    ocfg: OracleConfig = OracleConfig(),
) -> HybridArc:
    """Forward-Euler reference solution.

    After every step the jump sets are evaluated and jumps applied with the
    configured policy; each index flips at most once per instant. With
    ``interpolation_order=1`` a step that crosses a switching edge is cut
    back to the crossing of the Euler polyline. The returned arc carries the
    step points in ``dense``.
    """
    rng = np.random.default_rng(cfg.seed)
    k, g = p.k, p.gamma
    x = list(z0.x)
    z = z0
    t, j = 0.0, 0
    ts, xs = [0.0], [tuple(x)]
    segments: list[Segment] = []
    jumps: list[JumpEvent] = []
    seg_start, seg_state = HybridTime(0.0, 0), z0
    reason = Termination.HORIZON

    def close(cause):
        mode = mode_target(seg_state.q, p)
        segments.append(Segment(seg_start, HybridTime(t, j), seg_state,
                                mode.target, mode.rate, tuple(x), cause))

    def settle():
        nonlocal z, j, seg_start, seg_state
        z = z.with_x(x)
        flipped = set()
        while True:
            active = jump_set_membership(z, p) - flipped
            if not active:
                return True
            if j >= cfg.j_max:
                return False
            i, z_next = resolve_jump(jump_map(z, active), cfg.policy, rng)
            close(i)
            jumps.append(JumpEvent(HybridTime(t, j), i, z.x, z.q, z_next.q))
            flipped.add(i)
            j += 1
            z = z_next
            seg_start, seg_state = HybridTime(t, j), z

    def watch_list():
        return [(WATCHED[i], z.q[i - 1], switching_edge(i, z.q[i - 1], p)) for i in (1, 2, 3, 4)]

    ok = settle()
    watches = watch_list()
    while ok and t < cfg.t_max:
        q1, q2, q3, q4 = z.q
        u = (q4, q1 * (1 - q3), q2 * (1 - q3))
        v = [k[n] * u[n] - g[n] * x[n] for n in range(3)]
        h = min(ocfg.dt, cfg.t_max - t)
        xn = [x[n] + h * v[n] for n in range(3)]
        if ocfg.interpolation_order == 1:
            best, snap = 1.0, []
            for w, qi, edge in watches:
                crossed = (x[w] > edge >= xn[w]) if qi else (x[w] < edge <= xn[w])
                if crossed:
                    frac = (edge - x[w]) / (xn[w] - x[w])
                    if frac < best:
                        best, snap = frac, [(w, edge)]
                    elif frac == best:
                        snap.append((w, edge))
            if snap:
                h *= best
                xn = [x[n] + h * v[n] for n in range(3)]
                for w, edge in snap:
                    xn[w] = edge
        x = [max(0.0, xi) for xi in xn]
        t += h
        ts.append(t)
        xs.append(tuple(x))
        if any((x[w] <= edge) if qi else (x[w] >= edge) for w, qi, edge in watches):
            ok = settle()
            watches = watch_list()

    if not ok:
        reason = Termination.ZENO if _zeno_window_fires(jumps, cfg) else Termination.HORIZON
    close(None)
    return HybridArc(segments, jumps, z.with_x(x), HybridTime(t, j), reason,
                     dense=(np.array(ts), np.array(xs)))
