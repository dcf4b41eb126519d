"""Long-run behaviour: cycle detection, equilibrium labels, parameter sweeps."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .core import (
    PARAM_ALIASES,
    PARAM_FIELDS,
    CycleReport,
    HybridArc,
    HybridState,
    NetworkParams,
    Termination,
    TrajectoryVerdict,
)
from .solver import SolverConfig, simulate


def detect_cycle(
    arc: HybridArc, tol: float = 1e-6, min_amplitude: float = 1e-3
) -> Optional[CycleReport]:
    """Find a recurring post-jump state in ``arc``.

    A pair of jumps ``a < b`` qualifies when the post-jump states have the
    same logic variables and concentrations within ``tol`` (sup norm), and
    the ``b - a`` jumps that follow ``b`` repeat the jump indices of the
    window ``[a, b)`` with matched states again within ``tol``. The
    earliest ``a`` wins, and for it the smallest ``b``.

    Windows whose waypoints all lie within ``min_amplitude`` of each other
    are rejected: an orbit that small cannot be told apart from a spiral
    collapsing onto a switching corner.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    posts = arc.post_jump_states()
    n = len(posts)
    if n < 4:
        return None
    q = np.array([s.q for _, s in posts])
    x = np.array([s.x for _, s in posts])
    times = np.array([tm.t for tm, _ in posts])
    idx = np.array([ev.index for ev in arc.jumps])

    # spread of x[a:] for every a; once it drops below min_amplitude no
    # later window can qualify either
    suffix_amp = np.max(
        np.maximum.accumulate(x[::-1])[::-1] - np.minimum.accumulate(x[::-1])[::-1], axis=1
    )

    for a in range(n - 1):
        if suffix_amp[a] < min_amplitude:
            break
        # b may range up to the point where a full repeat still fits
        hi = (n + a) // 2
        if hi <= a:
            break
        dist = np.max(np.abs(x[a + 1:hi + 1] - x[a]), axis=1)
        same_q = np.all(q[a + 1:hi + 1] == q[a], axis=1)
        cand = np.flatnonzero((dist <= tol) & same_q)
        if cand.size == 0:
            continue
        # spread of the window x[a:b] for every candidate b, nondecreasing in b
        run = x[a:a + cand[-1] + 1]
        amp = np.max(np.maximum.accumulate(run) - np.minimum.accumulate(run), axis=1)
        for b in cand[amp[cand] >= min_amplitude] + a + 1:
            m = b - a
            if not np.array_equal(idx[b:b + m], idx[a:b]):
                continue
            if not np.array_equal(q[b:b + m], q[a:b]):
                continue
            residual = float(np.max(np.abs(x[b:b + m] - x[a:b])))
            if residual > tol:
                continue
            period = float(times[b] - times[a])
            if not period > 0:
                continue
            return CycleReport(
                period=period,
                jumps_per_period=int(m),
                waypoints=posts[a:b],
                residual=residual,
                q_sequence=tuple(int(i) for i in idx[a:b]),
            )
    return None


def detect_chattering_equilibrium(
    arc: HybridArc, tol: float = 1e-3, windows: int = 4
) -> Optional[tuple[tuple[float, float, float], float]]:
    """Limit point of an arc spiralling into a corner of the switching surfaces.

    With zero-width hysteresis a solution can switch forever while its
    orbit shrinks onto a point that is not the target of any single mode.
    Looks at the trailing sequence of (jump index, post-jump logic state):
    it must repeat with some period
    ``P`` over the last ``windows`` windows, the spread of the post-jump
    concentrations must shrink strictly from window to window, and the last
    spread must be at most ``tol``. Returns ``(limit_point, spread)``, the
    limit point being the centre of the last window's bounding box.
    """
    posts = arc.post_jump_states()
    n = len(posts)
    pattern = [(ev.index, s.q) for ev, (_, s) in zip(arc.jumps, posts)]
    x = np.array([s.x for _, s in posts])
    for period in range(1, n // windows + 1):
        tail = pattern[n - windows * period:]
        if tail != tail[period:] + tail[-period:]:
            continue
        chunks = [x[n - (w + 1) * period:n - w * period] for w in reversed(range(windows))]
        spreads = [float(np.max(np.ptp(c, axis=0))) for c in chunks]
        if not all(s1 < s0 for s0, s1 in zip(spreads, spreads[1:])):
            return None
        if spreads[-1] > tol:
            return None
        last = chunks[-1]
        centre = (last.min(axis=0) + last.max(axis=0)) / 2
        return tuple(float(v) for v in centre), spreads[-1]
    return None


class EquilibriumLabel(str, enum.Enum):
    EXTINCTION = "Extinction"
    SATURATION = "Saturation"
    MIXED = "Mixed"


def classify_equilibrium(verdict: TrajectoryVerdict, p: NetworkParams) -> EquilibriumLabel:
    if verdict.kind is not Termination.EQUILIBRIUM or verdict.limit_point is None:
        raise ValueError(f"not an equilibrium verdict: {verdict.kind.value}")
    xs = tuple(verdict.limit_point)
    if xs == (0.0, 0.0, 0.0):
        return EquilibriumLabel.EXTINCTION
    if xs == tuple(k / g for k, g in zip(p.k, p.gamma)):
        return EquilibriumLabel.SATURATION
    return EquilibriumLabel.MIXED


@dataclass(frozen=True)
class Axis:
    """Evenly spaced values of one parameter (or alias ``k``, ``g``, ``h``)."""

    name: str
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.name not in PARAM_FIELDS and self.name not in PARAM_ALIASES:
            raise ValueError(f"unknown sweep axis {self.name!r}")
        if int(self.num) < 1:
            raise ValueError(f"axis {self.name!r} has an empty range")
        object.__setattr__(self, "num", int(self.num))

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class SweepCell:
    index: int
    values: dict
    kind: Optional[str] = None
    label: Optional[str] = None
    limit_point: Optional[tuple] = None
    period: Optional[float] = None
    n_jumps: int = 0
    error: Optional[str] = None

    def summary(self) -> str:
        if self.error:
            return self.error
        if self.limit_point is not None:
            return "x*=(" + ",".join(f"{v:.6g}" for v in self.limit_point) + ")"
        if self.period is not None:
            return f"T={self.period:.9g}"
        return ""


@dataclass
class SweepGrid:
    axes: list[Axis]
    cells: list[SweepCell] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.num for a in self.axes)

    def kinds(self) -> np.ndarray:
        return np.array([c.kind for c in self.cells], dtype=object).reshape(self.shape)


def _run_cell(args) -> SweepCell:
    index, values, base, z0, cfg = args
    try:
        p = base.updated(**values)
        _, verdict = simulate(z0, p, cfg)
    except Exception as exc:  # recorded per cell, the sweep carries on
        return SweepCell(index, values, error=f"{type(exc).__name__}: {exc}")
    label = limit = period = None
    if verdict.kind is Termination.EQUILIBRIUM:
        label = classify_equilibrium(verdict, p).value
        limit = tuple(verdict.limit_point)
    elif verdict.cycle is not None:
        period = verdict.cycle.period
    return SweepCell(index, values, verdict.kind.value, label, limit, period,
                     sum(verdict.jump_counts.values()))


def sweep(
    base: NetworkParams,
    axes: Sequence[Axis],
    z0: HybridState,
    cfg: SolverConfig = SolverConfig(),
    workers: int = 1,
) -> SweepGrid:
    """Simulate every cell of the Cartesian grid spanned by ``axes``.

    Cells are numbered row-major (last axis fastest) and returned in that
    order whatever the worker count.
    """
    axes = list(axes)
    if not axes:
        raise ValueError("sweep needs at least one axis")
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ValueError("duplicate sweep axis")
    jobs = [
        (n, {name: float(v) for name, v in zip(names, combo)}, base, z0, cfg)
        for n, combo in enumerate(product(*(a.values for a in axes)))
    ]
    if workers <= 1:
        cells = [_run_cell(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_run_cell, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return SweepGrid(axes, cells)
