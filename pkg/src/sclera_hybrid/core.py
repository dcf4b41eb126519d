"""Value types shared across the package.

The hybrid state is ``z = (x1, x2, x3, q1, q2, q3, q4)`` where

* ``x1`` is the TIMP-2 concentration,
* ``x2`` is the MT1-MMP concentration,
* ``x3`` is the MMP-2 concentration,

and ``q1..q4`` are the hysteresis logic variables attached to the four
thresholds ``th1..th4``. All quantities are dimensionless.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields, replace
from typing import Mapping, NamedTuple, Optional

import numpy as np

Triple = tuple[float, float, float]
Bits = tuple[int, int, int, int]


class InvalidParameters(ValueError):
    """Raised when a hard parameter constraint is violated."""

    def __init__(self, issues: list["Issue"]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


@dataclass(frozen=True)
class HybridState:
    """Protein concentrations plus the four logic variables."""

    x1: float
    x2: float
    x3: float
    q1: int = 0
    q2: int = 0
    q3: int = 0
    q4: int = 0

    def __post_init__(self):
        for name in ("x1", "x2", "x3"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be a finite nonnegative number, got {v!r}")
            object.__setattr__(self, name, v)
        for name in ("q1", "q2", "q3", "q4"):
            v = getattr(self, name)
            if v not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1, got {v!r}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def from_parts(cls, x, q) -> "HybridState":
        return cls(*x, *q)

    @property
    def x(self) -> Triple:
        return (self.x1, self.x2, self.x3)

    @property
    def q(self) -> Bits:
        return (self.q1, self.q2, self.q3, self.q4)

    def flip(self, i: int) -> "HybridState":
        """Return the state with logic variable ``q_i`` (1-based) toggled."""
        name = f"q{i}"
        return replace(self, **{name: 1 - getattr(self, name)})

    def with_x(self, x) -> "HybridState":
        return HybridState(x[0], x[1], x[2], *self.q)


@dataclass(frozen=True)
class NetworkParams:
    """Rates, thresholds and hysteresis half-widths of the network.

    Defaults are the unit-rate operating point with thresholds
    (0.4, 0.5, 0.6, 0.7) and half-widths 0.01. Construction raises
    :class:`InvalidParameters` when a hard constraint fails; use
    :func:`validate_params` on a plain mapping to collect issues instead.
    """

    k1: float = 1.0
    k2: float = 1.0
    k3: float = 1.0
    g1: float = 1.0
    g2: float = 1.0
    g3: float = 1.0
    th1: float = 0.4
    th2: float = 0.5
    th3: float = 0.6
    th4: float = 0.7
    h1: float = 0.01
    h2: float = 0.01
    h3: float = 0.01
    h4: float = 0.01

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        errors = [i for i in validate_params(self) if i.severity == "error"]
        if errors:
            raise InvalidParameters(errors)

    @property
    def k(self) -> Triple:
        return (self.k1, self.k2, self.k3)

    @property
    def gamma(self) -> Triple:
        return (self.g1, self.g2, self.g3)

    @property
    def theta(self) -> tuple[float, float, float, float]:
        return (self.th1, self.th2, self.th3, self.th4)

    @property
    def h(self) -> tuple[float, float, float, float]:
        return (self.h1, self.h2, self.h3, self.h4)

    def updated(self, **changes: float) -> "NetworkParams":
        """Copy with fields replaced.

        The aliases ``k``, ``g`` and ``h`` set all members of a family at once.
        """
        return NetworkParams(**expand_param_aliases(self.as_dict(), changes))

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


PARAM_FIELDS = tuple(f.name for f in fields(NetworkParams))
PARAM_ALIASES = {
    "k": ("k1", "k2", "k3"),
    "g": ("g1", "g2", "g3"),
    "h": ("h1", "h2", "h3", "h4"),
}


def expand_param_aliases(base: Mapping[str, float], changes: Mapping[str, float]) -> dict:
    out = dict(base)
    for name, value in changes.items():
        if name in PARAM_ALIASES:
            for member in PARAM_ALIASES[name]:
                out[member] = value
        elif name in PARAM_FIELDS:
            out[name] = value
        else:
            raise KeyError(f"unknown parameter {name!r}")
    return out


@dataclass(frozen=True)
class Issue:
    field: str
    message: str
    severity: str = "error"  # "error" | "warning"

    def __str__(self):
        return f"{self.severity}: {self.field}: {self.message}"


def validate_params(p) -> list[Issue]:
    """Check parameter constraints without raising.

    Accepts a :class:`NetworkParams` or a mapping of field values (missing
    fields take their defaults). Hard violations have severity ``"error"``;
    a threshold ordering under which MT1-MMP can never be switched on is
    only a ``"warning"``.
    """
    if isinstance(p, NetworkParams):
        vals = p.as_dict()
    else:
        unknown = set(p) - set(PARAM_FIELDS)
        if unknown:
            return [Issue(name, "unknown parameter") for name in sorted(unknown)]
        vals = {f.name: f.default for f in fields(NetworkParams)}
        vals.update(p)

    issues = []
    for name, v in vals.items():
        try:
            v = float(v)
        except (TypeError, ValueError):
            issues.append(Issue(name, f"must be a number, got {v!r}"))
            continue
        if not math.isfinite(v):
            issues.append(Issue(name, "must be finite"))
        vals[name] = v
    if issues:
        return issues

    for i in (1, 2, 3):
        if not vals[f"k{i}"] > 0:
            issues.append(Issue(f"k{i}", "growth rate must be positive"))
        if not vals[f"g{i}"] > 0:
            issues.append(Issue(f"g{i}", "decay rate must be positive"))
    for i in (1, 2, 3, 4):
        th, h = vals[f"th{i}"], vals[f"h{i}"]
        if not th > 0:
            issues.append(Issue(f"th{i}", "threshold must be positive"))
        if h < 0:
            issues.append(Issue(f"h{i}", "hysteresis half-width must be nonnegative"))
        elif not th - h > 0:
            issues.append(Issue(f"h{i}", f"lower switching edge th{i}-h{i} must be positive"))
    if vals["th1"] + vals["h1"] >= vals["th3"] - vals["h3"]:
        issues.append(Issue(
            "th1",
            "x2 can never be expressed: th1+h1 >= th3-h3 leaves no TIMP-2 "
            "window that activates MT1-MMP without inhibiting it",
            severity="warning",
        ))
    return issues


class HybridTime(NamedTuple):
    t: float
    j: int


class JumpPolicy(str, enum.Enum):
    LOWEST_INDEX = "lowest"
    SEEDED_RANDOM = "random"


class Termination(str, enum.Enum):
    EQUILIBRIUM = "EquilibriumReached"
    LIMIT_CYCLE = "LimitCycle"
    ZENO = "ZenoSuspected"
    HORIZON = "HorizonExhausted"


@dataclass(frozen=True)
class Segment:
    """One flow interval of a hybrid arc.

    Each coordinate evolves as ``target + (x0 - target) * exp(-rate * s)``
    for ``s`` in ``[0, end.t - start.t]``. ``cause`` is the index of the
    jump that ends the segment, or ``None`` for the last one.
    """

    start: HybridTime
    end: HybridTime
    state: HybridState
    target: Triple
    rate: Triple
    end_x: Triple
    cause: Optional[int] = None

    @property
    def duration(self) -> float:
        return self.end.t - self.start.t

    def x_at(self, t) -> np.ndarray:
        """Closed-form concentrations at absolute time(s) ``t``.

        Returns shape ``(3,)`` for a scalar and ``(n, 3)`` for an array.
        """
        s = np.asarray(t, dtype=float) - self.start.t
        x0 = np.asarray(self.state.x)
        tg = np.asarray(self.target)
        r = np.asarray(self.rate)
        s = np.clip(s, 0.0, self.duration)[..., None]
        decay = np.exp(-r * s)
        return x0 * decay + tg * (-np.expm1(-r * s))


@dataclass(frozen=True)
class JumpEvent:
    time: HybridTime  # hybrid time before the jump
    index: int
    x: Triple
    q_before: Bits
    q_after: Bits


@dataclass
class HybridArc:
    """A solution: flow segments, the jumps between them, and how it ended.

    ``dense`` optionally holds ``(t, x)`` arrays of a stepped integration;
    when present, :meth:`sample` interpolates it instead of using the
    closed form of each segment.
    """

    segments: list[Segment]
    jumps: list[JumpEvent]
    final_state: HybridState
    final_time: HybridTime
    reason: Termination
    dense: Optional[tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    @property
    def n_jumps(self) -> int:
        return len(self.jumps)

    def post_jump_states(self) -> list[tuple[HybridTime, HybridState]]:
        """(time, state) right after each jump, i.e. the start of segments 1..n."""
        return [(s.start, s.state) for s in self.segments[1:]]

    def sample(self, times) -> np.ndarray:
        """Concentrations at the given times, shape ``(n, 3)``.

        At a jump instant the state after the last jump is used; since jumps
        leave x unchanged the choice does not matter.
        """
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if self.dense is not None:
            t, x = self.dense
            return np.column_stack([np.interp(times, t, x[:, k]) for k in range(3)])
        starts = np.array([s.start.t for s in self.segments])
        idx = np.searchsorted(starts, times, side="right") - 1
        idx = np.clip(idx, 0, len(self.segments) - 1)
        out = np.empty((len(times), 3))
        for k in np.unique(idx):
            mask = idx == k
            out[mask] = self.segments[k].x_at(times[mask])
        return out

    def jump_counts(self) -> dict[int, int]:
        counts = {i: 0 for i in (1, 2, 3, 4)}
        for ev in self.jumps:
            counts[ev.index] += 1
        return counts


@dataclass(frozen=True)
class CycleReport:
    period: float
    jumps_per_period: int
    waypoints: list[tuple[HybridTime, HybridState]]
    residual: float
    q_sequence: tuple[int, ...] = ()  # jump indices over one period


@dataclass(frozen=True)
class TrajectoryVerdict:
    """Long-run behaviour of a solution.

    For an equilibrium reached by flowing in one mode, ``limit_point`` is
    that mode's target and ``sliding`` is false. When the solution instead
    switches indefinitely while collapsing onto a corner of the switching
    surfaces, ``sliding`` is true and ``limit_point`` is an estimate whose
    accuracy is ``limit_spread``.
    """

    kind: Termination
    final_state: HybridState
    limit_point: Optional[Triple] = None
    cycle: Optional[CycleReport] = None
    jump_counts: dict = field(default_factory=dict)
    sliding: bool = False
    limit_spread: float = 0.0

    @property
    def period(self) -> Optional[float]:
        return self.cycle.period if self.cycle else None


def check_arc(arc: HybridArc) -> None:
    """Assert the structural invariants of an arc; raise AssertionError if broken."""
    segs = arc.segments
    assert segs, "arc has no segments"
    assert len(arc.jumps) == len(segs) - 1
    for n, seg in enumerate(segs):
        assert seg.start.j == n and seg.end.j == n
        assert seg.end.t >= seg.start.t
        for k in range(3):
            lo, hi = sorted((seg.state.x[k], seg.end_x[k]))
            tg = seg.target[k]
            # monotone approach toward the target
            assert lo <= hi
            if seg.state.x[k] < tg:
                assert seg.end_x[k] >= seg.state.x[k]
            elif seg.state.x[k] > tg:
                assert seg.end_x[k] <= seg.state.x[k]
    for n, ev in enumerate(arc.jumps):
        a, b = segs[n], segs[n + 1]
        assert a.cause == ev.index
        assert a.end.t == b.start.t
        assert b.start.j == a.end.j + 1
        assert a.end_x == b.state.x == ev.x
        assert b.state.q == a.state.flip(ev.index).q
        assert ev.q_before == a.state.q and ev.q_after == b.state.q
    assert segs[-1].cause is None
