"""Trajectory tables, jump logs, verdict summaries and figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .analysis import classify_equilibrium
from .core import HybridArc, HybridState, NetworkParams, Termination, TrajectoryVerdict

TIMESERIES_COLUMNS = ("t", "j", "x1", "x2", "x3", "q1", "q2", "q3", "q4")
JUMP_COLUMNS = ("t", "j", "index", "x1", "x2", "x3",
                "q1_pre", "q2_pre", "q3_pre", "q4_pre",
                "q1_post", "q2_post", "q3_post", "q4_post")


def dense_rows(arc: HybridArc, spacing: float) -> list[tuple]:
    """Rows ``(t, j, x1, x2, x3, q1..q4)`` on a regular grid plus jump instants.

    Every jump contributes two rows, the state before it and after it, with
    equal ``t`` and ``x``. Grid points that fall exactly on a jump instant
    are dropped so those two rows are the only ones at that time.
    """
    if not spacing > 0:
        raise ValueError("spacing must be positive")
    t_end = arc.final_time.t
    grid = np.arange(0.0, t_end + spacing * 0.5, spacing)
    grid = grid[grid <= t_end]
    jump_times = {ev.time.t for ev in arc.jumps}
    starts = np.array([s.start.t for s in arc.segments])
    seg_idx = np.clip(np.searchsorted(starts, grid, side="right") - 1, 0, len(arc.segments) - 1)

    keyed = []
    for t, k in zip(grid, seg_idx):
        t = float(t)
        if t in jump_times:
            continue
        seg = arc.segments[k]
        x = seg.x_at(t)
        keyed.append(((t, seg.start.j, 1), (t, seg.start.j, *map(float, x), *seg.state.q)))
    for ev in arc.jumps:
        t, j = ev.time
        keyed.append(((t, j, 0), (t, j, *ev.x, *ev.q_before)))
        keyed.append(((t, j + 1, 0), (t, j + 1, *ev.x, *ev.q_after)))
    keyed.sort(key=lambda kv: kv[0])
    return [row for _, row in keyed]


def write_timeseries(arc: HybridArc, path, spacing: float) -> int:
    rows = dense_rows(arc, spacing)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TIMESERIES_COLUMNS)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return len(rows)


def write_jumps(arc: HybridArc, path) -> int:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(JUMP_COLUMNS)
        for ev in arc.jumps:
            w.writerow([repr(ev.time.t), ev.time.j, ev.index, *map(repr, ev.x),
                        *ev.q_before, *ev.q_after])
    return len(arc.jumps)


def _fmt_point(x) -> str:
    return "(" + ",".join(f"{v:.6g}" for v in x) + ")"


def verdict_summary(verdict: TrajectoryVerdict, p: NetworkParams) -> str:
    """One-line description, e.g. ``Extinction equilibrium (0,0,0)``."""
    if verdict.kind is Termination.EQUILIBRIUM:
        label = classify_equilibrium(verdict, p).value
        text = f"{label} equilibrium {_fmt_point(verdict.limit_point)}"
        if verdict.sliding:
            text += f" [switching-corner limit, spread {verdict.limit_spread:.2g}]"
        return text
    if verdict.kind is Termination.LIMIT_CYCLE:
        c = verdict.cycle
        return (f"LimitCycle period={c.period:.6g} jumps/period={c.jumps_per_period} "
                f"residual={c.residual:.2g}")
    return verdict.kind.value


def verdict_dict(verdict: TrajectoryVerdict, p: NetworkParams) -> dict:
    out = {
        "kind": verdict.kind.value,
        "summary": verdict_summary(verdict, p),
        "final_state": {"x": list(verdict.final_state.x), "q": list(verdict.final_state.q)},
        "jump_counts": {f"D{i}": n for i, n in sorted(verdict.jump_counts.items())},
    }
    if verdict.kind is Termination.EQUILIBRIUM:
        out["label"] = classify_equilibrium(verdict, p).value
        out["limit_point"] = list(verdict.limit_point)
        out["sliding"] = verdict.sliding
        if verdict.sliding:
            out["limit_spread"] = verdict.limit_spread
    if verdict.cycle is not None:
        c = verdict.cycle
        out["cycle"] = {
            "period": c.period,
            "jumps_per_period": c.jumps_per_period,
            "residual": c.residual,
            "jump_indices": list(c.q_sequence),
            "waypoints": [
                {"t": tm.t, "j": tm.j, "x": list(s.x), "q": list(s.q)} for tm, s in c.waypoints
            ],
        }
    return out


def write_verdict(verdict: TrajectoryVerdict, p: NetworkParams, path) -> None:
    Path(path).write_text(json.dumps(verdict_dict(verdict, p), indent=2) + "\n")


def _curve(arc: HybridArc, spacing: float) -> tuple[np.ndarray, np.ndarray]:
    rows = np.array([r[:5] for r in dense_rows(arc, spacing)], dtype=float)
    return rows[:, 0], rows[:, 2:5]


def plot_phase(arc: HybridArc, z0: HybridState, path, spacing: float = 0.01, dims: int = 3,
               title: str = "") -> None:
    """Phase portrait in concentration space; ``*`` marks the initial point."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    _, x = _curve(arc, spacing)
    fig = plt.figure(figsize=(5, 4.5))
    if dims == 3:
        ax = fig.add_subplot(projection="3d")
        ax.plot(x[:, 0], x[:, 1], x[:, 2], lw=0.8)
        ax.scatter(*z0.x, marker="*", s=120, color="k")
        ax.set_zlabel("$x_3$ (MMP-2)")
    else:
        ax = fig.add_subplot()
        ax.plot(x[:, 0], x[:, 2], lw=0.8)
        ax.plot(z0.x1, z0.x3, "k*", ms=12)
        ax.set_ylabel("$x_3$ (MMP-2)")
    ax.set_xlabel("$x_1$ (TIMP-2)")
    if dims == 3:
        ax.set_ylabel("$x_2$ (MT1-MMP)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_timeseries(arc: HybridArc, path, spacing: float = 0.01, title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t, x = _curve(arc, spacing)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for k, name in enumerate(("TIMP-2", "MT1-MMP", "MMP-2")):
        ax.plot(t, x[:, k], lw=0.9, label=f"$x_{k + 1}$ {name}")
    ax.set_xlabel("t")
    ax.set_ylabel("concentration")
    ax.legend(loc="best", fontsize="small")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_sweep_table(grid, path) -> None:
    names = [a.name for a in grid.axes]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cell", *names, "kind", "label", "summary", "n_jumps"])
        for c in grid.cells:
            w.writerow([c.index, *(repr(c.values[n]) for n in names),
                        c.kind or "error", c.label or "", c.summary(), c.n_jumps])
