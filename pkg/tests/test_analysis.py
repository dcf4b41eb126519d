import pytest

from sclera_hybrid import (
    Axis,
    EquilibriumLabel,
    HybridState,
    NetworkParams,
    SolverConfig,
    Termination,
    TrajectoryVerdict,
    classify_equilibrium,
    detect_chattering_equilibrium,
    detect_cycle,
    mode_target,
    simulate,
    sweep,
)
from sclera_hybrid.core import HybridArc, HybridTime, JumpEvent, Segment
from sclera_hybrid.config import figure_config

P = NetworkParams()


def synthetic_arc(events, z0):
    """Arc from a list of (t, index, x) jumps; flows are not physical."""
    segs, jumps = [], []
    state, start = z0, HybridTime(0.0, 0)
    for j, (t, i, x) in enumerate(events):
        pre = state.with_x(x)
        segs.append(Segment(start, HybridTime(t, j), state, (0, 0, 0), (1, 1, 1), tuple(x), i))
        post = pre.flip(i)
        jumps.append(JumpEvent(HybridTime(t, j), i, tuple(x), pre.q, post.q))
        state, start = post, HybridTime(t, j + 1)
    segs.append(Segment(start, HybridTime(start.t, start.j), state, (0, 0, 0), (1, 1, 1),
                        state.x, None))
    return HybridArc(segs, jumps, state, segs[-1].end, Termination.HORIZON)


def test_exact_replay_gives_zero_residual():
    period = [(0.3, 3, (0.61, 0.7, 0.77)), (0.4, 4, (0.65, 0.6, 0.69)),
              (0.5, 3, (0.59, 0.5, 0.62)), (0.8, 4, (0.45, 0.6, 0.71))]
    T = 1.25
    events = [(t + n * T, i, x) for n in range(3) for t, i, x in period]
    arc = synthetic_arc(events, HybridState(0.45, 0.45, 0.8, 1, 1, 0, 1))
    c = detect_cycle(arc, 1e-6)
    assert c is not None
    assert c.residual == 0.0
    assert c.period == pytest.approx(T, abs=1e-12)
    assert c.jumps_per_period == 4
    assert c.q_sequence == (3, 4, 3, 4)


def test_no_cycle_for_aperiodic_jumps():
    events = [(0.1 * k, 1, (0.1 * k, 0.0, 0.0)) for k in range(1, 12)]
    assert detect_cycle(synthetic_arc(events, HybridState(0, 0, 0, 1, 0, 0, 0))) is None


def test_tiny_orbit_rejected():
    period = [(0.3, 3, (0.6, 0.7, 0.7)), (0.4, 4, (0.6000001, 0.7, 0.7)),
              (0.5, 3, (0.6, 0.7000001, 0.7)), (0.6, 4, (0.6, 0.7, 0.7000001))]
    events = [(t + n, i, x) for n in range(3) for t, i, x in period]
    arc = synthetic_arc(events, HybridState(0.6, 0.7, 0.7, 1, 1, 0, 1))
    assert detect_cycle(arc, 1e-6) is None
    assert detect_cycle(arc, 1e-6, min_amplitude=1e-8) is not None


def test_s5_cycle_involves_timp2_and_mmp2_thresholds():
    cfg = figure_config("s5")
    arc, _ = simulate(cfg.initial, cfg.params, cfg.solver, detect_cycles=False)
    c = detect_cycle(arc, 1e-6)
    assert c is not None and c.residual <= 1e-6
    # every flip in the orbit is driven by x1 (TIMP-2) or x3 (MMP-2)
    assert 4 in c.q_sequence and 3 in c.q_sequence
    x1 = [s.x1 for _, s in c.waypoints]
    x3 = [s.x3 for _, s in c.waypoints]
    assert max(x1) >= P.th3 + P.h3 and min(x1) > P.th1
    assert max(x3) >= P.th4 + P.h4 and min(x3) <= P.th4 - P.h4


def test_equilibrium_arc_has_no_cycle():
    cfg = figure_config("s1")
    arc, v = simulate(cfg.initial, cfg.params, cfg.solver)
    assert v.kind is Termination.EQUILIBRIUM
    assert detect_cycle(arc) is None


def test_chattering_equilibrium_on_s7_only():
    s7 = figure_config("s7")
    arc, _ = simulate(s7.initial, s7.params, s7.solver, detect_cycles=False)
    corner = detect_chattering_equilibrium(arc)
    assert corner is not None
    point, spread = corner
    assert spread < 1e-3
    assert abs(point[0] - 0.6) <= spread and abs(point[2] - 0.7) <= spread
    s5 = figure_config("s5")
    arc5, _ = simulate(s5.initial, s5.params, s5.solver, detect_cycles=False)
    assert detect_chattering_equilibrium(arc5) is None


def test_classify_presets():
    for fig, label in (("s1", EquilibriumLabel.EXTINCTION), ("s3", EquilibriumLabel.SATURATION)):
        cfg = figure_config(fig)
        _, v = simulate(cfg.initial, cfg.params, cfg.solver)
        assert classify_equilibrium(v, cfg.params) is label


def test_classify_mixed():
    q = (0, 0, 0, 1)
    target = mode_target(q, P).target
    assert target == (1.0, 0.0, 0.0)
    v = TrajectoryVerdict(Termination.EQUILIBRIUM, HybridState.from_parts(target, q),
                          limit_point=target)
    assert classify_equilibrium(v, P) is EquilibriumLabel.MIXED


def test_classify_rejects_non_equilibrium():
    cfg = figure_config("s5")
    _, v = simulate(cfg.initial, cfg.params, cfg.solver)
    with pytest.raises(ValueError):
        classify_equilibrium(v, cfg.params)


def test_h_sweep_contrasts_zero_and_nonzero_hysteresis():
    cfg = figure_config("s5")
    grid = sweep(cfg.params, [Axis("h", 0.0, 0.05, 11)], cfg.initial, cfg.solver)
    assert len(grid.cells) == 11
    by_h = {round(c.values["h"], 6): c for c in grid.cells}
    assert by_h[0.0].kind != Termination.LIMIT_CYCLE.value
    assert by_h[0.01].kind == Termination.LIMIT_CYCLE.value
    assert by_h[0.01].period == pytest.approx(0.897019, abs=1e-6)


def test_empty_axis_rejected():
    with pytest.raises(ValueError, match="empty"):
        Axis("h", 0.0, 0.05, 0)


def test_unknown_axis_rejected():
    with pytest.raises(ValueError, match="thx"):
        Axis("thx", 0.0, 1.0, 3)


def test_grid_is_row_major():
    cfg = figure_config("s1")
    axes = [Axis("k1", 0.5, 1.5, 3), Axis("th4", 0.6, 0.9, 4)]
    grid = sweep(cfg.params, axes, cfg.initial, SolverConfig(t_max=20.0))
    assert grid.shape == (3, 4)
    assert len(grid.cells) == 12
    assert [c.index for c in grid.cells] == list(range(12))
    k_vals, th_vals = axes[0].values, axes[1].values
    for c in grid.cells:
        r, col = divmod(c.index, 4)
        assert c.values == {"k1": float(k_vals[r]), "th4": float(th_vals[col])}


def test_worker_count_does_not_change_grid():
    cfg = figure_config("s5")
    axes = [Axis("h", 0.0, 0.04, 5), Axis("k3", 0.7, 1.2, 3)]
    solver = SolverConfig(t_max=30.0, j_max=2000)
    a = sweep(cfg.params, axes, cfg.initial, solver, workers=1)
    b = sweep(cfg.params, axes, cfg.initial, solver, workers=4)
    assert a.cells == b.cells


def test_bad_cell_recorded_not_raised():
    cfg = figure_config("s1")
    grid = sweep(cfg.params, [Axis("h4", 0.0, 1.0, 3)], cfg.initial, SolverConfig(t_max=5.0))
    assert grid.cells[0].error is None
    assert grid.cells[2].error is not None and "h4" in grid.cells[2].error
