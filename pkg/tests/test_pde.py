import math

import numpy as np
import pytest

from frontlab.model import validate_params
from frontlab import pde

P3312 = validate_params(3, 3, 1, 2)


def grid_small():
    return pde.Grid(20.0, 0.1)


class TestGridAndIC:
    def test_grid_nodes(self):
        g = pde.Grid(10.0, 0.1)
        assert g.n_nodes == 201
        assert g.x[0] == -10.0 and g.x[-1] == pytest.approx(10.0)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            pde.Grid(-1.0, 0.1)
        with pytest.raises(ValueError):
            pde.Grid(1.0, 0.5)   # fewer than 100 intervals

    def test_heaviside_values(self):
        g = grid_small()
        f = pde.initial_condition(pde.ICKind.HEAVISIDE, g)
        assert f.u[0] == 0.0 and f.u[-1] == 1.0
        assert set(np.unique(f.u)) == {0.0, 1.0}

    def test_anti_heaviside_is_complement(self):
        g = grid_small()
        h = pde.initial_condition(pde.ICKind.HEAVISIDE, g)
        a = pde.initial_condition(pde.ICKind.ANTI_HEAVISIDE, g)
        # the two steps switch at x = 0 with opposite conventions there
        assert np.all((h.u + a.u)[g.x != 0.0] == 1.0)

    def test_tail_general_monotone_and_bounded(self):
        p = validate_params(3, 5, 3, 2)
        cb = (6.0 + math.sqrt(24.0)) / 6.0
        g = grid_small()
        f = pde.initial_condition(pde.ICKind.TAIL_GENERAL, g,
                                  pde.TailParams(cbar=cb), p)
        assert np.all(np.diff(f.u) >= 0.0)
        assert f.u.min() >= 0.0 and f.u.max() <= 1.0
        # respects the stated bounds outside [R_-, R_+]
        tp = pde.TailParams(cbar=cb)
        left = g.x < tp.R_minus
        assert np.all(f.u[left] <= np.exp(cb * g.x[left]) + 1e-15)

    def test_tail_general_validation(self):
        p = validate_params(3, 5, 3, 2)
        g = grid_small()
        with pytest.raises(pde.InvalidTailParams):
            pde.initial_condition(pde.ICKind.TAIL_GENERAL, g,
                                  pde.TailParams(cbar=0.0), p)
        with pytest.raises(pde.InvalidTailParams):
            pde.initial_condition(pde.ICKind.TAIL_GENERAL, g,
                                  pde.TailParams(cbar=1.0, R_minus=3.0,
                                                 R_plus=-3.0), p)
        with pytest.raises(pde.InvalidTailParams):
            pde.initial_condition(pde.ICKind.TAIL_GENERAL, g, None, p)


class TestStepping:
    def test_cfl_guard(self):
        g = grid_small()
        f = pde.initial_condition(pde.ICKind.HEAVISIDE, g)
        with pytest.raises(pde.CFLViolated):
            pde.step(P3312, f, 1.0, g)

    def test_single_step_preserves_range(self):
        g = grid_small()
        f = pde.initial_condition(pde.ICKind.HEAVISIDE, g)
        f1 = pde.step(P3312, f, pde.cfl_dt(P3312, g.dx), g)
        assert f1.t > 0.0
        assert f1.u.min() >= -1e-9 and f1.u.max() <= 1.0 + 1e-9
        # pinned ends
        assert f1.u[0] == 0.0 and f1.u[-1] == 1.0

    def test_equilibria_are_fixed_points(self):
        g = grid_small()
        for value in (0.0, 1.0):
            f = pde.Field(0.0, np.full(g.n_nodes, value))
            f1 = pde.step(P3312, f, pde.cfl_dt(P3312, g.dx), g)
            assert np.array_equal(f1.u, f.u)


class TestFrontTracking:
    def test_front_position_linear_interp(self):
        g = grid_small()
        u = np.clip((g.x - 1.23) / 4.0 + 0.5, 0.0, 1.0)
        assert pde.front_position(pde.Field(0.0, u), g) == pytest.approx(
            1.23, abs=1e-12)

    def test_front_position_decreasing_data(self):
        g = grid_small()
        u = np.clip(-(g.x + 2.0) / 4.0 + 0.5, 0.0, 1.0)
        assert pde.front_position(pde.Field(0.0, u), g) == pytest.approx(
            -2.0, abs=1e-12)

    def test_front_position_no_crossing(self):
        g = grid_small()
        with pytest.raises(pde.NoCrossing):
            pde.front_position(pde.Field(0.0, np.full(g.n_nodes, 0.1)), g)

    def test_fit_speed_recovers_slope(self):
        t = np.linspace(0.0, 30.0, 31)
        trace = pde.FrontTrace(t, 1.0 - 0.75 * t)
        assert pde.fit_speed(trace) == pytest.approx(-0.75)
        assert trace.fit_residual == pytest.approx(0.0, abs=1e-12)

    def test_fit_speed_needs_samples(self):
        t = np.linspace(0.0, 5.0, 6)
        with pytest.raises(pde.TooFewSamples):
            pde.fit_speed(pde.FrontTrace(t, -t))


class TestSimulate:
    def test_short_spreading_run(self):
        sim = pde.simulate(P3312, pde.ICKind.HEAVISIDE, 8.0,
                           pde.SimOptions(L=30.0, dx=0.1))
        assert len(sim.times) == 9
        # front moves left at roughly the critical velocity
        assert sim.trace.x_front[-1] < sim.trace.x_front[0] - 5.0
        for u in sim.snapshots:
            assert np.all(np.diff(u) >= -1e-9)

    def test_domain_too_small_detected(self):
        with pytest.raises(pde.DomainTooSmall):
            pde.simulate(P3312, pde.ICKind.HEAVISIDE, 30.0,
                         pde.SimOptions(L=10.0, dx=0.1))

    def test_exact_wave_transport_error(self):
        from frontlab.explicit import make_curve0
        case = make_curve0(3, 2.0)
        g = pde.Grid(25.0, 0.05)
        u = np.clip(case.wave.f(g.x), 0.0, 1.0)
        from frontlab._backend import kernels
        nsteps = math.ceil(3.0 / pde.cfl_dt(case.params, g.dx))
        kernels.pde_advance(u, g.dx, 3.0 / nsteps, nsteps, 3.0, 3.0,
                            1.0, 2.0)
        exact = case.wave.f(g.x + 3.0 * case.c)
        inner = np.abs(g.x) < 20.0
        assert np.abs(u - exact)[inner].max() < 5e-4

    def test_summary_and_csv_outputs(self, tmp_path):
        sim = pde.simulate(P3312, pde.ICKind.HEAVISIDE, 3.0,
                           pde.SimOptions(L=20.0, dx=0.1))
        import json
        doc = json.loads(sim.summary_json())
        assert doc["params"]["n"] == 3.0 and doc["ic"] == "Heaviside"
        snap = tmp_path / "snap.csv"
        trace = tmp_path / "trace.csv"
        sim.snapshots_to_csv(snap)
        sim.trace.to_csv(trace)
        assert snap.read_text().splitlines()[0] == "t,x,u"
        assert trace.read_text().splitlines()[0] == "t,x_front"


class TestComparison:
    def test_wave_builders_check_velocity_side(self):
        with pytest.raises(pde.WrongVelocitySide):
            pde.build_subsolution(P3312, 3.0)   # overshoots
        with pytest.raises(pde.WrongVelocitySide):
            pde.build_supersolution(P3312, 1.0)   # connects directly

    def test_bracket_shapes(self):
        sub = pde.build_subsolution(P3312, 1.0)
        sup = pde.build_supersolution(P3312, 2.0)
        assert sub.eval(np.array([sub.R - 5.0]))[0] == 0.0
        assert sup.eval(np.array([sup.R + 5.0]))[0] == 1.0
        x = np.linspace(-10, 10, 401)
        assert np.all(np.diff(sub.eval(x)) >= 0.0)
        assert np.all(np.diff(sup.eval(x)) >= 0.0)

    def test_ordering_on_short_run(self):
        sim = pde.simulate(P3312, pde.ICKind.HEAVISIDE, 8.0,
                           pde.SimOptions(L=40.0, dx=0.1))
        assert pde.comparison_check(sim, pde.build_subsolution(P3312, 1.0))
        assert pde.comparison_check(
            sim, pde.build_supersolution(P3312, 2.0))

    def test_initial_order_violation_raises(self):
        sim = pde.simulate(P3312, pde.ICKind.HEAVISIDE, 2.0,
                           pde.SimOptions(L=20.0, dx=0.1))
        # shifting the subsolution right of the step breaks the t=0 order
        bad = pde.build_subsolution(P3312, 1.0, R=-5.0)
        with pytest.raises(pde.InitialOrderViolated):
            pde.comparison_check(sim, bad)
