"""Numeric lane: pulse profile, integrator, lifts, spot checks."""

import math

import pytest

from bksym import bkmodel
from bksym import numerix as nx
from bksym.prolong import PreconditionError
from bksym.symkernel import SymbolContext, atoms_of, parse

PHI = parse("phi", bkmodel.MODEL_CONTEXT)
SCALAR_CTX = SymbolContext(bases=frozenset({"s"}), params=frozenset(),
                           jets=frozenset({"Y"}), funcs=frozenset())

TW = nx.soliton(1.0, 1.0, 1.0)
TW27 = nx.soliton(1.0, 0.0, 1.0)
LIFTED = nx.lift(TW)


def m_exact(s: float, k: int = 0) -> float:
    """Shifted pulse solving the third-order reduced equation."""
    if k == 0:
        return TW27.profile(s) - 1 / 6
    return TW27.profile(s, k)


def third_order_problem() -> nx.OdeProblem:
    return nx.ode_problem("3.27", -10.0,
                          (m_exact(-10.0), m_exact(-10.0, 1),
                           m_exact(-10.0, 2)))


class TestTravellingWave:
    def test_pulse_parameters(self):
        assert TW.amplitude == pytest.approx(3 / 14, abs=1e-15)
        assert TW.width == pytest.approx(math.sqrt(0.5) / 2, abs=1e-15)
        assert TW27.amplitude == pytest.approx(0.5, abs=1e-15)
        assert TW27.width == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("tw", [TW, TW27, nx.soliton(2.0, -0.5, 3.0)])
    def test_first_integral_vanishes(self, tw):
        worst = max(abs(tw.first_integral_residual(-7 + 0.37 * i))
                    for i in range(40))
        assert worst < 1e-12

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_profile_ladder_matches_differencing(self, k):
        gap = 0.0
        for i in range(21):
            s = -3 + 0.3 * i
            fd = (TW.profile(s + 1e-5, k - 1)
                  - TW.profile(s - 1e-5, k - 1)) / 2e-5
            gap = max(gap, abs(fd - TW.profile(s, k)))
        assert gap < 1e-6

    def test_profile_stops_at_order_four(self):
        with pytest.raises(nx.LiftError):
            TW.profile(0.3, 5)

    def test_antiderivative(self):
        assert TW.antiderivative(0.0) == 0.0
        for s in (-2.0, -0.5, 0.3, 1.7):
            fd = (TW.antiderivative(s + 1e-6)
                  - TW.antiderivative(s - 1e-6)) / 2e-6
            assert fd == pytest.approx(TW.profile(s), abs=1e-9)

    def test_zero_amplitude_wave_is_flat(self):
        flat = nx.TravellingWave(0.0, 0.5, 1.0, 1.0, 1.0)
        assert flat.profile(2.0) == 0.0
        assert flat.antiderivative(2.0) == 0.0

    def test_singular_amplitude_rejected(self):
        with pytest.raises(PreconditionError):
            nx.soliton(1.0, -0.75, 1.0)

    @pytest.mark.parametrize("abc", [(1.0, -1.0, 1.0), (1.0, 1.0, -1.0),
                                     (1.0, 1.0, 0.0)])
    def test_imaginary_width_rejected(self, abc):
        with pytest.raises(PreconditionError):
            nx.soliton(*abc)


class TestOdeProblem:
    def test_catalog_builder_shape(self):
        p = third_order_problem()
        assert p.order == 3
        assert p.coord == "n" and p.dep == "m"
        assert p.parameter_bindings == ()

    def test_initial_value_count_enforced(self):
        with pytest.raises(PreconditionError):
            nx.ode_problem("3.27", 0.0, (1.0, 2.0))

    def test_unbound_parameters_rejected(self):
        with pytest.raises(PreconditionError, match="alpha"):
            nx.ode_problem("3.21", 1.0, (0.5, 0.0, 0.0))

    def test_multibase_equation_rejected(self):
        with pytest.raises(PreconditionError):
            nx.ode_problem("main", 0.0, (0.0,), {})

    def test_travelling_problem_matches_closed_form(self):
        p = nx.travelling_wave_problem(1.0, 1.0, 1.0, 0.0,
                                       (TW.profile(0.0), 0.0))
        f = p.rhs_callable()
        for s in (-2.0, 0.0, 1.3):
            w, w1 = TW.profile(s), TW.profile(s, 1)
            got = f(s, (w, w1))
            assert got[0] == pytest.approx(w1, abs=1e-15)
            assert got[1] == pytest.approx(TW.profile(s, 2), abs=1e-13)

    def test_travelling_problem_degenerate_rejected(self):
        with pytest.raises(PreconditionError):
            nx.travelling_wave_problem(1.0, -1.0, 1.0, 0.0, (0.0, 0.0))


class TestIntegrator:
    def test_travelling_profile_reproduced(self):
        p = nx.travelling_wave_problem(
            1.0, 1.0, 1.0, -8.0, (TW.profile(-8.0), TW.profile(-8.0, 1)))
        sol = nx.integrate_ode(p, (-8.0, 8.0))
        err = max(abs(v[0] - TW.profile(s))
                  for s, v in zip(sol.grid, sol.values))
        assert err < 1e-7

    def test_third_order_pulse_reproduced(self):
        sol = nx.integrate_ode(third_order_problem(), (-10.0, 10.0),
                               tolerance=1e-12)
        err = max(abs(v[0] - m_exact(s))
                  for s, v in zip(sol.grid, sol.values))
        assert err < 1e-7

    def test_fourth_order_slope_tracks_pulse(self):
        # the once-differentiated frame: v' plays the third-order dep
        p = nx.ode_problem("3.22", -10.0,
                           (0.0, m_exact(-10.0), m_exact(-10.0, 1),
                            m_exact(-10.0, 2)), {"alpha": 1.0})
        sol = nx.integrate_ode(p, (-10.0, 10.0), tolerance=1e-12)
        err = max(abs(v[1] - m_exact(s))
                  for s, v in zip(sol.grid, sol.values))
        assert err < 1e-6

    def test_solution_record_shape(self):
        sol = nx.integrate_ode(third_order_problem(), (-10.0, 10.0))
        assert sol.method_order == 4
        assert sol.error_estimate[0] == 0.0
        assert max(sol.error_estimate) <= 1e-10
        assert len(sol.grid) == len(sol.values) == len(sol.slopes)
        assert sol.span == (-10.0, 10.0)
        assert all(b > a for a, b in zip(sol.grid, sol.grid[1:]))

    def test_span_must_start_at_initial_point(self):
        with pytest.raises(PreconditionError):
            nx.integrate_ode(third_order_problem(), (-9.0, 10.0))
        with pytest.raises(PreconditionError):
            nx.integrate_ode(third_order_problem(), (-10.0, -11.0))

    def test_singular_start_rejected(self):
        p = nx.ode_problem("3.21", 0.0, (1.0, 0.0, 0.0), {"alpha": 1.0})
        with pytest.raises(PreconditionError, match="not finite"):
            nx.integrate_ode(p, (0.0, 1.0))

    def test_singular_frame_integrates_away_from_origin(self):
        p = nx.ode_problem("3.21", 1.0, (0.5, 0.0, 0.0), {"alpha": 1.0})
        sol = nx.integrate_ode(p, (1.0, 2.0), tolerance=1e-8)
        assert math.isfinite(sol.values[-1][0])

    def test_blowup_reported(self):
        p = nx.OdeProblem(parse("Y[]^2", SCALAR_CTX), 1, "s", "Y",
                          0.0, (1.0,), ())
        with pytest.raises(nx.IntegrationError):
            nx.integrate_ode(p, (0.0, 2.0))

    def test_fixed_step_grid(self):
        sol = nx.integrate_ode_fixed(third_order_problem(),
                                     (-10.0, 0.0), 0.25)
        assert len(sol.grid) == 41
        assert sol.grid[-1] == pytest.approx(0.0, abs=1e-12)

    def test_halving_ratio_shows_fourth_order(self):
        ratio = nx.convergence_ratio(third_order_problem(),
                                     (-10.0, 0.0), 0.25, m_exact)
        assert 12.0 <= ratio <= 20.0

    def test_dense_output(self):
        p = nx.travelling_wave_problem(
            1.0, 1.0, 1.0, -8.0, (TW.profile(-8.0), TW.profile(-8.0, 1)))
        sol = nx.integrate_ode(p, (-8.0, 8.0))
        mid = 0.5 * (sol.grid[10] + sol.grid[11])
        assert nx.evaluate(sol, mid) == pytest.approx(TW.profile(mid),
                                                      abs=1e-8)
        assert nx.evaluate(sol, mid, deriv=1) == pytest.approx(
            TW.profile(mid, 1), abs=1e-5)
        with pytest.raises(nx.LiftError):
            nx.evaluate(sol, mid, deriv=3)
        with pytest.raises(nx.LiftError):
            nx.evaluate(sol, 8.5)


class TestLift:
    def test_closed_lift_jets(self):
        t, x, y = 0.1, 0.4, 0.2
        s = x + y - TW.speed * t
        assert LIFTED.exact and LIFTED.max_jet_order == 5
        assert LIFTED.value(t, x, y) == pytest.approx(
            TW.antiderivative(s), abs=1e-15)
        assert LIFTED.jet(t, x, y, ("x",)) == pytest.approx(
            TW.profile(s), abs=1e-15)
        # each t-slot multiplies by minus the speed
        assert LIFTED.jet(t, x, y, ("t", "x")) == pytest.approx(
            -LIFTED.jet(t, x, y, ("x", "x")), abs=1e-15)
        assert LIFTED.jet(t, x, y, ("t", "t", "x")) == pytest.approx(
            LIFTED.jet(t, x, y, ("x", "x", "x")), abs=1e-15)

    def test_closed_lift_span_enforced(self):
        clipped = nx.lift(TW, span=(-2.0, 2.0))
        with pytest.raises(nx.LiftError, match="span"):
            clipped.value(0.0, 3.0, 0.0)

    def test_jet_order_cap(self):
        with pytest.raises(nx.LiftError):
            LIFTED.jet(0.0, 0.0, 0.0, ("x",) * 6)

    def test_numeric_lift_recovers_antiderivative(self):
        p = nx.travelling_wave_problem(
            1.0, 1.0, 1.0, -8.0, (TW.profile(-8.0), TW.profile(-8.0, 1)))
        sol = nx.integrate_ode(p, (-8.0, 8.0))
        nl = nx.lift(sol, alpha=1.0, beta=1.0, speed=1.0)
        assert not nl.exact and nl.max_jet_order == 4
        off = nl.wave_derivative(-8.0, 0) - TW.antiderivative(-8.0)
        gap = max(abs(nl.wave_derivative(-6 + 0.5 * i, 0)
                      - TW.antiderivative(-6 + 0.5 * i) - off)
                  for i in range(25))
        assert gap < 1e-6
        with pytest.raises(nx.LiftError):
            nl.wave_derivative(0.0, 5)
        with pytest.raises(nx.LiftError):
            nl.wave_derivative(9.5, 0)

    def test_numeric_lift_quadrature_consistency(self):
        p = nx.travelling_wave_problem(
            1.0, 1.0, 1.0, -8.0, (TW.profile(-8.0), TW.profile(-8.0, 1)))
        sol = nx.integrate_ode(p, (-8.0, 8.0))
        nl = nx.lift(sol, alpha=1.0, beta=1.0, speed=1.0)
        assert nx.quadrature_consistency(
            nl, list(sol.grid[5:-5:7])) < 1e-9
        samples = [-6 + 0.5 * i for i in range(25)]
        assert nx.quadrature_consistency(LIFTED, samples) < 1e-9

    def test_numeric_lift_needs_parameters(self):
        p = nx.travelling_wave_problem(1.0, 1.0, 1.0, 0.0, (0.1, 0.0))
        sol = nx.integrate_ode(p, (0.0, 1.0))
        with pytest.raises(PreconditionError):
            nx.lift(sol)

    def test_unknown_source_rejected(self):
        with pytest.raises(PreconditionError):
            nx.lift("pulse")

    def test_shift_is_exact_translation(self):
        sh = LIFTED.shifted(0.75)
        for (t, x, y) in [(-1.3, 2.0, 0.4), (0.6, -1.1, 2.2)]:
            assert sh.jet(t, x, y, ("x", "x")) == LIFTED.jet(
                t, x + 0.75, y, ("x", "x"))


class TestPdeResidual:
    def test_pulse_solves_equation(self):
        rep = nx.pde_residual(LIFTED, points=1000, seed=0)
        assert rep.points == 1000
        assert rep.max_abs < 1e-10
        assert rep.mean_abs <= rep.max_abs

    def test_deterministic_given_seed(self):
        assert nx.pde_residual(LIFTED, points=200, seed=7) == \
            nx.pde_residual(LIFTED, points=200, seed=7)

    def test_zero_solution(self):
        zero = nx.lift(nx.TravellingWave(0.0, 0.5, 1.0, 1.0, 1.0))
        assert nx.pde_residual(zero, points=200, seed=1).max_abs == 0.0

    def test_linear_solution(self):
        lin = nx.linear_wave_lift()
        assert nx.pde_residual(lin, points=200, seed=2).max_abs == 0.0

    def test_wrong_amplitude_detected(self):
        off = nx.lift(nx.TravellingWave(0.3, TW.width, 1.0, 1.0, 1.0))
        assert nx.pde_residual(off, points=200, seed=0).max_abs > 1e-3

    def test_shifted_pulse_still_solves(self):
        rep = nx.pde_residual(LIFTED.shifted(0.75), points=500, seed=3)
        assert rep.max_abs < 1e-12

    def test_unreachable_sampling_region_reported(self):
        clipped = nx.lift(TW, span=(100.0, 101.0))
        with pytest.raises(PreconditionError, match="sampling"):
            nx.pde_residual(clipped, points=5)


def constructed(name: str):
    table = {cl.name: cl for cl in bkmodel.construction_targets()}
    return bkmodel.ibragimov_fluxes(table[name].vf, PHI)


class TestNumericDivergence:
    def test_time_translation_triple(self):
        d = nx.numeric_divergence(constructed("G1a"), LIFTED,
                                  points=1000, seed=0)
        assert d.max_abs < 1e-8

    @pytest.mark.parametrize("name", [
        "G1a", "G2a-corrected", "G3a-corrected", "G4a", "G5a",
        "G6a-b1", "G6a-a1", "S", "G7a"])
    def test_every_concrete_verified_triple(self, name):
        triple = constructed(name)
        assert bkmodel.verify_conservation(triple).passed
        d = nx.numeric_divergence(triple, LIFTED, points=200, seed=0)
        assert d.max_abs < 1e-8

    def test_function_slots_refused(self):
        with pytest.raises(PreconditionError, match="function slots"):
            nx.numeric_divergence(constructed("G6a-corrected"), LIFTED,
                                  points=10)

    def test_corrupted_component_detected(self):
        tr = constructed("G1a")
        bad = bkmodel.ConservedTriple(
            tr.names, (tr.components[0], tr.components[1],
                       tr.components[2]
                       + parse("u[x]^2", bkmodel.MODEL_CONTEXT)))
        d = nx.numeric_divergence(bad, LIFTED, points=200, seed=0)
        assert d.max_abs > 1e-3

    def test_spline_lift_refused(self):
        p = nx.travelling_wave_problem(1.0, 1.0, 1.0, 0.0, (0.1, 0.0))
        sol = nx.integrate_ode(p, (0.0, 1.0))
        nl = nx.lift(sol, alpha=1.0, beta=1.0, speed=1.0)
        with pytest.raises(nx.LiftError):
            nx.numeric_divergence(constructed("G1a"), nl, points=10)
