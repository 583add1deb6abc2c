import numpy as np
import pytest

from anholonomy.analytics.adiabatic import (
    Schedule,
    adiabatic_evolve,
    anholonomic_cycle,
    convergence_scan,
    flow_for_schedule,
    norm_trace,
    phase_decompose,
    plan_cycles,
    sudden_switch_off,
)
from anholonomy.exceptions import GridMismatch

TWO_PI = 2 * np.pi


class TestSchedule:
    def test_grid(self):
        schedule = Schedule(lambda0=0.0, span=TWO_PI, m=4)
        assert schedule.lambdas == pytest.approx([np.pi / 2, np.pi, 3 * np.pi / 2, TWO_PI])
        assert schedule.final_lambda == pytest.approx(TWO_PI)
        assert schedule.max_step == pytest.approx(np.pi / 2)

    def test_empty_schedule(self):
        schedule = Schedule(lambda0=0.3, span=TWO_PI, m=0)
        assert len(schedule.lambdas) == 0
        assert schedule.max_step == 0.0

    def test_invalid(self):
        with pytest.raises(GridMismatch):
            Schedule(lambda0=0.0, span=1.0, m=-1)
        with pytest.raises(GridMismatch):
            Schedule(lambda0=0.0, span=1.0, m=10, profile="cubic")
        with pytest.raises(GridMismatch):
            Schedule(lambda0=0.0, span=-np.pi, m=10)


class TestTwoLevel:
    @pytest.mark.parametrize("m", [100, 1600])
    def test_even_step_count_transfers_exactly(self, pi_model, m):
        run = adiabatic_evolve(pi_model.family(), Schedule(lambda0=0.0, span=TWO_PI, m=m), 0)
        assert run.target_level == 1
        assert run.fidelity == pytest.approx(1.0, abs=1e-10)
        assert run.phase_residual == pytest.approx(0.0, abs=1e-6)
        assert run.geometric_phase == pytest.approx(0.0, abs=1e-9)
        assert not run.phases.closed

    @pytest.mark.parametrize("m", [101, 801])
    def test_odd_step_count_leaves_one_step_error(self, pi_model, m):
        run = adiabatic_evolve(pi_model.family(), Schedule(lambda0=0.0, span=TWO_PI, m=m), 0)
        assert run.fidelity == pytest.approx(np.cos(np.pi / (2 * m)), abs=1e-10)

    def test_dynamical_phase_is_the_sum_of_quasienergies(self, pi_model):
        m = 1600
        run = adiabatic_evolve(pi_model.family(), Schedule(lambda0=0.0, span=TWO_PI, m=m), 0)
        expected = np.sum(TWO_PI * np.arange(1, m + 1) / m / 2)
        assert np.exp(1j * run.dynamical_phase) == pytest.approx(np.exp(1j * expected), abs=1e-6)

    def test_open_span_follows_the_continued_vector(self, pi_model):
        run = adiabatic_evolve(pi_model.family(), Schedule(lambda0=0.0, span=np.pi, m=400), 0)
        assert run.target_level == 0
        assert run.fidelity == pytest.approx(1.0, abs=1e-10)
        assert run.phase_residual == pytest.approx(0.0, abs=1e-6)

    def test_two_cycles_return_with_sign(self, pi_model):
        run = anholonomic_cycle(pi_model.family(), m=1600, k=2)
        assert [r.expected_level for r in run.cycle_reports] == [1, 0]
        assert run.cycle_reports[-1].dominant_level == 0
        assert run.target_level == 0
        assert run.phases.closed
        assert run.fidelity >= 0.998
        assert np.exp(1j * run.geometric_phase) == pytest.approx(-1.0, abs=1e-9)
        assert run.phase_residual == pytest.approx(0.0, abs=1e-6)

    def test_zero_steps_is_identity(self, pi_model):
        run = anholonomic_cycle(pi_model.family(), m=0, k=1)
        assert run.fidelity == pytest.approx(1.0)
        assert run.target_level == 0
        assert np.allclose(run.final_state, run.initial_state)
        assert list(run.norms) == [1.0]

    def test_phase_decompose_matches_run(self, pi_model):
        family = pi_model.family()
        schedule = Schedule(lambda0=0.0, span=TWO_PI, m=200)
        flow = flow_for_schedule(family, schedule)
        run = adiabatic_evolve(family, schedule, 1, flow=flow)
        phases = phase_decompose(run, flow)
        assert phases.residual == pytest.approx(run.phase_residual)
        assert phases.geometric == pytest.approx(run.geometric_phase)


def test_tilted_convergence(tilted_model):
    ms = [100, 200, 400, 800, 1600]
    rows = convergence_scan(tilted_model.family(), TWO_PI, ms)
    assert [row.m for row in rows] == ms
    infidelities = [row.infidelity for row in rows]
    assert all(later < earlier for earlier, later in zip(infidelities, infidelities[1:]))
    assert 1.0 - infidelities[-1] >= 0.999


def test_convergence_scan_requires_ascending(pi_model):
    with pytest.raises(GridMismatch):
        convergence_scan(pi_model.family(), TWO_PI, [200, 100])


def test_frozen_family(frozen_family):
    m = 50
    run = adiabatic_evolve(frozen_family, Schedule(lambda0=0.0, span=TWO_PI, m=m), 1)
    assert run.target_level == 1
    assert run.phases.closed
    assert run.fidelity == pytest.approx(1.0, abs=1e-12)
    assert np.exp(1j * run.dynamical_phase) == pytest.approx(np.exp(1j * m * 1.7), abs=1e-9)
    assert run.geometric_phase == pytest.approx(0.0, abs=1e-9)
    assert run.phase_residual == pytest.approx(0.0, abs=1e-9)


class TestClockModel:
    def test_three_cycles_move_three_levels(self, clock_model):
        run = anholonomic_cycle(clock_model.family(), m=800, k=3)
        assert [r.expected_level for r in run.cycle_reports] == [1, 2, 3]
        assert all(r.dominant_level == r.expected_level for r in run.cycle_reports)
        assert run.target_level == 3
        assert run.fidelity >= 0.99

    def test_full_orbit_returns(self, clock_model):
        run = anholonomic_cycle(clock_model.family(), m=800, k=5)
        assert run.cycle_reports[-1].dominant_level == 0
        assert run.phases.closed

    def test_norm_is_conserved(self, clock_model):
        run = anholonomic_cycle(clock_model.family(), m=200, k=2)
        trace = norm_trace(run)
        assert len(trace) == 401
        assert np.allclose(trace, 1.0, atol=1e-12)


@pytest.mark.parametrize("permutation, initial, target, expected", [
    ([1, 2, 0], 0, 2, 2),
    ([1, 2, 0], 1, 1, 0),
    ([1, 0, 2], 0, 2, None),
])
def test_plan_cycles(permutation, initial, target, expected):
    assert plan_cycles(permutation, initial, target) == expected


def test_sudden_switch_off_freezes_population(pi_model):
    family = pi_model.family()
    xi = family.u0.spectrum.eigenvectors[:, 1]
    trace = sudden_switch_off(family, xi, steps=20)
    assert len(trace) == 21
    assert np.allclose(trace, 1.0, atol=1e-12)
    mixed = (family.u0.spectrum.eigenvectors[:, 0] + 2 * xi) / np.sqrt(5.0)
    assert np.allclose(sudden_switch_off(family, mixed, steps=10), 2 / np.sqrt(5.0), atol=1e-12)


class TestRandomCyclic:
    @pytest.fixture(scope="class")
    def five_cycles(self, cyclic_model):
        return anholonomic_cycle(cyclic_model.family(), m=3200, k=5)

    def test_each_cycle_moves_one_level(self, five_cycles):
        assert [r.expected_level for r in five_cycles.cycle_reports] == [1, 2, 3, 4, 0]
        assert all(r.dominant_level == r.expected_level for r in five_cycles.cycle_reports)

    def test_third_cycle_lands_on_level_three(self, cyclic_model):
        run = anholonomic_cycle(cyclic_model.family(), m=3200, k=3)
        assert run.target_level == 3
        assert run.cycle_reports[-1].dominant_level == 3
        assert run.fidelity >= 0.99

    def test_fifth_cycle_returns(self, five_cycles):
        assert five_cycles.target_level == 0
        assert five_cycles.cycle_reports[-1].dominant_level == 0
        assert five_cycles.phases.closed
        assert np.allclose(norm_trace(five_cycles), 1.0, atol=1e-12)

    def test_infidelity_at_3200_steps(self, cyclic_model):
        rows = convergence_scan(cyclic_model.family(), TWO_PI, [3200])
        assert rows[0].infidelity < 1e-2