import math

import numpy as np
import pytest

from sqwbench.circuit import DEFAULT_PARAMS, CircuitParams
from sqwbench.errors import UnreachableFluxError, ValidationError
from sqwbench.graph import (
    build_graph,
    generate_lattice_tessellations,
    generate_path_tessellations,
)
from sqwbench.oracle import brute_force_evolve
from sqwbench.schedule import (
    PulseInterval,
    PulseSchedule,
    compile_schedule,
    emit_schedule,
    feasibility_notes,
    parse_schedule,
    simulate_compiled,
    validate_schedule,
)
from sqwbench.walk import CONVENTION_ABSTRACT, WalkConfig, evolve, initial_basis_state


def compile_quietly(*args, **kwargs):
    with pytest.warns(RuntimeWarning):
        return compile_schedule(*args, **kwargs)


class TestCompile:
    def test_path5_single_step(self):
        g, ts = generate_path_tessellations(5)
        run = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, 1)
        s = run.schedule
        assert len(s.intervals) == 2
        assert s.intervals[0].on_pairs == ((0, 1), (2, 3))
        assert s.intervals[1].on_pairs == ((1, 2), (3, 4))
        assert s.intervals[0].index == 0 and s.intervals[1].index == 1
        assert s.repetitions == 1
        assert s.tau_seconds > 0
        assert s.flux_on_ratio == 1.0
        assert s.flux_off_ratio == pytest.approx(0.4801, abs=5e-4)

    def test_zero_steps_is_valid_and_empty(self):
        g, ts = generate_path_tessellations(5)
        run = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, 0)
        assert run.schedule.intervals == ()
        assert validate_schedule(run.schedule, g) == []

    def test_lattice_two_steps_covers_each_edge_twice(self):
        g, ts = generate_lattice_tessellations([3, 3])
        run = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, 2)
        assert len(run.schedule.intervals) == 8
        counts: dict = {}
        for interval in run.schedule.intervals:
            for pair in interval.on_pairs:
                counts[pair] = counts.get(pair, 0) + 1
        assert set(counts) == set(g.edges)
        assert all(c == 2 for c in counts.values())

    def test_one_step_union_covers_edge_set(self):
        g, ts = generate_lattice_tessellations([4, 3])
        run = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, 1)
        on = {p for iv in run.schedule.intervals for p in iv.on_pairs}
        assert on == set(g.edges)

    def test_invalid_tessellation_rejected(self):
        from sqwbench.graph import Tessellation, TessellationSet

        g = build_graph(3, [(0, 1), (1, 2)])
        bad = TessellationSet((Tessellation(((0, 2), (1,))),))
        with pytest.raises(ValidationError):
            compile_schedule(g, bad, math.pi / 3, DEFAULT_PARAMS, 1)

    def test_unreachable_off_flux_rejected(self):
        weak = CircuitParams(
            cap_per_length=1e-10,
            ind_per_length=2.5e-7,
            half_length=1e-2,
            junction_capacitance=1e-15,
            josephson_energy=1e-28,
        )
        g, ts = generate_path_tessellations(5)
        with pytest.raises(UnreachableFluxError):
            compile_schedule(g, ts, math.pi / 3, weak, 1)

    def test_zero_angle_rejected(self):
        g, ts = generate_path_tessellations(5)
        with pytest.raises(ValidationError):
            compile_schedule(g, ts, 0.0, DEFAULT_PARAMS, 1)

    def test_angle_reduced_modulo_period(self):
        g, ts = generate_path_tessellations(5)
        a = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, 1)
        b = compile_quietly(g, ts, math.pi / 3 + 2 * math.pi, DEFAULT_PARAMS, 1)
        assert b.schedule.tau_seconds == pytest.approx(a.schedule.tau_seconds, rel=1e-12)


class TestSoundness:
    @pytest.mark.parametrize("maker", [lambda: generate_path_tessellations(5),
                                       lambda: generate_lattice_tessellations([3, 3])])
    def test_simulating_compiled_equals_direct_evolution(self, maker):
        g, ts = maker()
        steps = 3
        run = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, steps)
        psi = initial_basis_state(g.node_count, g.node_count // 2)
        compiled_out = simulate_compiled(run, psi, g, convention=CONVENTION_ABSTRACT)
        direct = evolve(psi, ts, WalkConfig(math.pi / 3, steps, CONVENTION_ABSTRACT), graph=g)
        assert np.array_equal(compiled_out, direct)
        oracle = brute_force_evolve(psi, ts, math.pi / 3, steps)
        assert np.max(np.abs(compiled_out - oracle)) < 1e-9

    def test_compiled_schedule_always_validates(self):
        g, ts = generate_lattice_tessellations([2, 3])
        run = compile_quietly(g, ts, 1.0, DEFAULT_PARAMS, 2)
        assert validate_schedule(run.schedule, g) == []


class TestValidateSchedule:
    def test_double_driven_node(self):
        g, _ = generate_path_tessellations(3)
        s = PulseSchedule(1e-6, 1.0, 0.48, 1, (PulseInterval(0, ((0, 1), (1, 2))),))
        violations = validate_schedule(s, g)
        assert any("node 1" in v and "more than one pair" in v for v in violations)

    def test_non_edge_pair(self):
        g, _ = generate_path_tessellations(3)
        s = PulseSchedule(1e-6, 1.0, 0.48, 1, (PulseInterval(0, ((0, 2),)),))
        violations = validate_schedule(s, g)
        assert any("not an edge" in v for v in violations)

    def test_non_positive_tau(self):
        g, _ = generate_path_tessellations(3)
        s = PulseSchedule(-1.0, 1.0, 0.48, 0, ())
        assert any("not positive" in v for v in validate_schedule(s, g))


class TestFeasibility:
    def test_stock_constants_are_below_switching_budget(self):
        g, ts = generate_path_tessellations(5)
        with pytest.warns(RuntimeWarning, match="switching budget"):
            run = compile_schedule(g, ts, math.pi / 3, DEFAULT_PARAMS, 1)
        assert feasibility_notes(run.schedule)

    def test_slow_schedule_has_no_notes(self):
        s = PulseSchedule(5e-7, 1.0, 0.48, 0, ())
        assert feasibility_notes(s) == []


class TestWireFormat:
    def test_round_trip_identity(self):
        g, ts = generate_lattice_tessellations([3, 3])
        run = compile_quietly(g, ts, math.pi / 3, DEFAULT_PARAMS, 2)
        text = emit_schedule(run.schedule)
        assert parse_schedule(text) == run.schedule
        # a second emit of the parsed schedule is byte-identical
        assert emit_schedule(parse_schedule(text)) == text

    def test_truncated_file_names_byte_offset(self):
        g, ts = generate_path_tessellations(5)
        text = emit_schedule(compile_quietly(g, ts, 1.0, DEFAULT_PARAMS, 1).schedule)
        with pytest.raises(ValidationError, match="byte offset"):
            parse_schedule(text[: len(text) // 2])

    def test_negative_tau_rejected_on_load(self):
        text = '{"version": 1, "tau_s": -1.0, "flux_on": 1.0, "flux_off": 0.48, "steps": 0, "intervals": []}'
        with pytest.raises(ValidationError, match="tau_s"):
            parse_schedule(text)

    def test_unknown_version_rejected(self):
        text = '{"version": 2, "tau_s": 1e-6, "flux_on": 1.0, "flux_off": 0.48, "steps": 0, "intervals": []}'
        with pytest.raises(ValidationError, match="version"):
            parse_schedule(text)

    def test_missing_key_rejected(self):
        with pytest.raises(ValidationError, match="missing key"):
            parse_schedule('{"version": 1}')

    def test_double_driven_node_rejected_on_load(self):
        text = (
            '{"version": 1, "tau_s": 1e-6, "flux_on": 1.0, "flux_off": 0.48, "steps": 1,'
            ' "intervals": [{"idx": 0, "on": [[0, 1], [1, 2]]}]}'
        )
        with pytest.raises(ValidationError, match="more than one pair"):
            parse_schedule(text)

    def test_malformed_pair_rejected_on_load(self):
        text = (
            '{"version": 1, "tau_s": 1e-6, "flux_on": 1.0, "flux_off": 0.48, "steps": 1,'
            ' "intervals": [{"idx": 0, "on": [[0, 1, 2]]}]}'
        )
        with pytest.raises(ValidationError):
            parse_schedule(text)
