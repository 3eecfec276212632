import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsubset.errors import DegenerateMarking, DimensionTooLarge
from qsubset.qsim import (
    MarkPredicate,
    TwoLevelState,
    average_success_probability,
    closed_form_state,
    default_n_ops,
    diffuse,
    flip,
    grover_angle,
    grover_search,
    grover_statevector,
    measure_statevector,
    measure_two_level,
)

dims_and_marks = st.integers(min_value=2, max_value=512).flatmap(
    lambda d: st.tuples(st.just(d), st.integers(min_value=1, max_value=d - 1))
)


class TestGroverAngle:
    def test_known_value(self):
        assert grover_angle(32, 7) == pytest.approx(0.4866949550747732, abs=1e-15)
        assert grover_angle(4, 1) == pytest.approx(math.pi / 6.0)

    @given(dims_and_marks)
    def test_sine_squared_is_marked_fraction(self, dm):
        d, m = dm
        assert math.sin(grover_angle(d, m)) ** 2 == pytest.approx(m / d)

    def test_degenerate_markings_rejected(self):
        with pytest.raises(DegenerateMarking):
            grover_angle(8, 0)
        with pytest.raises(DegenerateMarking):
            grover_angle(8, 8)


class TestClosedFormState:
    def test_zero_ops_is_uniform(self):
        state = closed_form_state(16, 3, 0)
        assert state.marked_amp == pytest.approx(1.0 / 4.0)
        assert state.unmarked_amp == pytest.approx(1.0 / 4.0)

    @given(dims_and_marks, st.integers(min_value=0, max_value=40))
    def test_normalized_for_any_operation_count(self, dm, n_ops):
        d, m = dm
        state = closed_form_state(d, m, n_ops)
        total = m * state.marked_amp**2 + (d - m) * state.unmarked_amp**2
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_matches_statevector(self, rng):
        for _ in range(30):
            d = 1 << int(rng.integers(1, 9))
            m = int(rng.integers(1, d))
            j = int(rng.integers(0, 41))
            marked = rng.choice(d, size=m, replace=False)
            amps = grover_statevector(d, marked, j)
            state = closed_form_state(d, m, j)
            expected = np.where(np.isin(np.arange(d), marked),
                                state.marked_amp, state.unmarked_amp)
            np.testing.assert_allclose(amps, expected, atol=1e-10)

    def test_normalization_guard(self):
        with pytest.raises(ValueError, match="normalized"):
            TwoLevelState(dim=4, n_marked=1, marked_amp=1.0, unmarked_amp=1.0)


class TestOperators:
    def test_flip_negates_marked_only(self):
        amps = np.array([0.5, 0.5, 0.5, 0.5])
        mask = np.array([True, False, True, False])
        np.testing.assert_array_equal(flip(amps, mask), [-0.5, 0.5, -0.5, 0.5])

    def test_diffuse_reflects_about_mean(self, rng):
        amps = rng.standard_normal(8)
        np.testing.assert_allclose(diffuse(amps), 2.0 * amps.mean() - amps)

    def test_diffuse_preserves_norm(self, rng):
        amps = rng.standard_normal(16)
        amps /= np.linalg.norm(amps)
        assert np.linalg.norm(diffuse(amps)) == pytest.approx(1.0)

    def test_single_op_at_quarter_marking_is_exact(self):
        # theta = pi/6 when 1 of 4 states is marked, so one operation
        # rotates all amplitude onto the marked state.
        amps = grover_statevector(4, [2], 1)
        np.testing.assert_allclose(amps, [0.0, 0.0, 1.0, 0.0], atol=1e-15)

    def test_statevector_guard(self):
        with pytest.raises(DimensionTooLarge):
            grover_statevector(1 << 17, [0], 1)


class TestMarkPredicate:
    def test_from_indices(self):
        pred = MarkPredicate.from_indices([1, 3], 4)
        assert pred.n_marked == 2
        np.testing.assert_array_equal(pred.mask(4), [False, True, False, True])
        with pytest.raises(ValueError, match="out of range"):
            MarkPredicate.from_indices([4], 4)

    def test_from_callable(self):
        pred = MarkPredicate.from_callable(lambda i: i % 2, 6)
        assert pred.n_marked == 3


class TestMeasurement:
    def test_statevector_measurement_is_deterministic_at_certainty(self):
        amps = np.zeros(8)
        amps[5] = 1.0
        assert measure_statevector(amps, np.random.default_rng(0)) == 5

    def test_statevector_measurement_frequencies(self, rng):
        amps = np.sqrt(np.array([0.7, 0.2, 0.1]))
        draws = np.array([measure_statevector(amps, rng) for _ in range(4000)])
        freq = np.bincount(draws, minlength=3) / draws.size
        np.testing.assert_allclose(freq, [0.7, 0.2, 0.1], atol=0.04)

    def test_two_level_uses_one_variate(self):
        state = closed_form_state(8, 2, 1)
        rng = np.random.default_rng(123)
        measure_two_level(state, np.array([0, 1]), np.arange(2, 8), rng)
        # Exactly one uniform consumed: the next draw continues the stream.
        assert rng.random() == np.random.default_rng(123).random(2)[1]

    def test_two_level_frequency_matches_success_probability(self, rng):
        state = closed_form_state(16, 3, 2)
        marked = np.array([4, 9, 11])
        unmarked = np.setdiff1d(np.arange(16), marked)
        hits = sum(
            measure_two_level(state, marked, unmarked, rng) in set(marked.tolist())
            for _ in range(5000)
        )
        sigma = math.sqrt(state.success_probability * (1 - state.success_probability) / 5000)
        assert hits / 5000 == pytest.approx(state.success_probability, abs=4.5 * sigma)

    def test_two_level_partition_checked(self):
        state = closed_form_state(8, 2, 1)
        with pytest.raises(ValueError, match="marked index count"):
            measure_two_level(state, np.array([0]), np.arange(2, 8), None)
        with pytest.raises(ValueError, match="unmarked index count"):
            measure_two_level(state, np.array([0, 1]), np.arange(2, 7), None)

    def test_two_level_certain_state_always_lands_marked(self):
        # One op on 1-of-4 marking has success probability exactly 1.
        state = closed_form_state(4, 1, 1)
        rng = np.random.default_rng(7)
        draws = {measure_two_level(state, np.array([3]), np.arange(3), rng) for _ in range(50)}
        assert draws == {3}


class TestGroverSearch:
    def test_default_operation_counts(self):
        assert default_n_ops(4) == 2
        assert default_n_ops(32) == 5
        assert default_n_ops(128) == 9

    def test_finds_certain_target(self):
        # D=4 with one operation is an exact rotation onto the target.
        hits = [grover_search(4, 2, 1, np.random.default_rng(s)) for s in range(40)]
        assert hits == [2] * 40

    def test_single_state_space(self):
        assert grover_search(1, 0, rng=np.random.default_rng(0)) == 0

    def test_target_validation(self):
        with pytest.raises(ValueError, match="target"):
            grover_search(8, 8)

    def test_default_count_success_rate(self, rng):
        # ceil(pi sqrt(128)/4) = 9 operations succeed with probability
        # sin^2(19 theta) = 0.98778 (not certainty).
        expected = math.sin(19 * grover_angle(128, 1)) ** 2
        assert expected == pytest.approx(0.9877786386137218, abs=1e-12)
        hits = sum(grover_search(128, 77, rng=rng) == 77 for _ in range(3000))
        sigma = math.sqrt(expected * (1 - expected) / 3000)
        assert hits / 3000 == pytest.approx(expected, abs=4.5 * sigma)


class TestAveragedSuccess:
    def test_known_point(self):
        # Uniform tau over {0} only: the average equals the initial M/D.
        assert average_success_probability(4, 1, 1) == pytest.approx(0.25)

    @given(dims_and_marks, st.integers(min_value=1, max_value=25))
    @settings(max_examples=60)
    def test_matches_direct_average(self, dm, max_ops):
        d, m = dm
        theta = grover_angle(d, m)
        direct = np.mean([math.sin((2 * j + 1) * theta) ** 2 for j in range(max_ops)])
        assert average_success_probability(d, m, max_ops) == pytest.approx(
            float(direct), abs=1e-12
        )

    def test_quarter_bound_when_count_is_large_enough(self):
        for d, m in ((8, 1), (64, 5), (512, 100)):
            theta = grover_angle(d, m)
            tau = math.ceil(1.0 / math.sin(2 * theta))
            assert average_success_probability(d, m, tau) >= 0.25

    def test_requires_positive_count(self):
        with pytest.raises(ValueError, match="max_ops"):
            average_success_probability(8, 1, 0)
