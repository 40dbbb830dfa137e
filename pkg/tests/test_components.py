"""Optical elements: pinned phase conventions and routing rules."""

from __future__ import annotations

import numpy as np
import pytest

from zenokey.components import (
    BS_MATRIX,
    SwitchSchedule,
    beamsplitter,
    circulator_route,
    mirror,
    pbs,
    pockels_cell,
    polarization_rotator,
    rotation_matrix,
)
from zenokey.state import Detector, Mode, PhotonState, Polarization, new_state

TOL = 1e-12


def test_beamsplitter_matrix_convention():
    r = 1.0 / np.sqrt(2.0)
    assert BS_MATRIX[0, 0] == pytest.approx(r)
    assert BS_MATRIX[1, 1] == pytest.approx(r)
    assert BS_MATRIX[0, 1] == pytest.approx(1j * r)
    assert BS_MATRIX[1, 0] == pytest.approx(1j * r)
    np.testing.assert_allclose(BS_MATRIX.conj().T @ BS_MATRIX, np.eye(2), atol=TOL)


def test_beamsplitter_splits_evenly():
    state = new_state(Mode.ARM_OUTER_B, Polarization.H)
    beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
    assert state.mode_probability(Mode.ARM_OUTER_B) == pytest.approx(0.5, abs=TOL)
    assert state.mode_probability(Mode.ARM_OUTER_C) == pytest.approx(0.5, abs=TOL)


def test_double_beamsplitter_is_a_swap_up_to_global_phase():
    state = new_state(Mode.ARM_OUTER_B, Polarization.H)
    beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
    beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
    assert state.amplitude(Mode.ARM_OUTER_B, Polarization.H) == pytest.approx(
        0.0, abs=TOL
    )
    assert state.amplitude(Mode.ARM_OUTER_C, Polarization.H) == pytest.approx(
        1.0j, abs=TOL
    )


def test_michelson_port_algebra():
    """Arm transfers beta and gamma end up as (beta - gamma)/2 at the
    input port and i(beta + gamma)/2 at the other, per polarization."""
    rng = np.random.default_rng(7)
    for _ in range(50):
        beta, gamma = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        scale = max(np.abs(beta).max(), np.abs(gamma).max())
        beta, gamma = beta / scale, gamma / scale
        state = PhotonState()
        state.amps[Mode.ARM_OUTER_B] = [1.0, 0.0]
        beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
        # stand-in for arbitrary (possibly lossy) arm transfers of the
        # H input: each arm's outgoing amplitude acquires the transfer
        factor_b = state.amplitude(Mode.ARM_OUTER_B, Polarization.H)
        factor_c = state.amplitude(Mode.ARM_OUTER_C, Polarization.H)
        state.amps[Mode.ARM_OUTER_B] = factor_b * beta
        state.amps[Mode.ARM_OUTER_C] = factor_c * gamma
        beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
        np.testing.assert_allclose(
            state.amps[Mode.ARM_OUTER_B], (beta - gamma) / 2.0, atol=TOL
        )
        np.testing.assert_allclose(
            state.amps[Mode.ARM_OUTER_C], 1j * (beta + gamma) / 2.0, atol=TOL
        )


def test_rotation_matrix_composition():
    a, b = 0.3, 1.1
    np.testing.assert_allclose(
        rotation_matrix(a) @ rotation_matrix(b), rotation_matrix(a + b), atol=TOL
    )


def test_rotator_quarter_angle():
    state = new_state(Mode.ARM_OUTER_B, Polarization.H)
    polarization_rotator(state, Mode.ARM_OUTER_B, np.pi / 4.0)
    r = 1.0 / np.sqrt(2.0)
    assert state.amplitude(Mode.ARM_OUTER_B, Polarization.H) == pytest.approx(r)
    assert state.amplitude(Mode.ARM_OUTER_B, Polarization.V) == pytest.approx(r)

    state = new_state(Mode.ARM_OUTER_B, Polarization.V)
    polarization_rotator(state, Mode.ARM_OUTER_B, np.pi / 4.0)
    assert state.amplitude(Mode.ARM_OUTER_B, Polarization.H) == pytest.approx(-r)
    assert state.amplitude(Mode.ARM_OUTER_B, Polarization.V) == pytest.approx(r)


def test_rotator_half_turn_sends_h_to_v():
    state = new_state(Mode.ARM_OUTER_B, Polarization.H)
    polarization_rotator(state, Mode.ARM_OUTER_B, np.pi / 2.0)
    assert abs(state.amplitude(Mode.ARM_OUTER_B, Polarization.H)) < TOL
    assert state.amplitude(Mode.ARM_OUTER_B, Polarization.V) == pytest.approx(1.0)


def test_rotator_leaves_other_modes_alone():
    state = new_state(Mode.ARM_OUTER_C, Polarization.H)
    polarization_rotator(state, Mode.ARM_OUTER_B, 0.7)
    assert state.amplitude(Mode.ARM_OUTER_C, Polarization.H) == 1.0


def test_pbs_routes_each_polarization():
    state = PhotonState()
    state.amps[Mode.ARM_INNER_B, Polarization.H] = 0.6
    state.amps[Mode.ARM_INNER_B, Polarization.V] = 0.8
    pbs(state, Mode.ARM_INNER_B, Mode.CHANNEL_B, Mode.ARM_INNER_B)
    assert state.amplitude(Mode.CHANNEL_B, Polarization.H) == 0.6
    assert state.amplitude(Mode.ARM_INNER_B, Polarization.H) == 0.0
    # V was routed to its own mode: identity
    assert state.amplitude(Mode.ARM_INNER_B, Polarization.V) == 0.8


def test_pbs_is_an_exchange_so_the_return_pass_reuses_it():
    state = PhotonState()
    state.amps[Mode.CHANNEL_B, Polarization.H] = 1.0
    pbs(state, Mode.ARM_INNER_B, Mode.CHANNEL_B, Mode.ARM_INNER_B)
    assert state.amplitude(Mode.ARM_INNER_B, Polarization.H) == 1.0
    assert state.amplitude(Mode.CHANNEL_B, Polarization.H) == 0.0


def test_pbs_double_application_is_identity():
    rng = np.random.default_rng(3)
    state = PhotonState()
    state.amps = (rng.normal(size=(9, 2)) + 1j * rng.normal(size=(9, 2))) / 5.0
    before = state.amps.copy()
    for _ in range(2):
        pbs(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_B, Mode.ARM_INNER_B)
    np.testing.assert_array_equal(state.amps, before)


def test_pbs_rejects_merged_outputs():
    state = new_state(Mode.ARM_INNER_B, Polarization.H)
    with pytest.raises(ValueError, match="distinct"):
        pbs(state, Mode.ARM_INNER_B, Mode.CHANNEL_B, Mode.CHANNEL_B)


def test_pockels_cell_on_flips_polarization():
    state = PhotonState()
    state.amps[Mode.CHANNEL_B, Polarization.H] = 0.6
    state.amps[Mode.CHANNEL_B, Polarization.V] = 0.8j
    pockels_cell(state, Mode.CHANNEL_B, on=True)
    assert state.amplitude(Mode.CHANNEL_B, Polarization.H) == 0.8j
    assert state.amplitude(Mode.CHANNEL_B, Polarization.V) == 0.6
    pockels_cell(state, Mode.CHANNEL_B, on=True)
    assert state.amplitude(Mode.CHANNEL_B, Polarization.H) == 0.6


def test_pockels_cell_off_is_identity():
    state = new_state(Mode.CHANNEL_B, Polarization.H)
    pockels_cell(state, Mode.CHANNEL_B, on=False)
    assert state.amplitude(Mode.CHANNEL_B, Polarization.H) == 1.0


def test_mirror_is_phase_plus_one():
    state = new_state(Mode.CHANNEL_B, Polarization.H)
    before = state.amps.copy()
    assert mirror(state, Mode.CHANNEL_B) is state
    np.testing.assert_array_equal(state.amps, before)


def test_circulator_routing():
    assert circulator_route(Mode.EXIT_1) is Detector.D1
    assert circulator_route(Mode.EXIT_2) is Detector.D2
    with pytest.raises(ValueError):
        circulator_route(Mode.ARM_OUTER_B)


class TestSwitchSchedule:
    def test_shape_matches_cycle_counts(self):
        sched = SwitchSchedule.from_cycles(3, 4, blocked=True)
        assert sched.outer_cycles == 3
        assert sched.inner_cycles == 4
        assert len(sched.spr1_fires) == 3
        assert len(sched.sm1_open) == 4  # one more than outer cycles
        assert len(sched.spr2_fires) == 3
        assert all(len(row) == 4 for row in sched.spr2_fires)
        assert all(len(row) == 5 for row in sched.sm2_open)

    def test_mirrors_open_only_at_loop_boundaries(self):
        sched = SwitchSchedule.from_cycles(3, 4, blocked=False)
        assert sched.sm1_open == (True, False, False, True)
        for row in sched.sm2_open:
            assert row == (True, False, False, False, True)

    def test_pockels_plan_tracks_blocking(self):
        assert all(
            all(row) for row in SwitchSchedule.from_cycles(2, 3, blocked=True).pc_on
        )
        assert not any(
            any(row) for row in SwitchSchedule.from_cycles(2, 3, blocked=False).pc_on
        )

    def test_rejects_degenerate_cycle_counts(self):
        with pytest.raises(ValueError):
            SwitchSchedule.from_cycles(0, 2, blocked=False)
        with pytest.raises(ValueError):
            SwitchSchedule.from_cycles(2, 0, blocked=True)
