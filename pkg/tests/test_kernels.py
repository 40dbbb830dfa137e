"""Backend selection and bit-parity between the sampling kernels."""

from __future__ import annotations

import numpy as np
import pytest

from zenokey import _sampling_py, kernels
from zenokey.session import ProtocolConfig, TamperKind, TamperModel, session_tables

try:
    from zenokey import _sampling_cy
except ImportError:  # pure-source install
    _sampling_cy = None

needs_compiled = pytest.mark.skipif(
    _sampling_cy is None, reason="compiled kernel not built"
)


def _tables(tamper_b=TamperModel(), tamper_c=TamperModel()) -> np.ndarray:
    config = ProtocolConfig(
        m=2, n=2, rounds=1, seed=0, tamper_b=tamper_b, tamper_c=tamper_c
    )
    return session_tables(config)


def test_a_backend_was_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_table_shape_is_validated():
    with pytest.raises(ValueError, match="shape"):
        kernels.sample_rounds(0, 10, 0.0, 0.0, np.zeros((2, 2, 2, 2, 31)))


def test_outputs_are_uint8_arrays():
    out = kernels.sample_rounds(3, 64, 0.0, 0.0, _tables())
    assert len(out) == 5
    for arr in out:
        assert arr.dtype == np.uint8
        assert arr.shape == (64,)


@needs_compiled
def test_backends_agree_bit_for_bit():
    tables = _tables()
    for seed in (0, 1, 2**63 + 11):
        got_cy = _sampling_cy.sample_rounds(seed, 40_000, 0.0, 0.0, tables)
        got_py = _sampling_py.sample_rounds(seed, 40_000, 0.0, 0.0, tables)
        for a, b in zip(got_cy, got_py):
            np.testing.assert_array_equal(a, b)


@needs_compiled
def test_backends_agree_with_engaged_tampers():
    tables = _tables(
        tamper_b=TamperModel(TamperKind.PRESENCE_PROBE, 0.4),
        tamper_c=TamperModel(TamperKind.POL_FLIP, 0.7),
    )
    got_cy = _sampling_cy.sample_rounds(99, 40_000, 0.4, 0.7, tables)
    got_py = _sampling_py.sample_rounds(99, 40_000, 0.4, 0.7, tables)
    for a, b in zip(got_cy, got_py):
        np.testing.assert_array_equal(a, b)


@needs_compiled
def test_compiled_kernel_accepts_read_only_tables():
    tables = _tables()
    assert not tables.flags.writeable
    out = _sampling_cy.sample_rounds(5, 100, 0.0, 0.0, tables)
    assert out[4].shape == (100,)


def _edge_backends():
    backends = [_sampling_py.sample_rounds]
    if _sampling_cy is not None:
        backends.append(_sampling_cy.sample_rounds)
    return backends


def test_degenerate_single_atom_table():
    """All mass on the first atom: every draw lands there."""
    cum = np.ones((2, 2, 2, 2, 32), dtype=np.float64)
    for fn in _edge_backends():
        atoms = fn(7, 1000, 0.0, 0.0, cum)[4]
        assert np.all(atoms == 0)


def test_zero_width_atoms_are_skipped():
    """Leading zero-mass atoms can never be drawn, even at draw = 0."""
    cum = np.zeros((2, 2, 2, 2, 32), dtype=np.float64)
    cum[..., -1] = 1.0
    for fn in _edge_backends():
        atoms = fn(123, 1000, 0.0, 0.0, cum)[4]
        assert np.all(atoms == 31)
