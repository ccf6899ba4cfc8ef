"""Haar-measure moments, unitary designs and their applications (C++ core)."""

from ._core import (
    DesignReport,
    asym_dim,
    average_gate_fidelity,
    certify,
    entanglement_fidelity,
    entry_moment,
    expectation_moment,
    expected_purity,
    first_moment,
    frame_potential,
    gram_matrix,
    haar_frame_potential,
    moment,
    p_asym,
    p_sym,
    page_entropy,
    pauli_basis,
    sample_clifford,
    sample_haar_state,
    sample_haar_unitary,
    sample_complexity,
    second_moment,
    shadow_variance,
    sym_dim,
    vectorized_moment_operator,
    weingarten,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
