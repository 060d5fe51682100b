"""Discrete Wigner functions on prime-dimension phase spaces.

Operator construction, Wigner transforms, and legitimacy tests for
phase-space transition probabilities (channels) and transition rates
(Hamiltonian flows).

Conventions: phase points (a1, a2) with a1 horizontal; N^2-indexed matrices
use the flat index a1*N + a2; Wigner functions and coefficient grids are
(N, N) arrays indexed [a1][a2].
"""

from qphase._core import (
    apply_channel,
    bmatrix_from_kraus,
    bmatrix_from_p,
    build_r_projector,
    choi_in_psi_basis,
    density_from_wigner,
    displacement,
    displacement_rates,
    evolve,
    gamma,
    gamma_preservation_residual,
    hamiltonian_coefficients,
    hamiltonian_from_rates,
    is_prime,
    is_unitary_channel,
    kraus_from_bmatrix,
    odd_prime_condition_residual,
    p_from_bmatrix,
    p_from_kraus,
    p_from_unitary,
    pauli_generators,
    phase_point_operator,
    project_rates,
    purity_residual,
    rates_from_coefficients,
    rates_from_dcoeffs,
    rates_from_hamiltonian,
    render_rate_quiver,
    ring_hamiltonian,
    selftest,
    striation_marginals,
    striations,
    validate_channel,
    validate_rates,
    wigner_from_density,
    xi,
)

__all__ = [
    "apply_channel",
    "bmatrix_from_kraus",
    "bmatrix_from_p",
    "build_r_projector",
    "choi_in_psi_basis",
    "density_from_wigner",
    "displacement",
    "displacement_rates",
    "evolve",
    "gamma",
    "gamma_preservation_residual",
    "hamiltonian_coefficients",
    "hamiltonian_from_rates",
    "is_prime",
    "is_unitary_channel",
    "kraus_from_bmatrix",
    "odd_prime_condition_residual",
    "p_from_bmatrix",
    "p_from_kraus",
    "p_from_unitary",
    "pauli_generators",
    "phase_point_operator",
    "project_rates",
    "purity_residual",
    "rates_from_coefficients",
    "rates_from_dcoeffs",
    "rates_from_hamiltonian",
    "render_rate_quiver",
    "ring_hamiltonian",
    "selftest",
    "striation_marginals",
    "striations",
    "validate_channel",
    "validate_rates",
    "wigner_from_density",
    "xi",
]
