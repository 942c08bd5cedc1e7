#ifndef OTTO_TOLERANCES_HPP
#define OTTO_TOLERANCES_HPP

// Single source of truth for the numerical tolerances used across the
// library and its test suites.

namespace otto::tol {

// Hermiticity check: ||M - M'||_F / max(1, ||M||_F).
inline constexpr double tau_herm = 1e-10;

// Eigendecomposition reconstruction: ||V L V' - H||_F / max(1, ||H||_F),
// and orthonormality ||V'V - I||_F.
inline constexpr double tau_recon = 1e-10;

// Unitarity check: ||U'U - I||_F.
inline constexpr double tau_unitary = 1e-10;

// Eigenvalues at or below this are treated as exactly 0 in ln/entropy
// contexts (convention 0 ln 0 = 0).
inline constexpr double lambda_cut = 1e-14;

// Density-matrix contracts: trace within this of 1, eigenvalues >= -this.
inline constexpr double tau_density = 1e-10;

// Residual allowed when discarding the imaginary part of Tr[A rho].
inline constexpr double tau_imag_trace = 1e-10;

// Weight a state may carry outside the support of the second argument of
// the relative entropy before the result is reported as infinite.
inline constexpr double tau_support = 1e-10;

// Max |T_ij|, i<j, accepted in the Schur factor of a unitary. A unitary is
// normal, so this only absorbs roundoff.
inline constexpr double tau_schur_offdiag = 1e-8;

// Coupling costs no work: |Tr[H_SB (rho_S x rho_B)]| must stay below
// tau_coupling * max(1, ||H_SB||_F); above abort_coupling the coupled
// stage is rejected outright.
inline constexpr double tau_coupling = 1e-8;
inline constexpr double abort_coupling = 1e-6;

// Minimum spectral gap: the cycle models assume non-degenerate spectra.
inline constexpr double min_gap = 1e-12;

} // namespace otto::tol

#endif
