#ifndef OTTO_LINALG_HPP
#define OTTO_LINALG_HPP

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "otto/rng.hpp"
#include "otto/tolerances.hpp"

namespace otto {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

bool all_finite(const ComplexMatrix& m);

// ||M - M'||_F scaled by max(1, ||M||_F).
double hermiticity_error(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tau = tol::tau_herm);

// ||U'U - I||_F.
double unitarity_error(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tau = tol::tau_unitary);

// Eigensystem of a Hermitian matrix, eigenvalues ascending. Eigenvector
// phases are fixed (first component above 1e-12 in modulus made real and
// positive) so repeated runs produce identical factors.
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors; // columns; unitary
};

// Tensor product: out[(i*dB+k),(j*dB+l)] = a(i,j) * b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { system, bath };

// Partial trace over the complement of `keep`, with the system-major flat
// convention (i,j) -> i*dim_b + j used throughout the library.
ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_s, Index dim_b,
                            Subsystem keep);

SpectralDecomposition eigh(const ComplexMatrix& h);

// V diag(f(lambda)) V'.
ComplexMatrix hermitian_function(const SpectralDecomposition& s,
                                 const std::function<double(double)>& f);
ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                 const std::function<double(double)>& f);

// exp(i t H) for Hermitian H (unitary-valued, so not expressible through
// hermitian_function's real-valued f).
ComplexMatrix exp_i_hermitian(const SpectralDecomposition& s, double t);
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double t);

// Haar-distributed random unitary: QR of a complex Ginibre sample with the
// R-diagonal phase correction.
ComplexMatrix haar_unitary(Index n, RandomStream& rng);

// Hermitian H with exp(iH) = U, eigenphases on the principal branch
// (-pi, pi]. U is normal, so its complex Schur factor must be diagonal; a
// triangular residual above tol::tau_schur_offdiag is rejected.
ComplexMatrix hermitian_log_unitary(const ComplexMatrix& u);

} // namespace otto

#endif
