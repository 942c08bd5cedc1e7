#ifndef OTTO_STATES_HPP
#define OTTO_STATES_HPP

#include "otto/linalg.hpp"

namespace otto {

// Inverse temperature, 1/energy units. Strictly positive in production
// code; unchecked() additionally admits 0 (infinite temperature) for tests.
struct InverseTemperature {
    explicit InverseTemperature(double beta);
    static InverseTemperature unchecked(double beta);
    double value() const { return beta_; }

private:
    InverseTemperature() = default;
    double beta_ = 0.0;
};

// Hermitian, unit-trace, positive-semidefinite state.
//
// Validation is opt-in at construction: strict asserts the contracts and
// leaves the matrix untouched (tests); lenient clamps eigenvalues in
// [-tau_density, 0) to 0 and renormalizes the trace (long pipelines);
// unchecked is for matrices whose validity is structural (Gibbs weights,
// tensor products of valid states).
class DensityMatrix {
public:
    enum class Validation { strict, lenient };

    DensityMatrix(ComplexMatrix m, Validation mode);
    static DensityMatrix strict(ComplexMatrix m) { return {std::move(m), Validation::strict}; }
    static DensityMatrix lenient(ComplexMatrix m) { return {std::move(m), Validation::lenient}; }
    static DensityMatrix unchecked(ComplexMatrix m);

    // Diagonal state from populations (clamped at -tau_density, normalized).
    static DensityMatrix diagonal(const RealVector& populations);

    const ComplexMatrix& matrix() const { return m_; }
    Index dim() const { return m_.rows(); }

private:
    DensityMatrix() = default;
    ComplexMatrix m_;
};

// Product state a (x) b.
DensityMatrix kron_density(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix reduced_state(const DensityMatrix& joint, Index dim_s, Index dim_b,
                            Subsystem keep);

// e^{-beta H} / Z, computed on the spectrum with the minimum eigenvalue
// subtracted before exponentiation.
DensityMatrix gibbs(const ComplexMatrix& h, InverseTemperature beta);
DensityMatrix gibbs(const SpectralDecomposition& h, InverseTemperature beta);

// Gibbs populations of a spectrum (same min-shift guard), ordered like the
// input.
RealVector gibbs_populations(const RealVector& energies, InverseTemperature beta);

// ln of the partition function Tr[e^{-beta H}] (shift-guarded).
double log_partition(const RealVector& energies, InverseTemperature beta);

// -Tr[rho ln rho] in nats, with 0 ln 0 = 0.
double vn_entropy(const DensityMatrix& rho);

// D(rho||sigma) is +infinity when rho has weight outside the support of
// sigma. The sentinel is explicit: value() refuses to produce a float that
// could leak into downstream arithmetic.
class RelativeEntropyResult {
public:
    static RelativeEntropyResult finite(double v) { return RelativeEntropyResult(v, false); }
    static RelativeEntropyResult infinite() { return RelativeEntropyResult(0.0, true); }

    bool is_infinite() const { return infinite_; }
    double value() const; // throws std::domain_error when infinite

private:
    RelativeEntropyResult(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

// Tr[rho ln rho] - Tr[rho ln sigma], nats.
RelativeEntropyResult relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// Real expectation value Tr[A rho]; the imaginary residue is checked
// against tol::tau_imag_trace and discarded.
double expectation(const ComplexMatrix& a, const DensityMatrix& rho);

} // namespace otto

#endif
