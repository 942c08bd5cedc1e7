#include "otto/states.hpp"

#include <cmath>
#include <stdexcept>

namespace otto {

InverseTemperature::InverseTemperature(double beta) : beta_(beta) {
    if (!std::isfinite(beta) || beta <= 0.0)
        throw std::invalid_argument("otto::InverseTemperature: beta must be positive");
}

InverseTemperature InverseTemperature::unchecked(double beta) {
    if (!std::isfinite(beta) || beta < 0.0)
        throw std::invalid_argument("otto::InverseTemperature: beta must be >= 0");
    InverseTemperature out;
    out.beta_ = beta;
    return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, Validation mode) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("otto::DensityMatrix: matrix not square");
    if (!is_hermitian(m))
        throw std::invalid_argument("otto::DensityMatrix: matrix not Hermitian");
    const double trace = m.trace().real();
    if (mode == Validation::strict) {
        if (std::abs(trace - 1.0) > tol::tau_density)
            throw std::invalid_argument("otto::DensityMatrix: trace not 1");
        const RealVector lam = eigh(m).eigenvalues;
        if (lam.minCoeff() < -tol::tau_density)
            throw std::invalid_argument("otto::DensityMatrix: negative eigenvalue");
        m_ = std::move(m);
        return;
    }
    // Lenient: repair roundoff-scale defects, reject anything larger.
    if (std::abs(trace - 1.0) > 1e-6)
        throw std::invalid_argument("otto::DensityMatrix: trace too far from 1");
    SpectralDecomposition s = eigh(m);
    if (s.eigenvalues.minCoeff() < -tol::tau_density)
        throw std::invalid_argument("otto::DensityMatrix: negative eigenvalue");
    if (s.eigenvalues.minCoeff() < 0.0) {
        RealVector lam = s.eigenvalues.cwiseMax(0.0);
        lam /= lam.sum();
        m_ = s.eigenvectors * lam.asDiagonal() * s.eigenvectors.adjoint();
    } else {
        m_ = m / trace;
    }
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
    DensityMatrix out;
    out.m_ = std::move(m);
    return out;
}

DensityMatrix DensityMatrix::diagonal(const RealVector& populations) {
    if (populations.size() < 1)
        throw std::invalid_argument("otto::DensityMatrix::diagonal: empty populations");
    if (populations.minCoeff() < -tol::tau_density)
        throw std::invalid_argument("otto::DensityMatrix::diagonal: negative population");
    RealVector p = populations.cwiseMax(0.0);
    const double total = p.sum();
    if (total <= 0.0 || std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("otto::DensityMatrix::diagonal: populations must sum to 1");
    p /= total;
    ComplexMatrix m = ComplexMatrix::Zero(p.size(), p.size());
    m.diagonal() = p.cast<Complex>();
    return unchecked(std::move(m));
}

DensityMatrix kron_density(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()));
}

DensityMatrix reduced_state(const DensityMatrix& joint, Index dim_s, Index dim_b,
                            Subsystem keep) {
    return DensityMatrix::lenient(partial_trace(joint.matrix(), dim_s, dim_b, keep));
}

RealVector gibbs_populations(const RealVector& energies, InverseTemperature beta) {
    const double shift = energies.minCoeff();
    RealVector w = (-beta.value() * (energies.array() - shift)).exp();
    return w / w.sum();
}

double log_partition(const RealVector& energies, InverseTemperature beta) {
    const double shift = energies.minCoeff();
    const double z0 = (-beta.value() * (energies.array() - shift)).exp().sum();
    return std::log(z0) - beta.value() * shift;
}

DensityMatrix gibbs(const SpectralDecomposition& h, InverseTemperature beta) {
    const RealVector p = gibbs_populations(h.eigenvalues, beta);
    return DensityMatrix::unchecked(h.eigenvectors * p.asDiagonal() *
                                    h.eigenvectors.adjoint());
}

DensityMatrix gibbs(const ComplexMatrix& h, InverseTemperature beta) {
    return gibbs(eigh(h), beta);
}

double vn_entropy(const DensityMatrix& rho) {
    const RealVector lam = eigh(rho.matrix()).eigenvalues;
    double s = 0.0;
    for (Index i = 0; i < lam.size(); ++i)
        if (lam(i) > tol::lambda_cut)
            s -= lam(i) * std::log(lam(i));
    return s;
}

double RelativeEntropyResult::value() const {
    if (infinite_)
        throw std::domain_error("otto::RelativeEntropyResult: value is infinite");
    return value_;
}

RelativeEntropyResult relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("otto::relative_entropy: dimension mismatch");
    const SpectralDecomposition sr = eigh(rho.matrix());
    const SpectralDecomposition ss = eigh(sigma.matrix());

    double tr_r_ln_r = 0.0;
    for (Index i = 0; i < sr.eigenvalues.size(); ++i)
        if (sr.eigenvalues(i) > tol::lambda_cut)
            tr_r_ln_r += sr.eigenvalues(i) * std::log(sr.eigenvalues(i));

    // Weights <v_j| rho |v_j> in sigma's eigenbasis.
    const ComplexMatrix mixed = ss.eigenvectors.adjoint() * rho.matrix() * ss.eigenvectors;
    double tr_r_ln_s = 0.0;
    double off_support = 0.0;
    for (Index j = 0; j < ss.eigenvalues.size(); ++j) {
        const double w = mixed(j, j).real();
        if (ss.eigenvalues(j) > tol::lambda_cut)
            tr_r_ln_s += w * std::log(ss.eigenvalues(j));
        else
            off_support += std::max(w, 0.0);
    }
    if (off_support > tol::tau_support)
        return RelativeEntropyResult::infinite();
    return RelativeEntropyResult::finite(tr_r_ln_r - tr_r_ln_s);
}

double expectation(const ComplexMatrix& a, const DensityMatrix& rho) {
    if (a.rows() != a.cols() || a.rows() != rho.dim())
        throw std::invalid_argument("otto::expectation: dimension mismatch");
    const Complex t = (a * rho.matrix()).trace();
    if (std::abs(t.imag()) > tol::tau_imag_trace)
        throw std::runtime_error("otto::expectation: imaginary residue above tolerance");
    return t.real();
}

} // namespace otto
