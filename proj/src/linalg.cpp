#include "otto/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace otto {

double RandomStream::gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::string_view experiment,
                             std::uint64_t trial_id) {
    std::uint64_t h = mix64(master_seed);
    for (unsigned char c : experiment)
        h = mix64(h ^ static_cast<std::uint64_t>(c));
    return mix64(h ^ trial_id);
}

bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

double hermiticity_error(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        return std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, m.norm());
    return (m - m.adjoint()).norm() / scale;
}

bool is_hermitian(const ComplexMatrix& m, double tau) {
    return m.rows() == m.cols() && all_finite(m) && hermiticity_error(m) < tau;
}

double unitarity_error(const ComplexMatrix& u) {
    if (u.rows() != u.cols())
        return std::numeric_limits<double>::infinity();
    const Index n = u.rows();
    return (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm();
}

bool is_unitary(const ComplexMatrix& u, double tau) {
    return u.rows() == u.cols() && all_finite(u) && unitarity_error(u) < tau;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    ComplexMatrix out(ar * br, ac * bc);
    for (Index i = 0; i < ar; ++i)
        for (Index j = 0; j < ac; ++j)
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_s, Index dim_b,
                            Subsystem keep) {
    if (dim_s < 1 || dim_b < 1 || m.rows() != m.cols() || m.rows() != dim_s * dim_b)
        throw std::invalid_argument("otto::partial_trace: dimension mismatch");
    if (keep == Subsystem::system) {
        ComplexMatrix out = ComplexMatrix::Zero(dim_s, dim_s);
        for (Index i = 0; i < dim_s; ++i)
            for (Index k = 0; k < dim_s; ++k)
                for (Index j = 0; j < dim_b; ++j)
                    out(i, k) += m(i * dim_b + j, k * dim_b + j);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (Index j = 0; j < dim_b; ++j)
        for (Index l = 0; l < dim_b; ++l)
            for (Index i = 0; i < dim_s; ++i)
                out(j, l) += m(i * dim_b + j, i * dim_b + l);
    return out;
}

namespace {

// Make the first component of each column with modulus > 1e-12 real and
// positive; canonicalizes the factor for run-to-run determinism.
void fix_phases(ComplexMatrix& v) {
    for (Index j = 0; j < v.cols(); ++j) {
        for (Index i = 0; i < v.rows(); ++i) {
            const double mag = std::abs(v(i, j));
            if (mag > 1e-12) {
                v.col(j) *= std::conj(v(i, j)) / mag;
                break;
            }
        }
    }
}

} // namespace

SpectralDecomposition eigh(const ComplexMatrix& h) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("otto::eigh: matrix not square");
    if (!all_finite(h))
        throw std::invalid_argument("otto::eigh: non-finite entries");
    if (!is_hermitian(h))
        throw std::invalid_argument("otto::eigh: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("otto::eigh: eigensolver failed");
    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(out.eigenvectors);
    return out;
}

ComplexMatrix hermitian_function(const SpectralDecomposition& s,
                                 const std::function<double(double)>& f) {
    RealVector fx(s.eigenvalues.size());
    for (Index i = 0; i < fx.size(); ++i) {
        fx(i) = f(s.eigenvalues(i));
        if (!std::isfinite(fx(i)))
            throw std::domain_error("otto::hermitian_function: f not finite on spectrum");
    }
    return s.eigenvectors * fx.asDiagonal() * s.eigenvectors.adjoint();
}

ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                 const std::function<double(double)>& f) {
    return hermitian_function(eigh(h), f);
}

ComplexMatrix exp_i_hermitian(const SpectralDecomposition& s, double t) {
    Eigen::VectorXcd phases(s.eigenvalues.size());
    for (Index i = 0; i < phases.size(); ++i)
        phases(i) = std::polar(1.0, t * s.eigenvalues(i));
    return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double t) {
    return exp_i_hermitian(eigh(h), t);
}

ComplexMatrix haar_unitary(Index n, RandomStream& rng) {
    if (n < 1)
        throw std::invalid_argument("otto::haar_unitary: n must be >= 1");
    ComplexMatrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            g(i, j) = Complex(rng.gauss(), rng.gauss());
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const auto r_diag = qr.matrixQR().diagonal();
    for (Index j = 0; j < n; ++j) {
        const double mag = std::abs(r_diag(j));
        q.col(j) *= mag > 0.0 ? r_diag(j) / mag : Complex(1.0, 0.0);
    }
    return q;
}

ComplexMatrix hermitian_log_unitary(const ComplexMatrix& u) {
    if (u.rows() != u.cols())
        throw std::invalid_argument("otto::hermitian_log_unitary: matrix not square");
    if (!is_unitary(u))
        throw std::invalid_argument("otto::hermitian_log_unitary: input not unitary");
    Eigen::ComplexSchur<ComplexMatrix> schur(u);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("otto::hermitian_log_unitary: Schur failed");
    const ComplexMatrix& t = schur.matrixT();
    const Index n = u.rows();
    double offdiag = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            offdiag = std::max(offdiag, std::abs(t(i, j)));
    if (offdiag > tol::tau_schur_offdiag)
        throw std::runtime_error("otto::hermitian_log_unitary: Schur factor not diagonal");
    RealVector phases(n);
    for (Index i = 0; i < n; ++i) {
        double phi = std::arg(t(i, i)); // [-pi, pi]
        if (phi <= -std::numbers::pi)
            phi += 2.0 * std::numbers::pi;
        phases(i) = phi;
    }
    const ComplexMatrix& q = schur.matrixU();
    return q * phases.asDiagonal() * q.adjoint();
}

} // namespace otto
