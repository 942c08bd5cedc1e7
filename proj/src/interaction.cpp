#include "otto/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace otto {

InteractionSpec interaction_from_unitary(const ComplexMatrix& u_d, const ComplexMatrix& h_s,
                                         const ComplexMatrix& h_b,
                                         const DensityMatrix& rho_s_in,
                                         const DensityMatrix& rho_b, StageKind stage) {
    const Index ds = h_s.rows();
    const Index db = h_b.rows();
    if (!is_hermitian(h_s) || !is_hermitian(h_b))
        throw std::invalid_argument("otto::interaction_from_unitary: Hamiltonians not Hermitian");
    if (rho_s_in.dim() != ds || rho_b.dim() != db)
        throw std::invalid_argument("otto::interaction_from_unitary: dimension mismatch");
    if (u_d.rows() != ds * db || !is_unitary(u_d))
        throw std::invalid_argument("otto::interaction_from_unitary: u_d not unitary on the joint space");

    const ComplexMatrix h0 = kron(h_s, ComplexMatrix::Identity(db, db)) +
                             kron(ComplexMatrix::Identity(ds, ds), h_b);
    const ComplexMatrix rho0 = kron(rho_s_in.matrix(), rho_b.matrix());
    const ComplexMatrix rotated = u_d * rho0 * u_d.adjoint();
    const double a = (h0 * rho0).trace().real() - (h0 * rotated).trace().real();

    InteractionSpec spec;
    spec.u_d = u_d;
    spec.h_sb = u_d.adjoint() * h0 * u_d - h0;
    spec.h_sb.diagonal().array() += a;
    spec.offset = a;
    spec.stage = stage;

    const double cost = std::abs((spec.h_sb * rho0).trace().real());
    const double scale = std::max(1.0, spec.h_sb.norm());
    if (cost > tol::tau_coupling * scale)
        throw std::runtime_error("otto::interaction_from_unitary: coupling-cost-zero violated");
    return spec;
}

ThetaFamily::ThetaFamily(const ComplexMatrix& u_haar)
    : h_(hermitian_log_unitary(u_haar)), spec_(eigh(h_)) {}

ComplexMatrix ThetaFamily::unitary(double theta) const {
    return exp_i_hermitian(spec_, theta);
}

ComplexMatrix theta_unitary(const ComplexMatrix& u_haar, double theta) {
    return ThetaFamily(u_haar).unitary(theta);
}

EnergyPopulationLists energy_population_lists(const RealVector& pops_s,
                                              const RealVector& pops_b,
                                              const RealVector& eps_s,
                                              const RealVector& eps_b) {
    const Index ds = eps_s.size();
    const Index db = eps_b.size();
    if (pops_s.size() != ds || pops_b.size() != db)
        throw std::invalid_argument("otto::energy_population_lists: size mismatch");
    if (std::abs(pops_s.sum() - 1.0) > tol::tau_density ||
        std::abs(pops_b.sum() - 1.0) > tol::tau_density)
        throw std::invalid_argument("otto::energy_population_lists: populations must sum to 1");
    const Index n = ds * db;
    RealVector e_flat(n), p_flat(n);
    for (Index i = 0; i < ds; ++i) {
        for (Index j = 0; j < db; ++j) {
            e_flat(i * db + j) = eps_s(i) + eps_b(j);
            p_flat(i * db + j) = pops_s(i) * pops_b(j);
        }
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    // Stable: energy ties resolve by flat index, i.e. (i,j) lexicographic.
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return e_flat(a) < e_flat(b); });

    EnergyPopulationLists out;
    out.energies.resize(n);
    out.populations.resize(n);
    out.index_map = order;
    for (Index k = 0; k < n; ++k) {
        out.energies(k) = e_flat(order[static_cast<std::size_t>(k)]);
        out.populations(k) = p_flat(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

ComplexMatrix optimal_unitary(const RealVector& pops_s, const RealVector& pops_b,
                              const RealVector& eps_s, const RealVector& eps_b) {
    const Index ds = eps_s.size();
    const Index db = eps_b.size();
    const Index n = ds * db;
    const EnergyPopulationLists lists =
        energy_population_lists(pops_s, pops_b, eps_s, eps_b);

    // Population ranks, ties on the original flat index.
    RealVector p_flat(n);
    for (Index i = 0; i < ds; ++i)
        for (Index j = 0; j < db; ++j)
            p_flat(i * db + j) = pops_s(i) * pops_b(j);
    std::vector<Index> pop_order(static_cast<std::size_t>(n));
    std::iota(pop_order.begin(), pop_order.end(), Index{0});
    std::stable_sort(pop_order.begin(), pop_order.end(),
                     [&](Index a, Index b) { return p_flat(a) > p_flat(b); });

    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index energy_slot = lists.index_map[static_cast<std::size_t>(k)];
        const Index pop_slot = pop_order[static_cast<std::size_t>(k)];
        u(energy_slot, pop_slot) = Complex(1.0, 0.0);
    }
    return u;
}

namespace {

// Diagonal of rho in the eigenbasis of spec.
RealVector populations_in_basis(const DensityMatrix& rho, const SpectralDecomposition& spec) {
    const ComplexMatrix mixed = spec.eigenvectors.adjoint() * rho.matrix() * spec.eigenvectors;
    return mixed.diagonal().real();
}

} // namespace

double d_value(const ComplexMatrix& u_d, const ComplexMatrix& h_s, const ComplexMatrix& h_b,
               const DensityMatrix& rho_s_in, const DensityMatrix& rho_b,
               InverseTemperature beta) {
    const Index ds = h_s.rows();
    const Index db = h_b.rows();
    const SpectralDecomposition spec_s = eigh(h_s);
    const SpectralDecomposition spec_b = eigh(h_b);
    const DensityMatrix rho_s_eq = gibbs(spec_s, beta);
    const DensityMatrix rho_b_gibbs = gibbs(spec_b, beta);
    if ((rho_b.matrix() - rho_b_gibbs.matrix()).norm() > 1e-8)
        throw std::invalid_argument("otto::d_value: rho_b must be the Gibbs state of h_b");

    // Definitional form through the induced coupled Gibbs state.
    const InteractionSpec ispec =
        interaction_from_unitary(u_d, h_s, h_b, rho_s_in, rho_b, StageKind::hot);
    const ComplexMatrix h_tot = kron(h_s, ComplexMatrix::Identity(db, db)) +
                                kron(ComplexMatrix::Identity(ds, ds), h_b) + ispec.h_sb;
    const DensityMatrix rho_sb = gibbs(h_tot, beta);
    const double d_def = relative_entropy(kron_density(rho_s_in, rho_b), rho_sb).value() -
                         relative_entropy(rho_s_in, rho_s_eq).value();

    // Algebraic form beta (E' A P - E' P) in the product eigenbasis.
    const RealVector p = populations_in_basis(rho_s_in, spec_s);
    const RealVector q = populations_in_basis(rho_b, spec_b);
    const Index n = ds * db;
    RealVector e_flat(n), p_flat(n);
    for (Index i = 0; i < ds; ++i) {
        for (Index j = 0; j < db; ++j) {
            e_flat(i * db + j) = spec_s.eigenvalues(i) + spec_b.eigenvalues(j);
            p_flat(i * db + j) = p(i) * q(j);
        }
    }
    const ComplexMatrix u_basis =
        kron(spec_s.eigenvectors, spec_b.eigenvectors).adjoint() * u_d *
        kron(spec_s.eigenvectors, spec_b.eigenvectors);
    const RealMatrix a = u_basis.cwiseAbs2();
    const double d_alg = beta.value() * (e_flat.dot(a * p_flat) - e_flat.dot(p_flat));

    if (std::abs(d_def - d_alg) > 1e-8)
        throw std::runtime_error("otto::d_value: definitional and algebraic forms disagree");
    return d_def;
}

bool majorizes(const RealVector& x, const RealVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("otto::majorizes: length mismatch");
    if (std::abs(x.sum() - y.sum()) > 1e-10)
        return false;
    std::vector<double> xd(x.data(), x.data() + x.size());
    std::vector<double> yd(y.data(), y.data() + y.size());
    std::sort(xd.begin(), xd.end(), std::greater<>());
    std::sort(yd.begin(), yd.end(), std::greater<>());
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < xd.size(); ++k) {
        sx += xd[k];
        sy += yd[k];
        if (sy > sx + 1e-12)
            return false;
    }
    return true;
}

RealMatrix doubly_stochastic_from_unitary(const ComplexMatrix& u) {
    if (!is_unitary(u))
        throw std::invalid_argument("otto::doubly_stochastic_from_unitary: input not unitary");
    return u.cwiseAbs2();
}

bool rearrangement_check(const RealVector& e_ascending, const RealVector& populations,
                         const RealMatrix& a) {
    const Index n = e_ascending.size();
    if (populations.size() != n || a.rows() != n || a.cols() != n)
        throw std::invalid_argument("otto::rearrangement_check: shape mismatch");
    for (Index i = 0; i + 1 < n; ++i)
        if (e_ascending(i) > e_ascending(i + 1))
            throw std::invalid_argument("otto::rearrangement_check: energies not ascending");
    if (a.minCoeff() < -1e-12)
        throw std::invalid_argument("otto::rearrangement_check: negative entry in A");
    for (Index i = 0; i < n; ++i) {
        if (std::abs(a.row(i).sum() - 1.0) > 1e-8 || std::abs(a.col(i).sum() - 1.0) > 1e-8)
            throw std::invalid_argument("otto::rearrangement_check: A not doubly stochastic");
    }
    std::vector<double> p_down(populations.data(), populations.data() + n);
    std::sort(p_down.begin(), p_down.end(), std::greater<>());
    double bound = 0.0;
    for (Index k = 0; k < n; ++k)
        bound += e_ascending(k) * p_down[static_cast<std::size_t>(k)];
    const double lhs = e_ascending.dot(a * populations);
    return lhs >= bound - 1e-12;
}

} // namespace otto
