#include "otto/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <numbers>
#include <numeric>
#include <sstream>

#include "otto/strong_cycle.hpp"

namespace otto::verify {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// ---- randomized generators ------------------------------------------------

ComplexMatrix random_ginibre(Index n, RandomStream& rng) {
    ComplexMatrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            g(i, j) = Complex(rng.gauss(), rng.gauss());
    return g;
}

ComplexMatrix random_hermitian(Index n, RandomStream& rng, double scale = 1.0) {
    const ComplexMatrix g = random_ginibre(n, rng);
    return scale * 0.5 * (g + g.adjoint());
}

DensityMatrix random_density(Index n, RandomStream& rng) {
    const ComplexMatrix g = random_ginibre(n, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix::unchecked(0.5 * (m + m.adjoint()));
}

RealVector random_populations(Index n, RandomStream& rng) {
    RealVector p(n);
    for (Index i = 0; i < n; ++i)
        p(i) = rng.uniform(0.05, 1.0);
    return p / p.sum();
}

RealVector random_spectrum(Index n, RandomStream& rng, double lo, double max_gap) {
    RealVector e(n);
    double v = lo + rng.uniform(0.0, 0.3);
    for (Index i = 0; i < n; ++i) {
        e(i) = v;
        v += rng.uniform(0.1, max_gap);
    }
    return e;
}

// Engine-valid spec: proportional spectra with scale k < beta_c/beta_h.
SystemSpec random_valid_spec(RandomStream& rng) {
    const Index levels = 2 + static_cast<Index>(rng.next_u64() % 3);
    const double beta_c = rng.uniform(1.2, 2.6);
    const double beta_h = rng.uniform(0.25, 0.45) * beta_c;
    const double k_max = std::min(2.8, 0.9 * beta_c / beta_h);
    const double k = rng.uniform(1.1, std::max(1.15, k_max));
    SystemSpec spec{random_spectrum(levels, rng, 0.2, 1.0),
                    RealVector{},
                    random_spectrum(3, rng, 0.3, 1.2),
                    random_spectrum(3, rng, 0.5, 1.2),
                    InverseTemperature(beta_c),
                    InverseTemperature(beta_h)};
    spec.e_hot = k * spec.e_cold;
    return spec;
}

struct CoupledInstance {
    CoupledStage stage;
    ComplexMatrix u_d;
    DensityMatrix rho_b;
};

CoupledInstance random_coupled_instance(RandomStream& rng) {
    const Index ds = 2 + static_cast<Index>(rng.next_u64() % 2);
    const Index db = 2 + static_cast<Index>(rng.next_u64() % 3);
    const RealVector es = random_spectrum(ds, rng, 0.2, 1.0);
    const RealVector eb = random_spectrum(db, rng, 0.3, 1.0);
    const InverseTemperature beta(rng.uniform(0.3, 2.0));
    const ComplexMatrix h_s = es.cast<Complex>().asDiagonal();
    const ComplexMatrix h_b = eb.cast<Complex>().asDiagonal();
    const DensityMatrix rho_s_in = DensityMatrix::diagonal(random_populations(ds, rng));
    const DensityMatrix rho_b = DensityMatrix::diagonal(gibbs_populations(eb, beta));
    const ComplexMatrix u_d = haar_unitary(ds * db, rng);
    const InteractionSpec ispec =
        interaction_from_unitary(u_d, h_s, h_b, rho_s_in, rho_b, StageKind::hot);
    return CoupledInstance{CoupledStage{h_s, h_b, ispec.h_sb, beta, rho_s_in}, u_d, rho_b};
}

// ---- harness ---------------------------------------------------------------

class Reporter {
public:
    void require(bool ok, const std::string& what) {
        if (!ok && failure_.empty())
            failure_ = what;
        failed_ |= !ok;
    }
    void track(double err) { max_err_ = std::max(max_err_, std::abs(err)); }
    void require_close(double a, double b, double tau, const std::string& what) {
        track(a - b);
        require(std::abs(a - b) <= tau, what + " (|" + fmt(a - b) + "| > " + fmt(tau) + ")");
    }
    bool failed() const { return failed_; }
    std::string detail() const {
        return failed_ ? failure_ : "max error " + fmt(max_err_);
    }

private:
    bool failed_ = false;
    double max_err_ = 0.0;
    std::string failure_;
};

CheckResult run_check(const std::string& name,
                      const std::function<void(Reporter&)>& body) {
    Reporter rep;
    try {
        body(rep);
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
    return {name, !rep.failed(), rep.detail()};
}

// Dyadic entries make products exact, so structural identities can be
// asserted without tolerance.
ComplexMatrix random_dyadic(Index n, RandomStream& rng) {
    ComplexMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            m(i, j) = Complex((double(rng.next_u64() % 65) - 32.0) / 64.0,
                              (double(rng.next_u64() % 65) - 32.0) / 64.0);
    return m;
}

// ---- the individual checks -------------------------------------------------

void check_kron_partial_trace(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index ds = 2 + static_cast<Index>(rng.next_u64() % 3);
        const Index db = 2 + static_cast<Index>(rng.next_u64() % 3);
        const ComplexMatrix a = random_dyadic(ds, rng);
        const ComplexMatrix b = random_dyadic(db, rng);
        const ComplexMatrix c = random_dyadic(2, rng);
        const ComplexMatrix ab = kron(a, b);
        for (Index i = 0; i < ds; ++i)
            for (Index j = 0; j < ds; ++j)
                for (Index k = 0; k < db; ++k)
                    for (Index l = 0; l < db; ++l)
                        rep.require(ab(i * db + k, j * db + l) == a(i, j) * b(k, l),
                                    "kron index formula");
        const ComplexMatrix lhs = kron(ab, c);
        const ComplexMatrix rhs = kron(a, kron(b, c));
        rep.require(lhs == rhs, "kron associativity (element-exact)");

        const ComplexMatrix m = random_ginibre(ds * db, rng);
        const ComplexMatrix ts = partial_trace(m, ds, db, Subsystem::system);
        const ComplexMatrix tb = partial_trace(m, ds, db, Subsystem::bath);
        rep.require_close(std::abs(ts.trace() - m.trace()), 0.0, 1e-12,
                          "partial trace preserves trace (system)");
        rep.require_close(std::abs(tb.trace() - m.trace()), 0.0, 1e-12,
                          "partial trace preserves trace (bath)");
        // Linearity and product recovery.
        const ComplexMatrix m2 = random_ginibre(ds * db, rng);
        rep.require_close((partial_trace(m + m2, ds, db, Subsystem::system) - ts -
                           partial_trace(m2, ds, db, Subsystem::system))
                              .norm(),
                          0.0, 1e-12, "partial trace linearity");
        const DensityMatrix rho = random_density(ds, rng);
        const DensityMatrix sig = random_density(db, rng);
        const ComplexMatrix prod = kron(rho.matrix(), sig.matrix());
        rep.require_close((partial_trace(prod, ds, db, Subsystem::system) - rho.matrix()).norm(),
                          0.0, 1e-13, "Tr_B of product state");
        rep.require_close((partial_trace(prod, ds, db, Subsystem::bath) - sig.matrix()).norm(),
                          0.0, 1e-13, "Tr_S of product state");
    }
}

void check_eigh(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = it % 7 == 0 ? 32 : 2 + static_cast<Index>(rng.next_u64() % 7);
        const ComplexMatrix h = random_hermitian(n, rng);
        const SpectralDecomposition s = eigh(h);
        const double scale = std::max(1.0, h.norm());
        rep.require_close((s.eigenvectors * s.eigenvalues.asDiagonal() *
                               s.eigenvectors.adjoint() -
                           h)
                                  .norm() /
                              scale,
                          0.0, tol::tau_recon, "eigh reconstruction");
        rep.require_close((s.eigenvectors.adjoint() * s.eigenvectors -
                           ComplexMatrix::Identity(n, n))
                              .norm(),
                          0.0, tol::tau_recon, "eigh orthonormality");
        for (Index i = 0; i + 1 < n; ++i)
            rep.require(s.eigenvalues(i) <= s.eigenvalues(i + 1), "eigh ascending order");
        rep.require_close((s.eigenvalues.sum() - h.trace().real()) / scale, 0.0, 1e-10,
                          "eigenvalue sum vs trace");
    }
}

void check_hermitian_function(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);
        const ComplexMatrix h = random_hermitian(n, rng);
        const double c = rng.uniform(-2.0, 2.0);
        const SpectralDecomposition s = eigh(h);
        const auto f = [](double x) { return std::exp(0.3 * x); };
        const ComplexMatrix direct = hermitian_function(
            ComplexMatrix(h + c * ComplexMatrix::Identity(n, n)), f);
        RealVector shifted(n);
        for (Index i = 0; i < n; ++i)
            shifted(i) = f(s.eigenvalues(i) + c);
        const ComplexMatrix via_spec =
            s.eigenvectors * shifted.asDiagonal() * s.eigenvectors.adjoint();
        rep.require_close((direct - via_spec).norm(), 0.0, 1e-10,
                          "hermitian_function spectral-shift commutation");

        // exp/log round trip with spectrum inside (-1, 1).
        ComplexMatrix small = random_hermitian(n, rng);
        small *= 0.9 / std::max(1.0, eigh(small).eigenvalues.cwiseAbs().maxCoeff());
        const ComplexMatrix expd = hermitian_function(small, [](double x) { return std::exp(x); });
        const ComplexMatrix back = hermitian_function(expd, [](double x) { return std::log(x); });
        rep.require_close((back - small).norm(), 0.0, 1e-9, "exp/log round trip");
    }
}

void check_haar(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = it % 5 == 0 ? 32 : 2 + static_cast<Index>(rng.next_u64() % 7);
        const ComplexMatrix u = haar_unitary(n, rng);
        rep.require_close(unitarity_error(u), 0.0, 1e-12, "haar unitarity");
        rep.require_close(std::abs(u.determinant()) - 1.0, 0.0, 1e-10, "haar |det| = 1");
        if (it % 19 == 0) {
            const ComplexMatrix h = hermitian_log_unitary(u);
            rep.require_close((exp_i_hermitian(h, 1.0) - u).norm(), 0.0, 1e-9,
                              "log-unitary round trip");
            rep.require(eigh(h).eigenvalues.cwiseAbs().maxCoeff() <=
                            std::numbers::pi + 1e-12,
                        "log-unitary principal branch");
        }
    }
    RandomStream a(1234567), b(1234567);
    const ComplexMatrix ua = haar_unitary(8, a), ub = haar_unitary(8, b);
    rep.require(ua == ub, "haar determinism (bit-identical for equal seeds)");
}

void check_gibbs(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);
        const ComplexMatrix h = random_hermitian(n, rng);
        const InverseTemperature beta(rng.uniform(0.2, 2.5));
        const DensityMatrix g1 = gibbs(h, beta);
        const double c = rng.uniform(-3.0, 3.0);
        const DensityMatrix g2 =
            gibbs(ComplexMatrix(h + c * ComplexMatrix::Identity(n, n)), beta);
        rep.require_close((g1.matrix() - g2.matrix()).norm(), 0.0, 1e-12,
                          "gibbs invariance under spectral shift");
        rep.require_close((h * g1.matrix() - g1.matrix() * h).norm(), 0.0, 1e-12,
                          "gibbs commutes with H");
        const DensityMatrix flat = gibbs(h, InverseTemperature::unchecked(0.0));
        rep.require_close(
            (flat.matrix() - ComplexMatrix::Identity(n, n) / double(n)).norm(), 0.0, 1e-12,
            "gibbs at beta = 0 is maximally mixed");
    }
}

void check_entropy_invariances(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);
        const DensityMatrix rho = random_density(n, rng);
        const DensityMatrix sig = random_density(n, rng);
        const ComplexMatrix u = haar_unitary(n, rng);
        const DensityMatrix rho_u = DensityMatrix::unchecked(u * rho.matrix() * u.adjoint());
        const DensityMatrix sig_u = DensityMatrix::unchecked(u * sig.matrix() * u.adjoint());
        rep.require_close(vn_entropy(rho_u), vn_entropy(rho), 1e-10,
                          "entropy unitary invariance");
        const double d = relative_entropy(rho, sig).value();
        rep.require_close(relative_entropy(rho_u, sig_u).value(), d, 1e-9,
                          "relative entropy joint unitary invariance");
        rep.require(d >= -1e-10, "Klein inequality");
        rep.require_close(relative_entropy(rho, rho).value(), 0.0, 1e-10, "D(rho||rho) = 0");
    }
}

void check_free_energy_minimum(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 5);
        const ComplexMatrix h = random_hermitian(n, rng);
        const InverseTemperature beta(rng.uniform(0.3, 2.0));
        const DensityMatrix g = gibbs(h, beta);
        const DensityMatrix rho = random_density(n, rng);
        const double f_rho = expectation(h, rho) - vn_entropy(rho) / beta.value();
        const double f_g = expectation(h, g) - vn_entropy(g) / beta.value();
        rep.require(f_rho >= f_g - 1e-10, "gibbs minimizes free energy");
        rep.track(std::min(0.0, f_rho - f_g));
    }
}

void check_weak_cycle(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const SystemSpec spec = random_valid_spec(rng);
        const WeakReport r = weak_cycle(spec);
        rep.require_close(r.w_out, r.q_in - r.q_out, 1e-10, "weak first law");
        if (!r.engine_valid)
            continue;
        const double eta_c = 1.0 - spec.beta_h.value() / spec.beta_c.value();
        rep.require(*r.eta_ratio < eta_c, "weak Carnot bound");
        rep.require_close(*r.eta_ratio, *r.eta_entropy, 1e-10, "weak eta form agreement");
        rep.require_close(eta_weak_entropy_form(spec), *r.eta_ratio, 1e-10,
                          "weak eta density-matrix route");
        rep.require_close(spec.beta_h.value() * r.q_in, r.delta_s - r.d_hot, 1e-10,
                          "identity beta_h Q_in = dS - D_hot");
        rep.require_close(spec.beta_c.value() * r.q_out, r.delta_s + r.d_cold, 1e-10,
                          "identity beta_c Q_out = dS + D_cold");
        // Scale covariance: energies * c, betas / c.
        const double c = rng.uniform(0.5, 3.0);
        SystemSpec scaled{c * spec.e_cold,
                          c * spec.e_hot,
                          c * spec.bath_cold,
                          c * spec.bath_hot,
                          InverseTemperature(spec.beta_c.value() / c),
                          InverseTemperature(spec.beta_h.value() / c)};
        rep.require_close(*weak_cycle(scaled).eta_ratio, *r.eta_ratio, 1e-12,
                          "weak scale covariance");
    }
}

void check_conjugation_identity(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const CoupledInstance inst = random_coupled_instance(rng);
        const DensityMatrix rho_sb = joint_gibbs(inst.stage);
        const DensityMatrix rho_s_eq = gibbs(inst.stage.h_s, inst.stage.beta);
        const ComplexMatrix expected = inst.u_d.adjoint() *
                                       kron(rho_s_eq.matrix(), inst.rho_b.matrix()) *
                                       inst.u_d;
        rep.require_close((rho_sb.matrix() - expected).norm(), 0.0, 1e-9,
                          "joint Gibbs conjugation identity");
    }
}

void check_thermalization_heat_forms(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const CoupledInstance inst = random_coupled_instance(rng);
        const DensityMatrix rho_sb = joint_gibbs(inst.stage);
        const double energy_form = thermalization_heat(inst.stage, rho_sb);
        const Index ds = inst.stage.dim_s(), db = inst.stage.dim_b();
        const DensityMatrix rs = reduced_state(rho_sb, ds, db, Subsystem::system);
        const double entropy_form =
            (vn_entropy(rs) - vn_entropy(inst.stage.rho_s_in) -
             relative_entropy(rho_sb, kron_density(rs, inst.rho_b)).value() -
             relative_entropy(kron_density(inst.stage.rho_s_in, inst.rho_b), rho_sb).value()) /
            inst.stage.beta.value();
        rep.require_close(energy_form, entropy_form, 1e-8,
                          "thermalization heat energy vs entropy form");
    }
}

void check_bath_reduction_identity(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const CoupledInstance inst = random_coupled_instance(rng);
        const DensityMatrix rho_sb = joint_gibbs(inst.stage);
        const Index ds = inst.stage.dim_s(), db = inst.stage.dim_b();
        const DensityMatrix rs = reduced_state(rho_sb, ds, db, Subsystem::system);
        const DensityMatrix rb = reduced_state(rho_sb, ds, db, Subsystem::bath);
        const double lhs = relative_entropy(rho_sb, kron_density(rs, inst.rho_b)).value() -
                           relative_entropy(rho_sb, kron_density(rs, rb)).value();
        const double rhs = relative_entropy(rb, inst.rho_b).value();
        rep.require_close(lhs, rhs, 1e-9, "bath relative-entropy reduction identity");
    }
}

SystemSpec theta_spec_and_unitaries(RandomStream& rng, double theta_max,
                                    ComplexMatrix& u_hot, ComplexMatrix& u_cold) {
    SystemSpec spec = random_valid_spec(rng);
    // Small baths keep the randomized suite quick.
    spec.bath_cold = random_spectrum(3, rng, 0.3, 1.2);
    spec.bath_hot = random_spectrum(3, rng, 0.5, 1.2);
    // Half the instances break the proportional-spectrum structure (the
    // hot levels keep their order and index alignment but not the ratio).
    if (rng.next_u64() % 2 == 0) {
        double extra = 0.0;
        for (Index i = 0; i < spec.e_hot.size(); ++i) {
            extra += rng.uniform(0.0, 0.4);
            spec.e_hot(i) += extra;
        }
    }
    const double theta = rng.uniform(0.0, theta_max);
    u_hot = ThetaFamily(haar_unitary(spec.e_hot.size() * spec.bath_hot.size(), rng))
                .unitary(theta);
    u_cold = ThetaFamily(haar_unitary(spec.e_cold.size() * spec.bath_cold.size(), rng))
                 .unitary(theta);
    return spec;
}

void check_strong_first_law(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        ComplexMatrix uh, uc;
        const SystemSpec spec = theta_spec_and_unitaries(rng, 0.5, uh, uc);
        const StrongReport r = strong_cycle(spec, uh, uc);
        rep.require_close(r.w_out, r.q_th_h + r.q_d_h + r.q_th_c + r.q_d_c, 1e-8,
                          "strong first law");
        if (r.engine_valid) {
            rep.require_close(*r.eta_ratio, *r.eta_entropy, 1e-8,
                              "strong eta ratio vs entropy form");
            rep.require(*r.eta_ratio < 1.0 - spec.beta_h.value() / spec.beta_c.value(),
                        "strong Carnot bound");
            rep.require(r.carnot_ok, "carnot_ok flag");
        }
    }
}

void check_unitary_restriction(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const CoupledInstance inst = random_coupled_instance(rng);
        const DensityMatrix rho_sb = joint_gibbs(inst.stage);
        const DensityMatrix rho_s_eq = gibbs(inst.stage.h_s, inst.stage.beta);
        rep.require_close(vn_entropy(rho_sb),
                          vn_entropy(kron_density(rho_s_eq, inst.rho_b)), 1e-8,
                          "unitary restriction entropy equality");
    }
}

void check_decoupling_cost_identities(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const CoupledInstance inst = random_coupled_instance(rng);
        const DensityMatrix rho_sb = joint_gibbs(inst.stage);
        const double de = decoupling_cost(inst.stage, rho_sb);
        const DensityMatrix rho_s_eq = gibbs(inst.stage.h_s, inst.stage.beta);
        const double d_joint =
            relative_entropy(kron_density(inst.stage.rho_s_in, inst.rho_b), rho_sb).value();
        const double d_in = relative_entropy(inst.stage.rho_s_in, rho_s_eq).value();
        rep.require_close(de, (d_joint - d_in) / inst.stage.beta.value(), 1e-8,
                          "decoupling cost vs relative-entropy route");
        // Partition-function route.
        const Index ds = inst.stage.dim_s(), db = inst.stage.dim_b();
        const ComplexMatrix h_tot =
            kron(inst.stage.h_s, ComplexMatrix::Identity(db, db)) +
            kron(ComplexMatrix::Identity(ds, ds), inst.stage.h_b) + inst.stage.h_sb;
        const double ln_z_sb = log_partition(eigh(h_tot).eigenvalues, inst.stage.beta);
        const double ln_z_s =
            log_partition(eigh(inst.stage.h_s).eigenvalues, inst.stage.beta);
        const double ln_z_b =
            log_partition(eigh(inst.stage.h_b).eigenvalues, inst.stage.beta);
        rep.require_close(de, (ln_z_sb - ln_z_s - ln_z_b) / inst.stage.beta.value(), 1e-8,
                          "decoupling cost vs partition-function route");
    }
}

void check_coupling_cost_zero(Reporter& rep, RandomStream& rng, int instances,
                              bool inject_fault) {
    for (int it = 0; it < instances; ++it) {
        const CoupledInstance inst = random_coupled_instance(rng);
        rep.require(inst.stage.coupling_cost() <= tol::tau_coupling,
                    "coupling-cost-zero for constructed interactions");
        rep.track(inst.stage.coupling_cost());
    }
    if (inject_fault) {
        RandomStream frng(424242);
        const Index ds = 2, db = 3;
        const RealVector es = random_spectrum(ds, frng, 0.2, 1.0);
        const RealVector eb = random_spectrum(db, frng, 0.3, 1.0);
        const ComplexMatrix h_s = es.cast<Complex>().asDiagonal();
        const ComplexMatrix h_b = eb.cast<Complex>().asDiagonal();
        const InverseTemperature beta(1.0);
        const DensityMatrix rho_s_in = DensityMatrix::diagonal(random_populations(ds, frng));
        const ComplexMatrix u = haar_unitary(ds * db, frng);
        const ComplexMatrix h0 = kron(h_s, ComplexMatrix::Identity(db, db)) +
                                 kron(ComplexMatrix::Identity(ds, ds), h_b);
        // Corrupted interaction: offset constant omitted.
        const ComplexMatrix h_sb_bad = u.adjoint() * h0 * u - h0;
        const CoupledStage bad{h_s, h_b, h_sb_bad, beta, rho_s_in};
        rep.require(bad.coupling_cost() <= tol::tau_coupling,
                    "coupling-cost-zero (fault-injected interaction)");
    }
}

void check_weak_limit(Reporter& rep, RandomStream& rng, int) {
    RealVector e_cold(2), bath_cold(16), bath_hot(16);
    e_cold << 0.6, 1.4;
    for (Index i = 0; i < 16; ++i) {
        bath_cold(i) = 0.5 + double(i);
        bath_hot(i) = 2.0 + double(i);
    }
    const SystemSpec spec{e_cold,      2.0 * e_cold,        bath_cold,
                          bath_hot,    InverseTemperature(2.0),
                          InverseTemperature(0.5)};
    const double eta_weak = *weak_cycle(spec).eta_ratio;
    const ThetaFamily fam_h(haar_unitary(32, rng));
    const ThetaFamily fam_c(haar_unitary(32, rng));
    double prev_dev = 0.0;
    double prev_wd = 0.0;
    int step = 0;
    for (const double theta : {1e-2, 1e-3, 1e-4}) {
        const StrongReport r = strong_cycle(spec, fam_h.unitary(theta), fam_c.unitary(theta));
        rep.require(r.engine_valid, "weak-limit instance stays an engine");
        const double dev = std::abs(*r.eta_ratio - eta_weak);
        const double wd = std::abs(r.w_d_h) + std::abs(r.w_d_c);
        if (step > 0) {
            // One decade in theta must shrink the deviation ~two decades.
            rep.require(dev < prev_dev / 25.0, "eta deviation decays as theta^2");
            rep.require(wd < prev_wd / 25.0, "|W_d| decays as theta^2");
        }
        prev_dev = dev;
        prev_wd = wd;
        ++step;
        rep.track(dev);
    }
}

void check_majorization(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index n = it % 3 == 0 ? 32 : (it % 3 == 1 ? 8 : 4);
        const ComplexMatrix u = haar_unitary(n, rng);
        const RealMatrix a = doubly_stochastic_from_unitary(u);
        for (Index i = 0; i < n; ++i) {
            rep.require_close(a.row(i).sum(), 1.0, 1e-10, "row sum of |U|^2");
            rep.require_close(a.col(i).sum(), 1.0, 1e-10, "column sum of |U|^2");
        }
        RealVector x(n);
        for (Index i = 0; i < n; ++i)
            x(i) = rng.uniform(-1.0, 2.0);
        rep.require(majorizes(x, a * x), "Ax majorized by x");

        RealVector e(n);
        double v = rng.uniform(0.0, 0.5);
        for (Index i = 0; i < n; ++i) {
            e(i) = v;
            v += rng.uniform(0.0, 1.0);
        }
        const RealVector p = random_populations(n, rng);
        rep.require(rearrangement_check(e, p, a), "rearrangement bound for |Haar|^2");
        rep.require(rearrangement_check(e, p, RealMatrix::Identity(n, n)),
                    "rearrangement bound for A = I");
    }
}

void check_optimal_unitary(Reporter& rep, RandomStream& rng, int instances) {
    const std::pair<Index, Index> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2}};
    for (int it = 0; it < instances; ++it) {
        const auto [ds, db] = shapes[static_cast<std::size_t>(it) % std::size(shapes)];
        const Index n = ds * db;
        const RealVector ps = random_populations(ds, rng);
        const RealVector pb = random_populations(db, rng);
        const RealVector es = random_spectrum(ds, rng, 0.2, 1.0);
        const RealVector eb = random_spectrum(db, rng, 0.3, 1.0);
        const ComplexMatrix u = optimal_unitary(ps, pb, es, eb);

        // Permutation structure.
        for (Index i = 0; i < n; ++i) {
            rep.require_close(u.row(i).cwiseAbs().sum(), 1.0, 0.0, "one entry per row");
            rep.require_close(u.col(i).cwiseAbs().sum(), 1.0, 0.0, "one entry per column");
        }

        RealVector e_flat(n), p_flat(n);
        for (Index i = 0; i < ds; ++i)
            for (Index j = 0; j < db; ++j) {
                e_flat(i * db + j) = es(i) + eb(j);
                p_flat(i * db + j) = ps(i) * pb(j);
            }
        const RealMatrix a = doubly_stochastic_from_unitary(u);
        const double achieved = e_flat.dot(a * p_flat);

        // Exhaustive search over all permutations (n <= 8).
        std::vector<Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Index{0});
        double best = std::numeric_limits<double>::infinity();
        do {
            double val = 0.0;
            for (Index m = 0; m < n; ++m)
                val += e_flat(m) * p_flat(perm[static_cast<std::size_t>(m)]);
            best = std::min(best, val);
        } while (std::next_permutation(perm.begin(), perm.end()));
        rep.require_close(achieved, best, 1e-12, "optimal permutation matches brute force");
    }
}

void check_d_value(Reporter& rep, RandomStream& rng, int instances) {
    for (int it = 0; it < instances; ++it) {
        const Index ds = 2, db = 2 + static_cast<Index>(rng.next_u64() % 2);
        const RealVector es = random_spectrum(ds, rng, 0.2, 1.0);
        const RealVector eb = random_spectrum(db, rng, 0.3, 1.0);
        const InverseTemperature beta(rng.uniform(0.3, 1.8));
        const ComplexMatrix h_s = es.cast<Complex>().asDiagonal();
        const ComplexMatrix h_b = eb.cast<Complex>().asDiagonal();
        const RealVector ps = random_populations(ds, rng);
        const DensityMatrix rho_s = DensityMatrix::diagonal(ps);
        const RealVector pb = gibbs_populations(eb, beta);
        const DensityMatrix rho_b = DensityMatrix::diagonal(pb);

        // d_value itself asserts the definitional/algebraic agreement.
        const ComplexMatrix u = haar_unitary(ds * db, rng);
        const double d_haar = d_value(u, h_s, h_b, rho_s, rho_b, beta);

        const ComplexMatrix u_opt = optimal_unitary(ps, pb, es, eb);
        const double d_opt = d_value(u_opt, h_s, h_b, rho_s, rho_b, beta);
        const EnergyPopulationLists lists = energy_population_lists(ps, pb, es, eb);
        std::vector<double> p_down(lists.populations.data(),
                                   lists.populations.data() + lists.populations.size());
        std::sort(p_down.begin(), p_down.end(), std::greater<>());
        double bound = 0.0;
        for (Index k = 0; k < lists.energies.size(); ++k)
            bound += lists.energies(k) *
                     (p_down[static_cast<std::size_t>(k)] - lists.populations(k));
        bound *= beta.value();
        rep.require_close(d_opt, bound, 1e-8, "optimal d equals beta (E'P_down - E'P)");
        rep.require(d_opt <= 1e-12, "optimal d nonpositive");
        rep.require(d_haar >= bound - 1e-10, "d lower bound for arbitrary unitaries");
        rep.require(std::abs(d_value(ComplexMatrix::Identity(ds * db, ds * db), h_s, h_b,
                                     rho_s, rho_b, beta)) < 1e-10,
                    "d vanishes for U = I");
    }
}

void check_sufficient_condition(Reporter& rep, RandomStream& rng, int instances) {
    int condition_held = 0;
    for (int it = 0; it < instances; ++it) {
        ComplexMatrix uh, uc;
        const SystemSpec spec = theta_spec_and_unitaries(rng, 0.4, uh, uc);
        const StrongReport r = strong_cycle(spec, uh, uc);
        const WeakReport w = weak_cycle(spec);
        if (!r.engine_valid || !w.engine_valid)
            continue;
        if (r.sufficient_condition) {
            ++condition_held;
            rep.require(*r.eta_ratio <= *w.eta_ratio + 1e-9,
                        "positive decoupling costs imply eta_str <= eta_weak");
        }
    }
    rep.require(condition_held > instances / 10,
                "sufficient-condition scan found too few applicable instances");
}

} // namespace

std::vector<CheckResult> run_all(const Options& opt) {
    std::vector<CheckResult> out;
    int idx = 0;
    const auto with_rng = [&](const std::string& name, int instances,
                              const std::function<void(Reporter&, RandomStream&, int)>& body) {
        RandomStream rng(substream_seed(opt.seed, "verify", static_cast<std::uint64_t>(idx++)));
        out.push_back(run_check(
            name, [&](Reporter& rep) { body(rep, rng, instances); }));
    };
    const int n = std::max(1, opt.instances);
    const int n_small = std::max(1, n / 5);

    with_rng("kron-and-partial-trace", n_small, check_kron_partial_trace);
    with_rng("eigh-reconstruction", n_small, check_eigh);
    with_rng("hermitian-function", n_small, check_hermitian_function);
    with_rng("haar-unitary", n_small, check_haar);
    with_rng("gibbs-properties", n_small, check_gibbs);
    with_rng("entropy-invariances", n_small, check_entropy_invariances);
    with_rng("gibbs-free-energy-minimum", n, check_free_energy_minimum);
    with_rng("weak-cycle-identities", n, check_weak_cycle);
    with_rng("conjugation-identity", n, check_conjugation_identity);
    with_rng("thermalization-heat-forms", n, check_thermalization_heat_forms);
    with_rng("bath-reduction-identity", n, check_bath_reduction_identity);
    with_rng("strong-first-law-and-eta-forms", n, check_strong_first_law);
    with_rng("unitary-restriction", n, check_unitary_restriction);
    with_rng("decoupling-cost-identities", n_small, check_decoupling_cost_identities);
    with_rng("coupling-cost-zero", n_small,
             [&](Reporter& rep, RandomStream& rng, int instances) {
                 check_coupling_cost_zero(rep, rng, instances, opt.inject_fault);
             });
    with_rng("weak-limit-convergence", 1, check_weak_limit);
    with_rng("majorization-properties", n, check_majorization);
    with_rng("optimal-unitary-exhaustive", std::min(n, 200), check_optimal_unitary);
    with_rng("d-value-agreement", n_small, check_d_value);
    with_rng("sufficient-condition-scan", n, check_sufficient_condition);
    return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

} // namespace otto::verify
