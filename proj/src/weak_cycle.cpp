#include "otto/weak_cycle.hpp"

#include <cmath>
#include <stdexcept>

namespace otto {

namespace {

void require_increasing(const RealVector& v, const char* what) {
    if (v.size() < 1)
        throw std::invalid_argument(std::string("otto::SystemSpec: empty spectrum ") + what);
    for (Index i = 0; i + 1 < v.size(); ++i)
        if (v(i + 1) - v(i) <= tol::min_gap)
            throw std::invalid_argument(std::string("otto::SystemSpec: degenerate spectrum ") +
                                        what);
    if (!v.allFinite())
        throw std::invalid_argument(std::string("otto::SystemSpec: non-finite spectrum ") + what);
}

// ln of the Gibbs populations, evaluated without forming the populations
// (safe for large beta*E).
RealVector log_gibbs_populations(const RealVector& e, InverseTemperature beta) {
    const double shift = e.minCoeff();
    const RealVector x = -beta.value() * (e.array() - shift);
    const double ln_z0 = std::log(x.array().exp().sum());
    return x.array() - ln_z0;
}

} // namespace

void SystemSpec::validate() const {
    // Equality is admitted so the zero-gradient boundary reports "not an
    // engine" instead of failing to construct.
    if (beta_h.value() > beta_c.value())
        throw std::invalid_argument("otto::SystemSpec: requires beta_h <= beta_c");
    if (e_cold.size() != e_hot.size())
        throw std::invalid_argument("otto::SystemSpec: system spectra sizes differ");
    if (e_cold.size() < 2)
        throw std::invalid_argument("otto::SystemSpec: system needs at least two levels");
    require_increasing(e_cold, "e_cold");
    require_increasing(e_hot, "e_hot");
    require_increasing(bath_cold, "bath_cold");
    require_increasing(bath_hot, "bath_hot");
}

WeakReport weak_cycle(const SystemSpec& spec) {
    spec.validate();
    const RealVector p = gibbs_populations(spec.e_cold, spec.beta_c);
    const RealVector q = gibbs_populations(spec.e_hot, spec.beta_h);
    const RealVector lp = log_gibbs_populations(spec.e_cold, spec.beta_c);
    const RealVector lq = log_gibbs_populations(spec.e_hot, spec.beta_h);

    WeakReport r;
    r.w_com = p.dot(spec.e_hot) - p.dot(spec.e_cold);
    r.q_in = (q - p).dot(spec.e_hot);
    r.w_exp = q.dot(spec.e_cold) - q.dot(spec.e_hot);
    r.q_out = (q - p).dot(spec.e_cold);
    r.w_out = -(r.w_com + r.w_exp);

    r.delta_s = -q.dot(lq) + p.dot(lp); // S(q) - S(p)
    r.d_hot = p.dot(lp - lq);
    r.d_cold = q.dot(lq - lp);

    r.engine_valid = r.q_in > r.q_out && r.q_out > 0.0;
    if (r.engine_valid) {
        r.eta_ratio = r.w_out / r.q_in;
        r.eta_entropy = 1.0 - (spec.beta_h.value() / spec.beta_c.value()) *
                                  (r.delta_s + r.d_cold) / (r.delta_s - r.d_hot);
    }
    return r;
}

double eta_weak_entropy_form(const SystemSpec& spec) {
    const WeakReport r = weak_cycle(spec);
    if (!r.engine_valid)
        throw std::invalid_argument("otto::eta_weak_entropy_form: spec is not an engine");

    const DensityMatrix rho_h = DensityMatrix::diagonal(gibbs_populations(spec.e_cold, spec.beta_c));
    const DensityMatrix rho_h_eq = gibbs(ComplexMatrix(spec.e_hot.cast<Complex>().asDiagonal()),
                                         spec.beta_h);
    const DensityMatrix rho_c = DensityMatrix::diagonal(gibbs_populations(spec.e_hot, spec.beta_h));
    const DensityMatrix rho_c_eq = gibbs(ComplexMatrix(spec.e_cold.cast<Complex>().asDiagonal()),
                                         spec.beta_c);

    const double delta_s = vn_entropy(rho_h_eq) - vn_entropy(rho_h);
    const double d_hot = relative_entropy(rho_h, rho_h_eq).value();
    const double d_cold = relative_entropy(rho_c, rho_c_eq).value();
    const double denom = delta_s - d_hot;
    if (denom <= 0.0)
        throw std::runtime_error("otto::eta_weak_entropy_form: dS - D_hot <= 0 on a valid engine");
    return 1.0 - (spec.beta_h.value() / spec.beta_c.value()) * (delta_s + d_cold) / denom;
}

TwoLevelEfficiency two_level_closed_form(double eg_cold, double ee_cold, double scale,
                                         InverseTemperature beta_c,
                                         InverseTemperature beta_h) {
    if (!(ee_cold > eg_cold))
        throw std::invalid_argument("otto::two_level_closed_form: requires ee_cold > eg_cold");
    if (!(scale > 0.0))
        throw std::invalid_argument("otto::two_level_closed_form: requires scale > 0");
    const double gap = ee_cold - eg_cold;
    const double pe_cold = 1.0 / (1.0 + std::exp(beta_c.value() * gap));
    const double pe_hot = 1.0 / (1.0 + std::exp(beta_h.value() * scale * gap));
    // For proportional spectra the population differences cancel and the
    // ratio of heats is exactly 1/scale.
    TwoLevelEfficiency out;
    out.eta = 1.0 - 1.0 / scale;
    out.engine_valid = pe_hot > pe_cold && scale > 1.0;
    return out;
}

} // namespace otto
