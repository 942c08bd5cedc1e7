#ifndef OTTO_WEAK_CYCLE_HPP
#define OTTO_WEAK_CYCLE_HPP

#include <optional>

#include "otto/states.hpp"

namespace otto {

// One cycle instance: system spectra at the two ends of the adiabats
// (index-aligned, so level i of the cold Hamiltonian maps to level i of
// the hot one), bath spectra, and the two inverse temperatures.
//
// The adiabats are represented by the index alignment alone: a slow drive
// preserves the populations, so the compression/expansion unitaries never
// need to be materialized.
struct SystemSpec {
    RealVector e_cold;    // spectrum of H_S at the cold end, ascending
    RealVector e_hot;     // spectrum of H_S at the hot end, ascending
    RealVector bath_cold; // cold-reservoir spectrum, ascending
    RealVector bath_hot;  // hot-reservoir spectrum, ascending
    InverseTemperature beta_c;
    InverseTemperature beta_h; // beta_h < beta_c

    // Throws std::invalid_argument on any violated invariant:
    // beta_h < beta_c, equal system sizes, every spectrum strictly
    // increasing with gaps above tol::min_gap.
    void validate() const;
};

// Everything the weak-coupling cycle produces. Heats and works are in
// energy units, entropies in nats. eta fields are empty when the
// parameters do not define an engine (no NaN placeholders).
struct WeakReport {
    double w_com = 0, q_in = 0, w_exp = 0, q_out = 0, w_out = 0;
    double delta_s = 0; // S(rho_h_eq) - S(rho_h)
    double d_hot = 0;   // D(rho_h || rho_h_eq)
    double d_cold = 0;  // D(rho_c || rho_c_eq)
    std::optional<double> eta_ratio;
    std::optional<double> eta_entropy;
    bool engine_valid = false;
};

WeakReport weak_cycle(const SystemSpec& spec);

// The entropy form of the efficiency,
//   1 - (beta_h/beta_c) (dS + D_cold) / (dS - D_hot),
// evaluated through density matrices and the entropy operations rather
// than the population sums, as an independent route to the same number.
// Requires an engine-valid spec.
double eta_weak_entropy_form(const SystemSpec& spec);

struct TwoLevelEfficiency {
    double eta;
    bool engine_valid;
};

// Closed form for a two-level system whose hot spectrum is the cold one
// scaled by k: eta = 1 - 1/k whenever the cycle runs as an engine.
TwoLevelEfficiency two_level_closed_form(double eg_cold, double ee_cold, double scale,
                                         InverseTemperature beta_c,
                                         InverseTemperature beta_h);

} // namespace otto

#endif
