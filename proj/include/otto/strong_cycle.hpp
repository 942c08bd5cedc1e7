#ifndef OTTO_STRONG_CYCLE_HPP
#define OTTO_STRONG_CYCLE_HPP

#include "otto/interaction.hpp"
#include "otto/weak_cycle.hpp"

namespace otto {

// One coupled thermalization+decoupling stage: system and bath
// self-Hamiltonians, the interaction on the joint space, the bath inverse
// temperature, and the system state entering the stage (diagonal in the
// H_S eigenbasis).
struct CoupledStage {
    ComplexMatrix h_s;
    ComplexMatrix h_b;
    ComplexMatrix h_sb;
    InverseTemperature beta;
    DensityMatrix rho_s_in;

    Index dim_s() const { return h_s.rows(); }
    Index dim_b() const { return h_b.rows(); }

    // |Tr[H_SB (rho_S_in x gibbs(H_B))]| scaled by max(1, ||H_SB||_F);
    // 0 when H_SB vanishes.
    double coupling_cost() const;

    // Dimension/Hermiticity checks plus the coupling-cost soft assertion:
    // construction roundoff up to tol::tau_coupling is expected, anything
    // above tol::abort_coupling aborts the evaluation.
    void validate() const;
};

// e^{-beta (H_S + H_B + H_SB)} / Z on the joint space.
DensityMatrix joint_gibbs(const CoupledStage& stage);

// Q_th = Tr[H_S (rho_S_reduced - rho_S_in)] + Tr[H_SB rho_SB]; the
// accompanying work vanishes by construction.
double thermalization_heat(const CoupledStage& stage, const DensityMatrix& rho_sb);

// Q_d = [S(rho_S_eq) - S(rho_S_reduced) + D(rho_SB || rho_S_red x rho_B_red)] / beta.
double decoupling_heat(const DensityMatrix& rho_sb, const DensityMatrix& rho_s_eq,
                       InverseTemperature beta);

// W_d = Tr[H_S (rho_S_eq - rho_S_reduced)] - Tr[H_SB rho_SB] - Q_d.
double decoupling_work(const DensityMatrix& rho_sb, const DensityMatrix& rho_s_eq,
                       const ComplexMatrix& h_s, const ComplexMatrix& h_sb,
                       InverseTemperature beta);

// Joint internal-energy change across the decoupling stroke,
// dE_d = Tr[H_S (rho_S_eq - rho_S_red)] + Tr[H_B (rho_B - rho_B_red)] - Tr[H_SB rho_SB].
double decoupling_cost(const CoupledStage& stage, const DensityMatrix& rho_sb);

// All stage-level quantities in one pass.
struct StageEvaluation {
    double q_th = 0, q_d = 0, w_d = 0;
    double delta_e_d = 0;
    double d_bath = 0;  // D(rho_B_red || rho_B)
    double d_joint = 0; // D(rho_S_in x rho_B || rho_SB)
    double s_in = 0, s_eq = 0;
    bool unitary_restriction_ok = false; // S(rho_S_eq x rho_B) == S(rho_SB)
};

StageEvaluation evaluate_stage(const CoupledStage& stage);

// Full six-process evaluation. Heats carry the flow-into-system sign; the
// primed totals are q_in = Q_th_h + Q_d_h, q_out = -(Q_th_c + Q_d_c),
// w_out = -(W_com + W_d_h + W_exp + W_d_c).
struct StrongReport {
    double q_th_h = 0, q_d_h = 0, q_th_c = 0, q_d_c = 0;
    double w_com = 0, w_exp = 0, w_d_h = 0, w_d_c = 0;
    double q_in = 0, q_out = 0, w_out = 0;
    std::optional<double> eta_ratio;
    std::optional<double> eta_entropy;
    double delta_s = 0;
    double d_bath_h = 0, d_joint_h = 0, d_bath_c = 0, d_joint_c = 0;
    double delta_e_d_h = 0, delta_e_d_c = 0;
    bool engine_valid = false;
    bool sufficient_condition = false; // both decoupling costs nonnegative
    bool carnot_ok = false;
    bool unitary_restriction_ok = false;
};

// Builds the coupling Hamiltonians from the two decoupling unitaries
// (dim = |e_hot| * |bath_hot| and |e_cold| * |bath_cold|) and runs the
// cycle. The entering states are diagonal: cold-Gibbs populations on the
// hot stage, hot-Gibbs populations on the cold stage.
StrongReport strong_cycle(const SystemSpec& spec, const ComplexMatrix& u_d_hot,
                          const ComplexMatrix& u_d_cold);

} // namespace otto

#endif
