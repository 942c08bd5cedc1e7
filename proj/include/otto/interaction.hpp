#ifndef OTTO_INTERACTION_HPP
#define OTTO_INTERACTION_HPP

#include <vector>

#include "otto/states.hpp"

namespace otto {

enum class StageKind { hot, cold };

// A decoupling unitary on a joint space together with the coupling
// Hamiltonian it induces,
//   H_SB = U' (H_S + H_B) U + a I - (H_S + H_B),
// where a is fixed so that switching the interaction on costs no work:
// Tr[H_SB (rho_S x rho_B)] = 0. The total Hamiltonian then has the
// spectrum of H_S + H_B shifted by a, so decoupling can be a unitary of
// the joint system.
struct InteractionSpec {
    ComplexMatrix u_d;
    ComplexMatrix h_sb;
    double offset = 0.0; // a
    StageKind stage = StageKind::hot;
};

InteractionSpec interaction_from_unitary(const ComplexMatrix& u_d, const ComplexMatrix& h_s,
                                         const ComplexMatrix& h_b,
                                         const DensityMatrix& rho_s_in,
                                         const DensityMatrix& rho_b, StageKind stage);

// One-parameter interaction family: U(theta) = exp(i H theta) with
// H = hermitian_log_unitary(u_haar), so U(0) = I and U(1) = u_haar.
class ThetaFamily {
public:
    explicit ThetaFamily(const ComplexMatrix& u_haar);
    ComplexMatrix unitary(double theta) const;
    const ComplexMatrix& generator() const { return h_; }

private:
    ComplexMatrix h_;
    SpectralDecomposition spec_;
};

ComplexMatrix theta_unitary(const ComplexMatrix& u_haar, double theta);

// Joint-level bookkeeping for the rearrangement construction: energies
// (eps_i + eps'_j) sorted ascending with the populations p_i q'_j carried
// along, using the flat convention (i,j) -> i*dim_b + j. Energy ties break
// by (i,j) lexicographic order, population ties by flat index.
struct EnergyPopulationLists {
    RealVector energies;              // ascending
    RealVector populations;           // in energies' sort order
    std::vector<Index> index_map;     // sorted slot k -> original flat index
};

EnergyPopulationLists energy_population_lists(const RealVector& pops_s,
                                              const RealVector& pops_b,
                                              const RealVector& eps_s,
                                              const RealVector& eps_b);

// Permutation unitary (in the product energy eigenbasis) routing the k-th
// largest population product to the slot holding the k-th smallest joint
// energy. It minimizes the discriminant d over all decoupling unitaries.
ComplexMatrix optimal_unitary(const RealVector& pops_s, const RealVector& pops_b,
                              const RealVector& eps_s, const RealVector& eps_b);

// Discriminant d = D(rho_S x rho_B || rho_SB) - D(rho_S || rho_S_eq) for
// the interaction induced by u_d. Evaluates both that definition and the
// algebraic form beta (E' A P - E' P), A_mn = |<m|U|n>|^2, and demands
// they agree; the definitional value is returned. rho_b must be the Gibbs
// state of h_b at beta.
double d_value(const ComplexMatrix& u_d, const ComplexMatrix& h_s, const ComplexMatrix& h_b,
               const DensityMatrix& rho_s_in, const DensityMatrix& rho_b,
               InverseTemperature beta);

// True iff x majorizes y: descending partial sums of y never exceed those
// of x (within 1e-12) and the totals agree within 1e-10.
bool majorizes(const RealVector& x, const RealVector& y);

// A_mn = |U_mn|^2; rows and columns each sum to 1.
RealMatrix doubly_stochastic_from_unitary(const ComplexMatrix& u);

// Checks E' A P >= E' P_down - 1e-12 for ascending E and doubly
// stochastic A, where P_down pairs the largest populations with the
// smallest energies.
bool rearrangement_check(const RealVector& e_ascending, const RealVector& populations,
                         const RealMatrix& a);

} // namespace otto

#endif
