#pragma once

#include <optional>
#include <string>
#include <vector>

#include "classext/channels.hpp"
#include "classext/density.hpp"
#include "classext/optim.hpp"

namespace classext {

// Von Neumann entropy in bits, with 0*log(0) = 0.
double entropy(const DensityMatrix& state);
double entropy_of(const Matrix& m);
double entropy_of_spectrum(const RealVector& eigenvalues);

// S(left) + S(right) - S(state) across the bipartition whose left group is
// `left`; the right group is the complement.
double mutual_information(const DensityMatrix& state, const LabelGroup& left);

// Sum of the absolute negative eigenvalues of the partial transpose over
// `left` (equivalently (trace norm - 1)/2).
double negativity(const DensityMatrix& state, const LabelGroup& left);

// Bloch vectors and Pauli correlation matrix of a two-qubit state.
struct CorrelationData {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    Eigen::Vector3d y = Eigen::Vector3d::Zero();
    Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
};

CorrelationData correlation_data(const DensityMatrix& state);

// (1/4)[1 (x) 1 + x.sigma (x) 1 + 1 (x) y.sigma + sum T_ij sigma_i (x) sigma_j].
DensityMatrix reconstruct_two_qubit(const CorrelationData& data);

const Matrix& pauli(int i);  // 1..3 -> x, y, z

// Closed-form geometric discord of a two-qubit state (measurement on the
// first qubit, unnormalized 1/4 prefactor):
//   D_G = (||x||^2 + ||T||_F^2 - kmax)/4,  kmax = lambda_max(x x^T + T T^T).
double geometric_discord(const DensityMatrix& state);

// Remote-preparation payoff (mu2 + mu3)/4 over the descending eigenvalues of
// T T^T; coincides with the geometric discord whenever x = 0.
double rsp_payoff(const DensityMatrix& state);

struct MeasureResult {
    double value = 0.0;
    int restarts = 0;
    int evals = 0;
    bool converged = false;
    bool optimizer_skipped = false;  // group above the search dimension cap
    double best_objective = 0.0;     // optimizer-side value backing `value`
};

// Classical correlation captured by measuring `measured` in the given basis:
// S(rest) - sum_j p_j S(rest | outcome j).
double classical_correlation(const DensityMatrix& state, const LabelGroup& measured, const Matrix& basis);

struct DiscordBudget {
    OptBudget opt;
    int max_measured_dim = 4;       // cap on the optimizer's search space
    bool structural_only = false;   // skip the optimizer, keep canonical bases
};

// One-sided quantum discord: I(measured : rest) minus the best classical
// correlation over rank-1 projective measurements on `measured`. Canonical
// starts cover the computational basis, the measured marginal's eigenbasis
// and its degeneracy-refined variant; the rest is multistart simplex search.
MeasureResult discord_one_sided(const DensityMatrix& state, const LabelGroup& measured,
                                const DiscordBudget& budget = {});

// Orthonormal basis of the grouped factors in which the state is diagonal
// whenever it is classical on that side: the group marginal's eigenbasis,
// with degenerate blocks split by conditional operators. `unresolved` is set
// when some degeneracy survived the refinement pool.
Matrix classical_candidate_basis(const DensityMatrix& state, const LabelGroup& group, bool* unresolved = nullptr);

struct ClassicalityReport {
    bool classical = false;
    bool undecided = false;  // refinement left degeneracies and no basis fixed the state
    double residual = 0.0;   // max-abs change under the best dephasing found
    Matrix basis_left;
    Matrix basis_right;
};

// Tests invariance under joint product dephasing in the refined marginal
// eigenbases (or the hint bases, when given).
ClassicalityReport is_classical(const DensityMatrix& state, const LabelGroup& left,
                                const std::optional<std::pair<Matrix, Matrix>>& hint = std::nullopt);

}  // namespace classext
