#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "classext/density.hpp"
#include "classext/rng.hpp"

namespace classext {

struct OptBudget {
    int restarts = 32;          // random starts added on top of the canonical ones
    int max_evals = 4000;       // per start
    double ftol = 1e-9;         // stop when a full cycle improves less than this
    double target = -1e300;     // early exit once the objective reaches this value
    std::uint64_t seed = 0;     // master seed for the per-start streams
    double start_scale = 0.7;   // stddev of random start coordinates
};

struct OptResult {
    Eigen::VectorXd argmin;
    double value = 0.0;
    int evals = 0;
    int restarts_used = 0;
    bool converged = false;
    // Best few distinct start results, for callers that re-polish.
    std::vector<std::pair<double, Eigen::VectorXd>> leaders;
};

// Derivative-free simplex (Nelder-Mead) minimization with adaptive
// coefficients. Deterministic given the start point.
OptResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
                      double step, int max_evals, double ftol, double target);

// Cyclic coordinate descent with local quadratic fits; effective terminal
// refinement on smooth objectives where a collapsed simplex stalls.
OptResult cyclic_refine(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
                        double step, int max_sweeps, double target);

// Multistart wrapper: runs Nelder-Mead from every canonical start plus
// `budget.restarts` random starts (per-start streams derived by counter),
// then polishes the winner with repeated restarted simplices. The reduction
// over starts is a deterministic min, so evaluation order cannot change the
// result.
OptResult multistart_minimize(const std::function<double(const Eigen::VectorXd&)>& f, int n_params,
                              const std::vector<Eigen::VectorXd>& canonical_starts, const OptBudget& budget);

// Parameterization of the unitary group: V = exp(iH) with H Hermitian read
// from dim*dim real parameters (diagonal first, then re/im per off-diagonal
// pair).
Matrix unitary_from_params(const double* params, int dim);
int unitary_param_count(int dim);

// Inverse map: Hermitian H with exp(iH) = V, packed as parameters.
// Uses the Schur form, so V must be unitary.
Eigen::VectorXd params_from_unitary(const Matrix& v);

std::vector<double> softmax(const double* logits, int n);

}  // namespace classext
