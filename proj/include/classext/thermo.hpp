#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "classext/density.hpp"
#include "classext/measures.hpp"
#include "classext/states.hpp"

namespace classext {

// Maximum extractable work log2(d) - S(state), in bits (k_B*T = 1); equal to
// the relative entropy to the maximally mixed state, and both routes are
// computed and cross-checked internally. Also serves as the accessible
// information i(state).
double extractable_work(const DensityMatrix& state);

// Work left after dephasing the `group` side in `basis`:
// log2(d) - S(Phi_group(state)). Never exceeds extractable_work.
double classical_work(const DensityMatrix& state, const LabelGroup& group, const Matrix& basis);

struct WorkLedger {
    double w_total = 0.0;           // W of the extension
    double w_reduced = 0.0;         // W of the traced-out system pair
    double w_aux = 0.0;             // W of the ancilla marginal
    double mi = 0.0;                // I(system pair : ancillas)
    double identity_residual = 0.0; // |w_total - w_reduced - w_aux - mi|
    double w_classical = 0.0;       // local dephasing work in the defining basis
    bool classical = false;         // extension classical across the side cut
    bool additivity_ok = false;     // identity_residual within 1e-10
    bool local_bound_ok = false;    // w_classical >= w_reduced + w_aux - 1e-10
};

// Work bookkeeping for a four-factor extension [a, abar, b, bbar]:
// the total work splits exactly into the reduced-state work, the ancilla
// work and their mutual information; for a classical extension the whole
// budget is available to a local measurement in the defining basis.
WorkLedger work_ledger(const DensityMatrix& extension);

struct MinExtBudget {
    int restarts = 200;
    int max_evals = 8000;
    std::uint64_t seed = 1;
    double success_distance = 1e-6;
    bool use_canonical_starts = true;  // dephased-target start on top of the random ones
};

struct MinExtDimResult {
    int dim_left = 0;
    int dim_right = 0;
    double best_distance = 0.0;
    double work = 0.0;
    std::optional<DensityMatrix> witness;
    int restarts_used = 0;
};

struct MinExtReport {
    std::vector<MinExtDimResult> per_dim;
    int success_index = -1;  // least dimension reaching the success distance
};

// Searches the candidate dimension ladder for the smallest classical state
// whose reduction over the ancilla factors reproduces `target` (a two-qubit
// separable state). Classical candidates are parameterized by a unitary per
// side plus a softmax joint probability vector; the objective is the
// Hilbert-Schmidt distance of the reduction to the target. Optional
// `seed_spec` injects a known construction as an extra start.
MinExtReport search_min_extension(const DensityMatrix& target, const std::vector<std::pair<int, int>>& dims,
                                  const MinExtBudget& budget,
                                  const std::optional<ClassicalStateSpec>& seed_spec = std::nullopt);

// Classical state on [a, abar, b, bbar] from per-side bases and a joint
// probability table (row index = left basis vector, column = right).
DensityMatrix classical_from_bases(const Matrix& basis_left, const Matrix& basis_right,
                                   const std::vector<double>& joint_probs, int dim_left, int dim_right);

}  // namespace classext
