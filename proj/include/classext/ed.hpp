#pragma once

#include <cstdint>

#include "classext/density.hpp"
#include "classext/rng.hpp"

namespace classext {

// Classical carrier state for entanglement distribution: qudits a, b of
// dimension d with qubit ancillas, uniform weights 1/(2d), and a shared
// projector basis (columns of `basis`) on both sides.
struct EDInstance {
    int d = 2;
    Matrix basis;  // unitary on C^(2d)

    int side_dim() const { return 2 * d; }
};

// gamma = sum_k p_k P_k (x) P_k on layout [a:d, abar:2, b:d, bbar:2].
DensityMatrix build_gamma(const EDInstance& inst);

// Negativity gain of regrouping the carrier: on tr_bbar(gamma),
// E(a | abar b) - E(ab | abar). Can be negative for poor instances.
double ed_value(const EDInstance& inst);

struct EDBudget {
    long samples = 20000;   // Haar-random bases scored before refinement
    int refine_evals = 2000;  // objective evaluations per refined candidate
    int top_k = 8;            // how many leading candidates get refined
};

struct SearchReport {
    int d = 0;
    double best_ed = 0.0;
    EDInstance best_instance;
    long samples_evaluated = 0;
    long refinement_steps = 0;
    std::uint64_t master_seed = 0;
};

// Seeded random search: score `samples` Haar bases (per-sample streams
// derived by counter, so the best-so-far is a prefix-stable max-reduction),
// then hill-climb the leading candidates with shrinking random rotations
// exp(i*eps*H), halving eps after 20 consecutive rejections, stopping below
// eps = 1e-6.
SearchReport search_max_ed(int d, const EDBudget& budget, std::uint64_t seed);

}  // namespace classext
