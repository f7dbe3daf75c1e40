#include <cmath>

#include "classext/thermo.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace classext;
using testutil::max_abs_diff;

namespace {

const double kLog2Of12 = std::log2(12.0);

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

ClassicalStateSpec packed_extension_spec() {
    // Four orthonormal flagged vectors per side: the x pair shares flag |0>,
    // the y pair shares flag |1>, anti-correlated in y on the right side.
    Vector f0 = Vector::Zero(2), f1 = Vector::Zero(2);
    f0(0) = 1.0;
    f1(1) = 1.0;
    Vector px = bloch_ket({M_PI / 2.0, 0.0}), mx = bloch_ket({M_PI / 2.0, M_PI});
    Vector py = bloch_ket({M_PI / 2.0, M_PI / 2.0}), my = bloch_ket({M_PI / 2.0, 3.0 * M_PI / 2.0});
    ClassicalStateSpec spec;
    spec.probs = {0.25, 0.25, 0.25, 0.25};
    spec.basis_left = {kron_vec(px, f0), kron_vec(mx, f0), kron_vec(py, f1), kron_vec(my, f1)};
    spec.basis_right = {kron_vec(px, f0), kron_vec(mx, f0), kron_vec(my, f1), kron_vec(py, f1)};
    return spec;
}

}  // namespace

TEST_CASE("extractable work of reference states") {
    for (int d : {2, 3, 8}) CHECK(extractable_work(maximally_mixed(SubsystemLayout::single("q", d))) ==
                                  doctest::Approx(0.0).epsilon(1e-12));

    RngStream rng(3);
    Matrix u = random_unitary(16, rng);
    DensityMatrix pure = ket_state(u.col(0), "q");
    CHECK(extractable_work(pure) == doctest::Approx(4.0).epsilon(1e-10));

    CHECK(extractable_work(build_rsp_extension(RspExtension::Six)) == doctest::Approx(kLog2Of12).epsilon(1e-10));
}

TEST_CASE("extractable work is positive away from the maximally mixed state") {
    for (int i = 0; i < 10; ++i) {
        DensityMatrix state = testutil::random_density(5, 660 + i);
        double w = extractable_work(state);
        CHECK(w >= -1e-12);
        double mixedness = max_abs_diff(state.matrix(), Matrix::Identity(5, 5) / 5.0);
        if (mixedness > 1e-3) CHECK(w > 1e-8);
    }
}

TEST_CASE("classical work equals total work for classical states in the defining basis") {
    RngStream rng(14);
    Matrix ua = random_unitary(3, rng), ub = random_unitary(3, rng);
    ClassicalStateSpec spec;
    auto probs = rng.simplex(3);
    for (int k = 0; k < 3; ++k) {
        spec.probs.push_back(probs[k]);
        spec.basis_left.push_back(ua.col(k));
        spec.basis_right.push_back(ub.col(k));
    }
    DensityMatrix gamma = build_classical(spec);
    CHECK(std::abs(classical_work(gamma, {"A"}, ua) - extractable_work(gamma)) < 1e-12);
}

TEST_CASE("full dephasing of a coherent qubit destroys its work content") {
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    DensityMatrix state = kron_compose({ket_state(plus, "a"), maximally_mixed(SubsystemLayout::single("b", 2))});
    CHECK(extractable_work(state) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(classical_work(state, {"a"}, Matrix::Identity(2, 2)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dephasing never increases the extractable work") {
    for (int i = 0; i < 10; ++i) {
        RngStream rng(9900 + i);
        DensityMatrix state = random_mixed_state(SubsystemLayout({{"a", 2}, {"b", 3}}), rng);
        Matrix u = random_unitary(2, rng);
        CHECK(classical_work(state, {"a"}, u) <= extractable_work(state) + 1e-10);
    }
}

TEST_CASE("work ledger of the three-flag extension") {
    WorkLedger ledger = work_ledger(build_rsp_extension(RspExtension::Six));
    CHECK(ledger.w_total == doctest::Approx(kLog2Of12).epsilon(1e-10));
    CHECK(ledger.identity_residual < 1e-10);
    CHECK(ledger.additivity_ok);
    CHECK(ledger.classical);
    CHECK(std::abs(ledger.w_classical - ledger.w_total) < 1e-10);
    CHECK(ledger.local_bound_ok);
}

TEST_CASE("work ledger of a product extension has zero mutual information") {
    RngStream rng(77);
    DensityMatrix a = random_mixed_state(SubsystemLayout::single("a", 2), rng);
    DensityMatrix b = random_mixed_state(SubsystemLayout::single("b", 2), rng);
    DensityMatrix sigma = li_luo_extend(SeparableDecomposition({{1.0, a, b}}));
    WorkLedger ledger = work_ledger(sigma);
    CHECK(std::abs(ledger.mi) < 1e-10);
    CHECK(std::abs(ledger.w_total - ledger.w_reduced - ledger.w_aux) < 1e-10);
}

TEST_CASE("the work identity is algebraic: it holds for arbitrary four-factor states") {
    for (int i = 0; i < 5; ++i) {
        RngStream rng(7100 + i);
        DensityMatrix state = random_mixed_state(SubsystemLayout({{"a", 2}, {"abar", 2}, {"b", 2}, {"bbar", 2}}), rng);
        WorkLedger ledger = work_ledger(state);
        CHECK(ledger.identity_residual < 1e-10);
    }
}

TEST_CASE("work ledgers of random classical extensions satisfy the local bound") {
    for (int i = 0; i < 10; ++i) {
        RngStream rng(8200 + i);
        SeparableDecomposition decomp =
            random_separable(SubsystemLayout::single("a", 2), SubsystemLayout::single("b", 2), 3, rng);
        WorkLedger ledger = work_ledger(li_luo_extend(decomp));
        CHECK(ledger.identity_residual < 1e-10);
        CHECK(ledger.classical);
        CHECK(ledger.local_bound_ok);
        CHECK(std::abs(ledger.w_classical - ledger.w_total) < 1e-10);
    }
}

TEST_CASE("table-2 work values and monotonicity in the dimension") {
    double w_opt = extractable_work(build_rsp_extension(RspExtension::Opt));
    double w_six = extractable_work(build_rsp_extension(RspExtension::Six));
    double w_eight = extractable_work(build_rsp_extension(RspExtension::Eight));
    CHECK(w_opt == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(w_six == doctest::Approx(kLog2Of12).epsilon(1e-10));
    CHECK(w_eight == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(w_opt < w_six);
    CHECK(w_six < w_eight);
}

TEST_CASE("minimal extension search accepts the trivial extension of a product") {
    RngStream rng(4);
    DensityMatrix target = kron_compose({random_mixed_state(SubsystemLayout::single("a", 2), rng),
                                         random_mixed_state(SubsystemLayout::single("b", 2), rng)});
    MinExtBudget budget;
    budget.restarts = 2;
    budget.max_evals = 1500;
    MinExtReport report = search_min_extension(target, {{2, 2}}, budget);
    CHECK(report.success_index == 0);
    CHECK(report.per_dim[0].best_distance < 1e-6);
}

TEST_CASE("minimal extension search succeeds from the packed-extension seed") {
    MinExtBudget budget;
    budget.restarts = 2;
    budget.max_evals = 1500;
    budget.seed = 11;
    MinExtReport report = search_min_extension(build_rho_rsp(), {{4, 4}}, budget, packed_extension_spec());
    CHECK(report.success_index == 0);
    CHECK(report.per_dim[0].best_distance < 1e-10);
    CHECK(report.per_dim[0].work == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("minimal extension search makes progress from random starts") {
    MinExtBudget budget;
    budget.restarts = 12;
    budget.max_evals = 4000;
    budget.seed = 5;
    budget.use_canonical_starts = false;
    MinExtReport report = search_min_extension(build_rho_rsp(), {{4, 4}}, budget);
    CHECK(report.per_dim[0].best_distance < 0.05);
}
