#include <cmath>

#include "classext/density.hpp"
#include "classext/measures.hpp"
#include "classext/states.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace classext;
using testutil::max_abs_diff;

TEST_CASE("bloch_qubit hits the poles and the tabulated directions") {
    Matrix p0 = bloch_qubit({0.0, 0.0}).matrix();
    CHECK(p0(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(p0(1, 1)) < 1e-15);

    Matrix p1 = bloch_qubit({M_PI, 0.0}).matrix();
    CHECK(p1(1, 1).real() == doctest::Approx(1.0));

    // (2*pi/3, pi): cos(pi/3)|0> - sin(pi/3)|1>.
    Vector expect(2);
    expect << std::cos(M_PI / 3.0), -std::sin(M_PI / 3.0);
    Matrix proj = expect * expect.adjoint();
    CHECK(max_abs_diff(bloch_qubit({2.0 * M_PI / 3.0, M_PI}).matrix(), proj) < 1e-14);

    CHECK_THROWS_AS(bloch_qubit({-0.1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(bloch_qubit({0.1, 7.0}), std::invalid_argument);
}

TEST_CASE("assemble_separable: single product term") {
    RngStream rng(11);
    DensityMatrix a = random_mixed_state(SubsystemLayout::single("a", 2), rng);
    DensityMatrix b = random_mixed_state(SubsystemLayout::single("b", 3), rng);
    SeparableDecomposition decomp({{1.0, a, b}});
    CHECK(max_abs_diff(assemble_separable(decomp).matrix(), kron_compose({a, b}).matrix()) < 1e-15);
}

TEST_CASE("the trine decomposition assembles to the target state exactly") {
    DensityMatrix assembled = assemble_separable(rho_rsp_trine_decomposition());
    CHECK(max_abs_diff(assembled.matrix(), build_rho_rsp().matrix()) < 1e-14);
}

TEST_CASE("the xy decomposition has the expected Pauli data") {
    DensityMatrix assembled = assemble_separable(rho_rsp_xy_decomposition());
    CorrelationData data = correlation_data(assembled);
    CHECK(data.x.norm() < 1e-14);
    CHECK(data.y.norm() < 1e-14);
    Eigen::Matrix3d t_expect = Eigen::Matrix3d::Zero();
    t_expect(0, 0) = 0.5;
    t_expect(1, 1) = -0.5;
    CHECK((data.t - t_expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(max_abs_diff(assembled.matrix(), build_rho_rsp().matrix()) < 1e-14);
}

TEST_CASE("decomposition validation") {
    RngStream rng(3);
    DensityMatrix a = random_mixed_state(SubsystemLayout::single("a", 2), rng);
    DensityMatrix b = random_mixed_state(SubsystemLayout::single("b", 2), rng);
    DensityMatrix b3 = random_mixed_state(SubsystemLayout::single("b", 3), rng);
    CHECK_THROWS_AS(SeparableDecomposition({{0.5, a, b}, {0.5, a, b3}}), std::invalid_argument);
    CHECK_THROWS_AS(SeparableDecomposition({{0.7, a, b}}), std::invalid_argument);
    CHECK_THROWS_AS(SeparableDecomposition({{-0.2, a, b}, {1.2, a, b}}), std::invalid_argument);
}

TEST_CASE("li_luo_extend: three-flag extension of the trine decomposition") {
    DensityMatrix sigma = li_luo_extend(rho_rsp_trine_decomposition());
    CHECK(sigma.dim() == 36);
    CHECK(sigma.layout().labels() == std::vector<std::string>{"a", "abar", "b", "bbar"});
    CHECK(validate_density(sigma).pass());

    // Explicit check against (1/3) sum_k |w_k,k><w_k,k| (x) |w_k,k><w_k,k|.
    SeparableDecomposition decomp = rho_rsp_trine_decomposition();
    const auto& terms = decomp.terms();
    Matrix expect = Matrix::Zero(36, 36);
    for (int k = 0; k < 3; ++k) {
        Vector flag = Vector::Zero(3);
        flag(k) = 1.0;
        DensityMatrix prod = kron_compose({terms[k].left, ket_state(flag, "abar"), terms[k].right,
                                           ket_state(flag, "bbar")});
        expect += terms[k].weight * prod.matrix();
    }
    CHECK(max_abs_diff(sigma.matrix(), expect) < 1e-14);
}

TEST_CASE("li_luo_extend: single product term reduces to the product") {
    RngStream rng(8);
    DensityMatrix a = random_mixed_state(SubsystemLayout::single("a", 2), rng);
    DensityMatrix b = random_mixed_state(SubsystemLayout::single("b", 2), rng);
    SeparableDecomposition decomp({{1.0, a, b}});
    DensityMatrix sigma = li_luo_extend(decomp);
    CHECK(sigma.dim() == 4);
    CHECK(max_abs_diff(partial_trace(sigma, {"abar", "bbar"}).matrix(), kron_compose({a, b}).matrix()) < 1e-13);
}

TEST_CASE("li_luo_extend roundtrip on random separable states") {
    for (int i = 0; i < 10; ++i) {
        RngStream rng(4000 + i);
        SeparableDecomposition decomp =
            random_separable(SubsystemLayout::single("a", 2), SubsystemLayout::single("b", 2), 4, rng);
        DensityMatrix sigma = li_luo_extend(decomp);
        DensityMatrix target = assemble_separable(decomp);
        CHECK(max_abs_diff(partial_trace(sigma, {"abar", "bbar"}).matrix(), target.matrix()) < 1e-12);
        ClassicalityReport report = is_classical(sigma, {"a", "abar"});
        CHECK(report.classical);
    }
}

TEST_CASE("li_luo_extend flag states are orthonormal") {
    // The flags are computational kets by construction; the classicality of
    // the A side across distinct flags is what the Gram condition protects.
    DensityMatrix sigma = build_rsp_extension(RspExtension::Six);
    Matrix a_marginal = group_marginal(sigma, {"a", "abar"});
    RealVector ev = eigvals_hermitian(a_marginal);
    // Three orthonormal support vectors with uniform weight 1/3.
    CHECK(ev(5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(ev(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(ev(2)) < 1e-12);
}

TEST_CASE("li_luo_extend rejects non-orthogonal factored flags") {
    CHECK_THROWS_AS(li_luo_extend(rho_rsp_xy_decomposition(), FlagSplit::factored(2, 2, {0, 1, 0, 1}, {0, 1, 0, 1})),
                    std::runtime_error);
}

TEST_CASE("build_rho_rsp matches its defining matrix") {
    DensityMatrix rho = build_rho_rsp();
    CHECK(rho.matrix()(0, 3).real() == doctest::Approx(0.25));
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(max_abs_diff(partial_trace(rho, {"b"}).matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-14);
    CHECK(max_abs_diff(partial_trace(rho, {"a"}).matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-14);
}

TEST_CASE("the three extensions have the tabulated dimensions and reduce exactly") {
    DensityMatrix six = build_rsp_extension(RspExtension::Six);
    DensityMatrix eight = build_rsp_extension(RspExtension::Eight);
    DensityMatrix opt = build_rsp_extension(RspExtension::Opt);
    CHECK(six.dim() == 36);
    CHECK(eight.dim() == 64);
    CHECK(opt.dim() == 16);
    Matrix target = build_rho_rsp().matrix();
    CHECK(max_abs_diff(partial_trace(six, {"abar", "bbar"}).matrix(), target) < 1e-12);
    CHECK(max_abs_diff(partial_trace(eight, {"abar", "bbar"}).matrix(), target) < 1e-12);
    CHECK(max_abs_diff(partial_trace(opt, {"abar", "bbar"}).matrix(), target) < 1e-12);
    CHECK(is_classical(six, {"a", "abar"}).classical);
    CHECK(is_classical(eight, {"a", "abar"}).classical);
    CHECK(is_classical(opt, {"a", "abar"}).classical);
}

TEST_CASE("the four-flag extension has a rank-4 uniform spectrum") {
    DensityMatrix eight = build_rsp_extension(RspExtension::Eight);
    RealVector ev = eigvals_hermitian(eight.matrix());
    CHECK(ev(63) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ev(60) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(ev(59)) < 1e-12);
    CHECK(entropy(eight) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("build_classical basics") {
    // Maximally correlated computational case.
    int n = 3;
    ClassicalStateSpec spec;
    for (int k = 0; k < n; ++k) {
        Vector u = Vector::Zero(n), v = Vector::Zero(n);
        u(k) = 1.0;
        v(k) = 1.0;
        spec.probs.push_back(1.0 / n);
        spec.basis_left.push_back(u);
        spec.basis_right.push_back(v);
    }
    DensityMatrix gamma = build_classical(spec);
    CHECK(entropy(gamma) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

    // n = 1: product of two pure projectors.
    ClassicalStateSpec single;
    single.probs = {1.0};
    Vector u(2), v(2);
    u << 1.0, 0.0;
    v << std::cos(0.3), std::sin(0.3);
    single.basis_left = {u};
    single.basis_right = {v};
    DensityMatrix prod = build_classical(single);
    CHECK(max_abs_diff(prod.matrix(), kron_compose({ket_state(u, "A"), ket_state(v, "B")}).matrix()) < 1e-14);

    // Non-orthonormal basis rejected.
    ClassicalStateSpec bad = spec;
    bad.basis_left[1] = bad.basis_left[0];
    CHECK_THROWS_AS(build_classical(bad), std::invalid_argument);
}

TEST_CASE("random classical specs pass the dephasing-invariance test") {
    for (int i = 0; i < 5; ++i) {
        RngStream rng(6000 + i);
        Matrix ua = random_unitary(3, rng);
        Matrix ub = random_unitary(3, rng);
        ClassicalStateSpec spec;
        auto probs = rng.simplex(3);
        for (int k = 0; k < 3; ++k) {
            spec.probs.push_back(probs[k]);
            spec.basis_left.push_back(ua.col(k));
            spec.basis_right.push_back(ub.col(k));
        }
        DensityMatrix gamma = build_classical(spec);
        CHECK(validate_density(gamma).pass());
        CHECK(is_classical(gamma, {"A"}).classical);
    }
}

TEST_CASE("random_unitary is unitary with Haar column statistics") {
    RngStream rng(77);
    Matrix u1 = random_unitary(1, rng);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

    Matrix u12 = random_unitary(12, rng);
    CHECK(max_abs_diff(u12 * u12.adjoint(), Matrix::Identity(12, 12)) < 1e-10);

    // Mean of |U(0,0)|^2 over many draws: 1/dim with Beta(1, dim-1) spread.
    const int dim = 4, samples = 10000;
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
        RngStream stream(123456, i);
        Matrix u = random_unitary(dim, stream);
        acc += std::norm(u(0, 0));
    }
    double mean = acc / samples;
    double variance = (dim - 1.0) / (static_cast<double>(dim) * dim * (dim + 1.0));
    double se = std::sqrt(variance / samples);
    CHECK(std::abs(mean - 1.0 / dim) < 3.0 * se);
}

TEST_CASE("random_separable is reproducible bit for bit") {
    RngStream r1(321), r2(321);
    SeparableDecomposition d1 =
        random_separable(SubsystemLayout::single("a", 2), SubsystemLayout::single("b", 3), 3, r1);
    SeparableDecomposition d2 =
        random_separable(SubsystemLayout::single("a", 2), SubsystemLayout::single("b", 3), 3, r2);
    for (std::size_t k = 0; k < d1.size(); ++k) {
        CHECK(d1.terms()[k].weight == d2.terms()[k].weight);
        CHECK((d1.terms()[k].left.matrix() - d2.terms()[k].left.matrix()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((d1.terms()[k].right.matrix() - d2.terms()[k].right.matrix()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(validate_density(assemble_separable(d1)).pass());

    SeparableDecomposition one =
        random_separable(SubsystemLayout::single("a", 2), SubsystemLayout::single("b", 2), 1, r1);
    CHECK(one.size() == 1);
}
