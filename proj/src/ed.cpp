#include "classext/ed.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "classext/measures.hpp"
#include "classext/states.hpp"

namespace classext {

DensityMatrix build_gamma(const EDInstance& inst) {
    const int n = inst.side_dim();
    if (inst.basis.rows() != n || inst.basis.cols() != n)
        throw std::invalid_argument("build_gamma: basis must be a unitary on C^(2d)");
    SubsystemLayout layout({{"a", inst.d}, {"abar", 2}, {"b", inst.d}, {"bbar", 2}});
    Matrix acc = Matrix::Zero(n * n, n * n);
    const double p = 1.0 / n;
    for (int k = 0; k < n; ++k) {
        Matrix proj = inst.basis.col(k) * inst.basis.col(k).adjoint();
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                acc.block(r * n, c * n, n, n) += p * proj(r, c) * proj;
    }
    acc = 0.5 * (acc + acc.adjoint().eval());
    return DensityMatrix(layout, std::move(acc));
}

double ed_value(const EDInstance& inst) {
    DensityMatrix gamma = build_gamma(inst);
    DensityMatrix rho_Ab = partial_trace(gamma, {"bbar"});
    double final_neg = negativity(rho_Ab, {"a"});
    double initial_neg = negativity(rho_Ab, {"a", "b"});
    return final_neg - initial_neg;
}

namespace {

Matrix random_hermitian(int dim, RngStream& rng) {
    Matrix h(dim, dim);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = rng.normal();
        for (int j = i + 1; j < dim; ++j) {
            Complex z = 0.5 * rng.complex_normal();
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

Matrix unitary_step(const Matrix& h, double eps) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix phases = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i, i) = std::exp(Complex(0.0, eps * es.eigenvalues()(i)));
    return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

}  // namespace

SearchReport search_max_ed(int d, const EDBudget& budget, std::uint64_t seed) {
    if (d < 2 || d > 6)
        std::cerr << "ed-search: d=" << d << " is outside the tabulated range [2,6]; proceeding anyway\n";
    if (budget.samples < 1) throw std::invalid_argument("ed-search: sample budget must be positive");
    const int n = 2 * d;

    SearchReport report;
    report.d = d;
    report.master_seed = seed;
    RngStream master(seed);

    // Scored sampling phase. Keep the top_k candidates for refinement.
    struct Scored {
        double value;
        long index;
        Matrix basis;
    };
    std::vector<Scored> top;
    auto keep = [&](double value, long index, const Matrix& basis) {
        const std::size_t cap = static_cast<std::size_t>(std::max(1, budget.top_k));
        if (top.size() < cap) {
            top.push_back({value, index, basis});
            std::sort(top.begin(), top.end(), [](const Scored& a, const Scored& b) { return a.value > b.value; });
        } else if (value > top.back().value) {
            top.back() = {value, index, basis};
            std::sort(top.begin(), top.end(), [](const Scored& a, const Scored& b) { return a.value > b.value; });
        }
    };

    for (long i = 0; i < budget.samples; ++i) {
        RngStream stream = master.derive(static_cast<std::uint64_t>(i));
        Matrix u = random_unitary(n, stream);
        double value = ed_value({d, u});
        keep(value, i, u);
    }
    report.samples_evaluated = budget.samples;

    // Refinement: multiplicative perturbations with a shrinking step.
    double best_value = top.empty() ? -1e300 : top.front().value;
    Matrix best_basis = top.empty() ? Matrix::Identity(n, n) : top.front().basis;
    for (std::size_t c = 0; c < top.size(); ++c) {
        Matrix u = top[c].basis;
        double value = top[c].value;
        RngStream stream = master.derive(0x5EF1AEull + c);
        double eps = 0.1;
        int rejects = 0;
        for (int step = 0; step < budget.refine_evals && eps >= 1e-6; ++step) {
            Matrix cand = unitary_step(random_hermitian(n, stream), eps) * u;
            double cand_value = ed_value({d, cand});
            ++report.refinement_steps;
            if (cand_value > value) {
                value = cand_value;
                u = cand;
                rejects = 0;
            } else if (++rejects >= 20) {
                eps *= 0.5;
                rejects = 0;
            }
        }
        if (value > best_value) {
            best_value = value;
            best_basis = u;
        }
    }

    report.best_ed = best_value;
    report.best_instance = {d, best_basis};
    return report;
}

}  // namespace classext
