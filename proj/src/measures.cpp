#include "classext/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "classext/rng.hpp"
#include "classext/states.hpp"

namespace classext {

double entropy_of_spectrum(const RealVector& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        double lambda = eigenvalues(i);
        if (lambda > 1e-15) s -= lambda * std::log2(lambda);
    }
    return s;
}

double entropy_of(const Matrix& m) { return entropy_of_spectrum(eigvals_hermitian(m)); }

double entropy(const DensityMatrix& state) { return entropy_of(state.matrix()); }

namespace {

LabelGroup complement_group(const SubsystemLayout& layout, const LabelGroup& group) {
    LabelGroup rest;
    for (const auto& f : layout.factors()) {
        bool in_group = false;
        for (const auto& l : group) in_group = in_group || l == f.label;
        if (!in_group) rest.push_back(f.label);
    }
    return rest;
}

LabelGroup normalized(const SubsystemLayout& layout, const LabelGroup& group) {
    LabelGroup out;
    for (const auto& f : layout.factors())
        for (const auto& l : group)
            if (l == f.label) out.push_back(l);
    if (out.size() != group.size()) throw std::invalid_argument("group contains an unknown or repeated label");
    return out;
}

}  // namespace

double mutual_information(const DensityMatrix& state, const LabelGroup& left) {
    const SubsystemLayout& layout = state.layout();
    LabelGroup l = normalized(layout, left);
    LabelGroup r = complement_group(layout, l);
    if (l.empty() || r.empty()) throw std::invalid_argument("mutual_information: cut must be proper and nonempty");
    double s_l = entropy_of(group_marginal(state, l));
    double s_r = entropy_of(group_marginal(state, r));
    return s_l + s_r - entropy(state);
}

double negativity(const DensityMatrix& state, const LabelGroup& left) {
    std::set<std::string> subset(left.begin(), left.end());
    Matrix pt = partial_transpose(state, subset);
    RealVector ev = eigvals_hermitian(pt);
    double neg = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0) neg -= ev(i);
    return neg;
}

const Matrix& pauli(int i) {
    static const Matrix sx = [] {
        Matrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }();
    static const Matrix sy = [] {
        Matrix m(2, 2);
        m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
        return m;
    }();
    static const Matrix sz = [] {
        Matrix m(2, 2);
        m << 1, 0, 0, -1;
        return m;
    }();
    switch (i) {
        case 1: return sx;
        case 2: return sy;
        case 3: return sz;
    }
    throw std::invalid_argument("pauli: index must be 1..3");
}

namespace {

Matrix kron2(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

void require_two_qubits(const DensityMatrix& state) {
    if (state.layout().size() != 2 || state.layout().factors()[0].dim != 2 || state.layout().factors()[1].dim != 2)
        throw std::invalid_argument("expected a two-qubit layout");
}

}  // namespace

CorrelationData correlation_data(const DensityMatrix& state) {
    require_two_qubits(state);
    const Matrix& rho = state.matrix();
    const Matrix id = Matrix::Identity(2, 2);
    CorrelationData data;
    for (int i = 1; i <= 3; ++i) {
        data.x(i - 1) = (rho * kron2(pauli(i), id)).trace().real();
        data.y(i - 1) = (rho * kron2(id, pauli(i))).trace().real();
        for (int j = 1; j <= 3; ++j) data.t(i - 1, j - 1) = (rho * kron2(pauli(i), pauli(j))).trace().real();
    }
    return data;
}

DensityMatrix reconstruct_two_qubit(const CorrelationData& data) {
    const Matrix id = Matrix::Identity(2, 2);
    Matrix m = kron2(id, id);
    for (int i = 1; i <= 3; ++i) {
        m += data.x(i - 1) * kron2(pauli(i), id);
        m += data.y(i - 1) * kron2(id, pauli(i));
        for (int j = 1; j <= 3; ++j) m += data.t(i - 1, j - 1) * kron2(pauli(i), pauli(j));
    }
    m *= 0.25;
    m = 0.5 * (m + m.adjoint().eval());
    return DensityMatrix(SubsystemLayout({{"a", 2}, {"b", 2}}), std::move(m));
}

double geometric_discord(const DensityMatrix& state) {
    CorrelationData d = correlation_data(state);
    Eigen::Matrix3d k = d.x * d.x.transpose() + d.t * d.t.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k);
    double kmax = es.eigenvalues().maxCoeff();
    double value = 0.25 * (d.x.squaredNorm() + d.t.squaredNorm() - kmax);
    return std::max(0.0, value);
}

double rsp_payoff(const DensityMatrix& state) {
    CorrelationData d = correlation_data(state);
    Eigen::Matrix3d k = d.t * d.t.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k);
    // Ascending order: drop the largest, keep the two smallest.
    return std::max(0.0, 0.25 * (es.eigenvalues()(0) + es.eigenvalues()(1)));
}

double classical_correlation(const DensityMatrix& state, const LabelGroup& measured, const Matrix& basis) {
    const SubsystemLayout& layout = state.layout();
    LabelGroup m_group = normalized(layout, measured);
    LabelGroup rest = complement_group(layout, m_group);
    if (m_group.empty() || rest.empty())
        throw std::invalid_argument("classical_correlation: cut must be proper and nonempty");
    const int dm = group_dim(layout, m_group);
    if (basis.rows() != dm || basis.cols() != dm)
        throw std::invalid_argument("classical_correlation: basis dimension mismatch");

    std::vector<std::string> order = m_group;
    order.insert(order.end(), rest.begin(), rest.end());
    DensityMatrix permuted = permute_factors(state, order);
    const int dr = layout.total_dim() / dm;
    const Matrix& rho = permuted.matrix();

    double s_rest = entropy_of(group_marginal(state, rest));
    double conditional = 0.0;
    for (int j = 0; j < dm; ++j) {
        Matrix block = Matrix::Zero(dr, dr);
        for (int m = 0; m < dm; ++m)
            for (int mp = 0; mp < dm; ++mp) {
                Complex coeff = std::conj(basis(m, j)) * basis(mp, j);
                if (coeff == Complex(0.0, 0.0)) continue;
                block += coeff * rho.block(m * dr, mp * dr, dr, dr);
            }
        double pj = block.trace().real();
        if (pj < 1e-14) continue;
        conditional += pj * entropy_of(block / pj);
    }
    return s_rest - conditional;
}

Matrix classical_candidate_basis(const DensityMatrix& state, const LabelGroup& group, bool* unresolved) {
    const SubsystemLayout& layout = state.layout();
    LabelGroup g = normalized(layout, group);
    LabelGroup rest = complement_group(layout, g);
    const int dg = group_dim(layout, g);

    Matrix marginal = group_marginal(state, g);
    auto [evals, basis] = eig_hermitian(marginal);

    // Clusters of (near-)degenerate eigenvalues, as [start, end) column ranges.
    std::vector<std::pair<int, int>> clusters;
    int start = 0;
    for (int i = 1; i <= dg; ++i) {
        if (i == dg || std::abs(evals(i) - evals(i - 1)) > 1e-8) {
            clusters.emplace_back(start, i);
            start = i;
        }
    }

    auto all_singleton = [&] {
        for (const auto& [s, e] : clusters)
            if (e - s > 1) return false;
        return true;
    };

    if (!all_singleton() && !rest.empty()) {
        // Conditioning pool: computational kets on the complement, the
        // complement marginal's eigenvectors, then a few fixed pseudo-random
        // directions for generic splitting.
        const int dr = group_dim(layout, rest);
        std::vector<Vector> pool;
        for (int i = 0; i < dr; ++i) {
            Vector v = Vector::Zero(dr);
            v(i) = 1.0;
            pool.push_back(v);
        }
        Matrix rest_marginal = group_marginal(state, rest);
        auto [rvals, rvecs] = eig_hermitian(rest_marginal);
        for (int i = 0; i < dr; ++i) pool.push_back(rvecs.col(i));
        RngStream rng(0xC1A551Cull);
        for (int i = 0; i < 8; ++i) {
            Vector v(dr);
            for (int j = 0; j < dr; ++j) v(j) = rng.complex_normal();
            pool.push_back(v / v.norm());
        }

        for (const auto& probe : pool) {
            if (all_singleton()) break;
            Matrix cond = conditional_block(state, rest, probe);
            // conditional_block works on the [rest..., group...] permutation,
            // so its output factor order matches `g`'s layout order.
            std::vector<std::pair<int, int>> next;
            for (const auto& [s, e] : clusters) {
                const int k = e - s;
                if (k == 1) {
                    next.emplace_back(s, e);
                    continue;
                }
                Matrix sub = basis.middleCols(s, k).adjoint() * cond * basis.middleCols(s, k);
                sub = 0.5 * (sub + sub.adjoint().eval());
                Eigen::SelfAdjointEigenSolver<Matrix> es(sub);
                basis.middleCols(s, k) = basis.middleCols(s, k) * es.eigenvectors();
                const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
                int sub_start = s;
                for (int i = 1; i <= k; ++i) {
                    if (i == k || std::abs(es.eigenvalues()(i) - es.eigenvalues()(i - 1)) > 1e-9 * scale) {
                        next.emplace_back(sub_start, s + i);
                        sub_start = s + i;
                    }
                }
            }
            clusters = std::move(next);
        }
    }

    if (unresolved) *unresolved = !all_singleton();
    return basis;
}

ClassicalityReport is_classical(const DensityMatrix& state, const LabelGroup& left,
                                const std::optional<std::pair<Matrix, Matrix>>& hint) {
    const SubsystemLayout& layout = state.layout();
    LabelGroup l = normalized(layout, left);
    LabelGroup r = complement_group(layout, l);
    if (l.empty() || r.empty()) throw std::invalid_argument("is_classical: cut must be proper and nonempty");

    bool unresolved_l = false, unresolved_r = false;
    std::vector<std::pair<Matrix, Matrix>> candidates;
    candidates.emplace_back(classical_candidate_basis(state, l, &unresolved_l),
                            classical_candidate_basis(state, r, &unresolved_r));
    if (hint) candidates.push_back(*hint);

    ClassicalityReport report;
    report.undecided = unresolved_l || unresolved_r;
    report.residual = 1e300;
    for (const auto& [ul, ur] : candidates) {
        DensityMatrix dephased = dephase_product(state, {l, r}, {ul, ur});
        double residual = (dephased.matrix() - state.matrix()).cwiseAbs().maxCoeff();
        if (residual < report.residual) {
            report.residual = residual;
            report.basis_left = ul;
            report.basis_right = ur;
        }
    }
    report.classical = report.residual <= 1e-10;
    if (report.classical) report.undecided = false;
    return report;
}

MeasureResult discord_one_sided(const DensityMatrix& state, const LabelGroup& measured,
                                const DiscordBudget& budget) {
    const SubsystemLayout& layout = state.layout();
    LabelGroup m_group = normalized(layout, measured);
    LabelGroup rest = complement_group(layout, m_group);
    if (m_group.empty() || rest.empty())
        throw std::invalid_argument("discord_one_sided: cut must be proper and nonempty");
    const int dm = group_dim(layout, m_group);
    if (dm > budget.max_measured_dim && !budget.structural_only)
        throw std::invalid_argument("discord_one_sided: measured dimension above the optimizer cap");

    const double info = mutual_information(state, m_group);

    MeasureResult result;
    double best_j = -1e300;

    auto consider = [&](const Matrix& basis) {
        double j = classical_correlation(state, m_group, basis);
        if (j > best_j) best_j = j;
    };

    consider(Matrix::Identity(dm, dm));
    Matrix marginal = group_marginal(state, m_group);
    consider(eig_hermitian(marginal).second);
    consider(classical_candidate_basis(state, m_group));

    if (!budget.structural_only && best_j < info - 1e-12) {
        const int n = unitary_param_count(dm);
        auto objective = [&](const Eigen::VectorXd& p) {
            Matrix u = unitary_from_params(p.data(), dm);
            return -classical_correlation(state, m_group, u);
        };
        OptBudget opt = budget.opt;
        opt.target = -info + 1e-12;  // discord is nonnegative, so J cannot exceed I
        std::vector<Eigen::VectorXd> starts = {Eigen::VectorXd::Zero(n),
                                               params_from_unitary(eig_hermitian(marginal).second)};
        OptResult r = multistart_minimize(objective, n, starts, opt);
        result.restarts = r.restarts_used;
        result.evals = r.evals;
        result.converged = r.converged;
        if (-r.value > best_j) best_j = -r.value;
    } else if (budget.structural_only) {
        result.optimizer_skipped = true;
    }

    result.best_objective = best_j;
    result.value = std::max(0.0, info - best_j);
    return result;
}

}  // namespace classext
