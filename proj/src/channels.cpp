#include "classext/channels.hpp"

#include <set>
#include <stdexcept>

namespace classext {

namespace {

// Permutation that puts the groups' factors first, in group order, followed
// by any remaining factors.
std::vector<std::string> grouped_order(const SubsystemLayout& layout, const std::vector<LabelGroup>& groups) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& g : groups)
        for (const auto& label : g) {
            if (!seen.insert(label).second)
                throw std::invalid_argument("groups overlap on label '" + label + "'");
            order.push_back(label);
        }
    for (const auto& f : layout.factors())
        if (!seen.count(f.label)) order.push_back(f.label);
    return order;
}

}  // namespace

int group_dim(const SubsystemLayout& layout, const LabelGroup& group) {
    int d = 1;
    for (const auto& label : group) d *= layout.dim_of(label);
    return d;
}

DensityMatrix dephase_group(const DensityMatrix& state, const LabelGroup& group, const Matrix& basis) {
    const SubsystemLayout& layout = state.layout();
    const int dg = group_dim(layout, group);
    if (basis.rows() != dg || basis.cols() != dg)
        throw std::invalid_argument("dephase_group: basis dimension mismatch");

    std::vector<std::string> order = grouped_order(layout, {group});
    DensityMatrix permuted = permute_factors(state, order);
    const int d = layout.total_dim();
    const int rest = d / dg;

    Matrix w = Matrix::Identity(d, d);
    for (int r = 0; r < dg; ++r)
        for (int c = 0; c < dg; ++c)
            w.block(r * rest, c * rest, rest, rest) = basis(r, c) * Matrix::Identity(rest, rest);

    Matrix rotated = w.adjoint() * permuted.matrix() * w;
    for (int r = 0; r < dg; ++r)
        for (int c = 0; c < dg; ++c)
            if (r != c) rotated.block(r * rest, c * rest, rest, rest).setZero();
    Matrix back = w * rotated * w.adjoint();
    back = 0.5 * (back + back.adjoint().eval());

    DensityMatrix dephased(permuted.layout(), std::move(back));
    return permute_factors(dephased, layout.labels());
}

DensityMatrix dephase_product(const DensityMatrix& state, const std::vector<LabelGroup>& groups,
                              const std::vector<Matrix>& bases) {
    const SubsystemLayout& layout = state.layout();
    if (groups.size() != bases.size()) throw std::invalid_argument("dephase_product: one basis per group required");
    std::vector<std::string> order = grouped_order(layout, groups);
    if (order.size() != layout.size())
        throw std::invalid_argument("dephase_product: groups must cover every factor");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        int dg = group_dim(layout, groups[g]);
        if (bases[g].rows() != dg || bases[g].cols() != dg)
            throw std::invalid_argument("dephase_product: basis dimension mismatch");
    }

    DensityMatrix permuted = permute_factors(state, order);
    Matrix w = bases[0];
    for (std::size_t g = 1; g < bases.size(); ++g) {
        const Matrix& b = bases[g];
        Matrix out(w.rows() * b.rows(), w.cols() * b.cols());
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = w(r, c) * b;
        w = std::move(out);
    }

    Matrix rotated = w.adjoint() * permuted.matrix() * w;
    Matrix diag = Matrix::Zero(rotated.rows(), rotated.cols());
    for (Eigen::Index i = 0; i < rotated.rows(); ++i) diag(i, i) = rotated(i, i).real();
    Matrix back = w * diag * w.adjoint();
    back = 0.5 * (back + back.adjoint().eval());

    DensityMatrix dephased(permuted.layout(), std::move(back));
    return permute_factors(dephased, layout.labels());
}

Matrix conditional_block(const DensityMatrix& state, const LabelGroup& group, const Vector& u) {
    const SubsystemLayout& layout = state.layout();
    const int dg = group_dim(layout, group);
    if (u.size() != dg) throw std::invalid_argument("conditional_block: vector dimension mismatch");
    std::vector<std::string> order = grouped_order(layout, {group});
    DensityMatrix permuted = permute_factors(state, order);
    const int rest = layout.total_dim() / dg;
    Matrix out = Matrix::Zero(rest, rest);
    const Matrix& m = permuted.matrix();
    for (int r = 0; r < dg; ++r)
        for (int c = 0; c < dg; ++c) {
            Complex coeff = std::conj(u(r)) * u(c);
            if (std::abs(coeff) == 0.0) continue;
            out += coeff * m.block(r * rest, c * rest, rest, rest);
        }
    return out;
}

Matrix group_marginal(const DensityMatrix& state, const LabelGroup& group) {
    const SubsystemLayout& layout = state.layout();
    std::set<std::string> discard;
    for (const auto& f : layout.factors()) {
        bool in_group = false;
        for (const auto& label : group) in_group = in_group || label == f.label;
        if (!in_group) discard.insert(f.label);
    }
    if (discard.empty()) {
        DensityMatrix permuted = permute_factors(state, group);
        return permuted.matrix();
    }
    DensityMatrix traced = partial_trace(state, discard);
    DensityMatrix permuted = permute_factors(traced, group);
    return permuted.matrix();
}

}  // namespace classext
