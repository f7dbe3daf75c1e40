#include "classext/density.hpp"

#include <cmath>
#include <stdexcept>

namespace classext {

double hermiticity_residual(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(SubsystemLayout layout, Matrix m)
    : layout_(std::move(layout)), m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("density: matrix not square");
    if (m_.rows() != layout_.total_dim())
        throw std::invalid_argument("density: matrix side does not match layout dimension");
    if (layout_.total_dim() > kDefaultDimCap)
        throw std::invalid_argument("density: dimension exceeds configured cap");
    if (hermiticity_residual(m_) > tol::hermiticity)
        throw std::invalid_argument("density: matrix not Hermitian");
    if (std::abs(m_.trace().real() - 1.0) > tol::trace || std::abs(m_.trace().imag()) > tol::trace)
        throw std::invalid_argument("density: trace is not 1");
}

std::string ValidationReport::failure() const {
    if (!hermitian) return "hermiticity";
    if (!unit_trace) return "trace";
    if (!psd) return "psd";
    return "";
}

ValidationReport validate_density(const Matrix& m) {
    ValidationReport r;
    r.hermiticity_residual = hermiticity_residual(m);
    r.trace_residual = std::abs(m.trace() - Complex(1.0, 0.0));
    r.hermitian = r.hermiticity_residual <= tol::hermiticity;
    r.unit_trace = r.trace_residual <= tol::trace;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.psd = r.min_eigenvalue >= tol::psd_floor;
    return r;
}

ValidationReport validate_density(const DensityMatrix& state) { return validate_density(state.matrix()); }

DensityMatrix kron_compose(const std::vector<DensityMatrix>& factors) {
    if (factors.empty()) throw std::invalid_argument("kron_compose: empty factor list");
    SubsystemLayout layout = factors[0].layout();
    Matrix m = factors[0].matrix();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        layout = layout.concat(factors[i].layout());
        const Matrix& b = factors[i].matrix();
        Matrix out(m.rows() * b.rows(), m.cols() * b.cols());
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = m(r, c) * b;
        m = std::move(out);
    }
    return DensityMatrix(layout, std::move(m));
}

namespace {

void check_labels(const SubsystemLayout& layout, const std::set<std::string>& labels) {
    for (const auto& l : labels)
        if (!layout.contains(l)) throw std::invalid_argument("unknown label '" + l + "'");
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& state, const std::set<std::string>& discard) {
    const SubsystemLayout& layout = state.layout();
    check_labels(layout, discard);
    if (discard.empty()) return state;
    if (discard.size() == layout.size())
        throw std::invalid_argument("partial_trace: cannot discard every factor");

    std::vector<Factor> kept, dropped;
    std::vector<std::size_t> kept_pos, dropped_pos;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (discard.count(layout.factors()[i].label)) {
            dropped.push_back(layout.factors()[i]);
            dropped_pos.push_back(i);
        } else {
            kept.push_back(layout.factors()[i]);
            kept_pos.push_back(i);
        }
    }
    SubsystemLayout out_layout((std::vector<Factor>(kept)));
    SubsystemLayout drop_layout((std::vector<Factor>(dropped)));
    const int dk = out_layout.total_dim();
    const int dd = drop_layout.total_dim();

    std::vector<int> digits(layout.size(), 0), kd, dd_digits;
    Matrix out = Matrix::Zero(dk, dk);
    const Matrix& m = state.matrix();
    for (int r = 0; r < dk; ++r) {
        for (int c = 0; c < dk; ++c) {
            std::vector<int> rk, ck;
            out_layout.decode(r, rk);
            out_layout.decode(c, ck);
            Complex acc(0.0, 0.0);
            for (int t = 0; t < dd; ++t) {
                std::vector<int> td;
                drop_layout.decode(t, td);
                std::vector<int> rfull(layout.size()), cfull(layout.size());
                for (std::size_t i = 0; i < kept_pos.size(); ++i) {
                    rfull[kept_pos[i]] = rk[i];
                    cfull[kept_pos[i]] = ck[i];
                }
                for (std::size_t i = 0; i < dropped_pos.size(); ++i) {
                    rfull[dropped_pos[i]] = td[i];
                    cfull[dropped_pos[i]] = td[i];
                }
                acc += m(layout.encode(rfull), layout.encode(cfull));
            }
            out(r, c) = acc;
        }
    }
    // Symmetrize away the last few ulps so downstream Hermiticity checks
    // stay within tolerance after long reduction chains.
    out = 0.5 * (out + out.adjoint().eval());
    return DensityMatrix(out_layout, std::move(out));
}

Matrix partial_transpose(const DensityMatrix& state, const std::set<std::string>& subset) {
    const SubsystemLayout& layout = state.layout();
    check_labels(layout, subset);
    if (subset.empty() || subset.size() == layout.size())
        throw std::invalid_argument("partial_transpose: subset must be proper and nonempty");

    std::vector<bool> transposed(layout.size(), false);
    for (std::size_t i = 0; i < layout.size(); ++i)
        transposed[i] = subset.count(layout.factors()[i].label) > 0;

    const int d = layout.total_dim();
    const Matrix& m = state.matrix();
    Matrix out(d, d);
    std::vector<int> rd, cd;
    for (int r = 0; r < d; ++r) {
        layout.decode(r, rd);
        for (int c = 0; c < d; ++c) {
            layout.decode(c, cd);
            std::vector<int> rs = rd, cs = cd;
            for (std::size_t i = 0; i < layout.size(); ++i)
                if (transposed[i]) std::swap(rs[i], cs[i]);
            out(layout.encode(rs), layout.encode(cs)) = m(r, c);
        }
    }
    return out;
}

DensityMatrix permute_factors(const DensityMatrix& state, const std::vector<std::string>& order) {
    const SubsystemLayout& layout = state.layout();
    if (order.size() != layout.size())
        throw std::invalid_argument("permute_factors: order must list every label exactly once");
    std::vector<std::size_t> src_pos;
    std::vector<Factor> new_factors;
    for (const auto& label : order) {
        std::size_t i = layout.index_of(label);
        for (std::size_t s : src_pos)
            if (s == i) throw std::invalid_argument("permute_factors: repeated label '" + label + "'");
        src_pos.push_back(i);
        new_factors.push_back(layout.factors()[i]);
    }
    SubsystemLayout out_layout(std::move(new_factors));

    const int d = layout.total_dim();
    const Matrix& m = state.matrix();
    Matrix out(d, d);
    std::vector<int> rd, cd, rn(layout.size()), cn(layout.size());
    for (int r = 0; r < d; ++r) {
        layout.decode(r, rd);
        for (int c = 0; c < d; ++c) {
            layout.decode(c, cd);
            for (std::size_t i = 0; i < src_pos.size(); ++i) {
                rn[i] = rd[src_pos[i]];
                cn[i] = cd[src_pos[i]];
            }
            out(out_layout.encode(rn), out_layout.encode(cn)) = m(r, c);
        }
    }
    return DensityMatrix(out_layout, std::move(out));
}

DensityMatrix group_bipartite(const DensityMatrix& state, const std::set<std::string>& left,
                              const std::string& left_label, const std::string& right_label) {
    const SubsystemLayout& layout = state.layout();
    check_labels(layout, left);
    if (left.empty() || left.size() == layout.size())
        throw std::invalid_argument("group_bipartite: cut must be proper and nonempty");
    std::vector<std::string> order;
    int dl = 1, dr = 1;
    for (const auto& f : layout.factors())
        if (left.count(f.label)) {
            order.push_back(f.label);
            dl *= f.dim;
        }
    for (const auto& f : layout.factors())
        if (!left.count(f.label)) {
            order.push_back(f.label);
            dr *= f.dim;
        }
    DensityMatrix permuted = permute_factors(state, order);
    return DensityMatrix(SubsystemLayout({{left_label, dl}, {right_label, dr}}), permuted.matrix());
}

std::pair<RealVector, Matrix> eig_hermitian(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: matrix not square");
    if (hermiticity_residual(m) > tol::eig_hermiticity)
        throw std::invalid_argument("eig_hermitian: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    return {es.eigenvalues(), es.eigenvectors()};
}

RealVector eigvals_hermitian(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: matrix not square");
    if (hermiticity_residual(m) > tol::eig_hermiticity)
        throw std::invalid_argument("eig_hermitian: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double distance(const DensityMatrix& x, const DensityMatrix& y, Metric metric) {
    if (x.layout() != y.layout()) throw std::invalid_argument("distance: layout mismatch");
    Matrix diff = x.matrix() - y.matrix();
    switch (metric) {
        case Metric::HilbertSchmidt:
            return diff.norm();
        case Metric::Trace: {
            RealVector ev = eigvals_hermitian(diff);
            return 0.5 * ev.cwiseAbs().sum();
        }
    }
    throw std::invalid_argument("distance: unknown metric");
}

}  // namespace classext
