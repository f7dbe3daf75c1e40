#include "classext/states.hpp"

#include <cmath>
#include <stdexcept>

namespace classext {

Vector bloch_ket(const BlochAngles& angles) {
    if (angles.theta < 0.0 || angles.theta > M_PI + 1e-12)
        throw std::invalid_argument("bloch: theta outside [0, pi]");
    if (angles.phi < 0.0 || angles.phi >= 2.0 * M_PI)
        throw std::invalid_argument("bloch: phi outside [0, 2*pi)");
    Vector v(2);
    v(0) = std::cos(0.5 * angles.theta);
    v(1) = std::exp(Complex(0.0, angles.phi)) * std::sin(0.5 * angles.theta);
    return v;
}

DensityMatrix ket_state(const Vector& v, const std::string& label) {
    Vector n = v / v.norm();
    Matrix m = n * n.adjoint();
    return DensityMatrix(SubsystemLayout::single(label, static_cast<int>(v.size())), std::move(m));
}

DensityMatrix bloch_qubit(const BlochAngles& angles, const std::string& label) {
    return ket_state(bloch_ket(angles), label);
}

DensityMatrix maximally_mixed(const SubsystemLayout& layout) {
    int d = layout.total_dim();
    return DensityMatrix(layout, Matrix::Identity(d, d) / static_cast<double>(d));
}

SeparableDecomposition::SeparableDecomposition(std::vector<SeparableTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("decomposition: no terms");
    double sum = 0.0;
    for (const auto& t : terms_) {
        if (t.weight <= 0.0) throw std::invalid_argument("decomposition: weights must be positive");
        sum += t.weight;
        if (t.left.layout() != terms_[0].left.layout() || t.right.layout() != terms_[0].right.layout())
            throw std::invalid_argument("decomposition: mismatched factor layouts");
    }
    if (std::abs(sum - 1.0) > tol::trace) throw std::invalid_argument("decomposition: weights must sum to 1");
}

DensityMatrix assemble_separable(const SeparableDecomposition& decomp) {
    const auto& terms = decomp.terms();
    SubsystemLayout layout = decomp.left_layout().concat(decomp.right_layout());
    const int d = layout.total_dim();
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& t : terms) {
        DensityMatrix prod = kron_compose({t.left, t.right});
        acc += t.weight * prod.matrix();
    }
    return DensityMatrix(layout, std::move(acc));
}

namespace {

DensityMatrix basis_projector(int index, int dim, const std::string& label) {
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return ket_state(v, label);
}

// tr(AB) vanishes for PSD matrices exactly when their ranges are orthogonal.
void check_flag_orthogonality(const std::vector<SeparableTerm>& terms, const std::vector<int>& flags,
                              bool left_side) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            if (flags[i] != flags[j]) continue;
            const Matrix& a = left_side ? terms[i].left.matrix() : terms[i].right.matrix();
            const Matrix& b = left_side ? terms[j].left.matrix() : terms[j].right.matrix();
            double overlap = std::abs((a * b).trace());
            if (overlap > 1e-10)
                throw std::runtime_error("li_luo_extend: construction infeasible, terms " + std::to_string(i) +
                                         " and " + std::to_string(j) + " share a flag but overlap on the " +
                                         (left_side ? std::string("left") : std::string("right")) + " side");
        }
    }
}

}  // namespace

DensityMatrix li_luo_extend(const SeparableDecomposition& decomp, const FlagSplit& split,
                            const std::string& flag_left_label, const std::string& flag_right_label) {
    const auto& terms = decomp.terms();
    const int n = static_cast<int>(terms.size());

    int dim_l = split.dim_left > 0 ? split.dim_left : n;
    int dim_r = split.dim_right > 0 ? split.dim_right : n;
    std::vector<int> flags_l = split.flags_left;
    std::vector<int> flags_r = split.flags_right;
    if (flags_l.empty()) {
        flags_l.resize(n);
        for (int k = 0; k < n; ++k) flags_l[k] = k;
    }
    if (flags_r.empty()) {
        flags_r.resize(n);
        for (int k = 0; k < n; ++k) flags_r[k] = k;
    }
    if (static_cast<int>(flags_l.size()) != n || static_cast<int>(flags_r.size()) != n)
        throw std::invalid_argument("li_luo_extend: one flag index per term required");
    for (int k = 0; k < n; ++k) {
        if (flags_l[k] < 0 || flags_l[k] >= dim_l || flags_r[k] < 0 || flags_r[k] >= dim_r)
            throw std::invalid_argument("li_luo_extend: flag index out of range");
    }
    check_flag_orthogonality(terms, flags_l, true);
    check_flag_orthogonality(terms, flags_r, false);

    SubsystemLayout layout = decomp.left_layout()
                                 .concat(SubsystemLayout::single(flag_left_label, dim_l))
                                 .concat(decomp.right_layout())
                                 .concat(SubsystemLayout::single(flag_right_label, dim_r));
    Matrix acc = Matrix::Zero(layout.total_dim(), layout.total_dim());
    for (int k = 0; k < n; ++k) {
        DensityMatrix term = kron_compose({terms[k].left, basis_projector(flags_l[k], dim_l, flag_left_label),
                                           terms[k].right, basis_projector(flags_r[k], dim_r, flag_right_label)});
        acc += terms[k].weight * term.matrix();
    }
    return DensityMatrix(layout, std::move(acc));
}

DensityMatrix build_rho_rsp() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = 0.25;
    m(0, 3) = m(3, 0) = 0.25;
    return DensityMatrix(SubsystemLayout({{"a", 2}, {"b", 2}}), std::move(m));
}

SeparableDecomposition rho_rsp_trine_decomposition() {
    // Equatorial trine on the left, conjugate trine on the right. This pins
    // the local frames so the assembled state reproduces build_rho_rsp()
    // entry for entry, with no residual local-unitary freedom.
    std::vector<SeparableTerm> terms;
    for (int k = 0; k < 3; ++k) {
        double phi = M_PI / 2.0 + 2.0 * M_PI * k / 3.0;
        double phi_a = std::fmod(phi, 2.0 * M_PI);
        double phi_b = std::fmod(2.0 * M_PI - phi_a, 2.0 * M_PI);
        terms.push_back({1.0 / 3.0, bloch_qubit({M_PI / 2.0, phi_a}, "a"), bloch_qubit({M_PI / 2.0, phi_b}, "b")});
    }
    return SeparableDecomposition(std::move(terms));
}

SeparableDecomposition rho_rsp_xy_decomposition() {
    const double eq = M_PI / 2.0;
    auto px = BlochAngles{eq, 0.0};
    auto mx = BlochAngles{eq, M_PI};
    auto py = BlochAngles{eq, M_PI / 2.0};
    auto my = BlochAngles{eq, 3.0 * M_PI / 2.0};
    std::vector<SeparableTerm> terms;
    terms.push_back({0.25, bloch_qubit(px, "a"), bloch_qubit(px, "b")});
    terms.push_back({0.25, bloch_qubit(mx, "a"), bloch_qubit(mx, "b")});
    terms.push_back({0.25, bloch_qubit(py, "a"), bloch_qubit(my, "b")});
    terms.push_back({0.25, bloch_qubit(my, "a"), bloch_qubit(py, "b")});
    return SeparableDecomposition(std::move(terms));
}

DensityMatrix build_rsp_extension(RspExtension variant) {
    switch (variant) {
        case RspExtension::Six:
            return li_luo_extend(rho_rsp_trine_decomposition());
        case RspExtension::Eight:
            return li_luo_extend(rho_rsp_xy_decomposition());
        case RspExtension::Opt:
            // |+x> is orthogonal to |-x> and |+y> to |-y>, so the x-pair can
            // share one flag value and the y-pair the other; single-qubit
            // ancillas suffice on both sides.
            return li_luo_extend(rho_rsp_xy_decomposition(), FlagSplit::factored(2, 2, {0, 0, 1, 1}, {0, 0, 1, 1}));
    }
    throw std::invalid_argument("build_rsp_extension: unknown variant");
}

DensityMatrix build_classical(const ClassicalStateSpec& spec) {
    const int n = static_cast<int>(spec.probs.size());
    if (n == 0 || spec.basis_left.size() != spec.probs.size() || spec.basis_right.size() != spec.probs.size())
        throw std::invalid_argument("build_classical: probs and bases must have equal length");
    double sum = 0.0;
    for (double p : spec.probs) {
        if (p < 0.0) throw std::invalid_argument("build_classical: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol::trace) throw std::invalid_argument("build_classical: probabilities must sum to 1");
    const int da = static_cast<int>(spec.basis_left[0].size());
    const int db = static_cast<int>(spec.basis_right[0].size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double gram_a = std::abs(spec.basis_left[i].dot(spec.basis_left[j])) - (i == j ? 1.0 : 0.0);
            double gram_b = std::abs(spec.basis_right[i].dot(spec.basis_right[j])) - (i == j ? 1.0 : 0.0);
            if (std::abs(gram_a) > 1e-10 || std::abs(gram_b) > 1e-10)
                throw std::invalid_argument("build_classical: bases not orthonormal");
        }
    }
    SubsystemLayout layout({{spec.left_label, da}, {spec.right_label, db}});
    Matrix acc = Matrix::Zero(da * db, da * db);
    for (int k = 0; k < n; ++k) {
        Matrix pa = spec.basis_left[k] * spec.basis_left[k].adjoint();
        Matrix pb = spec.basis_right[k] * spec.basis_right[k].adjoint();
        for (int r = 0; r < da; ++r)
            for (int c = 0; c < da; ++c)
                acc.block(r * db, c * db, db, db) += spec.probs[k] * pa(r, c) * pb;
    }
    acc = 0.5 * (acc + acc.adjoint().eval());
    return DensityMatrix(layout, std::move(acc));
}

Matrix random_unitary(int dim, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("random_unitary: dim must be >= 1");
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        Complex diag = r(i, i);
        Complex phase = std::abs(diag) > 0.0 ? diag / std::abs(diag) : Complex(1.0, 0.0);
        q.col(i) *= phase;
    }
    return q;
}

DensityMatrix random_mixed_state(const SubsystemLayout& layout, RngStream& rng) {
    const int d = layout.total_dim();
    std::vector<double> spectrum = rng.simplex(d);
    Matrix u = random_unitary(d, rng);
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m += spectrum[i] * (u.col(i) * u.col(i).adjoint());
    m = 0.5 * (m + m.adjoint().eval());
    return DensityMatrix(layout, std::move(m));
}

SeparableDecomposition random_separable(const SubsystemLayout& left, const SubsystemLayout& right, int n_terms,
                                        RngStream& rng) {
    if (n_terms < 1) throw std::invalid_argument("random_separable: n_terms must be >= 1");
    std::vector<double> weights = rng.simplex(n_terms);
    std::vector<SeparableTerm> terms;
    terms.reserve(n_terms);
    for (int k = 0; k < n_terms; ++k) {
        terms.push_back({weights[k], random_mixed_state(left, rng), random_mixed_state(right, rng)});
    }
    return SeparableDecomposition(std::move(terms));
}

}  // namespace classext
