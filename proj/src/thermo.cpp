#include "classext/thermo.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "classext/optim.hpp"

namespace classext {

double extractable_work(const DensityMatrix& state) {
    const double d = static_cast<double>(state.dim());
    RealVector spectrum = eigvals_hermitian(state.matrix());
    double via_entropy = std::log2(d) - entropy_of_spectrum(spectrum);
    // Relative entropy to the maximally mixed state, accumulated directly.
    double via_relative = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        double lambda = spectrum(i);
        if (lambda > 1e-15) via_relative += lambda * std::log2(lambda * d);
    }
    if (std::abs(via_entropy - via_relative) > 1e-10)
        throw std::logic_error("extractable_work: entropy and relative-entropy routes disagree");
    return via_entropy;
}

double classical_work(const DensityMatrix& state, const LabelGroup& group, const Matrix& basis) {
    DensityMatrix dephased = dephase_group(state, group, basis);
    return std::log2(static_cast<double>(state.dim())) - entropy(dephased);
}

WorkLedger work_ledger(const DensityMatrix& extension) {
    const SubsystemLayout& layout = extension.layout();
    if (layout.size() != 4) throw std::invalid_argument("work_ledger: four-factor layout required");
    const auto& f = layout.factors();
    const std::string a = f[0].label, abar = f[1].label, b = f[2].label, bbar = f[3].label;

    WorkLedger ledger;
    ledger.w_total = extractable_work(extension);
    DensityMatrix reduced = partial_trace(extension, {abar, bbar});
    DensityMatrix aux = partial_trace(extension, {a, b});
    ledger.w_reduced = extractable_work(reduced);
    ledger.w_aux = extractable_work(aux);
    ledger.mi = mutual_information(extension, {a, b});
    ledger.identity_residual = std::abs(ledger.w_total - ledger.w_reduced - ledger.w_aux - ledger.mi);
    ledger.additivity_ok = ledger.identity_residual <= 1e-10;

    ClassicalityReport cls = is_classical(extension, {a, abar});
    ledger.classical = cls.classical;
    Matrix basis = cls.classical ? cls.basis_left : eig_hermitian(group_marginal(extension, {a, abar})).second;
    ledger.w_classical = classical_work(extension, {a, abar}, basis);
    ledger.local_bound_ok = ledger.w_classical >= ledger.w_reduced + ledger.w_aux - 1e-10;
    return ledger;
}

DensityMatrix classical_from_bases(const Matrix& basis_left, const Matrix& basis_right,
                                   const std::vector<double>& joint_probs, int dim_left, int dim_right) {
    if (basis_left.rows() != dim_left || basis_right.rows() != dim_right)
        throw std::invalid_argument("classical_from_bases: basis dimension mismatch");
    if (static_cast<int>(joint_probs.size()) != dim_left * dim_right)
        throw std::invalid_argument("classical_from_bases: need one probability per basis pair");
    const int d = dim_left * dim_right;
    Matrix acc = Matrix::Zero(d, d);
    for (int i = 0; i < dim_left; ++i) {
        Matrix pi = basis_left.col(i) * basis_left.col(i).adjoint();
        for (int j = 0; j < dim_right; ++j) {
            double q = joint_probs[static_cast<std::size_t>(i) * dim_right + j];
            if (q <= 0.0) continue;
            Matrix pj = basis_right.col(j) * basis_right.col(j).adjoint();
            for (int r = 0; r < dim_left; ++r)
                for (int c = 0; c < dim_left; ++c)
                    acc.block(r * dim_right, c * dim_right, dim_right, dim_right) += q * pi(r, c) * pj;
        }
    }
    acc = 0.5 * (acc + acc.adjoint().eval());
    SubsystemLayout layout({{"a", 2}, {"abar", dim_left / 2}, {"b", 2}, {"bbar", dim_right / 2}});
    return DensityMatrix(layout, std::move(acc));
}

namespace {

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int rho = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        double t = (1.0 - cum) / static_cast<double>(j + 1);
        if (u[j] + t > 0.0) {
            rho = static_cast<int>(j + 1);
            tau = t;
        }
    }
    (void)rho;
    for (auto& x : v) x = std::max(0.0, x + tau);
    return v;
}

// Exact inner solve: the best probability table for fixed bases, by
// projected gradient on the convex simplex-constrained least squares.
std::vector<double> best_joint_probs(const std::vector<Matrix>& terms, const Matrix& target,
                                     std::vector<double> q) {
    const int n = static_cast<int>(terms.size());
    Eigen::MatrixXd gram(n, n);
    Eigen::VectorXd cross(n);
    for (int i = 0; i < n; ++i) {
        cross(i) = (terms[i].conjugate().cwiseProduct(target)).sum().real();
        for (int j = i; j < n; ++j) {
            gram(i, j) = gram(j, i) = (terms[i].conjugate().cwiseProduct(terms[j])).sum().real();
        }
    }
    double lipschitz = std::max(1e-12, gram.trace());
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = q[i];
    for (int iter = 0; iter < 500; ++iter) {
        Eigen::VectorXd grad = gram * x - cross;
        Eigen::VectorXd next = x - grad / lipschitz;
        std::vector<double> proj(next.data(), next.data() + n);
        proj = project_simplex(std::move(proj));
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            shift = std::max(shift, std::abs(proj[i] - x(i)));
            x(i) = proj[i];
        }
        if (shift < 1e-15) break;
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = x(i);
    return out;
}

Matrix complete_to_unitary(const std::vector<Vector>& columns, int dim) {
    Matrix u(dim, dim);
    int filled = 0;
    for (const auto& v : columns) {
        if (static_cast<int>(v.size()) != dim)
            throw std::invalid_argument("complete_to_unitary: vector dimension mismatch");
        u.col(filled++) = v / v.norm();
    }
    for (int k = 0; k < dim && filled < dim; ++k) {
        Vector cand = Vector::Zero(dim);
        cand(k) = 1.0;
        for (int i = 0; i < filled; ++i) cand -= u.col(i) * (u.col(i).dot(cand));
        double n = cand.norm();
        if (n > 1e-6) u.col(filled++) = cand / n;
    }
    if (filled != dim) throw std::runtime_error("complete_to_unitary: could not complete the basis");
    return u;
}

Eigen::VectorXd pack_start(const Matrix& ua, const Matrix& ub, const std::vector<double>& q) {
    const int da = static_cast<int>(ua.rows()), db = static_cast<int>(ub.rows());
    Eigen::VectorXd p(unitary_param_count(da) + unitary_param_count(db) + da * db);
    p.segment(0, unitary_param_count(da)) = params_from_unitary(ua);
    p.segment(unitary_param_count(da), unitary_param_count(db)) = params_from_unitary(ub);
    for (int i = 0; i < da * db; ++i)
        p(unitary_param_count(da) + unitary_param_count(db) + i) = std::log(std::max(q[i], 1e-18));
    return p;
}

}  // namespace

MinExtReport search_min_extension(const DensityMatrix& target, const std::vector<std::pair<int, int>>& dims,
                                  const MinExtBudget& budget,
                                  const std::optional<ClassicalStateSpec>& seed_spec) {
    const SubsystemLayout& tlayout = target.layout();
    if (tlayout.size() != 2 || tlayout.factors()[0].dim != 2 || tlayout.factors()[1].dim != 2)
        throw std::invalid_argument("search_min_extension: target must be a two-qubit state");

    MinExtReport report;
    for (const auto& [da, db] : dims) {
        if (da % 2 != 0 || db % 2 != 0 || da < 2 || db < 2)
            throw std::invalid_argument("search_min_extension: candidate dimensions must be even and >= 2");
        const int n_ua = unitary_param_count(da), n_ub = unitary_param_count(db);
        const int n_params = n_ua + n_ub + da * db;
        const int fa = da / 2, fb = db / 2;

        // The objective needs only the flag-traced reduction, which factors
        // through the 2x2 single-side reductions of the basis projectors.
        auto side_reductions = [](const Matrix& u, int flag_dim) {
            std::vector<Matrix> out(u.cols());
            for (Eigen::Index i = 0; i < u.cols(); ++i) {
                Matrix m(2, flag_dim);
                for (int s = 0; s < 2; ++s)
                    for (int g = 0; g < flag_dim; ++g) m(s, g) = u(s * flag_dim + g, i);
                out[i] = m * m.adjoint();
            }
            return out;
        };
        auto reduction_distance = [&](const std::vector<Matrix>& ra, const std::vector<Matrix>& rb,
                                      const std::vector<double>& q) {
            Matrix red = Matrix::Zero(4, 4);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < db; ++j) {
                    double w = q[static_cast<std::size_t>(i) * db + j];
                    if (w <= 0.0) continue;
                    for (int r1 = 0; r1 < 2; ++r1)
                        for (int c1 = 0; c1 < 2; ++c1)
                            red.block(r1 * 2, c1 * 2, 2, 2) += w * ra[i](r1, c1) * rb[j];
                }
            return (red - target.matrix()).norm();
        };
        auto joint_reductions = [&](const std::vector<Matrix>& ra, const std::vector<Matrix>& rb) {
            std::vector<Matrix> out(static_cast<std::size_t>(da) * db);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < db; ++j) {
                    Matrix k(4, 4);
                    for (int r1 = 0; r1 < 2; ++r1)
                        for (int c1 = 0; c1 < 2; ++c1) k.block(r1 * 2, c1 * 2, 2, 2) = ra[i](r1, c1) * rb[j];
                    out[static_cast<std::size_t>(i) * db + j] = std::move(k);
                }
            return out;
        };
        auto objective = [&, da = da, db = db](const Eigen::VectorXd& p) {
            Matrix ua = unitary_from_params(p.data(), da);
            Matrix ub = unitary_from_params(p.data() + n_ua, db);
            std::vector<double> q = softmax(p.data() + n_ua + n_ub, da * db);
            return reduction_distance(side_reductions(ua, fa), side_reductions(ub, fb), q);
        };

        std::vector<Eigen::VectorXd> starts;
        if (budget.use_canonical_starts) {
            // Dephase the target in its marginal eigenbases and embed the
            // resulting joint distribution at flag value zero.
            const auto& la = tlayout.factors()[0].label;
            const auto& lb = tlayout.factors()[1].label;
            Matrix ea = eig_hermitian(group_marginal(target, {la})).second;
            Matrix eb = eig_hermitian(group_marginal(target, {lb})).second;
            Matrix ua = Matrix::Zero(da, da), ub = Matrix::Zero(db, db);
            const int fa = da / 2, fb = db / 2;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    ua.block(i * fa, j * fa, fa, fa) = ea(i, j) * Matrix::Identity(fa, fa);
                    ub.block(i * fb, j * fb, fb, fb) = eb(i, j) * Matrix::Identity(fb, fb);
                }
            std::vector<double> q(static_cast<std::size_t>(da) * db, 1e-18);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Vector vi = ea.col(i), vj = eb.col(j);
                    Matrix proj = kron_compose({ket_state(vi, "a"), ket_state(vj, "b")}).matrix();
                    double w = std::max(1e-18, (proj * target.matrix()).trace().real());
                    q[static_cast<std::size_t>(i * fa) * db + j * fb] = w;
                }
            double qs = 0.0;
            for (double v : q) qs += v;
            for (double& v : q) v /= qs;
            starts.push_back(pack_start(ua, ub, q));
        }
        if (seed_spec && static_cast<int>(seed_spec->basis_left[0].size()) == da &&
            static_cast<int>(seed_spec->basis_right[0].size()) == db) {
            Matrix ua = complete_to_unitary(seed_spec->basis_left, da);
            Matrix ub = complete_to_unitary(seed_spec->basis_right, db);
            std::vector<double> q(static_cast<std::size_t>(da) * db, 1e-18);
            for (std::size_t k = 0; k < seed_spec->probs.size(); ++k)
                q[k * db + k] = std::max(1e-18, seed_spec->probs[k]);
            double qs = 0.0;
            for (double v : q) qs += v;
            for (double& v : q) v /= qs;
            starts.push_back(pack_start(ua, ub, q));
        }

        OptBudget opt;
        opt.restarts = budget.restarts;
        opt.max_evals = budget.max_evals;
        opt.seed = budget.seed;
        opt.target = 1e-13;
        OptResult r = multistart_minimize(objective, n_params, starts, opt);

        // Polish the leading candidates with moves the simplex handles
        // poorly: exact convex solves of the probability table for the
        // current bases, cyclic Givens/phase line minimization on the
        // unitary manifold, and basin-hopping kicks between descents.
        {
            // One coordinate move: U <- exp(i*theta*G) U for an elementary
            // Hermitian generator G (phase on one row, or a Givens pair),
            // with theta from a quadratic fit through 0, +h, -h.
            auto row_phase = [](Matrix u, int i, double theta) {
                u.row(i) *= std::exp(Complex(0.0, theta));
                return u;
            };
            auto row_mix = [](Matrix u, int i, int j, double theta, bool imaginary) {
                Eigen::RowVectorXcd ri = u.row(i), rj = u.row(j);
                double c = std::cos(theta), s = std::sin(theta);
                if (imaginary) {  // generator E_ij + E_ji
                    u.row(i) = c * ri + Complex(0.0, s) * rj;
                    u.row(j) = Complex(0.0, s) * ri + c * rj;
                } else {  // generator -i E_ij + i E_ji
                    u.row(i) = c * ri + s * rj;
                    u.row(j) = -s * ri + c * rj;
                }
                return u;
            };

            struct Incumbent {
                Matrix ua, ub;
                std::vector<Matrix> ra, rb;
                std::vector<double> q;
                double value;
            };

            auto descend = [&](Incumbent& inc, int max_sweeps) {
                double h = 0.1;
                for (int sweep = 0; sweep < max_sweeps && inc.value > 1e-14 && h > 1e-9; ++sweep) {
                    inc.q = best_joint_probs(joint_reductions(inc.ra, inc.rb), target.matrix(), inc.q);
                    inc.value = reduction_distance(inc.ra, inc.rb, inc.q);
                    double before = inc.value;
                    for (int side = 0; side < 2; ++side) {
                        const bool left = side == 0;
                        const int dim = left ? da : db;
                        Matrix& u = left ? inc.ua : inc.ub;
                        auto eval_candidate = [&](const Matrix& cand) {
                            std::vector<Matrix> cr = side_reductions(cand, left ? fa : fb);
                            double v = left ? reduction_distance(cr, inc.rb, inc.q)
                                            : reduction_distance(inc.ra, cr, inc.q);
                            if (v < inc.value) {
                                inc.value = v;
                                u = cand;
                                (left ? inc.ra : inc.rb) = std::move(cr);
                                return true;
                            }
                            return false;
                        };
                        auto probe_value = [&](const Matrix& cand) {
                            std::vector<Matrix> cr = side_reductions(cand, left ? fa : fb);
                            return left ? reduction_distance(cr, inc.rb, inc.q)
                                        : reduction_distance(inc.ra, cr, inc.q);
                        };
                        auto line_move = [&](auto&& make) {
                            double fp = probe_value(make(h));
                            double fm = probe_value(make(-h));
                            double denom = fp + fm - 2.0 * inc.value;
                            if (denom > 1e-300) {
                                double theta = std::clamp(0.5 * h * (fm - fp) / denom, -3.0 * h, 3.0 * h);
                                if (eval_candidate(make(theta))) return;
                            }
                            if (fp < fm)
                                eval_candidate(make(h));
                            else
                                eval_candidate(make(-h));
                        };
                        for (int i = 0; i < dim; ++i)
                            line_move([&](double theta) { return row_phase(u, i, theta); });
                        for (int i = 0; i < dim; ++i)
                            for (int j = i + 1; j < dim; ++j) {
                                line_move([&](double theta) { return row_mix(u, i, j, theta, true); });
                                line_move([&](double theta) { return row_mix(u, i, j, theta, false); });
                            }
                    }
                    if (before - inc.value < 1e-3 * before) h *= 0.5;
                }
                inc.q = best_joint_probs(joint_reductions(inc.ra, inc.rb), target.matrix(), inc.q);
                inc.value = reduction_distance(inc.ra, inc.rb, inc.q);
            };

            auto unpack = [&](const Eigen::VectorXd& p) {
                Incumbent inc;
                inc.ua = unitary_from_params(p.data(), da);
                inc.ub = unitary_from_params(p.data() + n_ua, db);
                inc.q = softmax(p.data() + n_ua + n_ub, da * db);
                inc.ra = side_reductions(inc.ua, fa);
                inc.rb = side_reductions(inc.ub, fb);
                inc.value = reduction_distance(inc.ra, inc.rb, inc.q);
                return inc;
            };

            std::vector<std::pair<double, Eigen::VectorXd>> leaders = r.leaders;
            if (leaders.empty()) leaders.emplace_back(r.value, r.argmin);
            RngStream hop_rng(budget.seed, 0xB0517ull);
            for (const auto& [seed_value, seed_params] : leaders) {
                Incumbent inc = unpack(seed_params);
                Incumbent best_inc = inc;
                descend(inc, 250);
                if (inc.value < best_inc.value) best_inc = inc;
                for (int hop = 0; hop < 4 && best_inc.value > 1e-13; ++hop) {
                    Incumbent kicked = best_inc;
                    for (int side = 0; side < 2; ++side) {
                        const int dim = side == 0 ? da : db;
                        Matrix g(dim, dim);
                        for (int i = 0; i < dim; ++i) {
                            g(i, i) = hop_rng.normal();
                            for (int j = i + 1; j < dim; ++j) {
                                Complex z = 0.5 * hop_rng.complex_normal();
                                g(i, j) = z;
                                g(j, i) = std::conj(z);
                            }
                        }
                        Eigen::SelfAdjointEigenSolver<Matrix> es(g);
                        Matrix phases = Matrix::Zero(dim, dim);
                        for (int i = 0; i < dim; ++i)
                            phases(i, i) = std::exp(Complex(0.0, 0.35 * es.eigenvalues()(i)));
                        Matrix step = es.eigenvectors() * phases * es.eigenvectors().adjoint();
                        if (side == 0)
                            kicked.ua = step * kicked.ua;
                        else
                            kicked.ub = step * kicked.ub;
                    }
                    kicked.ra = side_reductions(kicked.ua, fa);
                    kicked.rb = side_reductions(kicked.ub, fb);
                    kicked.value = reduction_distance(kicked.ra, kicked.rb, kicked.q);
                    descend(kicked, 250);
                    if (kicked.value < best_inc.value) best_inc = kicked;
                }
                if (best_inc.value < r.value) {
                    r.value = best_inc.value;
                    r.argmin = pack_start(best_inc.ua, best_inc.ub, best_inc.q);
                }
                if (r.value <= 1e-13) break;
            }
        }

        MinExtDimResult dim_result;
        dim_result.dim_left = da;
        dim_result.dim_right = db;
        dim_result.best_distance = r.value;
        dim_result.restarts_used = r.restarts_used;
        Matrix ua = unitary_from_params(r.argmin.data(), da);
        Matrix ub = unitary_from_params(r.argmin.data() + n_ua, db);
        std::vector<double> q = softmax(r.argmin.data() + n_ua + n_ub, da * db);
        DensityMatrix witness = classical_from_bases(ua, ub, q, da, db);
        dim_result.work = extractable_work(witness);
        dim_result.witness = std::move(witness);
        report.per_dim.push_back(std::move(dim_result));

        if (report.success_index < 0 && r.value < budget.success_distance)
            report.success_index = static_cast<int>(report.per_dim.size()) - 1;
    }
    return report;
}

}  // namespace classext
