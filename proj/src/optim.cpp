#include "classext/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace classext {

OptResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
                      double step, int max_evals, double ftol, double target) {
    const int n = static_cast<int>(start.size());
    // Adaptive coefficients (better behaved as the dimension grows).
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / n;
    const double gamma = 0.75 - 0.5 / n;
    const double delta = 1.0 - 1.0 / n;

    std::vector<Eigen::VectorXd> x(n + 1, start);
    std::vector<double> fx(n + 1);
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& p) {
        ++evals;
        return f(p);
    };
    fx[0] = eval(x[0]);
    for (int i = 0; i < n; ++i) {
        x[i + 1](i) += step;
        fx[i + 1] = eval(x[i + 1]);
    }

    std::vector<int> order(n + 1);
    OptResult res;
    double cycle_best = std::min_element(fx.begin(), fx.end())[0];
    int since_cycle = 0;

    while (evals + 3 < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        const int best = order[0], worst = order[n], second_worst = order[n - 1];

        if (fx[best] <= target) break;
        // Improvement check once per full refinement cycle (n+1 steps).
        if (++since_cycle > n) {
            if (cycle_best - fx[best] < ftol) {
                res.converged = true;
                break;
            }
            cycle_best = fx[best];
            since_cycle = 0;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += x[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + alpha * (centroid - x[worst]);
        double fr = eval(xr);
        if (fr < fx[best]) {
            Eigen::VectorXd xe = centroid + beta * (xr - centroid);
            double fe = eval(xe);
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr < fx[second_worst]) {
            x[worst] = xr;
            fx[worst] = fr;
        } else {
            Eigen::VectorXd xc;
            if (fr < fx[worst])
                xc = centroid + gamma * (xr - centroid);
            else
                xc = centroid - gamma * (centroid - x[worst]);
            double fc = eval(xc);
            if (fc < std::min(fr, fx[worst])) {
                x[worst] = xc;
                fx[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    x[i] = x[best] + delta * (x[i] - x[best]);
                    fx[i] = eval(x[i]);
                }
            }
        }
    }

    int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    res.argmin = x[best];
    res.value = fx[best];
    res.evals = evals;
    return res;
}

OptResult cyclic_refine(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
                        double step, int max_sweeps, double target) {
    const int n = static_cast<int>(start.size());
    Eigen::VectorXd x = start;
    OptResult res;
    double fx = f(x);
    res.evals = 1;
    double h = step;
    for (int sweep = 0; sweep < max_sweeps && fx > target && h > 1e-10; ++sweep) {
        double before = fx;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            double fp = f(xp), fm = f(xm);
            res.evals += 2;
            double denom = fp + fm - 2.0 * fx;
            double best_f = fx;
            Eigen::VectorXd best_x = x;
            if (fp < best_f) {
                best_f = fp;
                best_x = xp;
            }
            if (fm < best_f) {
                best_f = fm;
                best_x = xm;
            }
            if (denom > 1e-300) {
                double delta = 0.5 * h * (fm - fp) / denom;
                delta = std::clamp(delta, -3.0 * h, 3.0 * h);
                Eigen::VectorXd xv = x;
                xv(i) += delta;
                double fv = f(xv);
                ++res.evals;
                if (fv < best_f) {
                    best_f = fv;
                    best_x = xv;
                }
            }
            x = best_x;
            fx = best_f;
        }
        if (before - fx < 1e-15 * (1.0 + std::abs(before))) h *= 0.3;
    }
    res.argmin = x;
    res.value = fx;
    res.converged = fx <= target || h <= 1e-10;
    return res;
}

OptResult multistart_minimize(const std::function<double(const Eigen::VectorXd&)>& f, int n_params,
                              const std::vector<Eigen::VectorXd>& canonical_starts, const OptBudget& budget) {
    OptResult best;
    best.value = 1e300;
    int total_evals = 0;
    RngStream master(budget.seed);

    struct Candidate {
        double value;
        Eigen::VectorXd argmin;
    };
    std::vector<Candidate> leaders;
    auto keep_leader = [&](double value, const Eigen::VectorXd& argmin) {
        leaders.push_back({value, argmin});
        std::sort(leaders.begin(), leaders.end(), [](const Candidate& a, const Candidate& b) {
            return a.value < b.value;
        });
        if (leaders.size() > 5) leaders.pop_back();
    };

    auto run_start = [&](const Eigen::VectorXd& start, double step) {
        OptResult r = nelder_mead(f, start, step, budget.max_evals, budget.ftol, budget.target);
        total_evals += r.evals;
        ++best.restarts_used;
        keep_leader(r.value, r.argmin);
        if (r.value < best.value) {
            best.value = r.value;
            best.argmin = r.argmin;
            best.converged = r.converged;
        }
    };

    for (const auto& s : canonical_starts) {
        if (best.value <= budget.target) break;
        run_start(s, 0.25);
    }
    for (int k = 0; k < budget.restarts && best.value > budget.target; ++k) {
        RngStream stream = master.derive(static_cast<std::uint64_t>(k) + 1);
        Eigen::VectorXd s(n_params);
        for (int i = 0; i < n_params; ++i) s(i) = budget.start_scale * stream.normal();
        run_start(s, 0.5);
    }

    // Polish the leading candidates with fresh, shrinking simplices; a
    // restarted simplex escapes the collapsed shape that stalls the final
    // descent.
    for (std::size_t li = 0; li < leaders.size() && li < 3; ++li) {
        auto& leader = leaders[li];
        if (best.value <= budget.target) break;
        double step = 0.05;
        for (int round = 0; round < 14 && leader.value > budget.target; ++round, step *= 0.5) {
            double before = leader.value;
            OptResult r = nelder_mead(f, leader.argmin, step, budget.max_evals, budget.ftol * 1e-4, budget.target);
            total_evals += r.evals;
            if (r.value < leader.value) {
                leader.value = r.value;
                leader.argmin = r.argmin;
            }
            if (before - leader.value < 1e-14 * (1.0 + std::abs(before)) && round > 2) break;
        }
        if (leader.value < best.value) {
            best.value = leader.value;
            best.argmin = leader.argmin;
        }
    }
    best.evals = total_evals;
    for (const auto& leader : leaders) best.leaders.emplace_back(leader.value, leader.argmin);
    return best;
}

int unitary_param_count(int dim) { return dim * dim; }

Matrix unitary_from_params(const double* params, int dim) {
    Matrix h(dim, dim);
    int p = 0;
    for (int i = 0; i < dim; ++i) h(i, i) = params[p++];
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Complex z(params[p], params[p + 1]);
            p += 2;
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix phases = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        phases(i, i) = std::exp(Complex(0.0, es.eigenvalues()(i)));
    return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

Eigen::VectorXd params_from_unitary(const Matrix& v) {
    const int dim = static_cast<int>(v.rows());
    Eigen::ComplexSchur<Matrix> schur(v);
    // A unitary matrix is normal, so its Schur form is diagonal and the
    // Schur vectors are an orthonormal eigenbasis.
    Matrix q = schur.matrixU();
    Matrix t = schur.matrixT();
    Matrix h = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) h(i, i) = std::arg(t(i, i));
    h = q * h * q.adjoint();
    Eigen::VectorXd params(unitary_param_count(dim));
    int p = 0;
    for (int i = 0; i < dim; ++i) params(p++) = h(i, i).real();
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            params(p++) = h(i, j).real();
            params(p++) = h(i, j).imag();
        }
    return params;
}

std::vector<double> softmax(const double* logits, int n) {
    double mx = logits[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
    std::vector<double> q(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        q[i] = std::exp(logits[i] - mx);
        sum += q[i];
    }
    for (auto& x : q) x /= sum;
    return q;
}

}  // namespace classext
