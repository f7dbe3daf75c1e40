#include "classext/gqd.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace classext {

namespace {

std::vector<LabelGroup> normalized_groups(const SubsystemLayout& layout, const MultiPartition& parts) {
    std::vector<LabelGroup> groups;
    std::set<std::string> seen;
    for (const auto& g : parts.groups) {
        if (g.empty()) throw std::invalid_argument("partition: empty group");
        LabelGroup ordered;
        for (const auto& f : layout.factors())
            for (const auto& l : g)
                if (l == f.label) ordered.push_back(l);
        if (ordered.size() != g.size()) throw std::invalid_argument("partition: unknown or repeated label");
        for (const auto& l : ordered)
            if (!seen.insert(l).second) throw std::invalid_argument("partition: groups overlap on '" + l + "'");
        groups.push_back(std::move(ordered));
    }
    if (seen.size() != layout.size()) throw std::invalid_argument("partition: groups must cover every factor");
    return groups;
}

}  // namespace

DensityMatrix multilocal_dephase(const DensityMatrix& state, const MultiPartition& parts,
                                 const std::vector<Matrix>& bases) {
    std::vector<LabelGroup> groups = normalized_groups(state.layout(), parts);
    return dephase_product(state, groups, bases);
}

double generalized_mutual_information(const DensityMatrix& state, const MultiPartition& parts) {
    std::vector<LabelGroup> groups = normalized_groups(state.layout(), parts);
    double info = -entropy(state);
    for (const auto& g : groups) info += entropy_of(group_marginal(state, g));
    return info;
}

MeasureResult gqd(const DensityMatrix& state, const MultiPartition& parts, const GqdBudget& budget) {
    const SubsystemLayout& layout = state.layout();
    std::vector<LabelGroup> groups = normalized_groups(layout, parts);
    const int n_groups = static_cast<int>(groups.size());

    std::vector<int> dims(n_groups);
    for (int g = 0; g < n_groups; ++g) dims[g] = group_dim(layout, groups[g]);

    const double info = generalized_mutual_information(state, parts);

    auto post_information = [&](const std::vector<Matrix>& bases) {
        DensityMatrix dephased = dephase_product(state, groups, bases);
        double post = -entropy(dephased);
        for (const auto& g : groups) post += entropy_of(group_marginal(dephased, g));
        return post;
    };

    MeasureResult result;
    double best_post = -1e300;
    auto consider = [&](const std::vector<Matrix>& bases) {
        double post = post_information(bases);
        if (post > best_post) best_post = post;
    };

    std::vector<Matrix> computational, eigenbases, refined;
    for (int g = 0; g < n_groups; ++g) {
        computational.push_back(Matrix::Identity(dims[g], dims[g]));
        eigenbases.push_back(eig_hermitian(group_marginal(state, groups[g])).second);
        refined.push_back(classical_candidate_basis(state, groups[g]));
    }
    consider(computational);
    consider(eigenbases);
    consider(refined);

    bool over_cap = *std::max_element(dims.begin(), dims.end()) > budget.max_group_dim;
    if (over_cap) result.optimizer_skipped = true;

    if (!over_cap && best_post < info - 1e-12) {
        int n_params = 0;
        std::vector<int> offsets(n_groups);
        for (int g = 0; g < n_groups; ++g) {
            offsets[g] = n_params;
            n_params += unitary_param_count(dims[g]);
        }
        auto objective = [&](const Eigen::VectorXd& p) {
            std::vector<Matrix> bases(n_groups);
            for (int g = 0; g < n_groups; ++g) bases[g] = unitary_from_params(p.data() + offsets[g], dims[g]);
            return -post_information(bases);
        };
        OptBudget opt = budget.opt;
        opt.target = -info + 1e-12;  // post-measurement information cannot exceed info
        std::vector<Eigen::VectorXd> starts;
        starts.push_back(Eigen::VectorXd::Zero(n_params));
        Eigen::VectorXd eig_start(n_params);
        for (int g = 0; g < n_groups; ++g)
            eig_start.segment(offsets[g], unitary_param_count(dims[g])) = params_from_unitary(eigenbases[g]);
        starts.push_back(eig_start);
        Eigen::VectorXd refined_start(n_params);
        for (int g = 0; g < n_groups; ++g)
            refined_start.segment(offsets[g], unitary_param_count(dims[g])) = params_from_unitary(refined[g]);
        starts.push_back(refined_start);

        OptResult r = multistart_minimize(objective, n_params, starts, opt);
        result.restarts = r.restarts_used;
        result.evals = r.evals;
        result.converged = r.converged;
        if (-r.value > best_post) best_post = -r.value;
    }

    result.best_objective = best_post;
    result.value = std::max(0.0, info - best_post);
    return result;
}

MonogamyReport monogamy_check(const DensityMatrix& state, const MultiPartition& parts, const GqdBudget& budget) {
    const SubsystemLayout& layout = state.layout();
    std::vector<LabelGroup> groups = normalized_groups(layout, parts);
    const int n = static_cast<int>(groups.size());
    if (n < 3) throw std::invalid_argument("monogamy_check: at least three groups required");

    MonogamyReport report;
    report.lhs = gqd(state, parts, budget).value;

    for (int k = 1; k < n; ++k) {
        // Marginal of a_1..a_{k+1}; first k groups merged into one block.
        LabelGroup head, tail = groups[k];
        for (int i = 0; i < k; ++i) head.insert(head.end(), groups[i].begin(), groups[i].end());
        std::set<std::string> keep(head.begin(), head.end());
        keep.insert(tail.begin(), tail.end());
        std::set<std::string> discard;
        for (const auto& f : layout.factors())
            if (!keep.count(f.label)) discard.insert(f.label);
        DensityMatrix marginal = discard.empty() ? state : partial_trace(state, discard);
        MultiPartition two{{head, tail}};
        report.rhs_terms.push_back(gqd(marginal, two, budget).value);
    }

    double rhs_sum = 0.0;
    for (double v : report.rhs_terms) rhs_sum += v;
    report.slack = report.lhs - rhs_sum;
    return report;
}

PolygamyReport polygamy_witness(const DensityMatrix& extension, const DiscordBudget& budget) {
    const SubsystemLayout& layout = extension.layout();
    if (layout.size() != 4) throw std::invalid_argument("polygamy_witness: four-factor layout required");
    const auto& f = layout.factors();
    const LabelGroup ab = {f[0].label, f[2].label};
    const LabelGroup aux = {f[1].label, f[3].label};

    PolygamyReport report;

    // Discord of ab towards the ancillas, measured on the ancilla pair at
    // structurally derived bases (defining flag basis when the extension is
    // ancilla-classical). Evaluating fixed bases upper-bounds the discord,
    // which is the direction the witness needs.
    {
        const double info = mutual_information(extension, ab);
        double best = -1e300;
        const int da = group_dim(layout, aux);
        best = std::max(best, classical_correlation(extension, aux, classical_candidate_basis(extension, aux)));
        best = std::max(best, classical_correlation(extension, aux,
                                                    eig_hermitian(group_marginal(extension, aux)).second));
        best = std::max(best, classical_correlation(extension, aux, Matrix::Identity(da, da)));
        report.discord_ab_aux = std::max(0.0, info - best);
    }

    DensityMatrix rho_a_aux = partial_trace(extension, {f[2].label});
    report.discord_a_aux = discord_one_sided(rho_a_aux, {f[0].label}, budget).value;
    DensityMatrix rho_b_aux = partial_trace(extension, {f[0].label});
    report.discord_b_aux = discord_one_sided(rho_b_aux, {f[2].label}, budget).value;

    report.polygamous = report.discord_a_aux > report.discord_ab_aux + 1e-6;
    return report;
}

}  // namespace classext
