#include "classext/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace classext::io {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) throw std::runtime_error(context + ": matrix must be a nonempty array of rows");
    const auto rows = j.size();
    const auto cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw std::runtime_error(context + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& e = j[r][c];
            if (!e.is_array() || e.size() != 2)
                throw std::runtime_error(context + ": entries must be [re, im] pairs");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

namespace {

json layout_to_json(const SubsystemLayout& layout) {
    json factors = json::array();
    for (const auto& f : layout.factors()) factors.push_back({f.label, f.dim});
    return factors;
}

SubsystemLayout layout_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) throw std::runtime_error(context + ": layout must be a nonempty array");
    std::vector<Factor> factors;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer())
            throw std::runtime_error(context + ": layout entries must be [label, dim]");
        factors.push_back({e[0].get<std::string>(), e[1].get<int>()});
    }
    return SubsystemLayout(std::move(factors));
}

}  // namespace

json state_to_json(const DensityMatrix& state) {
    return json{{"layout", layout_to_json(state.layout())}, {"matrix", matrix_to_json(state.matrix())}};
}

DensityMatrix state_from_json(const json& j) {
    if (!j.contains("layout")) throw std::runtime_error("state: missing field 'layout'");
    if (!j.contains("matrix")) throw std::runtime_error("state: missing field 'matrix'");
    SubsystemLayout layout = layout_from_json(j.at("layout"), "state.layout");
    Matrix m = matrix_from_json(j.at("matrix"), "state.matrix");
    if (m.rows() != m.cols()) throw std::runtime_error("state.matrix: matrix is not square");
    if (m.rows() != layout.total_dim())
        throw std::runtime_error("state.matrix: side does not match the layout dimension");
    return DensityMatrix(std::move(layout), std::move(m));
}

json decomposition_to_json(const SeparableDecomposition& decomp) {
    json terms = json::array();
    for (const auto& t : decomp.terms())
        terms.push_back(
            {{"p", t.weight}, {"a", matrix_to_json(t.left.matrix())}, {"b", matrix_to_json(t.right.matrix())}});
    return json{{"terms", std::move(terms)},
                {"layout_a", layout_to_json(decomp.left_layout())},
                {"layout_b", layout_to_json(decomp.right_layout())}};
}

SeparableDecomposition decomposition_from_json(const json& j) {
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
        throw std::runtime_error("decomposition: missing or empty field 'terms'");
    std::optional<SubsystemLayout> layout_a, layout_b;
    if (j.contains("layout_a")) layout_a = layout_from_json(j.at("layout_a"), "decomposition.layout_a");
    if (j.contains("layout_b")) layout_b = layout_from_json(j.at("layout_b"), "decomposition.layout_b");
    std::vector<SeparableTerm> terms;
    for (const auto& t : j.at("terms")) {
        if (!t.contains("p") || !t.contains("a") || !t.contains("b"))
            throw std::runtime_error("decomposition: each term needs fields 'p', 'a', 'b'");
        Matrix ma = matrix_from_json(t.at("a"), "decomposition.term.a");
        Matrix mb = matrix_from_json(t.at("b"), "decomposition.term.b");
        SubsystemLayout la = layout_a ? *layout_a : SubsystemLayout::single("a", static_cast<int>(ma.rows()));
        SubsystemLayout lb = layout_b ? *layout_b : SubsystemLayout::single("b", static_cast<int>(mb.rows()));
        terms.push_back({t.at("p").get<double>(), DensityMatrix(la, std::move(ma)), DensityMatrix(lb, std::move(mb))});
    }
    return SeparableDecomposition(std::move(terms));
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

}  // namespace

DensityMatrix load_state(const std::string& path) {
    try {
        return state_from_json(load_json_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::pair<SubsystemLayout, Matrix> load_state_raw(const std::string& path) {
    try {
        json j = load_json_file(path);
        if (!j.contains("layout")) throw std::runtime_error("state: missing field 'layout'");
        if (!j.contains("matrix")) throw std::runtime_error("state: missing field 'matrix'");
        SubsystemLayout layout = layout_from_json(j.at("layout"), "state.layout");
        Matrix m = matrix_from_json(j.at("matrix"), "state.matrix");
        if (m.rows() != m.cols()) throw std::runtime_error("state.matrix: matrix is not square");
        if (m.rows() != layout.total_dim())
            throw std::runtime_error("state.matrix: side does not match the layout dimension");
        return {std::move(layout), std::move(m)};
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_state(const DensityMatrix& state, const std::string& path) {
    write_text_atomic(path, state_to_json(state).dump(2) + "\n");
}

SeparableDecomposition load_decomposition(const std::string& path) {
    try {
        return decomposition_from_json(load_json_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
        out << content;
        if (!out) throw std::runtime_error(tmp + ": write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error(path + ": atomic rename failed");
}

std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace classext::io
