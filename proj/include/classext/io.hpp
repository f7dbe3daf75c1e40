#pragma once

#include <string>

#include "classext/density.hpp"
#include "classext/states.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace classext::io {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& context);

// Shared state file format:
//   {"layout": [["a",2],["b",2]], "matrix": [[[re,im],...],...]}
// row-major nested arrays; non-square or layout-inconsistent matrices are
// rejected.
json state_to_json(const DensityMatrix& state);
DensityMatrix state_from_json(const json& j);

// {"terms":[{"p":..., "a": matrix, "b": matrix}]} with optional layout_a /
// layout_b entries (single anonymous factors by default).
json decomposition_to_json(const SeparableDecomposition& decomp);
SeparableDecomposition decomposition_from_json(const json& j);

DensityMatrix load_state(const std::string& path);
void save_state(const DensityMatrix& state, const std::string& path);
SeparableDecomposition load_decomposition(const std::string& path);

// Layout and matrix without the DensityMatrix construction checks, for
// validation of possibly-invalid inputs. Squareness and the layout/side
// match are still enforced.
std::pair<SubsystemLayout, Matrix> load_state_raw(const std::string& path);

// Write via a temp file plus rename, so readers never observe a torn file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string format_csv_value(double v);  // 6 significant digits

}  // namespace classext::io
