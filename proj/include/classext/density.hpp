#pragma once

#include <Eigen/Dense>
#include <complex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "classext/layout.hpp"

namespace classext {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances shared across the toolkit. The PSD floor is looser than the
// Hermiticity/trace ones to absorb accumulated error in Kronecker chains.
namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double psd_floor = -1e-10;
inline constexpr double eig_hermiticity = 1e-10;
}  // namespace tol

// Dense-storage cap on the total composite dimension.
inline constexpr int kDefaultDimCap = 256;

double hermiticity_residual(const Matrix& m);

// Hermitian, unit-trace, PSD matrix tagged with a subsystem layout.
// Construction checks squareness, the layout/matrix size match, Hermiticity
// and trace; positivity is checked separately by validate_density (it needs
// an eigensolve).
class DensityMatrix {
public:
    DensityMatrix(SubsystemLayout layout, Matrix m);

    const SubsystemLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return layout_.total_dim(); }

private:
    SubsystemLayout layout_;
    Matrix m_;
};

struct ValidationReport {
    double hermiticity_residual = 0.0;
    double trace_residual = 0.0;
    double min_eigenvalue = 0.0;
    bool hermitian = false;
    bool unit_trace = false;
    bool psd = false;
    bool pass() const { return hermitian && unit_trace && psd; }
    std::string failure() const;  // name of the first failing check, or ""
};

ValidationReport validate_density(const DensityMatrix& state);

// Raw-matrix variant for inputs that may not satisfy the DensityMatrix
// construction invariants (e.g. files under validation).
ValidationReport validate_density(const Matrix& m);

// Kronecker product of the factors, layout concatenated in factor order.
DensityMatrix kron_compose(const std::vector<DensityMatrix>& factors);

// Trace out the named factors; the returned layout drops them.
DensityMatrix partial_trace(const DensityMatrix& state, const std::set<std::string>& discard);

// Transpose the indices of a proper nonempty subset of factors. The result
// is Hermitian with unit trace but generally not PSD, so it is returned as a
// plain matrix.
Matrix partial_transpose(const DensityMatrix& state, const std::set<std::string>& subset);

// Reorder the tensor factors; `order` must be a permutation of the labels.
DensityMatrix permute_factors(const DensityMatrix& state, const std::vector<std::string>& order);

// Regroup a state into the two-factor view [left | rest]: factors in `left`
// come first (in layout order), then the complement, each group merged into
// one labeled factor.
DensityMatrix group_bipartite(const DensityMatrix& state, const std::set<std::string>& left,
                              const std::string& left_label = "L", const std::string& right_label = "R");

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
// Throws std::invalid_argument if the input is not Hermitian within 1e-10.
std::pair<RealVector, Matrix> eig_hermitian(const Matrix& m);

RealVector eigvals_hermitian(const Matrix& m);

enum class Metric { HilbertSchmidt, Trace };

double distance(const DensityMatrix& x, const DensityMatrix& y, Metric metric);

}  // namespace classext
