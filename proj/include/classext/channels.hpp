#pragma once

#include <string>
#include <vector>

#include "classext/density.hpp"

namespace classext {

// Ordered grouping of the layout's factors; groups are disjoint label sets.
// For channel purposes a group is measured/dephased as one unit whose
// dimension is the product of its factors' dims (in the listed order).
using LabelGroup = std::vector<std::string>;

// Projective dephasing of `group` in the basis given by the columns of
// `basis`: rho -> sum_j (P_j (x) 1) rho (P_j (x) 1). Factors outside the
// group are untouched.
DensityMatrix dephase_group(const DensityMatrix& state, const LabelGroup& group, const Matrix& basis);

// Simultaneous rank-1 product dephasing of every group: the state is
// rotated into the joint product basis, reduced to its diagonal, and
// rotated back.
DensityMatrix dephase_product(const DensityMatrix& state, const std::vector<LabelGroup>& groups,
                              const std::vector<Matrix>& bases);

// Partial inner product <u| rho |u> over `group`, yielding an operator on
// the remaining factors (the unnormalized conditional state).
Matrix conditional_block(const DensityMatrix& state, const LabelGroup& group, const Vector& u);

// Marginal of the grouped factors as a plain matrix of the group dimension.
Matrix group_marginal(const DensityMatrix& state, const LabelGroup& group);

int group_dim(const SubsystemLayout& layout, const LabelGroup& group);

}  // namespace classext
