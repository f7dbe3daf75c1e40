#pragma once

#include <optional>
#include <string>
#include <vector>

#include "classext/density.hpp"
#include "classext/rng.hpp"

namespace classext {

struct BlochAngles {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2*pi)
};

// Pure qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> as a projector.
DensityMatrix bloch_qubit(const BlochAngles& angles, const std::string& label = "q");

Vector bloch_ket(const BlochAngles& angles);

// Rank-1 projector |v><v| as a density matrix on a single labeled factor.
DensityMatrix ket_state(const Vector& v, const std::string& label);

DensityMatrix maximally_mixed(const SubsystemLayout& layout);

struct SeparableTerm {
    double weight = 0.0;
    DensityMatrix left;
    DensityMatrix right;
};

// Weighted product decomposition: sum_k p_k rho^a_k (x) rho^b_k.
// Weights positive and normalized; every left factor shares one layout and
// every right factor shares one layout.
class SeparableDecomposition {
public:
    explicit SeparableDecomposition(std::vector<SeparableTerm> terms);

    const std::vector<SeparableTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    const SubsystemLayout& left_layout() const { return terms_[0].left.layout(); }
    const SubsystemLayout& right_layout() const { return terms_[0].right.layout(); }

private:
    std::vector<SeparableTerm> terms_;
};

DensityMatrix assemble_separable(const SeparableDecomposition& decomp);

// Flag-space assignment for the classical extension. The default gives every
// term its own orthogonal flag on both sides. A factored assignment packs
// flags into smaller ancillas; terms sharing a flag must have mutually
// orthogonal factors on that side (checked numerically).
struct FlagSplit {
    int dim_left = 0;             // 0 = one flag per term
    int dim_right = 0;
    std::vector<int> flags_left;  // one flag index per term; empty = identity assignment
    std::vector<int> flags_right;

    static FlagSplit both_sides() { return {}; }
    static FlagSplit factored(int dim_l, int dim_r, std::vector<int> fl, std::vector<int> fr) {
        return {dim_l, dim_r, std::move(fl), std::move(fr)};
    }
};

// Classical extension of a separable state (flag construction): the returned
// state lives on [left, left-flag, right, right-flag], is classical across
// the (left,left-flag)|(right,right-flag) cut, and traces back to
// assemble_separable(decomp) over the flags.
DensityMatrix li_luo_extend(const SeparableDecomposition& decomp, const FlagSplit& split = FlagSplit::both_sides(),
                            const std::string& flag_left_label = "abar",
                            const std::string& flag_right_label = "bbar");

// The two-qubit separable state with maximal geometric discord
// (1/4 on the diagonal plus 1/4 in the outer corners), layout [a:2, b:2].
DensityMatrix build_rho_rsp();

// Its fixed three-term product decomposition (equatorial trine on the left,
// conjugate trine on the right), assembling to build_rho_rsp() exactly.
SeparableDecomposition rho_rsp_trine_decomposition();

// The four-term decomposition: |+x>,|-x> correlated pairs plus |+y>,|-y>
// anti-correlated pairs, each with weight 1/4.
SeparableDecomposition rho_rsp_xy_decomposition();

enum class RspExtension { Six, Eight, Opt };

// The three classical extensions of build_rho_rsp():
//   Six   - three-flag extension, total dimension 36
//   Eight - four-flag extension, total dimension 64
//   Opt   - single-qubit flags packed by pair orthogonality, dimension 16
DensityMatrix build_rsp_extension(RspExtension variant);

// Probability vector plus one orthonormal family per side.
struct ClassicalStateSpec {
    std::vector<double> probs;
    std::vector<Vector> basis_left;   // n orthonormal vectors in H_A
    std::vector<Vector> basis_right;  // n orthonormal vectors in H_B
    std::string left_label = "A";
    std::string right_label = "B";
};

// sum_k p_k |u_k><u_k| (x) |v_k><v_k| on layout [A, B].
DensityMatrix build_classical(const ClassicalStateSpec& spec);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the
// diagonal phases of R folded back in.
Matrix random_unitary(int dim, RngStream& rng);

// Random mixed state: Haar-rotated flat-simplex spectrum.
DensityMatrix random_mixed_state(const SubsystemLayout& layout, RngStream& rng);

SeparableDecomposition random_separable(const SubsystemLayout& left, const SubsystemLayout& right, int n_terms,
                                        RngStream& rng);

}  // namespace classext
