#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace classext {

struct Factor {
    std::string label;
    int dim = 0;
};

// Ordered list of labeled tensor factors. The leftmost factor is the most
// significant digit of the composite index (row-major convention), so for
// [a:2, b:3] the global index is i = ia*3 + ib.
class SubsystemLayout {
public:
    SubsystemLayout() = default;

    explicit SubsystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
        total_ = 1;
        for (const auto& f : factors_) {
            if (f.dim < 1) throw std::invalid_argument("layout: factor dimension must be >= 1");
            if (f.label.empty()) throw std::invalid_argument("layout: empty factor label");
            for (const auto& g : factors_) {
                if (&f != &g && f.label == g.label)
                    throw std::invalid_argument("layout: duplicate label '" + f.label + "'");
            }
            total_ *= f.dim;
        }
        if (factors_.empty()) throw std::invalid_argument("layout: no factors");
    }

    static SubsystemLayout single(const std::string& label, int dim) {
        return SubsystemLayout({{label, dim}});
    }

    const std::vector<Factor>& factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    int total_dim() const { return total_; }

    bool contains(const std::string& label) const {
        for (const auto& f : factors_)
            if (f.label == label) return true;
        return false;
    }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i].label == label) return i;
        throw std::invalid_argument("layout: unknown label '" + label + "'");
    }

    int dim_of(const std::string& label) const { return factors_[index_of(label)].dim; }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(factors_.size());
        for (const auto& f : factors_) out.push_back(f.label);
        return out;
    }

    // Concatenation; labels must stay unique.
    SubsystemLayout concat(const SubsystemLayout& other) const {
        std::vector<Factor> fs = factors_;
        fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
        return SubsystemLayout(std::move(fs));
    }

    // Stride of factor i: product of dims of all factors to its right.
    std::vector<int> strides() const {
        std::vector<int> s(factors_.size(), 1);
        for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i)
            s[i] = s[i + 1] * factors_[i + 1].dim;
        return s;
    }

    void decode(int index, std::vector<int>& digits) const {
        digits.resize(factors_.size());
        for (int i = static_cast<int>(factors_.size()) - 1; i >= 0; --i) {
            digits[i] = index % factors_[i].dim;
            index /= factors_[i].dim;
        }
    }

    int encode(const std::vector<int>& digits) const {
        int index = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) index = index * factors_[i].dim + digits[i];
        return index;
    }

    bool operator==(const SubsystemLayout& other) const {
        if (factors_.size() != other.factors_.size()) return false;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i].label != other.factors_[i].label || factors_[i].dim != other.factors_[i].dim)
                return false;
        return true;
    }
    bool operator!=(const SubsystemLayout& other) const { return !(*this == other); }

private:
    std::vector<Factor> factors_;
    int total_ = 0;
};

}  // namespace classext
