#pragma once

// LU factorization of the simplex basis with product-form eta updates between
// refactorizations. Logical column n + i of [A | -I] is -e_i.

#include <memory>
#include <span>
#include <vector>

#include "lp_form.hpp"

namespace surge::solver::detail {

class BasisFactor {
public:
    explicit BasisFactor(const LpForm& form);
    ~BasisFactor();
    BasisFactor(const BasisFactor&) = delete;
    BasisFactor& operator=(const BasisFactor&) = delete;

    /// Factor the basis given by `head` (column index per basis position).
    /// Returns false when the matrix is numerically singular.
    bool refactor(std::span<const int> head);

    /// In-place B x = rhs.
    void ftran(std::vector<double>& rhs) const;
    /// In-place B^T y = rhs.
    void btran(std::vector<double>& rhs) const;

    /// Column at position `r` replaced; `alpha` is the ftran'd entering column.
    void update(int r, std::span<const double> alpha);

    int updates() const { return static_cast<int>(etas_.size()); }
    std::size_t eta_nonzeros() const { return eta_nonzeros_; }

private:
    struct Eta {
        int pivot_row;
        double pivot;
        std::vector<int> index;
        std::vector<double> value;
    };

    const LpForm& form_;
    struct Lu;
    std::unique_ptr<Lu> lu_;
    std::vector<Eta> etas_;
    std::size_t eta_nonzeros_ = 0;
};

}  // namespace surge::solver::detail
