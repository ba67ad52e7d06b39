#pragma once

// Internal computational form of an LP relaxation:
//   row activities r = A x, with bounds on both x and r.
// Logical variable j = n + i carries the activity of row i. Rows are scaled
// to unit max-abs coefficient; bounds of the logicals are scaled alongside.

#include <vector>

#include "surge/solver/mip_model.hpp"

namespace surge::solver::detail {

struct LpForm {
    int n = 0;  // structural columns
    int m = 0;  // rows
    // Column-major structural part of A.
    std::vector<int> col_start;
    std::vector<int> col_row;
    std::vector<double> col_val;
    // Row-major copy of the same entries.
    std::vector<int> row_start;
    std::vector<int> row_col;
    std::vector<double> row_val;

    std::vector<double> cost;   // n + m, zero for logicals
    std::vector<double> lower;  // n + m
    std::vector<double> upper;  // n + m
    std::vector<double> row_scale;
    double objective_constant = 0.0;

    int total() const { return n + m; }
};

/// Binaries relaxed to [0, 1]; every SOS1 group contributes its convexity row
/// after the model's own rows.
LpForm build_relaxation(const MipModel& model);

}  // namespace surge::solver::detail
