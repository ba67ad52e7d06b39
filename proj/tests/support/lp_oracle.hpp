#pragma once

// Brute-force LP oracle: enumerate every n-subset of the inequality rows
// (bounds included), solve the square system, keep the best feasible vertex.
// Only usable for tiny n; exists to check the simplex independently.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "surge/solver/mip_model.hpp"

namespace surge::testing {

struct DenseLp {
    int n = 0;
    std::vector<std::vector<double>> rows;  // rows[i] . x <= rhs[i]
    std::vector<double> rhs;
    std::vector<double> cost;
};

/// Converts a continuous MipModel with finite bounds into <= rows.
inline DenseLp to_dense(const solver::MipModel& model) {
    DenseLp lp;
    lp.n = static_cast<int>(model.num_variables());
    lp.cost = model.costs();
    auto add = [&](std::vector<double> row, double rhs) {
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(rhs);
    };
    for (const auto& c : model.constraints()) {
        std::vector<double> row(static_cast<std::size_t>(lp.n), 0.0);
        for (const auto& t : c.terms) row[static_cast<std::size_t>(t.var.index)] += t.coef;
        if (c.sense != solver::RowSense::greater_equal) add(row, c.rhs);
        if (c.sense != solver::RowSense::less_equal) {
            for (double& v : row) v = -v;
            add(row, -c.rhs);
        }
    }
    for (int j = 0; j < lp.n; ++j) {
        const auto& v = model.variables()[static_cast<std::size_t>(j)];
        std::vector<double> row(static_cast<std::size_t>(lp.n), 0.0);
        row[static_cast<std::size_t>(j)] = 1.0;
        add(row, v.upper);
        row[static_cast<std::size_t>(j)] = -1.0;
        add(row, -v.lower);
    }
    return lp;
}

inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-10) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

/// Minimum objective over all feasible vertices; nullopt when none exists.
inline std::optional<double> vertex_enumeration_min(const DenseLp& lp, double tol = 1e-9) {
    const std::size_t rows = lp.rows.size();
    const auto n = static_cast<std::size_t>(lp.n);
    std::optional<double> best;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> recurse = [&](std::size_t from) {
        if (pick.size() == n) {
            std::vector<std::vector<double>> a;
            std::vector<double> b;
            for (std::size_t i : pick) {
                a.push_back(lp.rows[i]);
                b.push_back(lp.rhs[i]);
            }
            auto x = solve_square(std::move(a), std::move(b));
            if (!x) return;
            for (std::size_t i = 0; i < rows; ++i) {
                double act = 0.0;
                for (std::size_t j = 0; j < n; ++j) act += lp.rows[i][j] * (*x)[j];
                if (act > lp.rhs[i] + tol * (1.0 + std::fabs(lp.rhs[i]))) return;
            }
            double obj = 0.0;
            for (std::size_t j = 0; j < n; ++j) obj += lp.cost[j] * (*x)[j];
            if (!best || obj < *best) best = obj;
            return;
        }
        for (std::size_t i = from; i + (n - pick.size()) <= rows; ++i) {
            pick.push_back(i);
            recurse(i + 1);
            pick.pop_back();
        }
    };
    recurse(0);
    return best;
}

}  // namespace surge::testing
