#include "basis_factor.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>

namespace surge::solver::detail {

namespace {
constexpr double kEtaDropTolerance = 1e-14;
}

struct BasisFactor::Lu {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> solver;
    Eigen::VectorXd work;
};

BasisFactor::BasisFactor(const LpForm& form) : form_(form), lu_(std::make_unique<Lu>()) {}

BasisFactor::~BasisFactor() = default;

bool BasisFactor::refactor(std::span<const int> head) {
    const int m = form_.m;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(m) * 2);
    for (int pos = 0; pos < m; ++pos) {
        const int j = head[static_cast<std::size_t>(pos)];
        if (j >= form_.n) {
            entries.emplace_back(j - form_.n, pos, -1.0);
        } else {
            for (int k = form_.col_start[j]; k < form_.col_start[j + 1]; ++k)
                entries.emplace_back(form_.col_row[k], pos, form_.col_val[k]);
        }
    }
    Eigen::SparseMatrix<double> basis(m, m);
    basis.setFromTriplets(entries.begin(), entries.end());
    basis.makeCompressed();
    lu_->solver.analyzePattern(basis);
    lu_->solver.factorize(basis);
    etas_.clear();
    eta_nonzeros_ = 0;
    lu_->work.resize(m);
    return lu_->solver.info() == Eigen::Success;
}

void BasisFactor::ftran(std::vector<double>& rhs) const {
    Eigen::Map<Eigen::VectorXd> v(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    lu_->work = lu_->solver.solve(v);
    v = lu_->work;
    for (const Eta& eta : etas_) {
        const double xr = rhs[static_cast<std::size_t>(eta.pivot_row)] / eta.pivot;
        rhs[static_cast<std::size_t>(eta.pivot_row)] = xr;
        if (xr == 0.0) continue;
        for (std::size_t k = 0; k < eta.index.size(); ++k)
            rhs[static_cast<std::size_t>(eta.index[k])] -= eta.value[k] * xr;
    }
}

void BasisFactor::btran(std::vector<double>& rhs) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double acc = rhs[static_cast<std::size_t>(it->pivot_row)];
        for (std::size_t k = 0; k < it->index.size(); ++k)
            acc -= it->value[k] * rhs[static_cast<std::size_t>(it->index[k])];
        rhs[static_cast<std::size_t>(it->pivot_row)] = acc / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> v(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    lu_->work = lu_->solver.transpose().solve(v);
    v = lu_->work;
}

void BasisFactor::update(int r, std::span<const double> alpha) {
    Eta eta;
    eta.pivot_row = r;
    eta.pivot = alpha[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (static_cast<int>(i) == r) continue;
        if (std::fabs(alpha[i]) > kEtaDropTolerance) {
            eta.index.push_back(static_cast<int>(i));
            eta.value.push_back(alpha[i]);
        }
    }
    eta_nonzeros_ += eta.index.size() + 1;
    etas_.push_back(std::move(eta));
}

}  // namespace surge::solver::detail
