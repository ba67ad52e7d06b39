#pragma once

#include <vector>

#include "surge/core/types.hpp"
#include "surge/plan/inputs.hpp"

namespace surge::plan {

/// Census as an affine function of the transfers:
///   o[h][t] = base[h][t] + sum_{t' <= t} P(L_h > t - t') * net[h][t'],
/// where base is the no-transfer projection and net[h][t'] is inbound minus
/// outbound transfers on day t'. Only the last Lmax days carry weight.
class CensusTerms {
public:
    explicit CensusTerms(const PlanData& data);

    std::size_t hospitals() const { return base_.hospitals(); }
    std::size_t days() const { return base_.days(); }
    double base(std::size_t h, std::size_t t) const { return base_(h, t); }
    const DailyGrid& base_grid() const { return base_; }

    /// Weight of a net admission `age` days before the census day.
    double weight(std::size_t h, std::size_t age) const {
        const auto& s = survival_[h];
        return age < s.size() ? s[age] : 0.0;
    }
    /// Ages with non-zero weight are all below this.
    std::size_t window(std::size_t h) const { return survival_[h].size(); }

    /// Census under the given transfers.
    double evaluate(std::size_t h, std::size_t t, const TransferSeries& transfers) const;

private:
    DailyGrid base_;
    std::vector<std::vector<double>> survival_;
};

}  // namespace surge::plan
