#include "surge/plan/census_terms.hpp"

#include "surge/core/projection.hpp"

namespace surge::plan {

CensusTerms::CensusTerms(const PlanData& data) {
    const auto pmfs = data.pmfs();
    const TransferSeries none(data.num_hospitals(), data.num_days());
    base_ = project(data.arrivals, none, pmfs, data.initial).census;
    for (const auto& pmf : pmfs) {
        auto s = los_survival(pmf);
        while (!s.empty() && s.back() == 0.0) s.pop_back();
        survival_.push_back(std::move(s));
    }
}

double CensusTerms::evaluate(std::size_t h, std::size_t t, const TransferSeries& transfers) const {
    double o = base_(h, t);
    const std::size_t w = window(h);
    for (std::size_t age = 0; age < w && age <= t; ++age) {
        const std::size_t day = t - age;
        o += weight(h, age) * (transfers.inbound(h, day) - transfers.outbound(h, day));
    }
    return o;
}

}  // namespace surge::plan
