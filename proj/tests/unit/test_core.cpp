#include <cmath>

#include "doctest.h"
#include "support/generators.hpp"
#include "surge/core/date.hpp"
#include "surge/core/projection.hpp"

using namespace surge;
using surge::testing::Rng;

namespace {

DailyGrid grid(std::vector<std::vector<double>> rows) {
    DailyGrid g(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t h = 0; h < rows.size(); ++h)
        for (std::size_t t = 0; t < rows[h].size(); ++t) g(h, t) = rows[h][t];
    return g;
}

std::vector<double> row(const DailyGrid& g, std::size_t h) {
    auto r = g.row(h);
    return {r.begin(), r.end()};
}

HospitalProfile profile(std::vector<int> beds) {
    HospitalProfile p;
    p.id = "H";
    p.level_capacities = std::move(beds);
    p.los_pmf = {0.0, 1.0};
    return p;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("dates") {
    const Date d = Date::parse("2021-12-15");
    CHECK(d.iso() == "2021-12-15");
    CHECK(d.plus_days(17).iso() == "2022-01-01");
    CHECK(d.days_until(Date::parse("2022-03-14")) == 89);
    CHECK_THROWS_AS(Date::parse("2021-13-01"), ValidationError);
    CHECK_THROWS_AS(Date::parse("15/12/2021"), ValidationError);
    Horizon h{Date::parse("2021-12-01"), Date::parse("2021-12-14")};
    CHECK(h.days() == 14);
    Horizon bad{Date::parse("2021-12-02"), Date::parse("2021-12-01")};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("admissions with transfers") {
    const DailyGrid arrivals = grid({{5}, {3}});
    TransferSeries none(2, 1);
    CHECK(project_admissions(arrivals, none) == arrivals);
    TransferSeries one(2, 1);
    one(0, 1, 0) = 2;
    const DailyGrid a = project_admissions(arrivals, one);
    CHECK(a(0, 0) == 3);
    CHECK(a(1, 0) == 5);
    one(0, 1, 0) = 6;
    CHECK_THROWS_AS(project_admissions(arrivals, one), InfeasibleTransferError);
    CHECK_THROWS_AS(project_admissions(arrivals, TransferSeries(3, 1)), ValidationError);
}

TEST_CASE("discharges are the LOS convolution") {
    const std::vector<LosPmf> unit{{0.0, 1.0}};
    CHECK(row(project_discharges(grid({{4, 0, 0}}), unit), 0) == std::vector<double>{0, 4, 0});
    const std::vector<LosPmf> split{{0.0, 0.5, 0.5}};
    CHECK(row(project_discharges(grid({{4, 0, 0}}), split), 0) == std::vector<double>{0, 2, 2});
    const std::vector<LosPmf> broken{{0.0, 0.7}};
    CHECK_THROWS_AS(project_discharges(grid({{1}}), broken), ValidationError);
}

TEST_CASE("discharges match the nested-loop definition") {
    Rng rng(11);
    const LosPmf pmf = surge::testing::geometric_pmf(0.3, 10);
    const DailyGrid a = surge::testing::random_grid(rng, 1, 14, 20.0);
    const std::vector<LosPmf> pmfs{pmf};
    const DailyGrid d = project_discharges(a, pmfs);
    for (std::size_t t = 0; t < 14; ++t) {
        double expect = 0.0;
        for (std::size_t tp = 0; tp <= t; ++tp)
            if (t - tp < pmf.size()) expect += pmf[t - tp] * a(0, tp);
        CHECK(std::fabs(d(0, t) - expect) <= 1e-12);
    }
}

TEST_CASE("census running sum") {
    const std::vector<double> seed{0.0};
    const auto r = project_census(grid({{4, 0, 0}}), grid({{0, 2, 2}}), seed);
    CHECK(row(r.census, 0) == std::vector<double>{4, 2, 0});
    CHECK_FALSE(r.negative_census);
    const auto empty = project_census(grid({{0, 0}}), grid({{0, 0}}), seed);
    CHECK(row(empty.census, 0) == std::vector<double>{0, 0});
    const auto neg = project_census(grid({{0}}), grid({{1}}), seed);
    CHECK(neg.negative_census);
}

TEST_CASE("initial census seeding") {
    const std::vector<double> observed{12.0, 0.0};
    const InitialState state = InitialState::from_census(observed);
    const std::vector<LosPmf> pmfs{{0.0, 0.5, 0.5}, {0.0, 1.0}};
    CHECK(state.census(pmfs) == observed);
    const auto result = project(grid({{0, 0, 0}, {0, 0, 0}}), TransferSeries(2, 3), pmfs, state);
    CHECK(row(result.census, 0) == std::vector<double>{6, 0, 0});
}

TEST_CASE("required levels") {
    const HospitalProfile p = profile({10, 20, 40});
    Utilization z;
    CHECK(required_level(0.0, p, z) == 0);
    CHECK(required_level(15.0, p, z) == 1);
    CHECK(required_level(41.0, p, z) == kOverflowLevel);
    z.max_fraction = 0.5;
    CHECK(required_level(15.0, p, z) == 2);
    z.max_fraction = 1.0;
    z.headroom = 2.0;
    CHECK(required_level(19.0, p, z) == 2);
}

TEST_CASE("profile validation") {
    const auto ladder = SurgeLevelLadder::standard();
    CHECK(ladder.size() == 6);
    HospitalProfile p = profile({420, 400, 450, 460, 470, 480});
    CHECK_THROWS_AS(p.validate(ladder), ValidationError);
    p.level_capacities = {420, 430, 450, 460, 470, 480};
    CHECK_NOTHROW(p.validate(ladder));
    p.level_capacities.pop_back();
    CHECK_THROWS_AS(p.validate(ladder), ValidationError);
}

TEST_CASE("projection properties on random cases") {
    Rng rng(2021);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(surge::testing::uniform_int(rng, 1, 4));
        const std::size_t days = static_cast<std::size_t>(surge::testing::uniform_int(rng, 1, 20));
        const int lmax = surge::testing::uniform_int(rng, 1, 8);
        std::vector<LosPmf> pmfs;
        for (std::size_t h = 0; h < n; ++h) pmfs.push_back(surge::testing::random_pmf(rng, lmax));
        const DailyGrid arrivals = surge::testing::random_grid(rng, n, days, 30.0);
        const TransferSeries s = surge::testing::random_transfers(rng, arrivals);
        const DailyGrid a = project_admissions(arrivals, s);
        for (std::size_t t = 0; t < days; ++t) {
            double in = 0.0, out = 0.0;
            for (std::size_t h = 0; h < n; ++h) {
                in += arrivals(h, t);
                out += a(h, t);
            }
            CHECK(std::fabs(in - out) <= 1e-9 * (1.0 + in));
        }
        const auto r = project(arrivals, s, pmfs, InitialState::empty(n));
        for (std::size_t h = 0; h < n; ++h) {
            double net = 0.0;
            for (std::size_t t = 0; t < days; ++t) net += r.admissions(h, t) - r.discharges(h, t);
            CHECK(std::fabs(r.census(h, days - 1) - net) <= 1e-9 * (1.0 + std::fabs(net)));
        }
    }
}

TEST_CASE("required level is monotone in census") {
    Rng rng(3);
    const HospitalProfile p = profile({5, 9, 9, 14, 30, 31});
    Utilization z{0.9, std::nullopt};
    int last = 0;
    for (double o = 0.0; o < 40.0; o += 0.25) {
        const int l = required_level(o, p, z);
        if (l == kOverflowLevel) {
            last = 99;
            continue;
        }
        CHECK(l >= last);
        last = l;
    }
}

}
