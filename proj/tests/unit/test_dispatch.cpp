#include "doctest.h"

#include "dispatch_cases.hpp"
#include "ies/dispatch.hpp"
#include "ies/error.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace ies;
using namespace ies::dispatch;

namespace {

DispatchProblem three_hour_problem() {
    DispatchProblem p;
    p.npp_capacity_mw = 500.0;
    p.config.htse_mw = 400.0;
    p.config.ft_kg_h = htse_h2_rate(400.0, p.params) / 2.0;
    p.config.storage_kg = p.config.ft_kg_h;
    p.initial_storage_kg = 0.0;
    p.fuel_prices = {0.8, 1.9, 1.9};
    p.prices = {10.0, 200.0, 10.0};
    return p;
}

}  // namespace

TEST_SUITE("dispatch") {

TEST_CASE("marginal hydrogen value from the PTC alone") {
    TechnoParams p;
    p.htse_var_om_per_mwh = 0.0;
    CHECK(marginal_h2_value(p, {}) == doctest::Approx(3.0 * 1000.0 / 38.912));
    CHECK(marginal_h2_value(p, {}) == doctest::Approx(77.10).epsilon(1e-4));
}

TEST_CASE("marginal hydrogen value without PTC or fuel is minus the variable cost") {
    TechnoParams p;
    p.h2_ptc = 0.0;
    CHECK(marginal_h2_value(p, {}) == doctest::Approx(-p.htse_var_om_per_mwh));
}

TEST_CASE("diesel revenue raises the threshold by the per-kg product value") {
    TechnoParams p;
    const ProductTriple wsc_diesel{0.0, 0.0, 1.99};
    const double per_kg = oracle::fuel_revenue_per_kg(p.ft_yields, p.densities_kg_per_l, p.liters_per_gallon, wsc_diesel);
    CHECK(per_kg == doctest::Approx(0.46 * 1.99 / (0.84 * 3.78541)));
    const double delta = marginal_h2_value(p, wsc_diesel) - marginal_h2_value(p, {});
    CHECK(delta == doctest::Approx(per_kg * 1000.0 / 38.912));
}

TEST_CASE("three-hour storage example banks hydrogen around the price spike") {
    const DispatchProblem p = three_hour_problem();
    const DispatchSchedule s = optimize_dispatch(p);
    const double f = p.config.ft_kg_h;
    CHECK(s.h2_kg_h[0] == doctest::Approx(2.0 * f));
    CHECK(s.h2_kg_h[1] == doctest::Approx(0.0));
    CHECK(s.h2_kg_h[2] == doctest::Approx(2.0 * f));
    CHECK(s.grid_mw[1] == doctest::Approx(p.npp_capacity_mw - p.params.ft_elec_demand_mw));
    const double brute = dispatch_oracle(p, 3);
    CHECK(std::abs(s.objective - brute) <= 1e-6 * std::abs(brute));
}

TEST_CASE("cheap power with ample storage runs the HTSE flat out") {
    DispatchProblem p;
    p.npp_capacity_mw = 1000.0;
    p.config = {600.0, 5000.0, 1.0e7};
    p.initial_storage_kg = 0.0;
    p.prices.assign(48, 5.0);
    const DispatchSchedule s = optimize_dispatch(p);
    for (std::size_t t = 0; t < s.hours(); ++t) {
        CHECK(s.htse_mw[t] == doctest::Approx(600.0));
        if (t > 0) {
            CHECK(s.storage_kg[t] >= s.storage_kg[t - 1]);
        }
    }
}

TEST_CASE("one-hour problem equals the best of its two corners") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> price(-50.0, 300.0);
    for (int i = 0; i < 50; ++i) {
        DispatchProblem p;
        p.npp_capacity_mw = 500.0;
        p.config = {300.0, 4000.0, 8000.0};
        p.initial_storage_kg = 4000.0;
        p.prices = {price(rng)};
        const double spec = effective_elec_spec(p.params);
        const double term = terminal_value_per_kg(p);
        const double base = p.npp_capacity_mw - p.params.ft_elec_demand_mw;
        auto value = [&](double h) {
            const double power = h * spec / 1000.0;
            return p.prices[0] * (base - power) - p.params.htse_var_om_per_mwh * power +
                   term * (p.initial_storage_kg + h - p.config.ft_kg_h);
        };
        // Linear in h, so the optimum sits at HTSE off (all grid) or HTSE at capacity.
        const double best = std::max(value(0.0), value(htse_h2_rate(300.0, p.params)));
        CHECK(dispatch_oracle(p, 2) == doctest::Approx(best));
        CHECK(optimize_dispatch(p).objective == doctest::Approx(best));
    }
}

TEST_CASE("zero capacity dispatch is the grid-only case") {
    DispatchProblem p;
    p.npp_capacity_mw = 769.0;
    p.prices = {10.0, -5.0, 80.0, 33.0};
    const DispatchSchedule s = optimize_dispatch(p);
    const double bau = 769.0 * std::accumulate(p.prices.begin(), p.prices.end(), 0.0);
    CHECK(s.objective == doctest::Approx(bau));
    CHECK(dispatch_oracle(p, 2) == doctest::Approx(bau));
}

TEST_CASE("optimizer matches brute force on lattice-aligned instances") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 60; ++i) {
        const DispatchProblem p = fixture::lattice_instance(rng, 4, 5);
        double brute = 0.0;
        try {
            brute = dispatch_oracle(p, 5);
        } catch (const InfeasibleError&) {
            CHECK_THROWS_AS(optimize_dispatch(p), InfeasibleError);
            continue;
        }
        const double lp = optimize_dispatch(p).objective;
        CHECK(std::abs(lp - brute) <= 1e-9 * std::max(1.0, std::abs(brute)));
    }
}

TEST_CASE("optimizer is never worse than the discretized search") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> price(-20.0, 200.0), frac(0.0, 1.0);
    int compared = 0;
    for (int i = 0; i < 80; ++i) {
        DispatchProblem p;
        p.npp_capacity_mw = 600.0;
        p.config.htse_mw = 100.0 + 400.0 * frac(rng);
        const double hmax = htse_h2_rate(p.config.htse_mw, p.params);
        p.config.ft_kg_h = hmax * frac(rng);
        p.config.storage_kg = 2.0 * hmax * frac(rng);
        p.initial_storage_kg = p.config.storage_kg * frac(rng);
        p.fuel_prices = {1.0, 2.0, 2.0};
        for (int t = 0; t < 5; ++t) {
            p.prices.push_back(price(rng));
        }
        double brute = 0.0;
        try {
            brute = dispatch_oracle(p, 9);
        } catch (const InfeasibleError&) {
            continue;
        }
        ++compared;
        CHECK(optimize_dispatch(p).objective >= brute - 1e-9 * std::abs(brute));
    }
    CHECK(compared > 20);
}

TEST_CASE("zero storage forces the FT-sustaining level every hour") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
        const DispatchProblem p = fixture::week_instance(rng, 0.0, 0.0);
        const DispatchSchedule s = optimize_dispatch(p);
        const double power = htse_power_for(p.config.ft_kg_h, p.params);
        for (std::size_t t = 0; t < s.hours(); ++t) {
            CHECK(s.htse_mw[t] == doctest::Approx(power));
            CHECK(s.grid_mw[t] == doctest::Approx(p.npp_capacity_mw - p.params.ft_elec_demand_mw - power));
        }
    }
}

TEST_CASE("unconstrained storage gives a single price threshold") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10; ++i) {
        const DispatchProblem p = fixture::week_instance(rng, 1000.0, 0.5);
        const DispatchSchedule s = optimize_dispatch(p);
        const double mv = marginal_h2_value(p.params, p.fuel_prices);
        for (std::size_t t = 0; t < s.hours(); ++t) {
            if (p.prices[t] < mv) {
                CHECK(s.htse_mw[t] == doctest::Approx(p.config.htse_mw));
            } else {
                CHECK(s.htse_mw[t] == doctest::Approx(0.0));
            }
        }
    }
}

TEST_CASE("hydrogen is conserved through storage") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 10; ++i) {
        const DispatchProblem p = fixture::week_instance(rng, 6.0, 0.5);
        const DispatchSchedule s = optimize_dispatch(p);
        const double produced = std::accumulate(s.h2_kg_h.begin(), s.h2_kg_h.end(), 0.0);
        const double consumed = p.config.ft_kg_h * static_cast<double>(s.hours());
        CHECK(std::abs(produced - consumed - (s.storage_kg.back() - p.initial_storage_kg)) <= 1e-6 * std::max(1.0, produced));
        for (std::size_t t = 0; t < s.hours(); ++t) {
            CHECK(s.storage_kg[t] >= -1e-6);
            CHECK(s.storage_kg[t] <= p.config.storage_kg + 1e-6);
            CHECK(s.h2_kg_h[t] <= htse_h2_rate(p.config.htse_mw, p.params) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("raising prices never lowers grid sales") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i) {
        DispatchProblem p = fixture::week_instance(rng, 6.0, 0.5);
        const double before = annual_dispatch_summary(optimize_dispatch(p), p.params).mwh_to_grid;
        for (double& v : p.prices) {
            v += 15.0;
        }
        const double after = annual_dispatch_summary(optimize_dispatch(p), p.params).mwh_to_grid;
        CHECK(after >= before - 1e-6);
    }
}

TEST_CASE("storage that cannot carry the FT names the failing hour") {
    DispatchProblem p;
    p.npp_capacity_mw = 500.0;
    p.config.htse_mw = 100.0;
    const double hmax = htse_h2_rate(100.0, p.params);
    p.config.ft_kg_h = hmax + 100.0;
    p.config.storage_kg = 250.0;
    p.initial_storage_kg = 250.0;
    p.prices.assign(10, 30.0);
    try {
        optimize_dispatch(p);
        FAIL("expected infeasibility");
    } catch (const InfeasibleError& e) {
        CHECK(e.first_failing_hour() == 2);
    }
}

TEST_CASE("annual summary of degenerate schedules") {
    DispatchProblem p;
    p.npp_capacity_mw = 1194.0;
    p.prices.assign(8760, 30.0);
    const DispatchSummary grid_only = annual_dispatch_summary(optimize_dispatch(p), p.params);
    CHECK(grid_only.h2_produced_kg == 0.0);
    CHECK(grid_only.mwh_to_grid == doctest::Approx(1194.0 * 8760.0));

    p.config.htse_mw = 985.1;
    p.config.ft_kg_h = htse_h2_rate(985.1, p.params);
    const DispatchSummary full = annual_dispatch_summary(optimize_dispatch(p), p.params);
    CHECK(full.h2_produced_kg == doctest::Approx(p.config.ft_kg_h * 8760.0));
    CHECK(full.h2_to_ft_kg == doctest::Approx(p.config.ft_kg_h * 8760.0));
    CHECK(full.products_kg.jet == doctest::Approx(0.84 * p.config.ft_kg_h * 8760.0));
    CHECK(full.mwh_to_grid == doctest::Approx((1194.0 - 14.9 - 985.1) * 8760.0));
}

TEST_CASE("dispatch problem contract") {
    DispatchProblem p;
    p.npp_capacity_mw = 500.0;
    CHECK_THROWS_AS(optimize_dispatch(p), ContractError);
    p.prices = {1.0};
    p.config.storage_kg = 10.0;
    p.initial_storage_kg = 11.0;
    CHECK_THROWS_AS(optimize_dispatch(p), ContractError);
    CHECK(default_initial_storage(IesConfiguration{0.0, 0.0, 10.0}) == 5.0);
}

}
