#include "doctest.h"

#include "ies/error.hpp"
#include "ies/plant.hpp"
#include "sites.hpp"

#include <cmath>
#include <random>

using namespace ies;

TEST_SUITE("plantmodel") {

TEST_CASE("effective electricity spec charges thermal draw as lost electricity") {
    TechnoParams p;
    CHECK(effective_elec_spec(p) == doctest::Approx(36.8 + 6.4 * 0.33).epsilon(1e-12));
    CHECK(effective_elec_spec(p) == doctest::Approx(38.912));
    p.thermal_to_elec_eff = 0.0;
    CHECK(effective_elec_spec(p) == doctest::Approx(36.8));
    p.effective_spec_override = 39.72;
    CHECK(effective_elec_spec(p) == doctest::Approx(39.72));
}

TEST_CASE("htse hydrogen rate") {
    TechnoParams p;
    CHECK(htse_h2_rate(0.0, p) == 0.0);
    CHECK(htse_h2_rate(1.0, p) == doctest::Approx(1000.0 / 38.912));
    CHECK(htse_h2_rate(1.0, p) == doctest::Approx(25.699).epsilon(1e-4));
    p.effective_spec_override = 39.72;
    CHECK(htse_h2_rate(985.1, p) == doctest::Approx(24801.1).epsilon(1e-4));
    CHECK(htse_power_for(htse_h2_rate(400.0, p), p) == doctest::Approx(400.0));
    CHECK_THROWS_AS(htse_h2_rate(-1.0, p), ContractError);
    CHECK_THROWS_AS(htse_h2_rate(11.0, p, 10.0), ContractError);
}

TEST_CASE("ft product outputs") {
    TechnoParams p;
    const ProductTriple one = ft_outputs(1.0, p);
    CHECK(one.naphtha == doctest::Approx(0.69));
    CHECK(one.jet == doctest::Approx(0.84));
    CHECK(one.diesel == doctest::Approx(0.46));
    const ProductTriple zero = ft_outputs(0.0, p);
    CHECK(zero.sum() == 0.0);
    const ProductTriple ref = ft_outputs(10625.0, p);
    CHECK(ref.naphtha == doctest::Approx(7331.25));
    CHECK(ref.jet == doctest::Approx(8925.0));
    CHECK(ref.diesel == doctest::Approx(4887.5));
}

TEST_CASE("gallons per kg of hydrogen") {
    TechnoParams p;
    const ProductTriple g = gallons_per_kg_h2(p);
    CHECK(g.diesel == doctest::Approx(0.46 / 0.84 / 3.78541));
    CHECK(g.jet == doctest::Approx(0.84 / 0.80 / 3.78541));
    CHECK(g.naphtha == doctest::Approx(0.69 / 0.745 / 3.78541));
}

TEST_CASE("co2 demand per kg hydrogen follows the carbon balance of the products") {
    TechnoParams p;
    // Long paraffin chains are CH2 units: 12/14 carbon by mass.
    const double carbon_fraction = 12.0 / 14.0;
    const double oracle = p.ft_yields.sum() * carbon_fraction * 44.0 / 12.0;
    CHECK(p.co2_per_h2 == doctest::Approx(oracle).epsilon(0.01));
    CHECK(co2_demand(0.0, p) == 0.0);
    // 19.0 t-H2/h against the 1.0 Mt/yr single-unit bound.
    CHECK(co2_demand(19000.0, p) == doctest::Approx(1.0e6).epsilon(0.05));
    CHECK(co2_demand(2000.0, p) == doctest::Approx(2.0 * co2_demand(1000.0, p)));
}

TEST_CASE("transfer functions are homogeneous") {
    TechnoParams p;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 500.0), scale(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        const double s = scale(rng);
        CHECK(htse_h2_rate(s * x, p) == doctest::Approx(s * htse_h2_rate(x, p)).epsilon(1e-12));
        CHECK(co2_demand(s * x, p) == doctest::Approx(s * co2_demand(x, p)).epsilon(1e-12));
        CHECK(ft_outputs(s * x, p).sum() == doctest::Approx(s * ft_outputs(x, p).sum()).epsilon(1e-12));
    }
}

TEST_CASE("capacity ranges reproduce the published table") {
    const TechnoParams p = fixture::range_params();
    for (const auto& c : fixture::five_sites()) {
        CAPTURE(c.site.id);
        const CapacityRanges r = capacity_ranges(c.site, p);
        CHECK(std::abs(r.htse_mw.min - c.htse_min) <= 0.1);
        CHECK(std::abs(r.htse_mw.max - c.htse_max) <= 0.1);
        CHECK(std::abs(r.ft_kg_h.min / 1000.0 - c.ft_min_tph) <= 0.1);
        CHECK(std::abs(r.ft_kg_h.max / 1000.0 - c.ft_max_tph) <= 0.1);
        CHECK(std::abs(r.storage_kg.min / 1000.0 - c.storage_min_t) <= 0.1);
        CHECK(std::abs(r.storage_kg.max / 1000.0 - c.storage_max_t) / c.storage_max_t <= 0.005);
    }
}

TEST_CASE("capacity range of a small station") {
    TechnoParams p;
    const auto pi = fixture::make_site("pi", 522.0, {522.0});
    CHECK(capacity_ranges(pi, p).htse_mw.max == doctest::Approx(507.1));
    const auto tiny = fixture::make_site("tiny", 100.0, {100.0});
    CHECK_THROWS_AS(capacity_ranges(tiny, p), InfeasibleError);
}

TEST_CASE("co2 upper bound per station within 10% of the published bounds") {
    const TechnoParams p = fixture::range_params();
    for (const auto& c : fixture::five_sites()) {
        CAPTURE(c.site.id);
        CHECK(std::abs(co2_upper_bound(c.site, p) / c.co2_bound_tpy - 1.0) <= 0.10);
    }
}

TEST_CASE("lattice axis") {
    const auto a = CapacityRanges::axis({0.0, 9.0}, 10);
    REQUIRE(a.size() == 10);
    CHECK(a.front() == 0.0);
    CHECK(a.back() == 9.0);
    CHECK(a[4] == doctest::Approx(4.0));
    CHECK(CapacityRanges::axis({3.0, 3.0}, 10).size() == 1);
}

TEST_CASE("configuration contract") {
    TechnoParams p;
    const auto site = fixture::make_site("s", 1194.0, {1194.0});
    CHECK_NOTHROW(validate_configuration({985.1, 24000.0, 0.0}, site, p));
    CHECK_THROWS_AS(validate_configuration({-1.0, 0.0, 0.0}, site, p), ContractError);
    CHECK_THROWS_AS(validate_configuration({1200.0, 0.0, 0.0}, site, p), ContractError);
    CHECK_NOTHROW(validate_configuration({0.0, 0.0, 0.0}, site, p));
}

TEST_CASE("component costs scale linearly from the reference plant") {
    TechnoParams p;
    CHECK(htse_capex(1.0, p) == doctest::Approx(703000.0));
    CHECK(ft_capex(10625.0, p) == doctest::Approx(158102945.0));
    CHECK(ft_capex(21250.0, p) == doctest::Approx(2.0 * 158102945.0));
    CHECK(storage_capex(1000.0, p) == doctest::Approx(500000.0));
    CHECK(htse_fixed_om(10.0, p) == doctest::Approx(326000.0));
    CHECK(ft_fixed_om(10625.0, p) == doctest::Approx(7640007.0));
    CHECK(ft_var_om(10625.0, p) == doctest::Approx(21732221.0));
    CHECK(ft_var_om(0.0, p) == 0.0);
}

}
