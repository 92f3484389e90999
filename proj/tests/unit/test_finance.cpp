#include "doctest.h"

#include "ies/error.hpp"
#include "ies/finance.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace ies;
using namespace ies::finance;

namespace {

co2::SupplyCurve flat_curve(double cost) {
    co2::SupplyCurve c;
    c.points.push_back({1.0e8, cost, cost, "X"});
    return c;
}

std::vector<dispatch::DispatchSummary> steady_years(int n, double ft_kg_h, double grid_mw, double price) {
    dispatch::DispatchSummary d;
    d.hours = 8760.0;
    d.h2_produced_kg = d.h2_to_ft_kg = ft_kg_h * 8760.0;
    d.mwh_to_grid = grid_mw * 8760.0;
    d.mean_grid_mw = grid_mw;
    d.grid_revenue = d.mwh_to_grid * price;
    return std::vector<dispatch::DispatchSummary>(static_cast<std::size_t>(n), d);
}

SiteParams site(double mw, double cap_rate = 0.0) {
    SiteParams s;
    s.id = "s";
    s.npp_capacity_mw = mw;
    s.capacity_payment_rate = cap_rate;
    return s;
}

CashflowLedger random_ledger(std::mt19937_64& rng, int life) {
    std::uniform_real_distribution<double> u(-5.0e7, 5.0e7);
    CashflowLedger l(life);
    for (int y = 0; y <= life; ++y) {
        const auto i = static_cast<std::size_t>(y);
        l.electricity[i] = u(rng);
        l.h2_ptc[i] = u(rng);
        l.capex[i] = u(rng);
        l.co2_feedstock[i] = u(rng);
        l.net[i] = l.reconcile(y);
    }
    return l;
}

}  // namespace

TEST_SUITE("finance") {

TEST_CASE("macrs fractions") {
    const auto f = macrs_schedule(15);
    const auto ref = oracle::macrs(15);
    REQUIRE(f.size() == 16);
    CHECK(f[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(0.095).epsilon(1e-12));
    CHECK(std::abs(std::accumulate(f.begin(), f.end(), 0.0) - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(std::abs(f[i] - ref[i]) <= 1e-12);
    }
    // Straight line takes over in the seventh tax year.
    for (std::size_t i = 7; i + 1 < f.size(); ++i) {
        CHECK(f[i] <= f[i - 1] + 1e-15);
    }
    CHECK(f.back() == doctest::Approx(f[14] / 2.0));
    CHECK_THROWS_AS(macrs_schedule(7), ContractError);
}

TEST_CASE("npv basics") {
    const std::vector<double> cf{-100.0, 110.0};
    CHECK(std::abs(npv(cf, 0.10)) < 1e-12);
    const std::vector<double> zeros(21, 0.0);
    CHECK(npv(zeros, 0.10) == 0.0);
}

TEST_CASE("npv matches the discounting oracle on random ledgers") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> wacc(0.0, 0.2);
    for (int i = 0; i < 50; ++i) {
        const CashflowLedger l = random_ledger(rng, 20);
        const double r = wacc(rng);
        CHECK(std::abs(ledger_npv(l, r) - oracle::discount(l.net, r)) <= 1.0);
    }
}

TEST_CASE("delta npv of identical ledgers is zero") {
    std::mt19937_64 rng(1);
    const CashflowLedger l = random_ledger(rng, 20);
    FinancialParams fin;
    CHECK(delta_npv(l, l, fin) == 0.0);
}

TEST_CASE("delta npv of a one million dollar annuity") {
    CashflowLedger bau(20), ies(20);
    for (int y = 1; y <= 20; ++y) {
        ies.net[static_cast<std::size_t>(y)] = 1.0e6;
    }
    FinancialParams fin;
    CHECK(delta_npv(ies, bau, fin) == doctest::Approx(8.514e6).epsilon(1e-4));
    const double annuity = 1.0e6 * (1.0 - std::pow(1.1, -20)) / 0.1;
    CHECK(delta_npv(ies, bau, fin) == doctest::Approx(annuity).epsilon(1e-12));
}

TEST_CASE("a common cashflow line cancels in delta npv") {
    std::mt19937_64 rng(2);
    CashflowLedger a = random_ledger(rng, 20), b = random_ledger(rng, 20);
    FinancialParams fin;
    const double before = delta_npv(a, b, fin);
    for (int y = 1; y <= 20; ++y) {
        a.net[static_cast<std::size_t>(y)] -= 3.0e7;
        b.net[static_cast<std::size_t>(y)] -= 3.0e7;
    }
    CHECK(delta_npv(a, b, fin) == doctest::Approx(before));
}

TEST_CASE("delta npv is linear in a cashflow line") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0e7, 1.0e7);
    FinancialParams fin;
    for (int i = 0; i < 20; ++i) {
        const CashflowLedger a = random_ledger(rng, 20), b = random_ledger(rng, 20);
        std::vector<double> x(21), z(21);
        for (auto& v : x) v = u(rng);
        for (auto& v : z) v = u(rng);
        auto shifted = [&](const std::vector<double>& d, double s) {
            CashflowLedger c = a;
            for (std::size_t y = 0; y < 21; ++y) {
                c.net[y] += s * d[y];
            }
            return delta_npv(c, b, fin) - delta_npv(a, b, fin);
        };
        std::vector<double> xz(21);
        for (std::size_t y = 0; y < 21; ++y) {
            xz[y] = x[y] + z[y];
        }
        CHECK(shifted(xz, 1.0) == doctest::Approx(shifted(x, 1.0) + shifted(z, 1.0)).epsilon(1e-9));
        CHECK(shifted(x, 2.5) == doctest::Approx(2.5 * shifted(x, 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("higher discount rate lowers npv of non-negative later cashflows") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0e6);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> cf(21);
        cf[0] = -5.0e6;
        for (std::size_t y = 1; y < cf.size(); ++y) {
            cf[y] = u(rng);
        }
        double prev = npv(cf, 0.0);
        for (double r = 0.01; r < 0.3; r += 0.01) {
            const double v = npv(cf, r);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("change in profitability") {
    CHECK(change_in_profitability(150.0, 200.0, 100.0) == -0.50);
    CHECK(change_in_profitability(200.0, 200.0, 100.0) == 0.0);
    CHECK(change_in_profitability(100.0, 200.0, 100.0) == -1.0);
    CHECK_THROWS_AS(change_in_profitability(1.0, 2.0, 2.0), ContractError);
}

TEST_CASE("combined tax rate deducts state tax federally") {
    FinancialParams fin;
    fin.state_tax = 0.095;
    CHECK(combined_tax_rate(fin) == doctest::Approx(0.21 + 0.095 * 0.79));
}

TEST_CASE("zero-capacity ledger equals the grid-only ledger") {
    FinancialParams fin;
    fin.state_tax = 0.075;
    TechnoParams tech;
    const SiteParams s = site(769.0, 18250.0);
    LedgerInputs in;
    in.years = steady_years(20, 0.0, 769.0, 25.0);
    in.fuel_prices.assign(20, ProductTriple{1.0, 2.0, 2.0});
    const CashflowLedger ies = build_ledger(in, fin, tech, s);
    std::vector<double> revenue(20, 769.0 * 8760.0 * 25.0);
    const CashflowLedger bau = build_bau_ledger(revenue, fin, s);
    for (std::size_t y = 0; y <= 20; ++y) {
        CHECK(ies.net[y] == doctest::Approx(bau.net[y]));
        CHECK(ies.capacity_payment[y] == doctest::Approx(bau.capacity_payment[y]));
        CHECK(ies.foregone_capacity[y] == 0.0);
        CHECK(ies.capex[y] == 0.0);
    }
    CHECK(delta_npv(ies, bau, fin) == doctest::Approx(0.0));
}

TEST_CASE("PTC line for a 19.9 t/h FT") {
    FinancialParams fin;
    TechnoParams tech;
    const co2::SupplyCurve curve = flat_curve(40.0);
    LedgerInputs in;
    in.config = {800.0, 19900.0, 0.0};
    in.years = steady_years(20, 19900.0, 100.0, 30.0);
    in.fuel_prices.assign(20, ProductTriple{0.8, 1.9, 1.8});
    in.supply_curve = &curve;
    const CashflowLedger l = build_ledger(in, fin, tech, site(1000.0));
    CHECK(l.h2_ptc[1] == doctest::Approx(19900.0 * 8760.0 * 3.0));
    CHECK(l.h2_ptc[1] / 1e6 == doctest::Approx(523.0).epsilon(1e-3));
    CHECK(l.h2_ptc[0] == 0.0);

    fin.ptc_duration = 10;
    const CashflowLedger short_ptc = build_ledger(in, fin, tech, site(1000.0));
    CHECK(short_ptc.h2_ptc[10] > 0.0);
    CHECK(short_ptc.h2_ptc[11] == 0.0);
}

TEST_CASE("every ledger reconciles and escalates costs") {
    FinancialParams fin;
    fin.state_tax = 0.098;
    TechnoParams tech;
    const co2::SupplyCurve curve = flat_curve(75.0);
    LedgerInputs in;
    in.config = {507.1, 12000.0, 30000.0};
    in.years = steady_years(20, 12000.0, 0.0, 10.0);
    in.fuel_prices.assign(20, ProductTriple{1.08, 1.80, 1.80});
    in.supply_curve = &curve;
    const CashflowLedger l = build_ledger(in, fin, tech, site(522.0, 1825.0));
    for (int y = 0; y <= 20; ++y) {
        const auto i = static_cast<std::size_t>(y);
        const double manual = l.capex[i] + l.fixed_om[i] + l.variable_om[i] + l.electricity[i] + l.capacity_payment[i] +
                              l.fuel_naphtha[i] + l.fuel_jet[i] + l.fuel_diesel[i] + l.h2_ptc[i] + l.co2_feedstock[i] +
                              l.foregone_capacity[i] + l.tax[i];
        CHECK(l.net[i] == doctest::Approx(manual));
    }
    CHECK(l.fixed_om[5] == doctest::Approx(l.fixed_om[1] * std::pow(1.0 + fin.inflation, 4)));
    CHECK(l.co2_feedstock[1] == doctest::Approx(-75.0 * 12000.0 * 8760.0 * 6.2 / 1000.0));
    CHECK(l.foregone_capacity[1] == doctest::Approx(-1825.0 * 522.0));
    const double capex = htse_capex(507.1, tech) + ft_capex(12000.0, tech) + storage_capex(30000.0, tech);
    CHECK(l.capex[0] == doctest::Approx(-capex));
    double dep = 0.0;
    for (double v : l.depreciation) {
        dep += v;
    }
    CHECK(dep == doctest::Approx(-capex));
}

TEST_CASE("with zero tax the net is revenue minus cost and depreciation is irrelevant") {
    FinancialParams fin;
    fin.federal_tax = 0.0;
    TechnoParams tech;
    const co2::SupplyCurve curve = flat_curve(50.0);
    LedgerInputs in;
    in.config = {600.0, 14000.0, 0.0};
    in.years = steady_years(20, 14000.0, 50.0, 30.0);
    in.fuel_prices.assign(20, ProductTriple{0.8, 1.9, 1.8});
    in.supply_curve = &curve;
    const CashflowLedger l = build_ledger(in, fin, tech, site(700.0));
    for (std::size_t y = 0; y <= 20; ++y) {
        CHECK(l.tax[y] == 0.0);
        CHECK(l.net[y] == doctest::Approx(l.reconcile(static_cast<int>(y))));
    }
    CashflowLedger no_dep = l;
    for (auto& v : no_dep.depreciation) {
        v = 0.0;
    }
    CHECK(ledger_npv(no_dep, fin.wacc) == ledger_npv(l, fin.wacc));
}

TEST_CASE("tax loss rules") {
    FinancialParams fin;
    TechnoParams tech;
    LedgerInputs in;
    in.config = {100.0, 0.0, 0.0};
    in.years = steady_years(20, 0.0, 0.0, 0.0);
    in.fuel_prices.assign(20, ProductTriple{});
    const CashflowLedger zero = build_ledger(in, fin, tech, site(200.0));
    CHECK(zero.taxable_income[1] < 0.0);
    CHECK(zero.tax[1] == 0.0);
    fin.tax_losses = TaxLossRule::offset;
    const CashflowLedger offset = build_ledger(in, fin, tech, site(200.0));
    CHECK(offset.tax[1] == doctest::Approx(-offset.taxable_income[1] * combined_tax_rate(fin)));
    CHECK(offset.tax[1] > 0.0);
}

TEST_CASE("PTC share of revenue") {
    CashflowLedger l(2);
    l.h2_ptc = {0.0, 70.0, 70.0};
    l.electricity = {0.0, 10.0, 10.0};
    l.fuel_jet = {0.0, 20.0, 20.0};
    CHECK(ptc_revenue_share(l) == doctest::Approx(0.7));
    CHECK(ptc_revenue_share(CashflowLedger(2)) == 0.0);
}

TEST_CASE("ledger contract") {
    FinancialParams fin;
    TechnoParams tech;
    LedgerInputs in;
    in.config = {600.0, 14000.0, 0.0};
    in.years = steady_years(20, 14000.0, 50.0, 30.0);
    in.fuel_prices.assign(20, ProductTriple{});
    CHECK_THROWS_AS(build_ledger(in, fin, tech, site(700.0)), ContractError);
    in.years.pop_back();
    CHECK_THROWS_AS(build_ledger(in, fin, tech, site(700.0)), ContractError);
    fin.wacc = -2.0;
    CHECK_THROWS_AS(fin.validate(), ContractError);
}

}
