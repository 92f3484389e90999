#include "ies/finance.hpp"

#include "ies/csv.hpp"
#include "ies/error.hpp"

#include <cmath>
#include <fstream>

namespace ies::finance {

void FinancialParams::validate() const {
    if (project_life < 1) {
        throw ContractError("project_life must be >= 1");
    }
    if (!(wacc > 0.0 && wacc < 1.0)) {
        throw ContractError("wacc must lie in (0, 1)");
    }
    if (!(inflation > -1.0)) {
        throw ContractError("inflation must exceed -1");
    }
    if (!(federal_tax >= 0.0 && federal_tax < 1.0) || !(state_tax >= 0.0 && state_tax < 1.0)) {
        throw ContractError("tax rates must lie in [0, 1)");
    }
    if (ptc_duration < 0) {
        throw ContractError("ptc_duration must be >= 0");
    }
    macrs_schedule(macrs_years);
}

double combined_tax_rate(const FinancialParams& fin) {
    return fin.federal_tax + fin.state_tax * (1.0 - fin.federal_tax);
}

std::vector<double> macrs_schedule(int years) {
    if (years != 15) {
        throw ContractError("macrs_schedule: only the 15-year class is supported");
    }
    const double rate = 1.5 / years;
    std::vector<double> out;
    double basis = 1.0;
    // Half-year convention: the recovery period spans years + 1 tax years,
    // with a half year at each end.
    double remaining_life = years;
    for (int y = 0; y <= years; ++y) {
        const double period = (y == 0) ? 0.5 : 1.0;
        const double declining = basis * rate * period;
        const double straight = remaining_life > 0.0 ? basis * period / remaining_life : basis;
        double d = std::max(declining, straight);
        if (y == years) {
            d = basis;
        }
        d = std::min(d, basis);
        out.push_back(d);
        basis -= d;
        remaining_life -= period;
    }
    return out;
}

double npv(std::span<const double> cashflows, double wacc) {
    double value = 0.0;
    double factor = 1.0;
    for (double cf : cashflows) {
        value += cf / factor;
        factor *= 1.0 + wacc;
    }
    return value;
}

double change_in_profitability(double npv_case, double npv_ref, double npv_baseline) {
    const double denom = npv_ref - npv_baseline;
    if (denom == 0.0) {
        throw ContractError("change_in_profitability: reference NPV equals the baseline NPV");
    }
    return (npv_case - npv_ref) / denom;
}

CashflowLedger::CashflowLedger(int project_life) : years(project_life) {
    const auto n = static_cast<std::size_t>(project_life + 1);
    for (auto* v : {&capex, &fixed_om, &variable_om, &electricity, &capacity_payment, &fuel_naphtha, &fuel_jet,
                    &fuel_diesel, &h2_ptc, &co2_feedstock, &foregone_capacity, &depreciation, &taxable_income, &tax,
                    &net}) {
        v->assign(n, 0.0);
    }
}

std::vector<CashflowLedger::Line> CashflowLedger::lines() const {
    return {
        {"capex", &capex, true},
        {"fixed_om", &fixed_om, true},
        {"variable_om", &variable_om, true},
        {"electricity", &electricity, true},
        {"capacity_payment", &capacity_payment, true},
        {"fuel_naphtha", &fuel_naphtha, true},
        {"fuel_jet", &fuel_jet, true},
        {"fuel_diesel", &fuel_diesel, true},
        {"h2_ptc", &h2_ptc, true},
        {"co2_feedstock", &co2_feedstock, true},
        {"foregone_capacity", &foregone_capacity, true},
        {"depreciation", &depreciation, false},
        {"tax", &tax, true},
        {"net", &net, false},
    };
}

double CashflowLedger::reconcile(int year) const {
    const auto y = static_cast<std::size_t>(year);
    double sum = 0.0;
    for (const auto& line : lines()) {
        if (line.cash) {
            sum += (*line.values)[y];
        }
    }
    return sum;
}

namespace {

void finish_year(CashflowLedger& l, std::size_t y, double rate, TaxLossRule rule) {
    const double taxable = l.electricity[y] + l.capacity_payment[y] + l.fuel_naphtha[y] + l.fuel_jet[y] +
                           l.fuel_diesel[y] + l.h2_ptc[y] + l.fixed_om[y] + l.variable_om[y] + l.co2_feedstock[y] +
                           l.foregone_capacity[y] + l.depreciation[y];
    l.taxable_income[y] = taxable;
    const double base = rule == TaxLossRule::zero ? std::max(0.0, taxable) : taxable;
    l.tax[y] = -base * rate;
    l.net[y] = l.reconcile(static_cast<int>(y));
}

}  // namespace

CashflowLedger build_ledger(const LedgerInputs& in, const FinancialParams& fin, const TechnoParams& tech,
                            const SiteParams& site) {
    fin.validate();
    const int life = fin.project_life;
    if (static_cast<int>(in.years.size()) != life) {
        throw ContractError("build_ledger: need one dispatch summary per project year");
    }
    if (static_cast<int>(in.fuel_prices.size()) != life) {
        throw ContractError("build_ledger: need one fuel price entry per project year");
    }
    const IesConfiguration& c = in.config;
    if (c.ft_built() && in.supply_curve == nullptr) {
        throw ContractError("build_ledger: a CO2 supply curve is required when the FT is built");
    }

    CashflowLedger l(life);
    const double total_capex = htse_capex(c.htse_mw, tech) + ft_capex(c.ft_kg_h, tech) + storage_capex(c.storage_kg, tech);
    l.capex[0] = -total_capex;
    const std::vector<double> macrs = macrs_schedule(fin.macrs_years);
    const double rate = combined_tax_rate(fin);
    const ProductTriple gallons = gallons_per_kg_h2(tech);
    finish_year(l, 0, rate, fin.tax_losses);

    for (int t = 1; t <= life; ++t) {
        const auto y = static_cast<std::size_t>(t);
        const auto& d = in.years[y - 1];
        const double esc = std::pow(1.0 + fin.inflation, t - 1);

        l.fixed_om[y] = -(htse_fixed_om(c.htse_mw, tech) + ft_fixed_om(c.ft_kg_h, tech)) * esc;
        l.variable_om[y] = -(d.htse_var_om + ft_var_om(c.ft_kg_h, tech) * d.hours / 8760.0) * esc;
        l.electricity[y] = d.grid_revenue;
        l.capacity_payment[y] = site.capacity_payment_rate * site.npp_capacity_mw;
        l.foregone_capacity[y] = -site.capacity_payment_rate * (site.npp_capacity_mw - d.mean_grid_mw);

        const ProductTriple& price = in.fuel_prices[y - 1];
        l.fuel_naphtha[y] = d.h2_to_ft_kg * gallons.naphtha * price.naphtha * esc;
        l.fuel_jet[y] = d.h2_to_ft_kg * gallons.jet * price.jet * esc;
        l.fuel_diesel[y] = d.h2_to_ft_kg * gallons.diesel * price.diesel * esc;
        l.h2_ptc[y] = t <= fin.ptc_duration ? d.h2_to_ft_kg * tech.h2_ptc : 0.0;

        const double co2_tonnes = d.h2_to_ft_kg * tech.co2_per_h2 / 1000.0;
        if (co2_tonnes > 0.0) {
            l.co2_feedstock[y] =
                -(co2::feedstock_cost(*in.supply_curve, co2_tonnes) * esc + in.co2_adder_per_t * co2_tonnes);
        }
        if (y - 1 < macrs.size()) {
            l.depreciation[y] = -total_capex * macrs[y - 1];
        }
        finish_year(l, y, rate, fin.tax_losses);
    }
    return l;
}

CashflowLedger build_bau_ledger(std::span<const double> electricity_revenue, const FinancialParams& fin,
                                const SiteParams& site) {
    fin.validate();
    const int life = fin.project_life;
    if (static_cast<int>(electricity_revenue.size()) != life) {
        throw ContractError("build_bau_ledger: need one electricity revenue per project year");
    }
    CashflowLedger l(life);
    const double rate = combined_tax_rate(fin);
    finish_year(l, 0, rate, fin.tax_losses);
    for (int t = 1; t <= life; ++t) {
        const auto y = static_cast<std::size_t>(t);
        l.electricity[y] = electricity_revenue[y - 1];
        l.capacity_payment[y] = site.capacity_payment_rate * site.npp_capacity_mw;
        finish_year(l, y, rate, fin.tax_losses);
    }
    return l;
}

double ledger_npv(const CashflowLedger& ledger, double wacc) {
    return npv(ledger.net, wacc);
}

double delta_npv(const CashflowLedger& ies, const CashflowLedger& bau, const FinancialParams& fin) {
    if (ies.years != bau.years) {
        throw ContractError("delta_npv: ledgers span different project lives");
    }
    return ledger_npv(ies, fin.wacc) - ledger_npv(bau, fin.wacc);
}

double ptc_revenue_share(const CashflowLedger& l) {
    double ptc = 0.0;
    double total = 0.0;
    for (int y = 0; y <= l.years; ++y) {
        const auto i = static_cast<std::size_t>(y);
        ptc += l.h2_ptc[i];
        total += l.electricity[i] + l.fuel_naphtha[i] + l.fuel_jet[i] + l.fuel_diesel[i] + l.h2_ptc[i];
    }
    return total > 0.0 ? ptc / total : 0.0;
}

void write_ledger_csv(const std::filesystem::path& path, const CashflowLedger& ledger, double wacc,
                      const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    csv::write_metadata(out, metadata);
    out << "year,category,amount_usd,discounted_usd\n";
    for (int y = 0; y <= ledger.years; ++y) {
        const double factor = std::pow(1.0 + wacc, y);
        for (const auto& line : ledger.lines()) {
            const double v = (*line.values)[static_cast<std::size_t>(y)];
            out << y << ',' << line.name << ',' << csv::format_double(v) << ',' << csv::format_double(v / factor)
                << '\n';
        }
    }
}

}  // namespace ies::finance
