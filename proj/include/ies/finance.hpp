#pragma once

#include "ies/co2supply.hpp"
#include "ies/dispatch.hpp"
#include "ies/plant.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ies::finance {

enum class TaxLossRule {
    zero,    // negative taxable income pays no tax that year
    offset,  // negative taxable income earns a credit at the combined rate
};

struct FinancialParams {
    int project_life = 20;
    double wacc = 0.10;
    double inflation = 0.0218;
    double federal_tax = 0.21;
    double state_tax = 0.0;
    int macrs_years = 15;
    int ptc_duration = 20;
    TaxLossRule tax_losses = TaxLossRule::zero;

    void validate() const;
};

/// Federal plus state, with state tax deductible federally.
double combined_tax_rate(const FinancialParams& fin);

/// 150% declining balance, half-year convention, switching to straight line
/// when that deducts more. Returns years + 1 fractions; only 15 is supported.
std::vector<double> macrs_schedule(int years = 15);

/// Sum of cf[t] / (1 + wacc)^t, t = 0 being the construction year.
double npv(std::span<const double> cashflows, double wacc);

/// (npv_case - npv_ref) / (npv_ref - npv_baseline). Throws ContractError when
/// the reference equals the baseline.
double change_in_profitability(double npv_case, double npv_ref, double npv_baseline);

/// Yearly cashflows by category, years 0..project_life, nominal dollars.
/// Revenues are positive and costs negative. Depreciation is a non-cash
/// memo line: it enters taxable income but not the net.
struct CashflowLedger {
    int years = 0;
    std::vector<double> capex;
    std::vector<double> fixed_om;
    std::vector<double> variable_om;
    std::vector<double> electricity;
    std::vector<double> capacity_payment;
    std::vector<double> fuel_naphtha;
    std::vector<double> fuel_jet;
    std::vector<double> fuel_diesel;
    std::vector<double> h2_ptc;
    std::vector<double> co2_feedstock;
    std::vector<double> foregone_capacity;
    std::vector<double> depreciation;
    std::vector<double> taxable_income;
    std::vector<double> tax;
    std::vector<double> net;

    explicit CashflowLedger(int project_life = 0);

    struct Line {
        const char* name;
        const std::vector<double>* values;
        bool cash;
    };
    /// Every category in export order; `net` is last.
    std::vector<Line> lines() const;

    /// Recomputes the net from the cash categories.
    double reconcile(int year) const;
};

struct LedgerInputs {
    IesConfiguration config;
    /// Dispatch summaries for operating years 1..project_life.
    std::vector<dispatch::DispatchSummary> years;
    /// Refinery-gate prices ($/gal) per operating year, before escalation.
    std::vector<ProductTriple> fuel_prices;
    /// Required when the FT is built.
    const co2::SupplyCurve* supply_curve = nullptr;
    /// Flat $/t added to the feedstock price.
    double co2_adder_per_t = 0.0;
};

CashflowLedger build_ledger(const LedgerInputs& in, const FinancialParams& fin, const TechnoParams& tech,
                            const SiteParams& site);

/// Grid-only case: electricity revenue from selling the full NPP output and
/// the full capacity payment, taxed under the same rules.
CashflowLedger build_bau_ledger(std::span<const double> electricity_revenue, const FinancialParams& fin,
                                const SiteParams& site);

double ledger_npv(const CashflowLedger& ledger, double wacc);
double delta_npv(const CashflowLedger& ies, const CashflowLedger& bau, const FinancialParams& fin);

/// PTC over electricity + fuel + PTC revenue, summed over the project life.
double ptc_revenue_share(const CashflowLedger& ledger);

/// Long format `year, category, amount_usd, discounted_usd`.
void write_ledger_csv(const std::filesystem::path& path, const CashflowLedger& ledger, double wacc,
                      const std::vector<std::string>& metadata = {});

}  // namespace ies::finance
