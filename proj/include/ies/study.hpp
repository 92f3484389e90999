#pragma once

#include "ies/co2supply.hpp"
#include "ies/config.hpp"
#include "ies/dispatch.hpp"
#include "ies/finance.hpp"
#include "ies/fuelmarket.hpp"
#include "ies/plant.hpp"
#include "ies/pricegen.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ies::study {

/// One-at-a-time input change applied on top of a scenario.
struct Perturbation {
    std::optional<double> h2_ptc;  // $/kg, replaces the scenario value
    double fuel_price_factor = 1.0;
    double capex_factor = 1.0;
    double om_factor = 1.0;
    double co2_adder_per_t = 0.0;
};

/// Throws ConfigError for unknown parameter names.
Perturbation perturbation_for(const config::SensitivitySpec& spec);

/// Techno parameters with the capex, O&M and PTC parts of `p` applied.
TechnoParams apply(const TechnoParams& techno, const Perturbation& p);

/// Seed for one (realization, year) price trace; independent of the
/// configuration being evaluated.
std::uint64_t derive_seed(std::uint64_t base_seed, int realization, int year);

/// Runs body(0..n-1) on up to `jobs` threads. The first exception (lowest
/// index) is rethrown after every worker has stopped.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

/// Everything a study needs, resolved from a scenario file.
struct Scenario {
    std::string name;
    std::string config_hash;
    SiteParams site;
    TechnoParams techno;
    finance::FinancialParams finance;
    pricegen::SyntheticPriceModel model;
    co2::SupplyCurve supply_curve;
    co2::TransportParams transport;
    double naphtha_ratio = 0.0;
    fuel::FuelPriceTrack fuel_track;
    std::vector<std::string> fuel_warnings;
    int first_operating_year = 2025;
    double initial_storage_fraction = 0.5;
    config::StudySettings study;
    std::optional<IesConfiguration> configuration;

    /// Refinery-gate prices for operating years 1..project_life.
    std::vector<ProductTriple> operating_fuel_prices() const;
};

/// Trains (or loads) the price model, builds the CO2 supply curve out to the
/// largest FT feed the sweep can select, and derives the gate price track.
Scenario prepare_scenario(const config::ScenarioConfig& cfg);

/// Synthetic hourly prices for every (realization, operating year), shared by
/// all configurations and sensitivity cases of a study.
class PriceBank {
public:
    PriceBank(const pricegen::SyntheticPriceModel& model, int realizations, int years, std::uint64_t base_seed,
              int jobs = 1, std::size_t hours_per_year = 8760);

    int realizations() const noexcept { return realizations_; }
    int years() const noexcept { return years_; }
    std::uint64_t base_seed() const noexcept { return base_seed_; }

    /// `year` is 1-based.
    std::span<const double> prices(int realization, int year) const;

private:
    int realizations_ = 0;
    int years_ = 0;
    std::uint64_t base_seed_ = 0;
    std::vector<std::vector<double>> traces_;
};

struct CategoryValue {
    std::string name;
    double npv = 0.0;  // mean over realizations
};

struct ScenarioResult {
    IesConfiguration config;
    bool feasible = true;
    std::string infeasible_reason;
    int realizations = 0;

    double npv_mean = 0.0;
    double npv_std = 0.0;
    double npv_ci95 = 0.0;
    double bau_npv_mean = 0.0;
    double dnpv_mean = 0.0;
    double dnpv_std = 0.0;
    double dnpv_ci95 = 0.0;
    std::vector<double> dnpv_samples;

    /// PTC over electricity + fuel + PTC revenue of the mean ledger.
    double ptc_share = 0.0;
    /// Mean yearly gallons per MWe of NPP capacity.
    ProductTriple normalized_production;
    std::vector<CategoryValue> category_npv;
    std::vector<CategoryValue> bau_category_npv;
    /// Cashflows averaged over realizations.
    finance::CashflowLedger mean_ledger;
};

/// Per realization: dispatch each year with storage carried over, build the
/// ledgers, take the NPV difference. Any infeasible year marks the whole
/// result infeasible.
ScenarioResult monte_carlo_npv(const Scenario& scenario, const IesConfiguration& config, const PriceBank& bank,
                               const Perturbation& perturbation = {}, int jobs = 1);

struct SweepPoint {
    int i = 0;  // HTSE axis index
    int j = 0;  // FT axis index
    int k = 0;  // storage axis index
    IesConfiguration config;
    bool feasible = false;
    double dnpv_mean = 0.0;
    double dnpv_std = 0.0;
    std::uint64_t seed = 0;
};

struct SweepOptions {
    int points_per_axis = 10;
    int jobs = 1;
    /// Completed points are appended here and skipped on the next run.
    std::optional<std::filesystem::path> checkpoint;
    /// Called after each newly evaluated point, serialized.
    std::function<void(const SweepPoint&)> progress;
};

/// Every lattice point of capacity_ranges, HTSE-major. Points whose FT feed
/// exceeds the HTSE hydrogen rate are recorded as infeasible.
std::vector<SweepPoint> capacity_sweep(const Scenario& scenario, const PriceBank& bank, const SweepOptions& options);

/// Largest ΔNPV mean; ties within 1e-9 relative go to smaller storage, then
/// smaller HTSE. Throws InfeasibleError when no point is feasible.
std::size_t select_optimum(std::span<const SweepPoint> points);
std::size_t select_optimum(std::span<const ScenarioResult> results);

struct SensitivityCase {
    std::string parameter;
    double value = 0.0;
    double change = 0.0;  // fraction
    ScenarioResult result;
};

/// Re-runs the optimum once per spec on the same price bank.
std::vector<SensitivityCase> sensitivity_suite(const Scenario& scenario, const PriceBank& bank,
                                               const ScenarioResult& reference,
                                               const std::vector<config::SensitivitySpec>& suite, int jobs = 1);

// Outputs ---------------------------------------------------------------------

std::vector<std::string> provenance(const Scenario& scenario, std::uint64_t seed);

/// `htse_mwe, ft_tph, storage_t, dnpv_mean, dnpv_std, feasible, i, j, k, seed`
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepPoint> points,
                     const std::vector<std::string>& metadata = {});

/// `parameter, value, change_pct`
void write_sensitivity_csv(const std::filesystem::path& path, std::span<const SensitivityCase> cases,
                           const std::vector<std::string>& metadata = {});

struct SummaryInputs {
    const Scenario* scenario = nullptr;
    const ScenarioResult* result = nullptr;
    std::uint64_t seed = 0;
    /// Present when the configuration came out of a sweep.
    std::optional<std::size_t> sweep_points;
    std::span<const SensitivityCase> sensitivity;
};

std::string summary_json(const SummaryInputs& in);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ies::study
