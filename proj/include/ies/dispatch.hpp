#pragma once

#include "ies/plant.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ies::dispatch {

struct DispatchProblem {
    std::vector<double> prices;  // $/MWh, one per hour
    IesConfiguration config;
    double npp_capacity_mw = 0.0;
    TechnoParams params;
    /// Refinery-gate prices ($/gal) used to value hydrogen left in storage at the end.
    ProductTriple fuel_prices;
    double initial_storage_kg = 0.0;

    void validate() const;
};

/// Storage at 50% of capacity, the default starting level.
double default_initial_storage(const IesConfiguration& config);

struct DispatchSchedule {
    std::vector<double> price;
    std::vector<double> grid_mw;
    std::vector<double> htse_mw;
    std::vector<double> h2_kg_h;
    std::vector<double> storage_kg;  // level at the end of each hour
    double initial_storage_kg = 0.0;
    double ft_kg_h = 0.0;
    double ft_elec_mw = 0.0;
    double terminal_value_per_kg = 0.0;
    double htse_var_om_per_mwh = 0.0;
    double objective = 0.0;

    std::size_t hours() const noexcept { return price.size(); }
};

/// Value of one MWh routed to the HTSE when the resulting hydrogen feeds the FT:
/// PTC plus product revenue per kg, net of HTSE variable O&M, per MWh.
double marginal_h2_value(const TechnoParams& params, const ProductTriple& fuel_prices);

/// Value credited per kg of hydrogen in storage at the end of the horizon.
double terminal_value_per_kg(const DispatchProblem& problem);

/// Objective of a schedule: grid revenue minus HTSE variable O&M plus the
/// terminal storage credit.
double schedule_objective(const DispatchSchedule& schedule);

/// Exact profit-maximizing dispatch. The FT draws exactly ft_kg_h every hour;
/// among optimal schedules the one keeping storage lowest is returned.
/// Throws InfeasibleError naming the first hour storage would run dry.
DispatchSchedule optimize_dispatch(const DispatchProblem& problem);

/// Exhaustive search over `grid_points` equally spaced HTSE levels per hour.
/// Test oracle only; refuses horizons above 8 hours, more than 21 levels,
/// or more than 1e8 leaf paths.
double dispatch_oracle(const DispatchProblem& problem, int grid_points);

struct DispatchSummary {
    double hours = 0.0;
    double mwh_to_grid = 0.0;
    double grid_revenue = 0.0;
    double htse_mwh = 0.0;
    double htse_var_om = 0.0;
    double h2_produced_kg = 0.0;
    double h2_to_ft_kg = 0.0;
    ProductTriple products_kg;
    double mean_grid_mw = 0.0;
    double initial_storage_kg = 0.0;
    double final_storage_kg = 0.0;
};

DispatchSummary annual_dispatch_summary(const DispatchSchedule& schedule, const TechnoParams& params);

void write_schedule_csv(const std::filesystem::path& path, const DispatchSchedule& schedule,
                        const std::vector<std::string>& metadata = {});

}  // namespace ies::dispatch
