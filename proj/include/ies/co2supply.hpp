#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ies::co2 {

enum class SourceKind { bioethanol, ammonia, natural_gas, coal, hydrogen, iron_steel, cement };

/// Throws ConfigError for names outside the known set.
SourceKind parse_kind(const std::string& name);
std::string to_string(SourceKind kind);

struct Co2Source {
    std::string id;
    SourceKind kind = SourceKind::bioethanol;
    double capacity_tpy = 0.0;
    double concentration_pct = 100.0;
    double distance_km = 0.0;

    void validate() const;
};

struct CaptureCost {
    double capture = 0.0;      // $/t, skipped for high-purity streams
    double compression = 0.0;  // $/t
};

struct CostTable {
    std::map<SourceKind, CaptureCost> by_kind;
    double purity_threshold_pct = 95.0;
};

/// Pipeline surrogate: $/t = a * d * flow^-beta + b * d + c.
struct TransportParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double beta = 0.0;
};

double capture_cost(const Co2Source& source, const CostTable& table);
double transport_cost(double distance_km, double flow_tpy, const TransportParams& params);

/// Capture plus transport at the source's own annual flow.
double unit_cost(const Co2Source& source, const CostTable& table, const TransportParams& transport);

enum class Ordering { unit_cost, distance };

struct Breakpoint {
    double cum_qty_tpy = 0.0;
    double avg_cost = 0.0;    // $/t, cumulative average up to this point
    double unit_cost = 0.0;   // $/t of the marginal source
    std::string marginal_source;
};

struct SupplyCurve {
    std::vector<Breakpoint> points;

    double extent() const noexcept { return points.empty() ? 0.0 : points.back().cum_qty_tpy; }
};

/// Sorts sources (ties by id) and accumulates whole sources until the bound
/// is covered. Throws ShortfallError carrying the deficit when the registry
/// cannot cover the bound.
SupplyCurve build_supply_curve(std::vector<Co2Source> sources, double demand_bound_tpy, const CostTable& table,
                               const TransportParams& transport, Ordering ordering = Ordering::unit_cost);

/// Annual cost of procuring `quantity_tpy` by buying the cheapest sources
/// first: cumulative total cost, linear between breakpoints.
double feedstock_cost(const SupplyCurve& curve, double quantity_tpy);

/// Cumulative average $/t at `quantity_tpy`.
double average_cost(const SupplyCurve& curve, double quantity_tpy);

struct CalibrationPoint {
    double distance_km = 0.0;
    double flow_tpy = 0.0;
    double cost = 0.0;  // $/t
};

/// Least squares on relative error: grid plus golden-section search over
/// beta in [0, 0.99], linear solve for (a, b, c) at each beta.
TransportParams fit_transport(const std::vector<CalibrationPoint>& points);

// Files -----------------------------------------------------------------------

/// `id, kind, capacity_tpy, concentration_pct, distance_km`
std::vector<Co2Source> read_registry(const std::filesystem::path& path);
/// `kind, capture_usd_per_t, compression_usd_per_t`
CostTable read_cost_table(const std::filesystem::path& path);
/// `distance_km, flow_tpy, cost_usd_per_t`
std::vector<CalibrationPoint> read_calibration(const std::filesystem::path& path);

void write_curve_csv(const std::filesystem::path& path, const SupplyCurve& curve,
                     const std::vector<std::string>& metadata = {});

}  // namespace ies::co2
