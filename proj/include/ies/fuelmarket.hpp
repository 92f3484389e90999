#pragma once

#include "ies/plant.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ies::fuel {

enum class FuelKind { diesel, jet, gasoline, naphtha };

FuelKind parse_fuel(const std::string& name);
std::string to_string(FuelKind kind);

/// Per-gallon deductions between the retail pump price and the refinery gate.
struct FuelFactors {
    double tax = 0.0;            // state + federal, $/gal
    double pct_of_retail = 0.0;  // marketing + distribution share of retail
    double marketing = 0.0;      // $/gal
    double distribution = 0.0;   // $/gal
};

struct AdjustmentFactors {
    std::string region;
    std::string state;
    std::string transport;
    std::map<FuelKind, FuelFactors> by_fuel;

    const FuelFactors& at(FuelKind kind) const;
};

struct GateResult {
    double value = 0.0;
    bool floored = false;
};

/// retail - tax - pct * retail - marketing - distribution, floored at zero.
GateResult retail_to_gate(double retail, const FuelFactors& factors);
double retail_to_gate(double retail, FuelKind kind, const AdjustmentFactors& factors,
                      std::vector<std::string>* warnings = nullptr);

/// Elementwise gasoline * ratio.
std::vector<double> naphtha_track(std::span<const double> gasoline, double ratio);

/// Least-squares slope through the origin of naphtha on gasoline.
double fit_naphtha_ratio(std::span<const double> gasoline, std::span<const double> naphtha);

/// Arithmetic mean of a yearly track.
double mean_track(std::span<const double> track);

/// Yearly retail forecast per fuel; missing years are filled by linear interpolation.
struct RetailForecast {
    std::string region;
    std::map<FuelKind, std::map<int, double>> points;

    double at(FuelKind kind, int year) const;
};

struct FuelPriceTrack {
    std::string region;
    int first_year = 0;
    std::vector<ProductTriple> prices;  // $/gal, one entry per year from first_year

    int last_year() const noexcept { return first_year + static_cast<int>(prices.size()) - 1; }
    const ProductTriple& at(int year) const;
    std::vector<double> column(FuelKind kind) const;
    /// Per-product mean over [first, last].
    ProductTriple mean(int first, int last) const;
};

/// Gate prices for every year in [first_year, last_year]. Naphtha follows the
/// gasoline gate track scaled by `naphtha_ratio`, then loses its own tax,
/// marketing and distribution deductions.
FuelPriceTrack gate_price_track(const RetailForecast& retail, const AdjustmentFactors& factors, double naphtha_ratio,
                                int first_year = 2022, int last_year = 2050,
                                std::vector<std::string>* warnings = nullptr);

// Files -----------------------------------------------------------------------

/// `year, fuel, usd_per_gal`
RetailForecast read_retail_csv(const std::filesystem::path& path, const std::string& region);
/// `region, state, transport, fuel, tax_usd_per_gal, pct_of_retail, marketing_usd_per_gal, distribution_usd_per_gal`
std::map<std::string, AdjustmentFactors> read_adjustments(const std::filesystem::path& path);

struct PriceHistory {
    std::vector<double> gasoline;
    std::vector<double> naphtha;
};
/// `period, gasoline_usd_per_gal, naphtha_usd_per_gal`
PriceHistory read_naphtha_history(const std::filesystem::path& path);

/// `year, fuel, usd_per_gal` for naphtha, jet and diesel.
void write_gate_csv(const std::filesystem::path& path, const FuelPriceTrack& track,
                    const std::vector<std::string>& metadata = {});

}  // namespace ies::fuel
