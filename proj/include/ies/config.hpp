#pragma once

#include "ies/co2supply.hpp"
#include "ies/finance.hpp"
#include "ies/plant.hpp"
#include "ies/pricegen.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ies::config {

inline constexpr const char* kScenarioSchema = "synfuel.scenario.v1";

struct PriceSettings {
    std::filesystem::path history;
    /// Pre-trained model; when absent the model is trained from `history`.
    std::optional<std::filesystem::path> model;
    pricegen::TrainOptions train;
};

struct Co2Settings {
    std::filesystem::path registry;
    std::filesystem::path cost_table;
    std::optional<std::filesystem::path> transport_calibration;
    std::optional<co2::TransportParams> transport;
    double purity_threshold_pct = 95.0;
    co2::Ordering ordering = co2::Ordering::unit_cost;
};

struct FuelSettings {
    std::filesystem::path retail;
    std::filesystem::path adjustments;
    std::optional<std::filesystem::path> naphtha_history;
    std::optional<double> naphtha_ratio;
    int first_operating_year = 2025;
    int track_first_year = 2022;
    int track_last_year = 2050;
};

struct SensitivitySpec {
    std::string parameter;  // h2_ptc, fuel_price, capex, co2_adder, om
    double value = 0.0;
};

/// The perturbation set used when a scenario names none.
std::vector<SensitivitySpec> default_sensitivity_suite();

struct StudySettings {
    int realizations = 20;
    std::uint64_t base_seed = 20230101;
    int sweep_points = 10;
    int jobs = 1;
    std::vector<SensitivitySpec> sensitivity = default_sensitivity_suite();
};

struct ScenarioConfig {
    std::filesystem::path source;
    std::string name;
    SiteParams site;
    TechnoParams techno;
    finance::FinancialParams finance;
    PriceSettings prices;
    Co2Settings co2;
    FuelSettings fuel;
    double initial_storage_fraction = 0.5;
    StudySettings study;
    std::optional<IesConfiguration> configuration;

    /// Canonical (key-sorted, compact) serialization of the input document.
    std::string canonical;
    /// SHA-256 of `canonical`, lowercase hex.
    std::string hash;
};

/// Parses and validates a scenario document. Relative paths resolve against
/// `base_dir`. Every referenced file must exist. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);

}  // namespace ies::config
