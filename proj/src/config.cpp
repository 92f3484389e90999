#include "ies/config.hpp"

#include "ies/error.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ies::config {

using nlohmann::json;

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// misspelled keys are reported instead of silently ignored.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            throw ConfigError(where_ + ": expected an object");
        }
    }

    ~Reader() = default;

    bool has(const char* key) const { return j_.contains(key); }

    const json& raw(const char* key) {
        seen_.insert(key);
        if (!j_.contains(key)) {
            throw ConfigError(where_ + ": missing required field '" + key + "'");
        }
        return j_.at(key);
    }

    Reader object(const char* key) { return Reader(raw(key), path(key)); }

    double number(const char* key) {
        const json& v = raw(key);
        if (!v.is_number()) {
            throw ConfigError(path(key) + ": expected a number");
        }
        return v.get<double>();
    }

    double number(const char* key, double fallback) { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const char* key) {
        if (!has(key) || j_.at(key).is_null()) {
            seen_.insert(key);
            return std::nullopt;
        }
        return number(key);
    }

    long long integer(const char* key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ConfigError(path(key) + ": expected an integer");
        }
        return v.get<long long>();
    }

    long long integer(const char* key, long long fallback) { return has(key) ? integer(key) : fallback; }

    std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError(path(key) + ": expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const char* key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = raw(key);
        if (!v.is_boolean()) {
            throw ConfigError(path(key) + ": expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(const char* key) {
        const json& v = raw(key);
        if (!v.is_string()) {
            throw ConfigError(path(key) + ": expected a string");
        }
        return v.get<std::string>();
    }

    std::string string(const char* key, const std::string& fallback) { return has(key) ? string(key) : fallback; }

    std::vector<double> numbers(const char* key) {
        const json& v = raw(key);
        if (!v.is_array()) {
            throw ConfigError(path(key) + ": expected an array of numbers");
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                throw ConfigError(path(key) + ": expected an array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(where_ + ": unknown field '" + it.key() + "'");
            }
        }
    }

    std::string path(const char* key) const { return where_ + "." + key; }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

std::filesystem::path existing_file(const std::filesystem::path& base, const std::string& rel, const std::string& where) {
    std::filesystem::path p(rel);
    if (p.is_relative()) {
        p = base / p;
    }
    p = p.lexically_normal();
    if (!std::filesystem::is_regular_file(p)) {
        throw ConfigError(where + ": file not found: " + p.string());
    }
    return p;
}

void check(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

ProductTriple read_triple(Reader r) {
    ProductTriple t;
    t.naphtha = r.number("naphtha");
    t.jet = r.number("jet");
    t.diesel = r.number("diesel");
    r.finish();
    return t;
}

SiteParams read_site(Reader r) {
    SiteParams s;
    s.id = r.string("id");
    s.name = r.string("name", s.id);
    s.npp_capacity_mw = r.number("npp_capacity_mw");
    s.market = r.string("market", "");
    s.state = r.string("state", "");
    s.state_tax_rate = r.number("state_tax_rate", 0.0);
    s.fuel_region = r.string("fuel_region");
    s.capacity_payment_rate = r.number("capacity_payment_rate", 0.0);
    if (r.has("unit_capacities_mw")) {
        s.unit_capacities_mw = r.numbers("unit_capacities_mw");
    }
    s.co2_demand_bound_tpy = r.number("co2_demand_bound_tpy", 0.0);
    r.finish();
    try {
        s.validate();
    } catch (const ContractError& e) {
        throw ConfigError(std::string("site: ") + e.what());
    }
    return s;
}

TechnoParams read_techno(Reader r) {
    TechnoParams p;
    p.htse_elec_spec = r.number("htse_elec_spec", p.htse_elec_spec);
    p.htse_thermal_spec = r.number("htse_thermal_spec", p.htse_thermal_spec);
    p.thermal_to_elec_eff = r.number("thermal_to_elec_eff", p.thermal_to_elec_eff);
    p.effective_spec_override = r.optional_number("effective_spec_override");
    p.htse_capex_per_kw = r.number("htse_capex_per_kw", p.htse_capex_per_kw);
    p.htse_fixed_om_per_mw_yr = r.number("htse_fixed_om_per_mw_yr", p.htse_fixed_om_per_mw_yr);
    p.htse_var_om_per_mwh = r.number("htse_var_om_per_mwh", p.htse_var_om_per_mwh);
    p.ft_elec_demand_mw = r.number("ft_elec_demand_mw", p.ft_elec_demand_mw);
    if (r.has("ft_yields")) {
        p.ft_yields = read_triple(r.object("ft_yields"));
    }
    p.ft_ref_capacity_kg_h = r.number("ft_ref_capacity_kg_h", p.ft_ref_capacity_kg_h);
    p.ft_ref_capex = r.number("ft_ref_capex", p.ft_ref_capex);
    p.ft_fixed_om_ref = r.number("ft_fixed_om_ref", p.ft_fixed_om_ref);
    p.ft_var_om_ref = r.number("ft_var_om_ref", p.ft_var_om_ref);
    p.ft_scaling_exponent = r.number("ft_scaling_exponent", p.ft_scaling_exponent);
    p.storage_capex_per_kg = r.number("storage_capex_per_kg", p.storage_capex_per_kg);
    p.co2_per_h2 = r.number("co2_per_h2", p.co2_per_h2);
    if (r.has("densities_kg_per_l")) {
        p.densities_kg_per_l = read_triple(r.object("densities_kg_per_l"));
    }
    p.liters_per_gallon = r.number("liters_per_gallon", p.liters_per_gallon);
    p.h2_ptc = r.number("h2_ptc", p.h2_ptc);
    p.min_total_power_mw = r.number("min_total_power_mw", p.min_total_power_mw);
    p.max_total_power_mw = r.number("max_total_power_mw", p.max_total_power_mw);
    p.storage_hours = r.number("storage_hours", p.storage_hours);
    r.finish();
    try {
        p.validate();
    } catch (const ContractError& e) {
        throw ConfigError(std::string("techno: ") + e.what());
    }
    return p;
}

finance::FinancialParams read_finance(Reader r, double state_tax) {
    finance::FinancialParams f;
    f.state_tax = state_tax;
    f.project_life = static_cast<int>(r.integer("project_life", f.project_life));
    f.wacc = r.number("wacc", f.wacc);
    f.inflation = r.number("inflation", f.inflation);
    f.federal_tax = r.number("federal_tax", f.federal_tax);
    f.macrs_years = static_cast<int>(r.integer("macrs_years", f.macrs_years));
    f.ptc_duration = static_cast<int>(r.integer("ptc_duration", f.project_life));
    const std::string rule = r.string("tax_losses", "zero");
    if (rule == "zero") {
        f.tax_losses = finance::TaxLossRule::zero;
    } else if (rule == "offset") {
        f.tax_losses = finance::TaxLossRule::offset;
    } else {
        throw ConfigError("finance.tax_losses: expected 'zero' or 'offset'");
    }
    r.finish();
    try {
        f.validate();
    } catch (const ContractError& e) {
        throw ConfigError(std::string("finance: ") + e.what());
    }
    return f;
}

PriceSettings read_prices(Reader r, const std::filesystem::path& base) {
    PriceSettings s;
    s.history = existing_file(base, r.string("history"), r.path("history"));
    if (r.has("model")) {
        s.model = existing_file(base, r.string("model"), r.path("model"));
    }
    if (r.has("periods")) {
        s.train.periods = r.numbers("periods");
    }
    s.train.harmonics = static_cast<int>(r.integer("harmonics", s.train.harmonics));
    s.train.p = static_cast<int>(r.integer("ar_order", s.train.p));
    s.train.q = static_cast<int>(r.integer("ma_order", s.train.q));
    s.train.preserve_cdf = r.boolean("preserve_cdf", s.train.preserve_cdf);
    r.finish();
    check(s.train.harmonics >= 0, "prices.harmonics must be >= 0");
    check(s.train.p >= 0 && s.train.q >= 0 && s.train.p + s.train.q >= 1,
          "prices: ar_order and ma_order must be >= 0 with a positive sum");
    for (double c : s.train.periods) {
        check(c > 0.0, "prices.periods must be positive");
    }
    return s;
}

Co2Settings read_co2(Reader r, const std::filesystem::path& base) {
    Co2Settings s;
    s.registry = existing_file(base, r.string("registry"), r.path("registry"));
    s.cost_table = existing_file(base, r.string("cost_table"), r.path("cost_table"));
    if (r.has("transport_calibration")) {
        s.transport_calibration =
            existing_file(base, r.string("transport_calibration"), r.path("transport_calibration"));
    }
    if (r.has("transport")) {
        Reader t = r.object("transport");
        co2::TransportParams p;
        p.a = t.number("a");
        p.b = t.number("b");
        p.c = t.number("c");
        p.beta = t.number("beta");
        t.finish();
        check(p.beta >= 0.0 && p.beta < 1.0, "co2.transport.beta must lie in [0, 1)");
        s.transport = p;
    }
    check(s.transport || s.transport_calibration, "co2: need either 'transport' or 'transport_calibration'");
    s.purity_threshold_pct = r.number("purity_threshold_pct", s.purity_threshold_pct);
    check(s.purity_threshold_pct >= 0.0 && s.purity_threshold_pct <= 100.0,
          "co2.purity_threshold_pct must lie in [0, 100]");
    const std::string ordering = r.string("ordering", "unit_cost");
    if (ordering == "unit_cost") {
        s.ordering = co2::Ordering::unit_cost;
    } else if (ordering == "distance") {
        s.ordering = co2::Ordering::distance;
    } else {
        throw ConfigError("co2.ordering: expected 'unit_cost' or 'distance'");
    }
    r.finish();
    return s;
}

FuelSettings read_fuel(Reader r, const std::filesystem::path& base) {
    FuelSettings s;
    s.retail = existing_file(base, r.string("retail"), r.path("retail"));
    s.adjustments = existing_file(base, r.string("adjustments"), r.path("adjustments"));
    if (r.has("naphtha_history")) {
        s.naphtha_history = existing_file(base, r.string("naphtha_history"), r.path("naphtha_history"));
    }
    s.naphtha_ratio = r.optional_number("naphtha_ratio");
    check(s.naphtha_history || s.naphtha_ratio, "fuel: need either 'naphtha_history' or 'naphtha_ratio'");
    if (s.naphtha_ratio) {
        check(*s.naphtha_ratio > 0.0, "fuel.naphtha_ratio must be positive");
    }
    s.first_operating_year = static_cast<int>(r.integer("first_operating_year", s.first_operating_year));
    s.track_first_year = static_cast<int>(r.integer("track_first_year", s.track_first_year));
    s.track_last_year = static_cast<int>(r.integer("track_last_year", s.track_last_year));
    r.finish();
    check(s.track_first_year <= s.track_last_year, "fuel: track_first_year after track_last_year");
    return s;
}

StudySettings read_study(Reader r) {
    StudySettings s;
    s.realizations = static_cast<int>(r.integer("realizations", s.realizations));
    s.base_seed = r.unsigned_integer("base_seed", s.base_seed);
    s.sweep_points = static_cast<int>(r.integer("sweep_points", s.sweep_points));
    s.jobs = static_cast<int>(r.integer("jobs", s.jobs));
    if (r.has("sensitivity")) {
        const json& list = r.raw("sensitivity");
        check(list.is_array(), "study.sensitivity: expected an array");
        s.sensitivity.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            Reader e(list[i], "study.sensitivity[" + std::to_string(i) + "]");
            SensitivitySpec spec{e.string("parameter"), e.number("value")};
            e.finish();
            static const std::set<std::string> known{"h2_ptc", "fuel_price", "capex", "co2_adder", "om"};
            check(known.count(spec.parameter) == 1, "study.sensitivity: unknown parameter '" + spec.parameter + "'");
            s.sensitivity.push_back(spec);
        }
    }
    r.finish();
    check(s.realizations >= 2, "study.realizations must be >= 2");
    check(s.sweep_points >= 1, "study.sweep_points must be >= 1");
    check(s.jobs >= 1, "study.jobs must be >= 1");
    return s;
}

}  // namespace

std::vector<SensitivitySpec> default_sensitivity_suite() {
    return {
        {"h2_ptc", 0.0},     {"h2_ptc", 1.0},     {"h2_ptc", 2.7},    {"fuel_price", 0.75}, {"fuel_price", 1.25},
        {"capex", 0.75},     {"capex", 1.25},     {"co2_adder", 30.0}, {"co2_adder", 60.0}, {"om", 0.75},
        {"om", 1.25},
    };
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("internal", "SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    Reader r(doc, "scenario");
    const std::string schema = r.string("schema");
    check(schema == kScenarioSchema, "scenario.schema: expected '" + std::string(kScenarioSchema) + "', found '" +
                                         schema + "'");

    ScenarioConfig c;
    c.name = r.string("name");
    c.site = read_site(r.object("site"));
    c.techno = r.has("techno") ? read_techno(r.object("techno")) : TechnoParams{};
    if (r.has("finance")) {
        c.finance = read_finance(r.object("finance"), c.site.state_tax_rate);
    } else {
        c.finance.state_tax = c.site.state_tax_rate;
    }
    c.prices = read_prices(r.object("prices"), base_dir);
    c.co2 = read_co2(r.object("co2"), base_dir);
    c.fuel = read_fuel(r.object("fuel"), base_dir);
    if (r.has("dispatch")) {
        Reader d = r.object("dispatch");
        c.initial_storage_fraction = d.number("initial_storage_fraction", c.initial_storage_fraction);
        d.finish();
        check(c.initial_storage_fraction >= 0.0 && c.initial_storage_fraction <= 1.0,
              "dispatch.initial_storage_fraction must lie in [0, 1]");
    }
    if (r.has("study")) {
        c.study = read_study(r.object("study"));
    }
    if (r.has("configuration")) {
        Reader k = r.object("configuration");
        IesConfiguration cfg;
        cfg.htse_mw = k.number("htse_mw");
        cfg.ft_kg_h = k.number("ft_kg_h");
        cfg.storage_kg = k.number("storage_kg");
        k.finish();
        try {
            validate_configuration(cfg, c.site, c.techno);
        } catch (const ContractError& e) {
            throw ConfigError(std::string("configuration: ") + e.what());
        }
        c.configuration = cfg;
    }
    r.finish();

    const int needed_last = c.fuel.first_operating_year + c.finance.project_life - 1;
    check(c.fuel.first_operating_year >= c.fuel.track_first_year && needed_last <= c.fuel.track_last_year,
          "fuel: operating years " + std::to_string(c.fuel.first_operating_year) + "-" + std::to_string(needed_last) +
              " fall outside the price track span");

    c.canonical = doc.dump();
    c.hash = sha256_hex(c.canonical);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open scenario " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ScenarioConfig c = parse_scenario(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
    c.source = path;
    return c;
}

}  // namespace ies::config
