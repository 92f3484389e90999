#include "ies/csv.hpp"
#include "ies/error.hpp"
#include "ies/pricegen.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ies::pricegen {

using nlohmann::json;

namespace {

constexpr const char* kModelSchema = "pricegen.model.v1";

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw ConfigError(std::string("price model: missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("price model: bad field '") + key + "': " + e.what());
    }
}

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 3 || (n > 3 && n < 6) || (n >= 4 && sep != 'T' && sep != ' ')) {
        throw ConfigError("not an ISO-8601 timestamp: '" + text + "'");
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) {
        throw ConfigError("invalid calendar time: '" + text + "'");
    }
    const auto since_epoch = sys_days{ymd}.time_since_epoch();
    return duration_cast<seconds>(since_epoch).count() + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::int64_t unix_seconds) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{unix_seconds}};
    const sys_days day = floor<days>(tp);
    const year_month_day ymd{day};
    const auto rem = (tp - day).count();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

PriceSeries read_price_csv(const std::filesystem::path& path) {
    const csv::Table table = csv::read(path);
    const std::size_t ts_col = table.column("timestamp");
    const std::size_t price_col = table.column("price_usd_per_mwh");
    PriceSeries series;
    series.timestamps.reserve(table.rows.size());
    series.prices.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        series.timestamps.push_back(parse_iso8601(row[ts_col]));
        series.prices.push_back(csv::to_double(row[price_col], where));
    }
    try {
        series.validate();
    } catch (const ContractError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return series;
}

void write_price_csv(const std::filesystem::path& path, const PriceSeries& series,
                     const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    csv::write_metadata(out, metadata);
    out << "timestamp,price_usd_per_mwh\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_iso8601(series.timestamps[i]) << ',' << csv::format_double(series.prices[i]) << '\n';
    }
}

namespace {

json gaussianizer_json(const Gaussianizer& g) {
    if (g.is_identity()) {
        return {{"kind", "identity"}};
    }
    return {{"kind", "empirical"},
            {"values", g.values()},
            {"probabilities", g.probabilities()},
            {"lower_tail_scale", g.lower_tail_scale()},
            {"upper_tail_scale", g.upper_tail_scale()}};
}

Gaussianizer gaussianizer_from(const json& g) {
    const auto kind = require<std::string>(g, "kind");
    if (kind == "identity") {
        return Gaussianizer::identity();
    }
    if (kind != "empirical") {
        throw ConfigError("price model: unknown gaussianizer kind '" + kind + "'");
    }
    try {
        return Gaussianizer(require<std::vector<double>>(g, "values"), require<std::vector<double>>(g, "probabilities"),
                            require<double>(g, "lower_tail_scale"), require<double>(g, "upper_tail_scale"));
    } catch (const ContractError& e) {
        throw ConfigError(std::string("price model: ") + e.what());
    }
}

}  // namespace

std::string to_json(const SyntheticPriceModel& model) {
    json j = {
        {"schema", kModelSchema},
        {"site_id", model.site_id},
        {"first_year", model.first_year},
        {"last_year", model.last_year},
        {"training_hours", model.training_hours},
        {"preserve_cdf", model.preserve_cdf},
        {"fourier",
         {{"periods", model.fourier.periods},
          {"harmonics", model.fourier.harmonics},
          {"offset", model.fourier.offset},
          {"sin", model.fourier.sin_coeffs},
          {"cos", model.fourier.cos_coeffs}}},
        {"arma", {{"ar", model.arma.ar}, {"ma", model.arma.ma}, {"noise_std", model.arma.noise_std},
                  {"gaussianizer", gaussianizer_json(model.arma.gaussianizer)}}},
        {"training_quantiles", model.training_quantiles},
    };
    return j.dump(2);
}

SyntheticPriceModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("price model: invalid JSON: ") + e.what());
    }
    if (require<std::string>(j, "schema") != kModelSchema) {
        throw ConfigError("price model: unsupported schema '" + j.at("schema").get<std::string>() + "'");
    }
    SyntheticPriceModel m;
    m.site_id = require<std::string>(j, "site_id");
    m.first_year = require<int>(j, "first_year");
    m.last_year = require<int>(j, "last_year");
    m.training_hours = require<std::size_t>(j, "training_hours");
    m.preserve_cdf = require<bool>(j, "preserve_cdf");

    const json& f = j.at("fourier");
    m.fourier.periods = require<std::vector<double>>(f, "periods");
    m.fourier.harmonics = require<int>(f, "harmonics");
    m.fourier.offset = require<double>(f, "offset");
    m.fourier.sin_coeffs = require<std::vector<double>>(f, "sin");
    m.fourier.cos_coeffs = require<std::vector<double>>(f, "cos");
    const std::size_t terms = m.fourier.periods.size() * static_cast<std::size_t>(m.fourier.harmonics);
    if (m.fourier.sin_coeffs.size() != terms || m.fourier.cos_coeffs.size() != terms) {
        throw ConfigError("price model: Fourier coefficient count does not match periods x harmonics");
    }

    const json& a = j.at("arma");
    m.arma.ar = require<std::vector<double>>(a, "ar");
    m.arma.ma = require<std::vector<double>>(a, "ma");
    m.arma.noise_std = require<double>(a, "noise_std");
    m.arma.gaussianizer = gaussianizer_from(a.at("gaussianizer"));
    if (j.contains("training_quantiles")) {
        m.training_quantiles = require<std::vector<double>>(j, "training_quantiles");
        if (!std::is_sorted(m.training_quantiles.begin(), m.training_quantiles.end())) {
            throw ConfigError("price model: training_quantiles must be sorted");
        }
    }
    if (m.preserve_cdf && m.training_quantiles.empty()) {
        throw ConfigError("price model: preserve_cdf requires training_quantiles");
    }
    if (!is_stationary(m.arma.ar)) {
        throw ConfigError("price model: AR coefficients are not stationary");
    }
    return m;
}

void save_model(const std::filesystem::path& path, const SyntheticPriceModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << to_json(model) << '\n';
}

SyntheticPriceModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

}  // namespace ies::pricegen
