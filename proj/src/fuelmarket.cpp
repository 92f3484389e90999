#include "ies/fuelmarket.hpp"

#include "ies/csv.hpp"
#include "ies/error.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>

namespace ies::fuel {

FuelKind parse_fuel(const std::string& name) {
    if (name == "diesel") {
        return FuelKind::diesel;
    }
    if (name == "jet") {
        return FuelKind::jet;
    }
    if (name == "gasoline") {
        return FuelKind::gasoline;
    }
    if (name == "naphtha") {
        return FuelKind::naphtha;
    }
    throw ConfigError("unknown fuel '" + name + "'");
}

std::string to_string(FuelKind kind) {
    switch (kind) {
        case FuelKind::diesel:
            return "diesel";
        case FuelKind::jet:
            return "jet";
        case FuelKind::gasoline:
            return "gasoline";
        case FuelKind::naphtha:
            return "naphtha";
    }
    return "unknown";
}

const FuelFactors& AdjustmentFactors::at(FuelKind kind) const {
    const auto it = by_fuel.find(kind);
    if (it == by_fuel.end()) {
        throw ConfigError("region " + region + ": no adjustment factors for " + to_string(kind));
    }
    return it->second;
}

GateResult retail_to_gate(double retail, const FuelFactors& f) {
    if (!(retail > 0.0)) {
        throw ContractError("retail_to_gate: retail price must be positive");
    }
    const double gate = retail - f.tax - f.pct_of_retail * retail - f.marketing - f.distribution;
    if (gate < 0.0) {
        return {0.0, true};
    }
    return {gate, false};
}

double retail_to_gate(double retail, FuelKind kind, const AdjustmentFactors& factors,
                      std::vector<std::string>* warnings) {
    const GateResult r = retail_to_gate(retail, factors.at(kind));
    if (r.floored && warnings) {
        warnings->push_back("gate price for " + to_string(kind) + " in " + factors.region +
                            " floored at 0 (retail " + csv::format_double(retail) + ")");
    }
    return r.value;
}

std::vector<double> naphtha_track(std::span<const double> gasoline, double ratio) {
    if (!(ratio > 0.0)) {
        throw ContractError("naphtha_track: ratio must be positive");
    }
    std::vector<double> out(gasoline.size());
    for (std::size_t i = 0; i < gasoline.size(); ++i) {
        out[i] = gasoline[i] * ratio;
    }
    return out;
}

double fit_naphtha_ratio(std::span<const double> gasoline, std::span<const double> naphtha) {
    if (gasoline.size() != naphtha.size() || gasoline.empty()) {
        throw FitError("fit_naphtha_ratio: need equally long, non-empty price pairs");
    }
    double xy = 0.0;
    double xx = 0.0;
    for (std::size_t i = 0; i < gasoline.size(); ++i) {
        xy += gasoline[i] * naphtha[i];
        xx += gasoline[i] * gasoline[i];
    }
    if (!(xx > 0.0)) {
        throw FitError("fit_naphtha_ratio: gasoline prices are all zero");
    }
    return xy / xx;
}

double mean_track(std::span<const double> track) {
    if (track.empty()) {
        throw ContractError("mean_track: empty track");
    }
    return std::accumulate(track.begin(), track.end(), 0.0) / static_cast<double>(track.size());
}

double RetailForecast::at(FuelKind kind, int year) const {
    const auto it = points.find(kind);
    if (it == points.end() || it->second.empty()) {
        throw ConfigError("retail forecast " + region + ": no " + to_string(kind) + " prices");
    }
    const auto& series = it->second;
    const auto exact = series.find(year);
    if (exact != series.end()) {
        return exact->second;
    }
    const auto hi = series.lower_bound(year);
    if (hi == series.begin() || hi == series.end()) {
        throw ConfigError("retail forecast " + region + ": " + to_string(kind) + " has no data around " +
                          std::to_string(year));
    }
    const auto lo = std::prev(hi);
    const double w = static_cast<double>(year - lo->first) / static_cast<double>(hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

const ProductTriple& FuelPriceTrack::at(int year) const {
    if (year < first_year || year > last_year()) {
        throw ConfigError("fuel price track " + region + " does not cover " + std::to_string(year));
    }
    return prices[static_cast<std::size_t>(year - first_year)];
}

std::vector<double> FuelPriceTrack::column(FuelKind kind) const {
    std::vector<double> out;
    out.reserve(prices.size());
    for (const auto& p : prices) {
        switch (kind) {
            case FuelKind::naphtha:
                out.push_back(p.naphtha);
                break;
            case FuelKind::jet:
                out.push_back(p.jet);
                break;
            case FuelKind::diesel:
                out.push_back(p.diesel);
                break;
            case FuelKind::gasoline:
                throw ContractError("fuel price track holds no gasoline column");
        }
    }
    return out;
}

ProductTriple FuelPriceTrack::mean(int first, int last) const {
    ProductTriple sum;
    for (int y = first; y <= last; ++y) {
        const auto& p = at(y);
        sum.naphtha += p.naphtha;
        sum.jet += p.jet;
        sum.diesel += p.diesel;
    }
    return sum * (1.0 / (last - first + 1));
}

FuelPriceTrack gate_price_track(const RetailForecast& retail, const AdjustmentFactors& factors, double naphtha_ratio,
                                int first_year, int last_year, std::vector<std::string>* warnings) {
    if (last_year < first_year) {
        throw ContractError("gate_price_track: empty year span");
    }
    FuelPriceTrack track;
    track.region = factors.region;
    track.first_year = first_year;
    std::vector<double> gasoline_gate;
    for (int y = first_year; y <= last_year; ++y) {
        gasoline_gate.push_back(retail_to_gate(retail.at(FuelKind::gasoline, y), FuelKind::gasoline, factors, warnings));
    }
    const std::vector<double> naphtha_market = naphtha_track(gasoline_gate, naphtha_ratio);
    for (int y = first_year; y <= last_year; ++y) {
        const auto i = static_cast<std::size_t>(y - first_year);
        ProductTriple p;
        p.diesel = retail_to_gate(retail.at(FuelKind::diesel, y), FuelKind::diesel, factors, warnings);
        p.jet = retail_to_gate(retail.at(FuelKind::jet, y), FuelKind::jet, factors, warnings);
        p.naphtha = naphtha_market[i] > 0.0
                        ? retail_to_gate(naphtha_market[i], FuelKind::naphtha, factors, warnings)
                        : 0.0;
        track.prices.push_back(p);
    }
    return track;
}

RetailForecast read_retail_csv(const std::filesystem::path& path, const std::string& region) {
    const csv::Table t = csv::read(path);
    const std::size_t year = t.column("year");
    const std::size_t fuel = t.column("fuel");
    const std::size_t price = t.column("usd_per_gal");
    RetailForecast f;
    f.region = region;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        const double v = csv::to_double(row[price], where);
        if (!(v > 0.0)) {
            throw ConfigError(where + ": retail price must be positive");
        }
        f.points[parse_fuel(row[fuel])][static_cast<int>(csv::to_integer(row[year], where))] = v;
    }
    return f;
}

std::map<std::string, AdjustmentFactors> read_adjustments(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    const std::size_t region = t.column("region");
    const std::size_t state = t.column("state");
    const std::size_t transport = t.column("transport");
    const std::size_t fuel = t.column("fuel");
    const std::size_t tax = t.column("tax_usd_per_gal");
    const std::size_t pct = t.column("pct_of_retail");
    const std::size_t mkt = t.column("marketing_usd_per_gal");
    const std::size_t dist = t.column("distribution_usd_per_gal");
    std::map<std::string, AdjustmentFactors> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        AdjustmentFactors& a = out[row[region]];
        a.region = row[region];
        a.state = row[state];
        a.transport = row[transport];
        FuelFactors f{csv::to_double(row[tax], where), csv::to_double(row[pct], where),
                      csv::to_double(row[mkt], where), csv::to_double(row[dist], where)};
        if (f.tax < 0 || f.marketing < 0 || f.distribution < 0 || f.pct_of_retail < 0 || f.pct_of_retail >= 1) {
            throw ConfigError(where + ": adjustment factors must be non-negative and percentages below 1");
        }
        a.by_fuel[parse_fuel(row[fuel])] = f;
    }
    return out;
}

PriceHistory read_naphtha_history(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    const std::size_t gas = t.column("gasoline_usd_per_gal");
    const std::size_t nap = t.column("naphtha_usd_per_gal");
    PriceHistory h;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        h.gasoline.push_back(csv::to_double(t.rows[i][gas], where));
        h.naphtha.push_back(csv::to_double(t.rows[i][nap], where));
    }
    return h;
}

void write_gate_csv(const std::filesystem::path& path, const FuelPriceTrack& track,
                    const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    csv::write_metadata(out, metadata);
    out << "year,fuel,usd_per_gal\n";
    for (std::size_t i = 0; i < track.prices.size(); ++i) {
        const int y = track.first_year + static_cast<int>(i);
        const auto& p = track.prices[i];
        out << y << ",naphtha," << csv::format_double(p.naphtha) << '\n';
        out << y << ",jet," << csv::format_double(p.jet) << '\n';
        out << y << ",diesel," << csv::format_double(p.diesel) << '\n';
    }
}

}  // namespace ies::fuel
