#include "ies/co2supply.hpp"

#include "ies/csv.hpp"
#include "ies/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

namespace ies::co2 {

namespace {

constexpr std::array<std::pair<SourceKind, const char*>, 7> kKindNames{{
    {SourceKind::bioethanol, "bioethanol"},
    {SourceKind::ammonia, "ammonia"},
    {SourceKind::natural_gas, "natural_gas"},
    {SourceKind::coal, "coal"},
    {SourceKind::hydrogen, "hydrogen"},
    {SourceKind::iron_steel, "iron_steel"},
    {SourceKind::cement, "cement"},
}};

}  // namespace

SourceKind parse_kind(const std::string& name) {
    for (const auto& [kind, label] : kKindNames) {
        if (name == label) {
            return kind;
        }
    }
    throw ConfigError("unknown CO2 source kind '" + name + "'");
}

std::string to_string(SourceKind kind) {
    for (const auto& [k, label] : kKindNames) {
        if (k == kind) {
            return label;
        }
    }
    return "unknown";
}

void Co2Source::validate() const {
    if (!(capacity_tpy > 0.0)) {
        throw ContractError("CO2 source " + id + ": capacity must be positive");
    }
    if (!(concentration_pct > 0.0 && concentration_pct <= 100.0)) {
        throw ContractError("CO2 source " + id + ": concentration must lie in (0, 100]");
    }
    if (!(distance_km >= 0.0)) {
        throw ContractError("CO2 source " + id + ": negative distance");
    }
}

double capture_cost(const Co2Source& source, const CostTable& table) {
    const auto it = table.by_kind.find(source.kind);
    if (it == table.by_kind.end()) {
        throw ConfigError("no capture cost entry for source kind '" + to_string(source.kind) + "'");
    }
    if (source.concentration_pct >= table.purity_threshold_pct) {
        return it->second.compression;
    }
    return it->second.capture + it->second.compression;
}

double transport_cost(double distance_km, double flow_tpy, const TransportParams& p) {
    if (!(distance_km >= 0.0) || !(flow_tpy > 0.0)) {
        throw ContractError("transport_cost: need distance >= 0 and flow > 0");
    }
    if (distance_km == 0.0) {
        return p.c;
    }
    return p.a * distance_km * std::pow(flow_tpy, -p.beta) + p.b * distance_km + p.c;
}

double unit_cost(const Co2Source& source, const CostTable& table, const TransportParams& transport) {
    return capture_cost(source, table) + transport_cost(source.distance_km, source.capacity_tpy, transport);
}

SupplyCurve build_supply_curve(std::vector<Co2Source> sources, double demand_bound_tpy, const CostTable& table,
                               const TransportParams& transport, Ordering ordering) {
    if (!(demand_bound_tpy >= 0.0)) {
        throw ContractError("build_supply_curve: negative demand bound");
    }
    struct Priced {
        Co2Source source;
        double cost;
    };
    std::vector<Priced> priced;
    priced.reserve(sources.size());
    double available = 0.0;
    for (auto& s : sources) {
        s.validate();
        const double c = unit_cost(s, table, transport);
        available += s.capacity_tpy;
        priced.push_back({std::move(s), c});
    }
    if (available < demand_bound_tpy) {
        const double deficit = demand_bound_tpy - available;
        throw ShortfallError("CO2 registry covers " + std::to_string(available) + " t/yr of the " +
                                 std::to_string(demand_bound_tpy) + " t/yr bound (deficit " +
                                 std::to_string(deficit) + " t/yr)",
                             deficit);
    }
    std::sort(priced.begin(), priced.end(), [ordering](const Priced& x, const Priced& y) {
        const double kx = ordering == Ordering::unit_cost ? x.cost : x.source.distance_km;
        const double ky = ordering == Ordering::unit_cost ? y.cost : y.source.distance_km;
        if (kx != ky) {
            return kx < ky;
        }
        if (x.cost != y.cost) {
            return x.cost < y.cost;
        }
        return x.source.id < y.source.id;
    });

    SupplyCurve curve;
    double qty = 0.0;
    double spend = 0.0;
    for (const auto& p : priced) {
        if (qty >= demand_bound_tpy && !curve.points.empty()) {
            break;
        }
        qty += p.source.capacity_tpy;
        spend += p.cost * p.source.capacity_tpy;
        curve.points.push_back({qty, spend / qty, p.cost, p.source.id});
    }
    return curve;
}

double feedstock_cost(const SupplyCurve& curve, double quantity_tpy) {
    if (!(quantity_tpy >= 0.0)) {
        throw ContractError("feedstock_cost: negative quantity");
    }
    if (quantity_tpy == 0.0) {
        return 0.0;
    }
    const double extent = curve.extent();
    if (quantity_tpy > extent * (1.0 + 1e-12)) {
        throw ShortfallError("CO2 demand of " + std::to_string(quantity_tpy) +
                                 " t/yr exceeds the supply curve extent of " + std::to_string(extent) + " t/yr",
                             quantity_tpy - extent);
    }
    double prev_qty = 0.0;
    double prev_total = 0.0;
    for (const auto& bp : curve.points) {
        const double total = bp.avg_cost * bp.cum_qty_tpy;
        if (quantity_tpy <= bp.cum_qty_tpy) {
            if (quantity_tpy == bp.cum_qty_tpy) {
                return total;
            }
            const double w = (quantity_tpy - prev_qty) / (bp.cum_qty_tpy - prev_qty);
            return prev_total + w * (total - prev_total);
        }
        prev_qty = bp.cum_qty_tpy;
        prev_total = total;
    }
    return prev_total;
}

double average_cost(const SupplyCurve& curve, double quantity_tpy) {
    if (quantity_tpy <= 0.0) {
        return curve.points.empty() ? 0.0 : curve.points.front().unit_cost;
    }
    return feedstock_cost(curve, quantity_tpy) / quantity_tpy;
}

namespace {

struct FitResult {
    TransportParams params;
    double loss = std::numeric_limits<double>::infinity();
};

FitResult fit_at_beta(const std::vector<CalibrationPoint>& pts, double beta) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = pts[static_cast<std::size_t>(i)];
        const double w = 1.0 / p.cost;
        x(i, 0) = w * p.distance_km * std::pow(p.flow_tpy, -beta);
        x(i, 1) = w * p.distance_km;
        x(i, 2) = w;
        y(i) = 1.0;
    }
    const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(y);
    FitResult r;
    r.params = {coef(0), coef(1), coef(2), beta};
    r.loss = (x * coef - y).squaredNorm();
    if (!std::isfinite(r.loss)) {
        r.loss = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace

TransportParams fit_transport(const std::vector<CalibrationPoint>& points) {
    if (points.size() < 4) {
        throw FitError("fit_transport: need at least 4 calibration points");
    }
    for (const auto& p : points) {
        if (!(p.cost > 0.0) || !(p.flow_tpy > 0.0) || !(p.distance_km >= 0.0)) {
            throw FitError("fit_transport: calibration points need positive cost and flow");
        }
    }
    constexpr double kBetaMax = 0.99;
    constexpr int kGrid = 100;
    FitResult best;
    int best_i = 0;
    for (int i = 0; i <= kGrid; ++i) {
        const FitResult r = fit_at_beta(points, kBetaMax * i / kGrid);
        if (r.loss < best.loss) {
            best = r;
            best_i = i;
        }
    }
    double lo = kBetaMax * std::max(0, best_i - 1) / kGrid;
    double hi = kBetaMax * std::min(kGrid, best_i + 1) / kGrid;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    FitResult f1 = fit_at_beta(points, x1);
    FitResult f2 = fit_at_beta(points, x2);
    for (int it = 0; it < 60; ++it) {
        if (f1.loss < f2.loss) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = fit_at_beta(points, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = fit_at_beta(points, x2);
        }
    }
    for (const FitResult& r : {f1, f2}) {
        if (r.loss < best.loss) {
            best = r;
        }
    }
    return best.params;
}

std::vector<Co2Source> read_registry(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    const std::size_t id = t.column("id");
    const std::size_t kind = t.column("kind");
    const std::size_t cap = t.column("capacity_tpy");
    const std::size_t conc = t.column("concentration_pct");
    const std::size_t dist = t.column("distance_km");
    std::vector<Co2Source> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        Co2Source s;
        s.id = row[id];
        s.kind = parse_kind(row[kind]);
        s.capacity_tpy = csv::to_double(row[cap], where);
        s.concentration_pct = csv::to_double(row[conc], where);
        s.distance_km = csv::to_double(row[dist], where);
        try {
            s.validate();
        } catch (const ContractError& e) {
            throw ConfigError(where + ": " + e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

CostTable read_cost_table(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    const std::size_t kind = t.column("kind");
    const std::size_t cap = t.column("capture_usd_per_t");
    const std::size_t comp = t.column("compression_usd_per_t");
    CostTable table;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        table.by_kind[parse_kind(row[kind])] = {csv::to_double(row[cap], where), csv::to_double(row[comp], where)};
    }
    return table;
}

std::vector<CalibrationPoint> read_calibration(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    const std::size_t dist = t.column("distance_km");
    const std::size_t flow = t.column("flow_tpy");
    const std::size_t cost = t.column("cost_usd_per_t");
    std::vector<CalibrationPoint> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        out.push_back({csv::to_double(row[dist], where), csv::to_double(row[flow], where),
                       csv::to_double(row[cost], where)});
    }
    return out;
}

void write_curve_csv(const std::filesystem::path& path, const SupplyCurve& curve,
                     const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    csv::write_metadata(out, metadata);
    out << "cum_qty_tpy,avg_cost_usd_per_t,marginal_source\n";
    for (const auto& bp : curve.points) {
        out << csv::format_double(bp.cum_qty_tpy) << ',' << csv::format_double(bp.avg_cost) << ','
            << bp.marginal_source << '\n';
    }
}

}  // namespace ies::co2
