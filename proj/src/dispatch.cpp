#include "ies/dispatch.hpp"

#include "ies/csv.hpp"
#include "ies/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace ies::dispatch {

namespace {

// Fenwick tree of segment lengths indexed by slope rank.
class LengthTree {
public:
    explicit LengthTree(std::size_t n) : tree_(n + 1, 0.0) {}

    void add(std::size_t i, double v) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) {
            tree_[i] += v;
        }
    }

    // Sum over ranks [0, n).
    double prefix(std::size_t n) const {
        double s = 0.0;
        for (; n > 0; n -= n & (~n + 1)) {
            s += tree_[n];
        }
        return s;
    }

private:
    std::vector<double> tree_;
};

struct Limits {
    double hmax = 0.0;
    double f = 0.0;
    double u = 0.0;
    double smax = 0.0;
    double spec = 0.0;
    double ft_load = 0.0;
};

Limits limits_of(const DispatchProblem& problem) {
    Limits l;
    l.spec = effective_elec_spec(problem.params);
    l.hmax = htse_h2_rate(problem.config.htse_mw, problem.params);
    l.f = problem.config.ft_kg_h;
    l.smax = problem.config.storage_kg;
    l.ft_load = problem.config.ft_built() ? problem.params.ft_elec_demand_mw : 0.0;
    l.u = l.hmax - l.f;
    const double tol = 1e-9 * std::max(1.0, l.f);
    if (l.u < -tol) {
        // HTSE at full power cannot keep up; storage drains at -u per hour.
        double level = problem.initial_storage_kg;
        const std::size_t hours = problem.prices.size();
        for (std::size_t t = 0; t < hours; ++t) {
            level += l.u;
            if (level < -tol) {
                throw InfeasibleError("dispatch: storage cannot sustain FT inflow; runs dry in hour " +
                                          std::to_string(t),
                                      static_cast<long>(t));
            }
        }
    }
    l.u = std::max(l.u, 0.0);
    return l;
}

}  // namespace

void DispatchProblem::validate() const {
    if (prices.empty()) {
        throw ContractError("dispatch: horizon must contain at least one hour");
    }
    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (!std::isfinite(prices[t])) {
            throw ContractError("dispatch: non-finite price at hour " + std::to_string(t));
        }
    }
    if (!(npp_capacity_mw > 0.0)) {
        throw ContractError("dispatch: NPP capacity must be positive");
    }
    params.validate();
    SiteParams site;
    site.npp_capacity_mw = npp_capacity_mw;
    validate_configuration(config, site, params);
    if (initial_storage_kg < 0.0 || initial_storage_kg > config.storage_kg * (1.0 + 1e-12)) {
        throw ContractError("dispatch: initial storage outside [0, storage capacity]");
    }
}

double default_initial_storage(const IesConfiguration& config) {
    return 0.5 * config.storage_kg;
}

double marginal_h2_value(const TechnoParams& params, const ProductTriple& fuel_prices) {
    const ProductTriple gal = gallons_per_kg_h2(params);
    const double fuel_per_kg =
        gal.naphtha * fuel_prices.naphtha + gal.jet * fuel_prices.jet + gal.diesel * fuel_prices.diesel;
    const double spec = effective_elec_spec(params);
    const double var_om_per_kg = params.htse_var_om_per_mwh * spec / 1000.0;
    return (params.h2_ptc + fuel_per_kg - var_om_per_kg) * (1000.0 / spec);
}

double terminal_value_per_kg(const DispatchProblem& problem) {
    if (!problem.config.ft_built()) {
        return 0.0;
    }
    const double spec = effective_elec_spec(problem.params);
    return (marginal_h2_value(problem.params, problem.fuel_prices) + problem.params.htse_var_om_per_mwh) * spec /
           1000.0;
}

double schedule_objective(const DispatchSchedule& s) {
    double value = 0.0;
    for (std::size_t t = 0; t < s.hours(); ++t) {
        value += s.price[t] * s.grid_mw[t] - s.htse_var_om_per_mwh * s.htse_mw[t];
    }
    const double final_level = s.hours() > 0 ? s.storage_kg.back() : s.initial_storage_kg;
    return value + s.terminal_value_per_kg * final_level;
}

DispatchSchedule optimize_dispatch(const DispatchProblem& problem) {
    problem.validate();
    const Limits lim = limits_of(problem);
    const std::size_t hours = problem.prices.size();
    const double var_om = problem.params.htse_var_om_per_mwh;
    const double terminal = terminal_value_per_kg(problem);

    // Cost of producing one kg in hour t, in the same units as the terminal credit.
    std::vector<double> cost(hours);
    for (std::size_t t = 0; t < hours; ++t) {
        cost[t] = (problem.prices[t] + var_om) * lim.spec / 1000.0;
    }

    // Backward pass over the concave value-to-go, kept as a multiset of
    // (slope, length) segments. Slot `hours` holds the terminal credit.
    std::vector<double> slope_of(hours + 1);
    std::copy(cost.begin(), cost.end(), slope_of.begin());
    slope_of[hours] = terminal;
    std::vector<std::size_t> order(hours + 1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return slope_of[a] < slope_of[b]; });
    std::vector<std::size_t> rank(hours + 1);
    std::vector<double> sorted_slopes(hours + 1);
    for (std::size_t r = 0; r <= hours; ++r) {
        rank[order[r]] = r;
        sorted_slopes[r] = slope_of[order[r]];
    }

    LengthTree tree(hours + 1);
    std::vector<double> length(hours + 1, 0.0);
    std::set<std::size_t> active;
    double total = 0.0;
    auto put = [&](std::size_t r, double len) {
        if (len <= 0.0) {
            return;
        }
        length[r] += len;
        tree.add(r, len);
        active.insert(r);
        total += len;
    };
    auto trim = [&](double amount, bool from_top) {
        while (amount > 0.0 && !active.empty()) {
            auto it = from_top ? std::prev(active.end()) : active.begin();
            const std::size_t r = *it;
            const double take = std::min(amount, length[r]);
            length[r] -= take;
            tree.add(r, -take);
            total -= take;
            amount -= take;
            if (length[r] <= 0.0) {
                active.erase(it);
            }
        }
    };

    put(rank[hours], lim.smax);
    const double window = lim.u + lim.f;
    std::vector<double> target(hours);
    for (std::size_t step = hours; step-- > 0;) {
        // Smallest maximizer: total length of segments steeper than this hour's cost.
        const auto cut = static_cast<std::size_t>(
            std::upper_bound(sorted_slopes.begin(), sorted_slopes.end(), cost[step]) - sorted_slopes.begin());
        target[step] = std::clamp(total - tree.prefix(cut), 0.0, lim.smax);
        if (window > 0.0) {
            put(rank[step], window);
            trim(lim.u, true);
            trim(lim.f, false);
        }
    }

    DispatchSchedule s;
    s.price = problem.prices;
    s.grid_mw.resize(hours);
    s.htse_mw.resize(hours);
    s.h2_kg_h.resize(hours);
    s.storage_kg.resize(hours);
    s.initial_storage_kg = problem.initial_storage_kg;
    s.ft_kg_h = lim.f;
    s.ft_elec_mw = lim.ft_load;
    s.terminal_value_per_kg = terminal;
    s.htse_var_om_per_mwh = var_om;

    double level = problem.initial_storage_kg;
    for (std::size_t t = 0; t < hours; ++t) {
        const double lo = std::max(0.0, level - lim.f);
        const double hi = std::min(lim.smax, level + lim.u);
        const double next = std::clamp(target[t], lo, std::max(lo, hi));
        const double h = std::clamp(next - level + lim.f, 0.0, lim.hmax);
        level = std::clamp(level + h - lim.f, 0.0, lim.smax);
        const double power = std::min(h * lim.spec / 1000.0, problem.config.htse_mw);
        s.h2_kg_h[t] = h;
        s.htse_mw[t] = power;
        s.grid_mw[t] = problem.npp_capacity_mw - lim.ft_load - power;
        s.storage_kg[t] = level;
    }
    s.objective = schedule_objective(s);
    return s;
}

double dispatch_oracle(const DispatchProblem& problem, int grid_points) {
    problem.validate();
    const std::size_t hours = problem.prices.size();
    if (hours > 8) {
        throw ContractError("dispatch_oracle: horizon above 8 hours refused");
    }
    if (grid_points < 2 || grid_points > 21) {
        throw ContractError("dispatch_oracle: grid_points must lie in [2, 21]");
    }
    if (std::pow(static_cast<double>(grid_points), static_cast<double>(hours)) > 1e8) {
        throw ContractError("dispatch_oracle: enumeration exceeds 1e8 paths");
    }
    const double spec = effective_elec_spec(problem.params);
    const double hmax = htse_h2_rate(problem.config.htse_mw, problem.params);
    const double f = problem.config.ft_kg_h;
    const double smax = problem.config.storage_kg;
    const double ft_load = problem.config.ft_built() ? problem.params.ft_elec_demand_mw : 0.0;
    const double var_om = problem.params.htse_var_om_per_mwh;
    const double terminal = terminal_value_per_kg(problem);
    const double tol = 1e-9 * std::max({1.0, f, smax});

    std::vector<double> levels(static_cast<std::size_t>(grid_points));
    for (int k = 0; k < grid_points; ++k) {
        levels[static_cast<std::size_t>(k)] = hmax * k / (grid_points - 1);
    }

    double best = -std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, double, double)> walk = [&](std::size_t t, double level, double value) {
        if (t == hours) {
            best = std::max(best, value + terminal * level);
            return;
        }
        for (double h : levels) {
            const double next = level + h - f;
            if (next < -tol || next > smax + tol) {
                continue;
            }
            const double power = h * spec / 1000.0;
            const double grid = problem.npp_capacity_mw - ft_load - power;
            walk(t + 1, std::clamp(next, 0.0, smax), value + problem.prices[t] * grid - var_om * power);
        }
    };
    walk(0, problem.initial_storage_kg, 0.0);
    if (!std::isfinite(best)) {
        throw InfeasibleError("dispatch_oracle: no feasible path on the discretized grid");
    }
    return best;
}

DispatchSummary annual_dispatch_summary(const DispatchSchedule& s, const TechnoParams& params) {
    DispatchSummary out;
    out.hours = static_cast<double>(s.hours());
    for (std::size_t t = 0; t < s.hours(); ++t) {
        out.mwh_to_grid += s.grid_mw[t];
        out.grid_revenue += s.price[t] * s.grid_mw[t];
        out.htse_mwh += s.htse_mw[t];
        out.h2_produced_kg += s.h2_kg_h[t];
    }
    out.htse_var_om = out.htse_mwh * s.htse_var_om_per_mwh;
    out.h2_to_ft_kg = s.ft_kg_h * out.hours;
    out.products_kg = ft_outputs(out.h2_to_ft_kg, params);
    out.mean_grid_mw = out.hours > 0 ? out.mwh_to_grid / out.hours : 0.0;
    out.initial_storage_kg = s.initial_storage_kg;
    out.final_storage_kg = s.hours() > 0 ? s.storage_kg.back() : s.initial_storage_kg;
    return out;
}

void write_schedule_csv(const std::filesystem::path& path, const DispatchSchedule& s,
                        const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    csv::write_metadata(out, metadata);
    out << "hour,price,grid_mw,htse_mw,h2_kg_h,storage_kg\n";
    for (std::size_t t = 0; t < s.hours(); ++t) {
        out << t << ',' << csv::format_double(s.price[t]) << ',' << csv::format_double(s.grid_mw[t]) << ','
            << csv::format_double(s.htse_mw[t]) << ',' << csv::format_double(s.h2_kg_h[t]) << ','
            << csv::format_double(s.storage_kg[t]) << '\n';
    }
}

}  // namespace ies::dispatch
