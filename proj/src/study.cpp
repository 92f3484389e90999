#include "ies/study.hpp"

#include "ies/csv.hpp"
#include "ies/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace ies::study {

Perturbation perturbation_for(const config::SensitivitySpec& spec) {
    Perturbation p;
    if (spec.parameter == "h2_ptc") {
        p.h2_ptc = spec.value;
    } else if (spec.parameter == "fuel_price") {
        p.fuel_price_factor = spec.value;
    } else if (spec.parameter == "capex") {
        p.capex_factor = spec.value;
    } else if (spec.parameter == "om") {
        p.om_factor = spec.value;
    } else if (spec.parameter == "co2_adder") {
        p.co2_adder_per_t = spec.value;
    } else {
        throw ConfigError("unknown sensitivity parameter '" + spec.parameter + "'");
    }
    return p;
}

TechnoParams apply(const TechnoParams& techno, const Perturbation& p) {
    TechnoParams t = techno;
    if (p.h2_ptc) {
        t.h2_ptc = *p.h2_ptc;
    }
    t.htse_capex_per_kw *= p.capex_factor;
    t.ft_ref_capex *= p.capex_factor;
    t.storage_capex_per_kg *= p.capex_factor;
    t.htse_fixed_om_per_mw_yr *= p.om_factor;
    t.htse_var_om_per_mwh *= p.om_factor;
    t.ft_fixed_om_ref *= p.om_factor;
    t.ft_var_om_ref *= p.om_factor;
    return t;
}

std::uint64_t derive_seed(std::uint64_t base_seed, int realization, int year) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed & 0xFFFFFFFFu), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(year)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::size_t error_index = n;
    std::exception_ptr error;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<ProductTriple> Scenario::operating_fuel_prices() const {
    std::vector<ProductTriple> out;
    for (int t = 0; t < finance.project_life; ++t) {
        out.push_back(fuel_track.at(first_operating_year + t));
    }
    return out;
}

Scenario prepare_scenario(const config::ScenarioConfig& cfg) {
    Scenario s;
    s.name = cfg.name;
    s.config_hash = cfg.hash;
    s.site = cfg.site;
    s.techno = cfg.techno;
    s.techno.points_per_axis = cfg.study.sweep_points;
    s.finance = cfg.finance;
    s.first_operating_year = cfg.fuel.first_operating_year;
    s.initial_storage_fraction = cfg.initial_storage_fraction;
    s.study = cfg.study;
    s.configuration = cfg.configuration;

    if (cfg.prices.model) {
        s.model = pricegen::load_model(*cfg.prices.model);
    } else {
        s.model = pricegen::train(pricegen::read_price_csv(cfg.prices.history), cfg.prices.train, cfg.site.id);
    }

    co2::CostTable table = co2::read_cost_table(cfg.co2.cost_table);
    table.purity_threshold_pct = cfg.co2.purity_threshold_pct;
    s.transport = cfg.co2.transport ? *cfg.co2.transport
                                    : co2::fit_transport(co2::read_calibration(*cfg.co2.transport_calibration));
    // The curve has to price every FT feed the sweep can pick, which may
    // exceed the station bound when the FT also draws on stored hydrogen.
    const CapacityRanges ranges = capacity_ranges(s.site, s.techno);
    double bound = std::max(s.site.co2_demand_bound_tpy, co2_demand(ranges.ft_kg_h.max, s.techno));
    if (cfg.configuration) {
        bound = std::max(bound, co2_demand(cfg.configuration->ft_kg_h, s.techno));
    }
    s.supply_curve = co2::build_supply_curve(co2::read_registry(cfg.co2.registry), bound, table, s.transport,
                                             cfg.co2.ordering);

    const auto adjustments = fuel::read_adjustments(cfg.fuel.adjustments);
    const auto factors = adjustments.find(s.site.fuel_region);
    if (factors == adjustments.end()) {
        throw ConfigError("no adjustment factors for fuel region '" + s.site.fuel_region + "'");
    }
    if (cfg.fuel.naphtha_ratio) {
        s.naphtha_ratio = *cfg.fuel.naphtha_ratio;
    } else {
        const fuel::PriceHistory h = fuel::read_naphtha_history(*cfg.fuel.naphtha_history);
        s.naphtha_ratio = fuel::fit_naphtha_ratio(h.gasoline, h.naphtha);
    }
    const fuel::RetailForecast retail = fuel::read_retail_csv(cfg.fuel.retail, s.site.fuel_region);
    s.fuel_track = fuel::gate_price_track(retail, factors->second, s.naphtha_ratio, cfg.fuel.track_first_year,
                                          cfg.fuel.track_last_year, &s.fuel_warnings);
    return s;
}

PriceBank::PriceBank(const pricegen::SyntheticPriceModel& model, int realizations, int years,
                     std::uint64_t base_seed, int jobs, std::size_t hours_per_year)
    : realizations_(realizations), years_(years), base_seed_(base_seed) {
    if (realizations < 1 || years < 1 || hours_per_year == 0) {
        throw ContractError("PriceBank: need at least one realization, year and hour");
    }
    traces_.resize(static_cast<std::size_t>(realizations) * static_cast<std::size_t>(years));
    parallel_for(traces_.size(), jobs, [&](std::size_t idx) {
        const int r = static_cast<int>(idx / static_cast<std::size_t>(years));
        const int y = static_cast<int>(idx % static_cast<std::size_t>(years)) + 1;
        traces_[idx] = pricegen::generate(model, hours_per_year, derive_seed(base_seed, r, y));
    });
}

std::span<const double> PriceBank::prices(int realization, int year) const {
    if (realization < 0 || realization >= realizations_ || year < 1 || year > years_) {
        throw ContractError("PriceBank: realization or year out of range");
    }
    return traces_[static_cast<std::size_t>(realization) * static_cast<std::size_t>(years_) +
                   static_cast<std::size_t>(year - 1)];
}

namespace {

struct Realization {
    finance::CashflowLedger ies;
    finance::CashflowLedger bau;
    double npv = 0.0;
    double bau_npv = 0.0;
    ProductTriple gallons;  // mean per year
};

double grid_only_revenue(std::span<const double> prices, double npp) {
    double sum = 0.0;
    for (double p : prices) {
        sum += p * npp;
    }
    return sum;
}

Realization run_realization(const Scenario& sc, const IesConfiguration& config, const TechnoParams& tech,
                            const Perturbation& pert, const PriceBank& bank, int r) {
    const auto& fin = sc.finance;
    const int life = fin.project_life;
    const std::vector<ProductTriple> base_prices = sc.operating_fuel_prices();
    const ProductTriple per_kg = gallons_per_kg_h2(tech);

    finance::LedgerInputs in;
    in.config = config;
    in.supply_curve = &sc.supply_curve;
    in.co2_adder_per_t = pert.co2_adder_per_t;
    std::vector<double> bau_revenue;
    double storage = sc.initial_storage_fraction * config.storage_kg;
    ProductTriple gallons;

    for (int t = 1; t <= life; ++t) {
        const auto prices = bank.prices(r, t);
        const double esc = std::pow(1.0 + fin.inflation, t - 1);
        const ProductTriple gate = base_prices[static_cast<std::size_t>(t - 1)] * pert.fuel_price_factor;

        dispatch::DispatchProblem problem;
        problem.prices.assign(prices.begin(), prices.end());
        problem.config = config;
        problem.npp_capacity_mw = sc.site.npp_capacity_mw;
        problem.params = tech;
        if (t > fin.ptc_duration) {
            problem.params.h2_ptc = 0.0;
        }
        problem.fuel_prices = gate * esc;
        problem.initial_storage_kg = std::min(storage, config.storage_kg);
        const dispatch::DispatchSchedule schedule = dispatch::optimize_dispatch(problem);
        const dispatch::DispatchSummary summary = dispatch::annual_dispatch_summary(schedule, tech);
        storage = summary.final_storage_kg;

        in.years.push_back(summary);
        in.fuel_prices.push_back(gate);
        bau_revenue.push_back(grid_only_revenue(prices, sc.site.npp_capacity_mw));
        gallons.naphtha += summary.h2_to_ft_kg * per_kg.naphtha;
        gallons.jet += summary.h2_to_ft_kg * per_kg.jet;
        gallons.diesel += summary.h2_to_ft_kg * per_kg.diesel;
    }

    Realization out;
    out.ies = finance::build_ledger(in, fin, tech, sc.site);
    out.bau = finance::build_bau_ledger(bau_revenue, fin, sc.site);
    out.npv = finance::ledger_npv(out.ies, fin.wacc);
    out.bau_npv = finance::ledger_npv(out.bau, fin.wacc);
    out.gallons = gallons * (1.0 / life);
    return out;
}

void mean_std(std::span<const double> v, double& mean, double& stddev) {
    mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

void accumulate_ledger(finance::CashflowLedger& sum, const finance::CashflowLedger& l) {
    const auto a = sum.lines();
    const auto b = l.lines();
    for (std::size_t c = 0; c < a.size(); ++c) {
        auto* dst = const_cast<std::vector<double>*>(a[c].values);
        for (std::size_t y = 0; y < dst->size(); ++y) {
            (*dst)[y] += (*b[c].values)[y];
        }
    }
    for (std::size_t y = 0; y < sum.taxable_income.size(); ++y) {
        sum.taxable_income[y] += l.taxable_income[y];
    }
}

void scale_ledger(finance::CashflowLedger& l, double s) {
    for (const auto& line : l.lines()) {
        for (double& v : *const_cast<std::vector<double>*>(line.values)) {
            v *= s;
        }
    }
    for (double& v : l.taxable_income) {
        v *= s;
    }
}

std::vector<CategoryValue> category_means(std::span<const Realization> runs, bool bau, double wacc) {
    std::vector<CategoryValue> out;
    const auto names = finance::CashflowLedger(0).lines();
    for (std::size_t c = 0; c < names.size(); ++c) {
        double sum = 0.0;
        for (const auto& run : runs) {
            const auto lines = (bau ? run.bau : run.ies).lines();
            sum += finance::npv(*lines[c].values, wacc);
        }
        out.push_back({names[c].name, sum / static_cast<double>(runs.size())});
    }
    return out;
}

}  // namespace

ScenarioResult monte_carlo_npv(const Scenario& sc, const IesConfiguration& config, const PriceBank& bank,
                               const Perturbation& pert, int jobs) {
    const int n = bank.realizations();
    if (n < 2) {
        throw ContractError("monte_carlo_npv: need at least two realizations");
    }
    if (bank.years() < sc.finance.project_life) {
        throw ContractError("monte_carlo_npv: price bank is shorter than the project life");
    }
    ScenarioResult result;
    result.config = config;
    result.realizations = n;
    const TechnoParams tech = apply(sc.techno, pert);
    validate_configuration(config, sc.site, tech);

    std::vector<Realization> runs(static_cast<std::size_t>(n));
    try {
        parallel_for(runs.size(), jobs, [&](std::size_t r) {
            runs[r] = run_realization(sc, config, tech, pert, bank, static_cast<int>(r));
        });
    } catch (const InfeasibleError& e) {
        result.feasible = false;
        result.infeasible_reason = e.what();
        return result;
    }

    std::vector<double> npvs;
    std::vector<double> bau;
    for (const auto& run : runs) {
        npvs.push_back(run.npv);
        bau.push_back(run.bau_npv);
        result.dnpv_samples.push_back(run.npv - run.bau_npv);
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    double bau_std = 0.0;
    mean_std(npvs, result.npv_mean, result.npv_std);
    mean_std(bau, result.bau_npv_mean, bau_std);
    mean_std(result.dnpv_samples, result.dnpv_mean, result.dnpv_std);
    result.npv_ci95 = 1.96 * result.npv_std / root_n;
    result.dnpv_ci95 = 1.96 * result.dnpv_std / root_n;

    result.mean_ledger = finance::CashflowLedger(sc.finance.project_life);
    ProductTriple gallons;
    for (const auto& run : runs) {
        accumulate_ledger(result.mean_ledger, run.ies);
        gallons.naphtha += run.gallons.naphtha;
        gallons.jet += run.gallons.jet;
        gallons.diesel += run.gallons.diesel;
    }
    scale_ledger(result.mean_ledger, 1.0 / n);
    result.ptc_share = finance::ptc_revenue_share(result.mean_ledger);
    result.normalized_production = gallons * (1.0 / (n * sc.site.npp_capacity_mw));
    result.category_npv = category_means(runs, false, sc.finance.wacc);
    result.bau_category_npv = category_means(runs, true, sc.finance.wacc);
    return result;
}

namespace {

std::string checkpoint_header(const Scenario& sc, const PriceBank& bank, int points) {
    return "# sweep-checkpoint config_sha256=" + sc.config_hash + " seed=" + std::to_string(bank.base_seed()) +
           " realizations=" + std::to_string(bank.realizations()) + " points=" + std::to_string(points);
}

std::map<std::size_t, SweepPoint> read_checkpoint(const std::filesystem::path& path, const std::string& header,
                                                  int points) {
    std::map<std::size_t, SweepPoint> done;
    std::ifstream in(path);
    if (!in) {
        return done;
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw ConfigError("checkpoint " + path.string() + " belongs to a different run; remove it to start over");
    }
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        // A torn final line from an interrupted write is recomputed.
        if (f.size() != 6) {
            continue;
        }
        const std::string where = path.string();
        SweepPoint p;
        try {
            p.i = static_cast<int>(csv::to_integer(f[0], where));
            p.j = static_cast<int>(csv::to_integer(f[1], where));
            p.k = static_cast<int>(csv::to_integer(f[2], where));
            p.feasible = f[3] == "1";
            p.dnpv_mean = csv::to_double(f[4], where);
            p.dnpv_std = csv::to_double(f[5], where);
        } catch (const ConfigError&) {
            continue;
        }
        const std::size_t idx = static_cast<std::size_t>((p.i * points + p.j) * points + p.k);
        done[idx] = p;
    }
    return done;
}

}  // namespace

std::vector<SweepPoint> capacity_sweep(const Scenario& sc, const PriceBank& bank, const SweepOptions& options) {
    TechnoParams tech = sc.techno;
    tech.points_per_axis = options.points_per_axis;
    const CapacityRanges ranges = capacity_ranges(sc.site, tech);
    const int n = options.points_per_axis;
    const auto htse = CapacityRanges::axis(ranges.htse_mw, n);
    const auto ft = CapacityRanges::axis(ranges.ft_kg_h, n);
    const auto storage = CapacityRanges::axis(ranges.storage_kg, n);
    const int ni = static_cast<int>(htse.size());
    const int nj = static_cast<int>(ft.size());
    const int nk = static_cast<int>(storage.size());

    std::vector<SweepPoint> points;
    for (int i = 0; i < ni; ++i) {
        for (int j = 0; j < nj; ++j) {
            for (int k = 0; k < nk; ++k) {
                SweepPoint p;
                p.i = i;
                p.j = j;
                p.k = k;
                p.config = {htse[static_cast<std::size_t>(i)], ft[static_cast<std::size_t>(j)],
                            storage[static_cast<std::size_t>(k)]};
                p.seed = bank.base_seed();
                p.feasible = p.config.ft_kg_h <= htse_h2_rate(p.config.htse_mw, tech) * (1.0 + 1e-9);
                points.push_back(p);
            }
        }
    }
    const auto index_of = [&](const SweepPoint& p) {
        return static_cast<std::size_t>((p.i * nj + p.j) * nk + p.k);
    };

    std::map<std::size_t, SweepPoint> done;
    std::ofstream checkpoint;
    const std::string header = checkpoint_header(sc, bank, n);
    if (options.checkpoint) {
        done = read_checkpoint(*options.checkpoint, header, n);
        const bool fresh = !std::filesystem::exists(*options.checkpoint);
        checkpoint.open(*options.checkpoint, std::ios::app | std::ios::binary);
        if (!checkpoint) {
            throw ConfigError("cannot write checkpoint " + options.checkpoint->string());
        }
        if (fresh) {
            checkpoint << header << '\n' << std::flush;
        }
    }

    std::vector<std::size_t> todo;
    for (auto& p : points) {
        const auto it = done.find(index_of(p));
        if (it != done.end()) {
            p.feasible = it->second.feasible;
            p.dnpv_mean = it->second.dnpv_mean;
            p.dnpv_std = it->second.dnpv_std;
        } else if (p.feasible) {
            todo.push_back(index_of(p));
        }
    }

    std::mutex writer;
    parallel_for(todo.size(), options.jobs, [&](std::size_t t) {
        SweepPoint& p = points[todo[t]];
        const ScenarioResult r = monte_carlo_npv(sc, p.config, bank);
        std::lock_guard<std::mutex> lock(writer);
        p.feasible = r.feasible;
        p.dnpv_mean = r.feasible ? r.dnpv_mean : 0.0;
        p.dnpv_std = r.feasible ? r.dnpv_std : 0.0;
        if (checkpoint.is_open()) {
            checkpoint << p.i << ',' << p.j << ',' << p.k << ',' << (p.feasible ? 1 : 0) << ','
                       << csv::format_double(p.dnpv_mean) << ',' << csv::format_double(p.dnpv_std) << '\n'
                       << std::flush;
        }
        if (options.progress) {
            options.progress(p);
        }
    });
    return points;
}

namespace {

struct Candidate {
    double dnpv;
    double storage;
    double htse;
};

// True when a should be preferred over b.
bool better(const Candidate& a, const Candidate& b) {
    const double tol = 1e-9 * std::max(std::abs(a.dnpv), std::abs(b.dnpv));
    if (std::abs(a.dnpv - b.dnpv) > tol) {
        return a.dnpv > b.dnpv;
    }
    if (a.storage != b.storage) {
        return a.storage < b.storage;
    }
    return a.htse < b.htse;
}

template <typename T, typename F>
std::size_t argbest(std::span<const T> items, F candidate) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto c = candidate(items[i]);
        if (!c) {
            continue;
        }
        if (!best || better(*c, *candidate(items[*best]))) {
            best = i;
        }
    }
    if (!best) {
        throw InfeasibleError("select_optimum: no feasible configuration");
    }
    return *best;
}

}  // namespace

std::size_t select_optimum(std::span<const SweepPoint> points) {
    return argbest(points, [](const SweepPoint& p) -> std::optional<Candidate> {
        if (!p.feasible) {
            return std::nullopt;
        }
        return Candidate{p.dnpv_mean, p.config.storage_kg, p.config.htse_mw};
    });
}

std::size_t select_optimum(std::span<const ScenarioResult> results) {
    return argbest(results, [](const ScenarioResult& r) -> std::optional<Candidate> {
        if (!r.feasible) {
            return std::nullopt;
        }
        return Candidate{r.dnpv_mean, r.config.storage_kg, r.config.htse_mw};
    });
}

std::vector<SensitivityCase> sensitivity_suite(const Scenario& sc, const PriceBank& bank,
                                               const ScenarioResult& reference,
                                               const std::vector<config::SensitivitySpec>& suite, int jobs) {
    if (!reference.feasible) {
        throw InfeasibleError("sensitivity_suite: reference configuration is infeasible");
    }
    std::vector<SensitivityCase> out(suite.size());
    parallel_for(suite.size(), jobs, [&](std::size_t i) {
        SensitivityCase& c = out[i];
        c.parameter = suite[i].parameter;
        c.value = suite[i].value;
        c.result = monte_carlo_npv(sc, reference.config, bank, perturbation_for(suite[i]));
        if (!c.result.feasible) {
            throw InfeasibleError("sensitivity case " + c.parameter + "=" + csv::format_double(c.value) +
                                  ": " + c.result.infeasible_reason);
        }
        c.change = finance::change_in_profitability(c.result.npv_mean, reference.npv_mean, reference.bau_npv_mean);
    });
    return out;
}

std::vector<std::string> provenance(const Scenario& sc, std::uint64_t seed) {
    return {"scenario=" + sc.name, "site=" + sc.site.id, "config_sha256=" + sc.config_hash,
            "seed=" + std::to_string(seed)};
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepPoint> points,
                     const std::vector<std::string>& metadata) {
    std::ofstream out = open_output(path);
    csv::write_metadata(out, metadata);
    out << "htse_mwe,ft_tph,storage_t,dnpv_mean,dnpv_std,feasible,i,j,k,seed\n";
    for (const auto& p : points) {
        out << csv::format_double(p.config.htse_mw) << ',' << csv::format_double(p.config.ft_kg_h / 1000.0) << ','
            << csv::format_double(p.config.storage_kg / 1000.0) << ',';
        if (p.feasible) {
            out << csv::format_double(p.dnpv_mean) << ',' << csv::format_double(p.dnpv_std) << ",1";
        } else {
            out << "nan,nan,0";
        }
        out << ',' << p.i << ',' << p.j << ',' << p.k << ',' << p.seed << '\n';
    }
}

void write_sensitivity_csv(const std::filesystem::path& path, std::span<const SensitivityCase> cases,
                           const std::vector<std::string>& metadata) {
    std::ofstream out = open_output(path);
    csv::write_metadata(out, metadata);
    out << "parameter,value,change_pct\n";
    for (const auto& c : cases) {
        out << c.parameter << ',' << csv::format_double(c.value) << ',' << csv::format_double(100.0 * c.change)
            << '\n';
    }
}

namespace {

nlohmann::json triple_json(const ProductTriple& t) {
    return {{"naphtha", t.naphtha}, {"jet", t.jet}, {"diesel", t.diesel}};
}

nlohmann::json categories_json(const std::vector<CategoryValue>& v) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& c : v) {
        out[c.name] = c.npv;
    }
    return out;
}

}  // namespace

std::string summary_json(const SummaryInputs& in) {
    if (in.scenario == nullptr || in.result == nullptr) {
        throw ContractError("summary_json: scenario and result are required");
    }
    const Scenario& sc = *in.scenario;
    const ScenarioResult& r = *in.result;
    const IesConfiguration& c = r.config;
    const double htse_rate = htse_h2_rate(c.htse_mw, sc.techno);

    nlohmann::json j;
    j["schema"] = "synfuel.summary.v1";
    j["scenario"] = sc.name;
    j["site"] = {{"id", sc.site.id}, {"name", sc.site.name}, {"npp_capacity_mw", sc.site.npp_capacity_mw}};
    j["config_sha256"] = sc.config_hash;
    j["seed"] = in.seed;
    j["realizations"] = r.realizations;
    if (in.sweep_points) {
        j["sweep_points_per_axis"] = *in.sweep_points;
    }
    nlohmann::json opt;
    opt["htse_mwe"] = c.htse_mw;
    opt["ft_tph"] = c.ft_kg_h / 1000.0;
    opt["storage_t"] = c.storage_kg / 1000.0;
    opt["ft_to_htse_h2_ratio"] = htse_rate > 0.0 ? c.ft_kg_h / htse_rate : 0.0;
    opt["storage_hours_of_htse"] = htse_rate > 0.0 ? c.storage_kg / htse_rate : 0.0;
    j["configuration"] = opt;
    j["feasible"] = r.feasible;
    if (!r.feasible) {
        j["infeasible_reason"] = r.infeasible_reason;
    } else {
        j["npv"] = {{"mean", r.npv_mean}, {"std", r.npv_std}, {"ci95", r.npv_ci95}};
        j["bau_npv_mean"] = r.bau_npv_mean;
        j["dnpv"] = {{"mean", r.dnpv_mean}, {"std", r.dnpv_std}, {"ci95", r.dnpv_ci95}};
        j["ptc_revenue_share"] = r.ptc_share;
        j["normalized_production_gal_per_mwe_yr"] = triple_json(r.normalized_production);
        j["category_npv_mean"] = categories_json(r.category_npv);
        j["bau_category_npv_mean"] = categories_json(r.bau_category_npv);
    }
    if (!in.sensitivity.empty()) {
        nlohmann::json cases = nlohmann::json::array();
        for (const auto& s : in.sensitivity) {
            cases.push_back({{"parameter", s.parameter},
                             {"value", s.value},
                             {"change_pct", 100.0 * s.change},
                             {"dnpv_mean", s.result.dnpv_mean}});
        }
        j["sensitivity"] = cases;
    }
    j["inputs"] = {{"naphtha_to_gasoline_ratio", sc.naphtha_ratio},
                   {"transport", {{"a", sc.transport.a}, {"b", sc.transport.b}, {"c", sc.transport.c},
                                  {"beta", sc.transport.beta}}},
                   {"co2_curve_extent_tpy", sc.supply_curve.extent()},
                   {"effective_elec_spec_kwh_per_kg", effective_elec_spec(sc.techno)}};
    if (!sc.fuel_warnings.empty()) {
        j["warnings"] = sc.fuel_warnings;
    }
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_output(path);
    out << text;
}

}  // namespace ies::study
