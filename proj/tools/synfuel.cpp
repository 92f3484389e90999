// synfuel: command-line driver for the nuclear synfuel IES study engine.

#include "ies/co2supply.hpp"
#include "ies/config.hpp"
#include "ies/csv.hpp"
#include "ies/dispatch.hpp"
#include "ies/error.hpp"
#include "ies/finance.hpp"
#include "ies/fuelmarket.hpp"
#include "ies/plant.hpp"
#include "ies/pricegen.hpp"
#include "ies/study.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ies;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<int> realizations;
    std::optional<int> points;
    std::string out = ".";
    int years = 10;
    int year = 1;
    int realization = 0;
    std::optional<double> htse_mw;
    std::optional<double> ft_kg_h;
    std::optional<double> storage_kg;
    bool verbose = false;
};

struct Context {
    config::ScenarioConfig cfg;
    std::uint64_t seed = 0;
    int jobs = 1;
    int realizations = 0;
    int points = 0;
    fs::path out;

    std::vector<std::string> metadata(const std::string& artifact) const {
        return {"artifact=" + artifact, "scenario=" + cfg.name, "site=" + cfg.site.id,
                "config_sha256=" + cfg.hash, "seed=" + std::to_string(seed)};
    }
};

Context make_context(const Options& o) {
    Context c;
    c.cfg = config::load_scenario(o.config);
    c.seed = o.seed.value_or(c.cfg.study.base_seed);
    c.jobs = o.jobs.value_or(c.cfg.study.jobs);
    c.realizations = o.realizations.value_or(c.cfg.study.realizations);
    c.points = o.points.value_or(c.cfg.study.sweep_points);
    if (c.jobs < 1 || c.realizations < 2 || c.points < 1) {
        throw ConfigError("--jobs and --points must be >= 1 and --realizations >= 2");
    }
    c.cfg.study.base_seed = c.seed;
    c.cfg.study.realizations = c.realizations;
    c.cfg.study.sweep_points = c.points;
    c.out = o.out;
    fs::create_directories(c.out);
    return c;
}

void announce(const fs::path& p) {
    std::cout << "wrote " << p.string() << '\n';
}

std::optional<IesConfiguration> configuration_from(const Options& o, const config::ScenarioConfig& cfg) {
    if (o.htse_mw || o.ft_kg_h || o.storage_kg) {
        if (!(o.htse_mw && o.ft_kg_h && o.storage_kg)) {
            throw ConfigError("--htse-mw, --ft-kg-h and --storage-kg must be given together");
        }
        IesConfiguration c{*o.htse_mw, *o.ft_kg_h, *o.storage_kg};
        validate_configuration(c, cfg.site, cfg.techno);
        return c;
    }
    return cfg.configuration;
}

IesConfiguration require_configuration(const Options& o, const config::ScenarioConfig& cfg) {
    auto c = configuration_from(o, cfg);
    if (!c) {
        throw ConfigError("no configuration: add a 'configuration' block to the scenario or pass "
                          "--htse-mw, --ft-kg-h and --storage-kg");
    }
    return *c;
}

void write_moments_csv(const fs::path& path, const pricegen::MomentReport& r, const std::vector<std::string>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    csv::write_metadata(out, meta);
    out << "statistic,historical,synthetic,delta,pass\n";
    for (const auto& c : r.checks) {
        out << c.name << ',' << csv::format_double(c.historical) << ',' << csv::format_double(c.synthetic) << ','
            << csv::format_double(c.delta) << ',' << (c.pass ? 1 : 0) << '\n';
    }
}

int cmd_train(const Options& o) {
    const Context c = make_context(o);
    const auto history = pricegen::read_price_csv(c.cfg.prices.history);
    const auto model = pricegen::train(history, c.cfg.prices.train, c.cfg.site.id);
    const fs::path path = c.out / "price_model.json";
    pricegen::save_model(path, model);
    announce(path);
    return 0;
}

int cmd_generate(const Options& o) {
    const Context c = make_context(o);
    if (o.years < 1) {
        throw ConfigError("--years must be >= 1");
    }
    const auto history = pricegen::read_price_csv(c.cfg.prices.history);
    const auto model = c.cfg.prices.model ? pricegen::load_model(*c.cfg.prices.model)
                                          : pricegen::train(history, c.cfg.prices.train, c.cfg.site.id);
    const std::size_t hours = static_cast<std::size_t>(o.years) * 8760;
    const auto series = pricegen::generate_series(model, hours, c.seed, history.timestamps.back() + 3600);
    const fs::path prices = c.out / "synthetic_prices.csv";
    pricegen::write_price_csv(prices, series, c.metadata("synthetic_prices"));
    announce(prices);
    const auto report = pricegen::validate_moments(history.prices, series.prices);
    const fs::path moments = c.out / "moments.csv";
    write_moments_csv(moments, report, c.metadata("moments"));
    announce(moments);
    return report.all_pass() ? 0 : 1;
}

int cmd_dispatch(const Options& o) {
    const Context c = make_context(o);
    const IesConfiguration config = require_configuration(o, c.cfg);
    const study::Scenario sc = study::prepare_scenario(c.cfg);
    if (o.year < 1 || o.year > sc.finance.project_life) {
        throw ConfigError("--year must lie in 1.." + std::to_string(sc.finance.project_life));
    }
    dispatch::DispatchProblem p;
    p.prices = pricegen::generate(sc.model, 8760, study::derive_seed(c.seed, o.realization, o.year));
    p.config = config;
    p.npp_capacity_mw = sc.site.npp_capacity_mw;
    p.params = sc.techno;
    p.fuel_prices = sc.fuel_track.at(sc.first_operating_year + o.year - 1) *
                    std::pow(1.0 + sc.finance.inflation, o.year - 1);
    p.initial_storage_kg = sc.initial_storage_fraction * config.storage_kg;
    const auto schedule = dispatch::optimize_dispatch(p);
    const fs::path path = c.out / "dispatch.csv";
    auto meta = c.metadata("dispatch");
    meta.push_back("realization=" + std::to_string(o.realization));
    meta.push_back("year=" + std::to_string(o.year));
    meta.push_back("marginal_h2_value_usd_per_mwh=" +
                   csv::format_double(dispatch::marginal_h2_value(p.params, p.fuel_prices)));
    dispatch::write_schedule_csv(path, schedule, meta);
    announce(path);
    return 0;
}

int cmd_supply_curve(const Options& o) {
    const Context c = make_context(o);
    const study::Scenario sc = study::prepare_scenario(c.cfg);
    const fs::path path = c.out / "supply_curve.csv";
    co2::write_curve_csv(path, sc.supply_curve, c.metadata("supply_curve"));
    announce(path);
    return 0;
}

void write_gate(const Context& c, const study::Scenario& sc) {
    const fs::path path = c.out / "gate_prices.csv";
    auto meta = c.metadata("gate_prices");
    meta.push_back("region=" + sc.site.fuel_region);
    meta.push_back("naphtha_to_gasoline_ratio=" + csv::format_double(sc.naphtha_ratio));
    for (const auto& w : sc.fuel_warnings) {
        meta.push_back("warning=" + w);
    }
    fuel::write_gate_csv(path, sc.fuel_track, meta);
    announce(path);
}

int cmd_gate_prices(const Options& o) {
    const Context c = make_context(o);
    write_gate(c, study::prepare_scenario(c.cfg));
    return 0;
}

struct Study {
    study::Scenario scenario;
    study::PriceBank bank;
};

Study make_study(const Context& c) {
    study::Scenario sc = study::prepare_scenario(c.cfg);
    study::PriceBank bank(sc.model, c.realizations, sc.finance.project_life, c.seed, c.jobs);
    return {std::move(sc), std::move(bank)};
}

void write_result(const Context& c, const study::Scenario& sc, const study::ScenarioResult& r,
                  std::optional<std::size_t> points, std::span<const study::SensitivityCase> cases) {
    study::SummaryInputs in;
    in.scenario = &sc;
    in.result = &r;
    in.seed = c.seed;
    in.sweep_points = points;
    in.sensitivity = cases;
    const fs::path summary = c.out / "summary.json";
    study::write_text(summary, study::summary_json(in));
    announce(summary);
    if (r.feasible) {
        const fs::path ledger = c.out / "ledger.csv";
        finance::write_ledger_csv(ledger, r.mean_ledger, sc.finance.wacc, c.metadata("ledger"));
        announce(ledger);
    }
}

int cmd_npv(const Options& o) {
    const Context c = make_context(o);
    const IesConfiguration config = require_configuration(o, c.cfg);
    const Study s = make_study(c);
    const auto r = study::monte_carlo_npv(s.scenario, config, s.bank, {}, c.jobs);
    write_result(c, s.scenario, r, std::nullopt, {});
    if (!r.feasible) {
        throw InfeasibleError(r.infeasible_reason);
    }
    return 0;
}

study::ScenarioResult run_sweep(const Context& c, const Study& s, bool verbose) {
    study::SweepOptions opts;
    opts.points_per_axis = c.points;
    opts.jobs = c.jobs;
    opts.checkpoint = c.out / "sweep.checkpoint";
    std::size_t done = 0;
    if (verbose) {
        opts.progress = [&](const study::SweepPoint& p) {
            std::cerr << "point " << ++done << " (" << p.i << ',' << p.j << ',' << p.k
                      << ") dnpv=" << csv::format_double(p.dnpv_mean) << '\n';
        };
    }
    const auto points = study::capacity_sweep(s.scenario, s.bank, opts);
    const fs::path path = c.out / "sweep.csv";
    study::write_sweep_csv(path, points, c.metadata("sweep"));
    announce(path);
    const auto best = points[study::select_optimum(points)];
    return study::monte_carlo_npv(s.scenario, best.config, s.bank, {}, c.jobs);
}

int cmd_sweep(const Options& o) {
    const Context c = make_context(o);
    const Study s = make_study(c);
    const auto r = run_sweep(c, s, o.verbose);
    write_result(c, s.scenario, r, static_cast<std::size_t>(c.points), {});
    return 0;
}

std::vector<study::SensitivityCase> run_sensitivity(const Context& c, const Study& s,
                                                    const study::ScenarioResult& reference) {
    const auto cases = study::sensitivity_suite(s.scenario, s.bank, reference, c.cfg.study.sensitivity, c.jobs);
    const fs::path path = c.out / "sensitivity.csv";
    study::write_sensitivity_csv(path, cases, c.metadata("sensitivity"));
    announce(path);
    return cases;
}

int cmd_sensitivity(const Options& o) {
    const Context c = make_context(o);
    const Study s = make_study(c);
    const auto given = configuration_from(o, c.cfg);
    const auto reference = given ? study::monte_carlo_npv(s.scenario, *given, s.bank, {}, c.jobs)
                                 : run_sweep(c, s, o.verbose);
    if (!reference.feasible) {
        throw InfeasibleError(reference.infeasible_reason);
    }
    const auto cases = run_sensitivity(c, s, reference);
    write_result(c, s.scenario, reference, given ? std::nullopt : std::optional<std::size_t>(c.points), cases);
    return 0;
}

int cmd_report(const Options& o) {
    const Context c = make_context(o);
    const Study s = make_study(c);
    pricegen::save_model(c.out / "price_model.json", s.scenario.model);
    announce(c.out / "price_model.json");
    const auto history = pricegen::read_price_csv(c.cfg.prices.history);
    std::vector<double> synthetic;
    for (int y = 1; y <= std::min(10, s.bank.years()); ++y) {
        const auto p = s.bank.prices(0, y);
        synthetic.insert(synthetic.end(), p.begin(), p.end());
    }
    write_moments_csv(c.out / "moments.csv", pricegen::validate_moments(history.prices, synthetic),
                      c.metadata("moments"));
    announce(c.out / "moments.csv");
    co2::write_curve_csv(c.out / "supply_curve.csv", s.scenario.supply_curve, c.metadata("supply_curve"));
    announce(c.out / "supply_curve.csv");
    write_gate(c, s.scenario);

    const auto reference = run_sweep(c, s, o.verbose);
    const auto cases = run_sensitivity(c, s, reference);
    write_result(c, s.scenario, reference, static_cast<std::size_t>(c.points), cases);
    return 0;
}

int report_error(const std::string& kind, const std::string& message, nlohmann::json extra = {}) {
    nlohmann::json j = {{"error", kind}, {"message", message}};
    if (extra.is_object()) {
        j.update(extra);
    }
    std::cerr << j.dump() << '\n';
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nuclear synfuel IES techno-economic study engine"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool study_flags) {
        sub->add_option("--config", o.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "Base seed (overrides study.base_seed)");
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
        if (study_flags) {
            sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
            sub->add_option("--realizations", o.realizations, "Price realizations per configuration");
        }
    };
    auto config_flags = [&](CLI::App* sub) {
        sub->add_option("--htse-mw", o.htse_mw, "HTSE capacity (MWe)");
        sub->add_option("--ft-kg-h", o.ft_kg_h, "FT hydrogen feed (kg/h)");
        sub->add_option("--storage-kg", o.storage_kg, "Hydrogen storage (kg)");
    };

    auto* train = app.add_subcommand("train", "Fit the synthetic price model to the price history");
    common(train, false);
    auto* generate = app.add_subcommand("generate", "Emit synthetic price years and compare moments");
    common(generate, false);
    generate->add_option("--years", o.years, "Synthetic years to generate")->capture_default_str();
    auto* disp = app.add_subcommand("dispatch", "Export one year of optimal hourly dispatch");
    common(disp, false);
    config_flags(disp);
    disp->add_option("--year", o.year, "Operating year (1-based)")->capture_default_str();
    disp->add_option("--realization", o.realization, "Price realization index")->capture_default_str();
    auto* curve = app.add_subcommand("supply-curve", "Build the CO2 supply curve");
    common(curve, false);
    auto* gate = app.add_subcommand("gate-prices", "Derive refinery-gate fuel prices");
    common(gate, false);
    auto* npv = app.add_subcommand("npv", "Monte Carlo NPV of a single configuration");
    common(npv, true);
    config_flags(npv);
    auto* sweep = app.add_subcommand("sweep", "Evaluate the capacity lattice and select the optimum");
    common(sweep, true);
    sweep->add_option("--points", o.points, "Lattice points per axis");
    sweep->add_flag("--verbose", o.verbose, "Report progress on stderr");
    auto* sens = app.add_subcommand("sensitivity", "One-at-a-time sensitivity around the optimum");
    common(sens, true);
    config_flags(sens);
    sens->add_option("--points", o.points, "Lattice points per axis when no configuration is given");
    sens->add_flag("--verbose", o.verbose, "Report progress on stderr");
    auto* report = app.add_subcommand("report", "Run the whole study and collect every artifact");
    common(report, true);
    report->add_option("--points", o.points, "Lattice points per axis");
    report->add_flag("--verbose", o.verbose, "Report progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage_error", e.what());
    }

    try {
        if (*train) {
            return cmd_train(o);
        }
        if (*generate) {
            return cmd_generate(o);
        }
        if (*disp) {
            return cmd_dispatch(o);
        }
        if (*curve) {
            return cmd_supply_curve(o);
        }
        if (*gate) {
            return cmd_gate_prices(o);
        }
        if (*npv) {
            return cmd_npv(o);
        }
        if (*sweep) {
            return cmd_sweep(o);
        }
        if (*sens) {
            return cmd_sensitivity(o);
        }
        return cmd_report(o);
    } catch (const ConvergenceError& e) {
        return report_error(e.kind(), e.what(), {{"iterations", e.iterations()}, {"gradient_norm", e.gradient_norm()}});
    } catch (const InfeasibleError& e) {
        return report_error(e.kind(), e.what(), {{"first_failing_hour", e.first_failing_hour()}});
    } catch (const ShortfallError& e) {
        return report_error(e.kind(), e.what(), {{"deficit_tpy", e.deficit_tpy()}});
    } catch (const Error& e) {
        return report_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return report_error("internal_error", e.what());
    }
}
