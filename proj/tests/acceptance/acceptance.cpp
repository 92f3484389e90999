// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   acceptance [--criterion ID]... [--work DIR] [--prepare] [--jobs N]
//
// Criterion 7 reads the pack study written by --prepare into DIR; when the
// file is missing it runs the study first.

#include "CLI11.hpp"
#include "json.hpp"

#include "dispatch_cases.hpp"
#include "ies/co2supply.hpp"
#include "ies/config.hpp"
#include "ies/dispatch.hpp"
#include "ies/error.hpp"
#include "ies/finance.hpp"
#include "ies/plant.hpp"
#include "ies/pricegen.hpp"
#include "ies/study.hpp"
#include "oracles.hpp"
#include "sites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ies;

namespace {

const fs::path kData = SYNFUEL_DATA_DIR;
const std::vector<std::string> kSites = {"braidwood", "cooper", "davis_besse", "prairie_island", "south_texas"};

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------

Outcome criterion_1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto y = oracle::simulate_arma({0.8}, {}, 50000, 1);
    const auto est = pricegen::estimate_arma(y, 1, 0);
    const double phi = est.ar.at(0);
    o.require(phi >= 0.77 && phi <= 0.83, "phi " + fmt(phi) + " outside [0.77, 0.83]");

    std::vector<double> wave(50000);
    for (std::size_t t = 0; t < wave.size(); ++t) {
        wave[t] = 12.0 + 7.5 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0 + 0.4);
    }
    const std::vector<double> periods{24.0};
    const auto f = pricegen::fit_fourier(wave, periods, 1);
    const double a = 7.5 * std::cos(0.4), b = 7.5 * std::sin(0.4);
    const double err = std::max({std::abs(f.offset - 12.0), std::abs(f.sin_coeffs.at(0) - a),
                                 std::abs(f.cos_coeffs.at(0) - b)});
    o.require(err <= 1e-6, "fourier error " + fmt(err));
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "runtime " + fmt(secs) + " s");
    o.detail = o.pass ? "phi=" + fmt(phi) + " fourier_err=" + fmt(err, 2) + " " + fmt(secs, 3) + "s" : o.detail;
    return o;
}

// 2 -------------------------------------------------------------------------

Outcome criterion_2() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int checks = 0;
    for (const auto& site : kSites) {
        const auto cfg = config::load_scenario(kData / "scenarios" / (site + ".json"));
        const auto history = pricegen::read_price_csv(cfg.prices.history);
        const auto model = pricegen::train(history, cfg.prices.train, site);
        const auto synthetic = pricegen::generate(model, 10 * 8760, cfg.study.base_seed);
        const auto report = pricegen::validate_moments(history.prices, synthetic);
        for (const auto& c : report.checks) {
            ++checks;
            o.require(c.pass, site + " " + c.name + " " + fmt(c.historical) + " vs " + fmt(c.synthetic));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 300.0, "runtime " + fmt(secs) + " s");
    if (o.pass) {
        o.detail = std::to_string(checks) + " statistics pass, " + fmt(secs, 3) + "s";
    }
    return o;
}

// 3 -------------------------------------------------------------------------

Outcome criterion_3() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> hours(1, 6), grid(2, 11);
    int compared = 0;
    double worst = 0.0;
    // FT feed, storage and initial level sit on the oracle's level spacing, so
    // the discretization bound is zero and only rounding separates the two.
    for (int i = 0; i < 200; ++i) {
        const int h = hours(rng), g = grid(rng);
        const auto p = fixture::lattice_instance(rng, h, g);
        double brute = 0.0;
        try {
            brute = dispatch::dispatch_oracle(p, g);
        } catch (const InfeasibleError&) {
            bool lp_infeasible = false;
            try {
                dispatch::optimize_dispatch(p);
            } catch (const InfeasibleError&) {
                lp_infeasible = true;
            }
            o.require(lp_infeasible, "instance " + std::to_string(i) + " solved by the LP but not the oracle");
            continue;
        }
        ++compared;
        const double lp = dispatch::optimize_dispatch(p).objective;
        const double scale = std::max(1.0, std::abs(brute));
        const double tol = 1e-9 * scale;
        const double bound = 0.0;
        worst = std::max(worst, std::abs(lp - brute) / scale);
        o.require(lp >= brute - tol && lp <= brute + bound + tol,
                  "instance " + std::to_string(i) + ": lp " + fmt(lp, 12) + " oracle " + fmt(brute, 12));
    }
    o.require(compared >= 100, "only " + std::to_string(compared) + " feasible instances");

    int zero_hours = 0, threshold_hours = 0;
    for (int i = 0; i < 100; ++i) {
        const auto p = fixture::week_instance(rng, 0.0, 0.0);
        const auto s = dispatch::optimize_dispatch(p);
        const double power = htse_power_for(p.config.ft_kg_h, p.params);
        for (std::size_t t = 0; t < s.hours(); ++t) {
            ++zero_hours;
            if (std::abs(s.htse_mw[t] - power) > 1e-6 * std::max(1.0, power)) {
                o.require(false, "zero-storage instance " + std::to_string(i) + " hour " + std::to_string(t));
                break;
            }
        }
    }
    for (int i = 0; i < 100; ++i) {
        const auto p = fixture::week_instance(rng, 1000.0, 0.5);
        const auto s = dispatch::optimize_dispatch(p);
        const double mv = dispatch::marginal_h2_value(p.params, p.fuel_prices);
        for (std::size_t t = 0; t < s.hours(); ++t) {
            ++threshold_hours;
            const double want = p.prices[t] < mv ? p.config.htse_mw : 0.0;
            if (std::abs(s.htse_mw[t] - want) > 1e-6 * std::max(1.0, p.config.htse_mw)) {
                o.require(false, "threshold instance " + std::to_string(i) + " hour " + std::to_string(t));
                break;
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 120.0, "runtime " + fmt(secs) + " s");
    if (o.pass) {
        o.detail = std::to_string(compared) + " oracle matches (worst rel " + fmt(worst, 2) + "), " +
                   std::to_string(zero_hours) + " forced hours, " + std::to_string(threshold_hours) +
                   " threshold hours, " + fmt(secs, 3) + "s";
    }
    return o;
}

// 4 -------------------------------------------------------------------------

Outcome criterion_4() {
    Outcome o;
    const auto f = finance::macrs_schedule(15);
    const double sum = std::accumulate(f.begin(), f.end(), 0.0);
    o.require(std::abs(sum - 1.0) <= 1e-12, "MACRS sum " + fmt(sum, 17));
    o.require(std::abs(f.at(0) - 0.05) <= 1e-12, "MACRS first year " + fmt(f.at(0), 17));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> cash(-5.0e7, 5.0e7), rate(0.0, 0.2);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        finance::CashflowLedger l(20);
        for (int y = 0; y <= 20; ++y) {
            const auto k = static_cast<std::size_t>(y);
            l.electricity[k] = cash(rng);
            l.h2_ptc[k] = cash(rng);
            l.capex[k] = cash(rng);
            l.co2_feedstock[k] = cash(rng);
            l.net[k] = l.reconcile(y);
        }
        const double r = rate(rng);
        worst = std::max(worst, std::abs(finance::ledger_npv(l, r) - oracle::discount(l.net, r)));
    }
    o.require(worst <= 1.0, "NPV off by $" + fmt(worst));

    const double c = finance::change_in_profitability(150.0, 200.0, 100.0);
    o.require(c == -0.5, "change_in_profitability " + fmt(c, 17));
    if (o.pass) {
        o.detail = "MACRS sum-1=" + fmt(sum - 1.0, 2) + ", worst NPV gap $" + fmt(worst, 2) + ", change=" + fmt(c);
    }
    return o;
}

// 5 -------------------------------------------------------------------------

std::vector<co2::Co2Source> random_registry(std::mt19937_64& rng) {
    static const co2::SourceKind kinds[] = {co2::SourceKind::bioethanol, co2::SourceKind::ammonia,
                                            co2::SourceKind::natural_gas, co2::SourceKind::coal,
                                            co2::SourceKind::hydrogen,    co2::SourceKind::iron_steel,
                                            co2::SourceKind::cement};
    std::uniform_int_distribution<int> count(1, 60), kind(0, 6);
    std::uniform_real_distribution<double> cap(1.0e4, 5.0e5), conc(10.0, 100.0), dist(0.0, 900.0);
    std::vector<co2::Co2Source> out;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        out.push_back({"S" + std::to_string(1000 + i), kinds[kind(rng)], std::round(cap(rng)), conc(rng), dist(rng)});
    }
    return out;
}

Outcome criterion_5() {
    Outcome o;
    const auto table = co2::read_cost_table(kData / "co2" / "capture_costs.csv");
    const auto tp = co2::fit_transport(co2::read_calibration(kData / "co2" / "transport_calibration.csv"));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> share(0.05, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto src = random_registry(rng);
        const double total = std::accumulate(src.begin(), src.end(), 0.0,
                                             [](double s, const co2::Co2Source& x) { return s + x.capacity_tpy; });
        const double bound = share(rng) * total;
        const auto curve = co2::build_supply_curve(src, bound, table, tp);
        const auto ref = oracle::sort_and_accumulate(src, bound, table, tp);
        bool same = curve.points.size() == ref.size();
        for (std::size_t k = 0; same && k < ref.size(); ++k) {
            same = curve.points[k].cum_qty_tpy == ref[k].qty && curve.points[k].avg_cost == ref[k].avg;
        }
        o.require(same, "registry " + std::to_string(i) + " differs from the oracle");
    }

    co2::CostTable hand;
    hand.by_kind[co2::SourceKind::bioethanol] = {0.0, 10.0};
    hand.by_kind[co2::SourceKind::cement] = {20.0, 10.0};
    const std::vector<co2::Co2Source> two{{"B", co2::SourceKind::cement, 1.0, 22.4, 5.0},
                                          {"A", co2::SourceKind::bioethanol, 1.0, 99.8, 5.0}};
    const auto hc = co2::build_supply_curve(two, 2.0, hand, co2::TransportParams{});
    const bool hand_ok = hc.points.size() == 2 && hc.points[0].cum_qty_tpy == 1.0 && hc.points[0].avg_cost == 10.0 &&
                         hc.points[1].cum_qty_tpy == 2.0 && hc.points[1].avg_cost == 20.0;
    o.require(hand_ok, "two-source example");

    std::string bounds;
    for (const auto& c : fixture::five_sites()) {
        const double b = co2_upper_bound(c.site, fixture::range_params());
        const double rel = b / c.co2_bound_tpy - 1.0;
        bounds += " " + c.site.id + "=" + fmt(100.0 * rel, 3) + "%";
        o.require(std::abs(rel) <= 0.10, c.site.id + " CO2 bound " + fmt(b) + " vs " + fmt(c.co2_bound_tpy));
    }
    if (o.pass) {
        o.detail = "100 registries exact, hand example ok, bounds" + bounds;
    }
    return o;
}

// 6 -------------------------------------------------------------------------

Outcome criterion_6() {
    Outcome o;
    int cells = 0;
    double worst = 0.0;
    for (const auto& c : fixture::five_sites()) {
        const auto r = capacity_ranges(c.site, fixture::range_params());
        const std::pair<double, double> pairs[] = {
            {r.htse_mw.min, c.htse_min},           {r.htse_mw.max, c.htse_max},
            {r.ft_kg_h.min / 1000.0, c.ft_min_tph}, {r.ft_kg_h.max / 1000.0, c.ft_max_tph},
            {r.storage_kg.min / 1000.0, c.storage_min_t}, {r.storage_kg.max / 1000.0, c.storage_max_t}};
        for (const auto& [got, want] : pairs) {
            ++cells;
            worst = std::max(worst, std::abs(got - want));
            o.require(std::abs(got - want) <= 0.1, c.site.id + ": " + fmt(got, 6) + " vs " + fmt(want, 6));
        }
    }
    if (o.pass) {
        o.detail = std::to_string(cells) + " cells within 0.1 (worst " + fmt(worst, 3) + ")";
    }
    return o;
}

// 7 -------------------------------------------------------------------------

json run_site(const std::string& site, int jobs, const fs::path& work) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = config::load_scenario(kData / "scenarios" / (site + ".json"));
    const study::Scenario sc = study::prepare_scenario(cfg);
    const study::PriceBank bank(sc.model, cfg.study.realizations, sc.finance.project_life, cfg.study.base_seed, jobs);
    study::SweepOptions opts;
    opts.points_per_axis = cfg.study.sweep_points;
    opts.jobs = jobs;
    const auto points = study::capacity_sweep(sc, bank, opts);
    const auto best = points[study::select_optimum(points)];
    const auto result = study::monte_carlo_npv(sc, best.config, bank, {}, jobs);
    const std::vector<config::SensitivitySpec> suite{{"h2_ptc", 0.0}, {"h2_ptc", 2.7}};
    const auto cases = study::sensitivity_suite(sc, bank, result, suite, jobs);

    fs::create_directories(work / site);
    study::write_sweep_csv(work / site / "sweep.csv", points, study::provenance(sc, cfg.study.base_seed));
    study::SummaryInputs in;
    in.scenario = &sc;
    in.result = &result;
    in.seed = cfg.study.base_seed;
    in.sweep_points = static_cast<std::size_t>(cfg.study.sweep_points);
    in.sensitivity = cases;
    study::write_text(work / site / "summary.json", study::summary_json(in));

    const double rate = htse_h2_rate(result.config.htse_mw, sc.techno);
    json j;
    j["site"] = site;
    j["realizations"] = cfg.study.realizations;
    j["sweep_points"] = cfg.study.sweep_points;
    j["htse_mw"] = result.config.htse_mw;
    j["ft_kg_h"] = result.config.ft_kg_h;
    j["storage_kg"] = result.config.storage_kg;
    j["ft_to_htse_ratio"] = rate > 0.0 ? result.config.ft_kg_h / rate : 0.0;
    j["storage_hours"] = rate > 0.0 ? result.config.storage_kg / rate : 0.0;
    j["ptc_share"] = result.ptc_share;
    j["dnpv_mean"] = result.dnpv_mean;
    j["normalized"] = {{"naphtha", result.normalized_production.naphtha},
                       {"jet", result.normalized_production.jet},
                       {"diesel", result.normalized_production.diesel}};
    j["ptc0_dnpv"] = cases[0].result.dnpv_mean;
    j["ptc0_change"] = cases[0].change;
    j["ptc27_change"] = cases[1].change;
    j["seconds"] = seconds_since(t0);
    return j;
}

fs::path pack_file(const fs::path& work) { return work / "pack_results.json"; }

int prepare(const fs::path& work, int jobs) {
    fs::create_directories(work);
    json all = json::array();
    for (const auto& site : kSites) {
        const json j = run_site(site, jobs, work);
        std::cout << "prepared " << site << " in " << fmt(j["seconds"].get<double>(), 4) << "s\n" << std::flush;
        all.push_back(j);
    }
    std::ofstream out(pack_file(work));
    out << all.dump(2) << '\n';
    return 0;
}

json load_pack(const fs::path& work, int jobs) {
    if (!fs::exists(pack_file(work))) {
        prepare(work, jobs);
    }
    std::ifstream in(pack_file(work));
    return json::parse(in);
}

Outcome criterion_7(const json& pack, char part) {
    Outcome o;
    std::string values;
    for (const auto& s : pack) {
        const std::string site = s["site"];
        switch (part) {
            case 'a': {
                const double v = s["ptc_share"];
                values += " " + site + "=" + fmt(v, 3);
                o.require(v >= 0.64 && v <= 0.75, site + " PTC share " + fmt(v, 3));
                break;
            }
            case 'b': {
                const double ratio = s["ft_to_htse_ratio"], hours = s["storage_hours"];
                values += " " + site + "=" + fmt(ratio, 3) + "/" + fmt(hours, 3) + "h";
                o.require(ratio >= 0.90 - 1e-9 && ratio <= 1.00 + 1e-9, site + " FT/HTSE ratio " + fmt(ratio, 3));
                o.require(hours <= 2.7 + 1e-9, site + " storage " + fmt(hours, 3) + " h");
                break;
            }
            case 'c': {
                const auto& n = s["normalized"];
                const double d = n["diesel"], jt = n["jet"], np = n["naphtha"];
                values += " " + site + "=" + fmt(d, 5) + "/" + fmt(jt, 5) + "/" + fmt(np, 5);
                o.require(d >= 1167.0 && d <= 1493.0, site + " diesel " + fmt(d, 5));
                o.require(jt >= 1982.0 && jt <= 2536.0, site + " jet " + fmt(jt, 5));
                o.require(np >= 1806.0 && np <= 2310.0, site + " naphtha " + fmt(np, 5));
                break;
            }
            case 'd': {
                const double v = s["ptc0_dnpv"];
                values += " " + site + "=" + fmt(v / 1e6, 4) + "M";
                o.require(v < 0.0, site + " PTC=0 dNPV " + fmt(v / 1e6, 4) + "M");
                break;
            }
            case 'e': {
                const double v = s["ptc27_change"];
                values += " " + site + "=" + fmt(100.0 * v, 3) + "%";
                o.require(v >= -1.25 && v <= -0.20, site + " PTC=2.7 change " + fmt(100.0 * v, 3) + "%");
                break;
            }
            default:
                throw std::logic_error("unknown part");
        }
    }
    o.detail = (o.pass ? "" : o.detail + " |") + values;
    return o;
}

// 8 -------------------------------------------------------------------------

Outcome criterion_8(const fs::path& work, int jobs) {
    Outcome o;
    auto run = [&](const fs::path& dir) {
        auto cfg = config::load_scenario(kData / "scenarios" / "prairie_island.json");
        const study::Scenario sc = study::prepare_scenario(cfg);
        const study::PriceBank bank(sc.model, 4, sc.finance.project_life, cfg.study.base_seed, jobs);
        study::SweepOptions opts;
        opts.points_per_axis = 3;
        opts.jobs = jobs;
        const auto points = study::capacity_sweep(sc, bank, opts);
        const auto result = study::monte_carlo_npv(sc, points[study::select_optimum(points)].config, bank, {}, jobs);
        fs::remove_all(dir);
        fs::create_directories(dir);
        study::write_sweep_csv(dir / "sweep.csv", points, study::provenance(sc, cfg.study.base_seed));
        study::SummaryInputs in;
        in.scenario = &sc;
        in.result = &result;
        in.seed = cfg.study.base_seed;
        in.sweep_points = 3;
        study::write_text(dir / "summary.json", study::summary_json(in));
    };
    const fs::path a = work / "determinism_a", b = work / "determinism_b";
    run(a);
    run(b);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    for (const char* name : {"sweep.csv", "summary.json"}) {
        const std::string x = slurp(a / name), y = slurp(b / name);
        o.require(!x.empty() && x == y, std::string(name) + " differs");
    }
    if (o.pass) {
        o.detail = "sweep.csv and summary.json byte-identical";
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<std::string> selected;
    fs::path work = fs::temp_directory_path() / "synfuel_acceptance";
    bool only_prepare = false;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--criterion", selected, "1-6, 7a-7e, 7 or 8; repeatable");
    app.add_option("--work", work, "Directory for the pack study and scratch files");
    app.add_flag("--prepare", only_prepare, "Run the pack study for criterion 7 and exit");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        if (only_prepare) {
            return prepare(work, jobs);
        }
        if (selected.empty()) {
            selected = {"1", "2", "3", "4", "5", "6", "7", "8"};
        }
        std::vector<std::string> ids;
        for (const auto& s : selected) {
            if (s == "7") {
                for (const char* p : {"7a", "7b", "7c", "7d", "7e"}) {
                    ids.emplace_back(p);
                }
            } else {
                ids.push_back(s);
            }
        }

        bool all = true;
        std::optional<json> pack;
        for (const auto& id : ids) {
            Outcome o;
            if (id == "1") {
                o = criterion_1();
            } else if (id == "2") {
                o = criterion_2();
            } else if (id == "3") {
                o = criterion_3();
            } else if (id == "4") {
                o = criterion_4();
            } else if (id == "5") {
                o = criterion_5();
            } else if (id == "6") {
                o = criterion_6();
            } else if (id.size() == 2 && id[0] == '7' && id[1] >= 'a' && id[1] <= 'e') {
                if (!pack) {
                    pack = load_pack(work, jobs);
                }
                o = criterion_7(*pack, id[1]);
            } else if (id == "8") {
                o = criterion_8(work, jobs);
            } else {
                std::cerr << "unknown criterion " << id << '\n';
                return 2;
            }
            all = all && o.pass;
            std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << '\n'
                      << std::flush;
        }
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
