#include "ies/co2supply.hpp"
#include "ies/config.hpp"
#include "ies/dispatch.hpp"
#include "ies/error.hpp"
#include "ies/finance.hpp"
#include "ies/fuelmarket.hpp"
#include "ies/plant.hpp"
#include "ies/pricegen.hpp"
#include "ies/study.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace ies;

namespace {

py::dict schedule_dict(const dispatch::DispatchSchedule& s) {
    py::dict d;
    d["price"] = s.price;
    d["grid_mw"] = s.grid_mw;
    d["htse_mw"] = s.htse_mw;
    d["h2_kg_h"] = s.h2_kg_h;
    d["storage_kg"] = s.storage_kg;
    d["objective"] = s.objective;
    d["terminal_value_per_kg"] = s.terminal_value_per_kg;
    return d;
}

py::dict result_dict(const study::ScenarioResult& r) {
    py::dict d;
    d["feasible"] = r.feasible;
    d["realizations"] = r.realizations;
    d["npv_mean"] = r.npv_mean;
    d["bau_npv_mean"] = r.bau_npv_mean;
    d["dnpv_mean"] = r.dnpv_mean;
    d["dnpv_std"] = r.dnpv_std;
    d["dnpv_samples"] = r.dnpv_samples;
    d["ptc_share"] = r.ptc_share;
    d["normalized_production"] = r.normalized_production;
    if (!r.feasible) {
        d["infeasible_reason"] = r.infeasible_reason;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nuclear synfuel IES study engine";

    static py::exception<Error> base(m, "EngineError");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
    py::register_exception<ShortfallError>(m, "ShortfallError", base.ptr());
    py::register_exception<FitError>(m, "FitError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    py::class_<ProductTriple>(m, "ProductTriple")
        .def(py::init<>())
        .def(py::init([](double naphtha, double jet, double diesel) { return ProductTriple{naphtha, jet, diesel}; }),
             py::arg("naphtha"), py::arg("jet"), py::arg("diesel"))
        .def_readwrite("naphtha", &ProductTriple::naphtha)
        .def_readwrite("jet", &ProductTriple::jet)
        .def_readwrite("diesel", &ProductTriple::diesel)
        .def("__repr__", [](const ProductTriple& t) {
            return "ProductTriple(naphtha=" + std::to_string(t.naphtha) + ", jet=" + std::to_string(t.jet) +
                   ", diesel=" + std::to_string(t.diesel) + ")";
        });

    py::class_<TechnoParams>(m, "TechnoParams")
        .def(py::init<>())
        .def_readwrite("htse_elec_spec", &TechnoParams::htse_elec_spec)
        .def_readwrite("htse_thermal_spec", &TechnoParams::htse_thermal_spec)
        .def_readwrite("thermal_to_elec_eff", &TechnoParams::thermal_to_elec_eff)
        .def_readwrite("effective_spec_override", &TechnoParams::effective_spec_override)
        .def_readwrite("htse_var_om_per_mwh", &TechnoParams::htse_var_om_per_mwh)
        .def_readwrite("ft_elec_demand_mw", &TechnoParams::ft_elec_demand_mw)
        .def_readwrite("ft_yields", &TechnoParams::ft_yields)
        .def_readwrite("densities_kg_per_l", &TechnoParams::densities_kg_per_l)
        .def_readwrite("liters_per_gallon", &TechnoParams::liters_per_gallon)
        .def_readwrite("h2_ptc", &TechnoParams::h2_ptc)
        .def_readwrite("co2_per_h2", &TechnoParams::co2_per_h2);

    py::class_<IesConfiguration>(m, "IesConfiguration")
        .def(py::init([](double htse_mw, double ft_kg_h, double storage_kg) {
                 return IesConfiguration{htse_mw, ft_kg_h, storage_kg};
             }),
             py::arg("htse_mw") = 0.0, py::arg("ft_kg_h") = 0.0, py::arg("storage_kg") = 0.0)
        .def_readwrite("htse_mw", &IesConfiguration::htse_mw)
        .def_readwrite("ft_kg_h", &IesConfiguration::ft_kg_h)
        .def_readwrite("storage_kg", &IesConfiguration::storage_kg);

    m.def("effective_elec_spec", &effective_elec_spec, py::arg("params") = TechnoParams{});
    m.def("htse_h2_rate", py::overload_cast<double, const TechnoParams&>(&htse_h2_rate), py::arg("power_mw"),
          py::arg("params") = TechnoParams{});
    m.def("co2_demand", &co2_demand, py::arg("h2_kg_h"), py::arg("params") = TechnoParams{});

    // pricegen
    auto pg = m.def_submodule("pricegen");
    py::class_<pricegen::SyntheticPriceModel>(pg, "SyntheticPriceModel")
        .def("to_json", [](const pricegen::SyntheticPriceModel& model) { return pricegen::to_json(model); })
        .def_static("from_json", &pricegen::model_from_json);
    pg.def(
        "train",
        [](std::vector<double> prices, std::vector<double> periods, int harmonics, int ar_order, int ma_order,
           bool preserve_cdf) {
            pricegen::TrainOptions o;
            o.periods = std::move(periods);
            o.harmonics = harmonics;
            o.p = ar_order;
            o.q = ma_order;
            o.preserve_cdf = preserve_cdf;
            return pricegen::train(pricegen::make_hourly_series(std::move(prices)), o);
        },
        py::arg("prices"), py::arg("periods") = std::vector<double>{8760.0, 168.0, 24.0}, py::arg("harmonics") = 3,
        py::arg("ar_order") = 3, py::arg("ma_order") = 1, py::arg("preserve_cdf") = true);
    pg.def("generate", &pricegen::generate, py::arg("model"), py::arg("hours"), py::arg("seed"));
    pg.def("read_prices", [](const std::filesystem::path& p) { return pricegen::read_price_csv(p).prices; });
    pg.def("moments", [](const std::vector<double>& v) {
        const auto mo = pricegen::compute_moments(v);
        return py::dict(py::arg("mean") = mo.mean, py::arg("std") = mo.std, py::arg("min") = mo.min,
                        py::arg("q25") = mo.q25, py::arg("q50") = mo.q50, py::arg("q75") = mo.q75,
                        py::arg("max") = mo.max, py::arg("kurtosis") = mo.kurtosis, py::arg("skewness") = mo.skewness);
    });
    pg.def("validate_moments", [](const std::vector<double>& historical, const std::vector<double>& synthetic) {
        const auto r = pricegen::validate_moments(historical, synthetic);
        py::list out;
        for (const auto& c : r.checks) {
            out.append(py::dict(py::arg("name") = c.name, py::arg("historical") = c.historical,
                                py::arg("synthetic") = c.synthetic, py::arg("pass") = c.pass));
        }
        return out;
    });

    // dispatch
    auto dp = m.def_submodule("dispatch");
    dp.def("marginal_h2_value", &dispatch::marginal_h2_value, py::arg("params") = TechnoParams{},
           py::arg("fuel_prices") = ProductTriple{});
    dp.def(
        "optimize",
        [](std::vector<double> prices, double npp_capacity_mw, const IesConfiguration& config,
           std::optional<double> initial_storage_kg, const ProductTriple& fuel_prices, const TechnoParams& params) {
            dispatch::DispatchProblem p;
            p.prices = std::move(prices);
            p.npp_capacity_mw = npp_capacity_mw;
            p.config = config;
            p.params = params;
            p.fuel_prices = fuel_prices;
            p.initial_storage_kg = initial_storage_kg.value_or(dispatch::default_initial_storage(config));
            return schedule_dict(dispatch::optimize_dispatch(p));
        },
        py::arg("prices"), py::arg("npp_capacity_mw"), py::arg("config"), py::arg("initial_storage_kg") = py::none(),
        py::arg("fuel_prices") = ProductTriple{}, py::arg("params") = TechnoParams{});

    // finance
    auto fi = m.def_submodule("finance");
    fi.def("macrs_schedule", &finance::macrs_schedule, py::arg("years") = 15);
    fi.def("npv", [](const std::vector<double>& cf, double wacc) { return finance::npv(cf, wacc); }, py::arg("cashflows"),
           py::arg("wacc"));
    fi.def("change_in_profitability", &finance::change_in_profitability, py::arg("npv_case"), py::arg("npv_ref"),
           py::arg("npv_baseline"));

    // co2
    auto co = m.def_submodule("co2");
    co.def(
        "supply_curve",
        [](const std::filesystem::path& registry, const std::filesystem::path& cost_table,
           const std::filesystem::path& calibration, double bound_tpy) {
            const auto curve = co2::build_supply_curve(co2::read_registry(registry), bound_tpy,
                                                       co2::read_cost_table(cost_table),
                                                       co2::fit_transport(co2::read_calibration(calibration)));
            py::list out;
            for (const auto& bp : curve.points) {
                out.append(py::make_tuple(bp.cum_qty_tpy, bp.avg_cost, bp.marginal_source));
            }
            return out;
        },
        py::arg("registry"), py::arg("cost_table"), py::arg("calibration"), py::arg("bound_tpy"));

    // fuel
    auto fu = m.def_submodule("fuel");
    fu.def(
        "retail_to_gate",
        [](double retail, double tax, double pct_of_retail, double marketing, double distribution) {
            return fuel::retail_to_gate(retail, fuel::FuelFactors{tax, pct_of_retail, marketing, distribution}).value;
        },
        py::arg("retail"), py::arg("tax") = 0.0, py::arg("pct_of_retail") = 0.0, py::arg("marketing") = 0.0,
        py::arg("distribution") = 0.0);

    // scenarios and studies
    m.def(
        "scenario_hash", [](const std::filesystem::path& path) { return config::load_scenario(path).hash; },
        py::arg("path"));
    m.def(
        "capacity_ranges",
        [](const std::filesystem::path& path) {
            const auto cfg = config::load_scenario(path);
            const auto r = capacity_ranges(cfg.site, cfg.techno);
            return py::dict(py::arg("htse_mw") = py::make_tuple(r.htse_mw.min, r.htse_mw.max),
                            py::arg("ft_kg_h") = py::make_tuple(r.ft_kg_h.min, r.ft_kg_h.max),
                            py::arg("storage_kg") = py::make_tuple(r.storage_kg.min, r.storage_kg.max));
        },
        py::arg("path"));
    m.def(
        "monte_carlo_npv",
        [](const std::filesystem::path& path, const IesConfiguration& config, std::optional<int> realizations,
           std::optional<std::uint64_t> seed, int jobs) {
            const auto cfg = config::load_scenario(path);
            study::ScenarioResult r;
            {
                py::gil_scoped_release release;
                const auto sc = study::prepare_scenario(cfg);
                const study::PriceBank bank(sc.model, realizations.value_or(cfg.study.realizations),
                                            sc.finance.project_life, seed.value_or(cfg.study.base_seed), jobs);
                r = study::monte_carlo_npv(sc, config, bank, {}, jobs);
            }
            return result_dict(r);
        },
        py::arg("scenario"), py::arg("config"), py::arg("realizations") = py::none(), py::arg("seed") = py::none(),
        py::arg("jobs") = 1);
}
