#include "ies/plant.hpp"

#include "ies/error.hpp"

#include <cmath>

namespace ies {

namespace {

constexpr double kHoursPerYear = 8760.0;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ContractError(std::string(name) + " must be positive");
    }
}

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ContractError(std::string(name) + " must be non-negative");
    }
}

double ft_scale(double ft_kg_h, const TechnoParams& p) {
    if (ft_kg_h <= 0.0) {
        return 0.0;
    }
    return std::pow(ft_kg_h / p.ft_ref_capacity_kg_h, p.ft_scaling_exponent);
}

}  // namespace

void SiteParams::validate() const {
    require_positive(npp_capacity_mw, "npp_capacity_mw");
    if (!(state_tax_rate >= 0.0 && state_tax_rate < 1.0)) {
        throw ContractError("state_tax_rate must lie in [0, 1)");
    }
    require_non_negative(capacity_payment_rate, "capacity_payment_rate");
    require_non_negative(co2_demand_bound_tpy, "co2_demand_bound_tpy");
    for (double u : unit_capacities_mw) {
        require_positive(u, "unit capacity");
    }
}

void TechnoParams::validate() const {
    require_positive(htse_elec_spec, "htse_elec_spec");
    require_non_negative(htse_thermal_spec, "htse_thermal_spec");
    require_non_negative(thermal_to_elec_eff, "thermal_to_elec_eff");
    if (effective_spec_override) {
        require_positive(*effective_spec_override, "effective_spec_override");
    }
    require_non_negative(htse_capex_per_kw, "htse_capex_per_kw");
    require_non_negative(htse_fixed_om_per_mw_yr, "htse_fixed_om_per_mw_yr");
    require_non_negative(htse_var_om_per_mwh, "htse_var_om_per_mwh");
    require_non_negative(ft_elec_demand_mw, "ft_elec_demand_mw");
    require_positive(ft_yields.naphtha, "ft_yields.naphtha");
    require_positive(ft_yields.jet, "ft_yields.jet");
    require_positive(ft_yields.diesel, "ft_yields.diesel");
    require_positive(ft_ref_capacity_kg_h, "ft_ref_capacity_kg_h");
    require_non_negative(ft_ref_capex, "ft_ref_capex");
    require_non_negative(ft_fixed_om_ref, "ft_fixed_om_ref");
    require_non_negative(ft_var_om_ref, "ft_var_om_ref");
    require_positive(ft_scaling_exponent, "ft_scaling_exponent");
    require_non_negative(storage_capex_per_kg, "storage_capex_per_kg");
    require_non_negative(co2_per_h2, "co2_per_h2");
    require_positive(densities_kg_per_l.naphtha, "densities.naphtha");
    require_positive(densities_kg_per_l.jet, "densities.jet");
    require_positive(densities_kg_per_l.diesel, "densities.diesel");
    require_positive(liters_per_gallon, "liters_per_gallon");
    require_non_negative(h2_ptc, "h2_ptc");
    require_positive(min_total_power_mw, "min_total_power_mw");
    if (max_total_power_mw < min_total_power_mw) {
        throw ContractError("max_total_power_mw must be >= min_total_power_mw");
    }
    require_non_negative(storage_hours, "storage_hours");
    if (points_per_axis < 1) {
        throw ContractError("points_per_axis must be >= 1");
    }
}

void validate_configuration(const IesConfiguration& c, const SiteParams& site, const TechnoParams& p) {
    require_non_negative(c.htse_mw, "htse capacity");
    require_non_negative(c.ft_kg_h, "ft capacity");
    require_non_negative(c.storage_kg, "storage capacity");
    const double ft_load = c.ft_built() ? p.ft_elec_demand_mw : 0.0;
    if (c.htse_mw + ft_load > site.npp_capacity_mw * (1.0 + 1e-12)) {
        throw ContractError("HTSE plus FT electric load exceeds the NPP capacity");
    }
}

double effective_elec_spec(const TechnoParams& p) {
    if (p.effective_spec_override) {
        return *p.effective_spec_override;
    }
    return p.htse_elec_spec + p.htse_thermal_spec * p.thermal_to_elec_eff;
}

double htse_h2_rate(double power_mw, const TechnoParams& p, double capacity_mw) {
    if (!(power_mw >= 0.0) || power_mw > capacity_mw) {
        throw ContractError("htse_h2_rate: power outside [0, capacity]");
    }
    return power_mw * 1000.0 / effective_elec_spec(p);
}

double htse_h2_rate(double power_mw, const TechnoParams& p) {
    if (!(power_mw >= 0.0)) {
        throw ContractError("htse_h2_rate: negative power");
    }
    return power_mw * 1000.0 / effective_elec_spec(p);
}

double htse_power_for(double h2_kg_h, const TechnoParams& p) {
    return h2_kg_h * effective_elec_spec(p) / 1000.0;
}

ProductTriple ft_outputs(double h2_kg_h, const TechnoParams& p) {
    if (!(h2_kg_h >= 0.0)) {
        throw ContractError("ft_outputs: negative hydrogen feed");
    }
    return p.ft_yields * h2_kg_h;
}

ProductTriple gallons_per_kg_h2(const TechnoParams& p) {
    const double l = p.liters_per_gallon;
    return {p.ft_yields.naphtha / (p.densities_kg_per_l.naphtha * l),
            p.ft_yields.jet / (p.densities_kg_per_l.jet * l),
            p.ft_yields.diesel / (p.densities_kg_per_l.diesel * l)};
}

double co2_demand(double h2_kg_h, const TechnoParams& p) {
    if (!(h2_kg_h >= 0.0)) {
        throw ContractError("co2_demand: negative hydrogen feed");
    }
    return h2_kg_h * p.co2_per_h2 * kHoursPerYear / 1000.0;
}

double co2_upper_bound(const SiteParams& site, const TechnoParams& p) {
    std::vector<double> units = site.unit_capacities_mw;
    if (units.empty()) {
        units.push_back(site.npp_capacity_mw);
    }
    double total = 0.0;
    for (double u : units) {
        const double power = std::max(0.0, u - p.ft_elec_demand_mw);
        total += co2_demand(htse_h2_rate(power, p), p);
    }
    return total;
}

std::vector<double> CapacityRanges::axis(const Range& r, int points) {
    if (points <= 1 || r.max == r.min) {
        return {r.min};
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        out[static_cast<std::size_t>(i)] = r.min + (r.max - r.min) * i / (points - 1);
    }
    out.back() = r.max;
    return out;
}

CapacityRanges capacity_ranges(const SiteParams& site, const TechnoParams& p) {
    if (site.npp_capacity_mw <= p.min_total_power_mw) {
        throw InfeasibleError("site " + site.id + ": NPP capacity " + std::to_string(site.npp_capacity_mw) +
                              " MWe does not exceed the minimum total power requirement of " +
                              std::to_string(p.min_total_power_mw) + " MWe");
    }
    CapacityRanges r;
    r.points = p.points_per_axis;
    r.htse_mw.min = p.min_total_power_mw - p.ft_elec_demand_mw;
    r.htse_mw.max = std::min(p.max_total_power_mw, site.npp_capacity_mw) - p.ft_elec_demand_mw;
    r.ft_kg_h.min = htse_h2_rate(r.htse_mw.min, p);
    r.ft_kg_h.max = htse_h2_rate(r.htse_mw.max, p);
    r.storage_kg.min = 0.0;
    r.storage_kg.max = p.storage_hours * r.ft_kg_h.max;
    return r;
}

double htse_capex(double htse_mw, const TechnoParams& p) {
    return htse_mw * 1000.0 * p.htse_capex_per_kw;
}

double ft_capex(double ft_kg_h, const TechnoParams& p) {
    return p.ft_ref_capex * ft_scale(ft_kg_h, p);
}

double storage_capex(double storage_kg, const TechnoParams& p) {
    return storage_kg * p.storage_capex_per_kg;
}

double htse_fixed_om(double htse_mw, const TechnoParams& p) {
    return htse_mw * p.htse_fixed_om_per_mw_yr;
}

double ft_fixed_om(double ft_kg_h, const TechnoParams& p) {
    return p.ft_fixed_om_ref * ft_scale(ft_kg_h, p);
}

double ft_var_om(double ft_kg_h, const TechnoParams& p) {
    if (ft_kg_h <= 0.0) {
        return 0.0;
    }
    return p.ft_var_om_ref * ft_kg_h / p.ft_ref_capacity_kg_h;
}

}  // namespace ies
