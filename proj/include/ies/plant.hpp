#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ies {

/// One value per FT product. Used for yields (kg/kg-H2), prices ($/gal),
/// densities (kg/L) and flows, depending on context.
struct ProductTriple {
    double naphtha = 0.0;
    double jet = 0.0;
    double diesel = 0.0;

    double sum() const noexcept { return naphtha + jet + diesel; }
};

inline ProductTriple operator*(const ProductTriple& a, double s) {
    return {a.naphtha * s, a.jet * s, a.diesel * s};
}

inline const char* const kProductNames[3] = {"naphtha", "jet", "diesel"};

struct SiteParams {
    std::string id;
    std::string name;
    double npp_capacity_mw = 0.0;
    std::string market;
    std::string state;
    double state_tax_rate = 0.0;
    std::string fuel_region;
    double capacity_payment_rate = 0.0;  // $/MW-yr
    /// Net capacity of every unit at the station; CO2 upper bounds are summed per unit.
    std::vector<double> unit_capacities_mw;
    /// Annual CO2 the supply curve must cover (t/yr).
    double co2_demand_bound_tpy = 0.0;

    void validate() const;
};

struct TechnoParams {
    double htse_elec_spec = 36.8;       // kWh-e/kg
    double htse_thermal_spec = 6.4;     // kWh-t/kg
    double thermal_to_elec_eff = 0.33;
    /// Replaces the computed effective spec when set (kWh-e/kg).
    std::optional<double> effective_spec_override;

    double htse_capex_per_kw = 703.0;
    double htse_fixed_om_per_mw_yr = 32600.0;
    double htse_var_om_per_mwh = 3.4;

    double ft_elec_demand_mw = 14.9;
    ProductTriple ft_yields{0.69, 0.84, 0.46};
    double ft_ref_capacity_kg_h = 10625.0;
    double ft_ref_capex = 158102945.0;
    double ft_fixed_om_ref = 7640007.0;   // $/yr at reference scale
    double ft_var_om_ref = 21732221.0;    // $/yr at reference scale, full rate
    double ft_scaling_exponent = 1.0;

    double storage_capex_per_kg = 500.0;
    double co2_per_h2 = 6.20;  // kg-CO2/kg-H2

    ProductTriple densities_kg_per_l{0.745, 0.80, 0.84};
    double liters_per_gallon = 3.78541;

    double h2_ptc = 3.0;  // $/kg

    double min_total_power_mw = 100.0;
    double max_total_power_mw = 1000.0;
    double storage_hours = 24.0;
    int points_per_axis = 10;

    void validate() const;
};

struct IesConfiguration {
    double htse_mw = 0.0;
    double ft_kg_h = 0.0;
    double storage_kg = 0.0;

    bool ft_built() const noexcept { return ft_kg_h > 0.0; }
};

/// Throws ContractError on negative capacities or when HTSE plus FT load
/// exceeds the NPP. An FT feed above the HTSE rate is left to dispatch,
/// where storage may carry it for a while.
void validate_configuration(const IesConfiguration& config, const SiteParams& site, const TechnoParams& p);

double effective_elec_spec(const TechnoParams& p);

/// kg-H2/h produced at `power_mw` of HTSE input; requires 0 <= power <= capacity.
double htse_h2_rate(double power_mw, const TechnoParams& p, double capacity_mw);
double htse_h2_rate(double power_mw, const TechnoParams& p);

/// MWe needed to produce `h2_kg_h`.
double htse_power_for(double h2_kg_h, const TechnoParams& p);

/// kg/h of each product for `h2_kg_h` of FT feed.
ProductTriple ft_outputs(double h2_kg_h, const TechnoParams& p);

/// Gallons of each product per kg of H2 fed to the FT.
ProductTriple gallons_per_kg_h2(const TechnoParams& p);

/// Annual CO2 demand in t/yr for a steady FT feed of `h2_kg_h`.
double co2_demand(double h2_kg_h, const TechnoParams& p);

/// Upper bound on annual CO2 demand for the station: every unit's output net
/// of the FT load, converted to H2 and then to CO2.
double co2_upper_bound(const SiteParams& site, const TechnoParams& p);

struct Range {
    double min = 0.0;
    double max = 0.0;
};

struct CapacityRanges {
    Range htse_mw;
    Range ft_kg_h;
    Range storage_kg;
    int points = 10;

    /// `points` equidistant values of one axis; a single value when min == max.
    static std::vector<double> axis(const Range& r, int points);
};

/// Sweep ranges for a site. Throws InfeasibleError when the station cannot
/// supply the minimum total power requirement.
CapacityRanges capacity_ranges(const SiteParams& site, const TechnoParams& p);

// Component costs ------------------------------------------------------------

double htse_capex(double htse_mw, const TechnoParams& p);
double ft_capex(double ft_kg_h, const TechnoParams& p);
double storage_capex(double storage_kg, const TechnoParams& p);
double htse_fixed_om(double htse_mw, const TechnoParams& p);
double ft_fixed_om(double ft_kg_h, const TechnoParams& p);
/// FT variable O&M for a year of steady operation.
double ft_var_om(double ft_kg_h, const TechnoParams& p);

}  // namespace ies
