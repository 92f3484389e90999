#!/usr/bin/env python3
"""Regenerate the bundled five-site scenario pack under data/.

Everything is derived from fixed seeds, so rerunning produces identical files.
Price histories are synthetic stand-ins for day-ahead market data: a
seasonal latent process whose ranks are mapped onto a market-specific
marginal distribution. Retail fuel forecasts are back-solved so that the
refinery-gate means over 2022-2050 land on the target regional averages.
"""

import argparse
import json
import math
from pathlib import Path

import numpy as np

HOURS = 17520
START = np.datetime64("2018-01-01T00:00")

# Quantile knots (probability, $/MWh) of each market's hourly price.
MARKETS = {
    "pjm": [(0, 2.3), (0.0005, 4.2), (0.002, 8.1), (0.01, 15), (0.05, 19.6), (0.12, 21.3),
            (0.25, 22.7), (0.33, 24.8), (0.42, 27), (0.5, 28.8), (0.58, 32), (0.67, 34.9),
            (0.75, 37), (0.8, 38.5), (0.85, 40.5), (0.9, 43.5), (0.95, 50), (0.98, 67),
            (0.99, 120.2), (0.995, 213.4), (0.998, 244.2), (0.999, 256), (0.9995, 268.2), (0.9998, 299.8),
            (1, 933.7)],
    "spp": [(0, -65.1), (0.0005, -24), (0.002, -3.4), (0.01, 6.6), (0.05, 11.6), (0.12, 13.3),
            (0.25, 14.8), (0.33, 16.2), (0.42, 17.8), (0.5, 19.3), (0.58, 22), (0.67, 24.9),
            (0.75, 27.2), (0.85, 30.3), (0.95, 35.5), (0.99, 43.8), (0.996, 55.4), (0.998, 116.9),
            (0.9985, 1049.2), (0.999, 2833.5), (0.9995, 2949.8), (0.9998, 3043.6), (1, 4231)],
    "miso": [(0, -66.2), (0.0005, -23.8), (0.002, -11.2), (0.01, -5.5), (0.05, -2.4), (0.12, -1.2),
             (0.25, -0.5), (0.33, -0.2), (0.42, 0.1), (0.5, 0.5), (0.58, 2.1), (0.67, 8),
             (0.75, 21.5), (0.8, 24.9), (0.85, 27.9), (0.9, 32.1), (0.95, 39.2), (0.98, 47.3),
             (0.99, 52.8), (0.995, 58.8), (0.998, 67.3), (0.999, 74), (0.9995, 81.3), (0.9998, 89.4),
             (1, 97)],
    "ercot": [(0, -20.2), (0.0005, -20), (0.002, -19.2), (0.01, -15.5), (0.05, -0.9), (0.12, 10.8),
              (0.25, 18.9), (0.33, 21), (0.42, 22.6), (0.5, 23.9), (0.58, 25.7), (0.67, 28.4),
              (0.75, 32), (0.8, 35.9), (0.85, 42.5), (0.9, 53.5), (0.95, 73.9), (0.98, 103.1),
              (0.99, 136.5), (0.995, 216.2), (0.998, 626.5), (0.999, 6530.6), (0.9995, 8420.2), (0.9998, 8823.3),
              (1, 8996.8)],
}

REGIONS = {
    # region id: state, transport, Table-5 gate means (naphtha, diesel, jet), taxes (diesel, jet, gasoline)
    "ENC-IL": ("IL", "rail", (0.82, 1.55, 1.85), (0.952, 0.219, 0.817)),
    "ENC-OH": ("OH", "water", (1.15, 1.79, 1.88), (0.714, 0.219, 0.569)),
    "WNC-MN": ("MN", "water", (1.08, 1.80, 1.80), (0.530, 0.369, 0.470)),
    "WNC-NE": ("NE", "water", (0.75, 1.83, 1.93), (0.495, 0.249, 0.441)),
    "WSC": ("TX", "water", (0.71, 1.99, 2.00), (0.444, 0.219, 0.384)),
}
DIESEL_PCT = 0.202
GASOLINE_PCT = 0.156
JET_MARKETING = 0.06
JET_DISTRIBUTION = 0.12
NAPHTHA_TAX = 0.136
NAPHTHA_MARKETING = 0.06
NAPHTHA_DISTRIBUTION = {"rail": 0.36, "water": 0.03}
FIRST_YEAR, LAST_YEAR = 2022, 2050

SITES = {
    "braidwood": dict(name="Braidwood", npp=1194.0, market="pjm", state="IL", tax=0.095, region="ENC-IL",
                      capacity_rate=18250.0, units=[1194.0, 1160.0], bound=2.9e6, lat_seed=11,
                      distance=(30, 420)),
    "cooper": dict(name="Cooper", npp=769.0, market="spp", state="NE", tax=0.075, region="WNC-NE",
                   capacity_rate=0.0, units=[769.0], bound=1.0e6, lat_seed=12, distance=(30, 260)),
    "davis_besse": dict(name="Davis-Besse", npp=894.0, market="pjm", state="OH", tax=0.0, region="ENC-OH",
                        capacity_rate=18250.0, units=[894.0], bound=1.1e6, lat_seed=13, distance=(30, 430)),
    "prairie_island": dict(name="Prairie Island", npp=522.0, market="miso", state="MN", tax=0.098,
                           region="WNC-MN", capacity_rate=1825.0, units=[522.0, 519.0], bound=1.3e6,
                           lat_seed=14, distance=(260, 980)),
    "south_texas": dict(name="South Texas Project", npp=1280.0, market="ercot", state="TX", tax=0.0,
                        region="WSC", capacity_rate=0.0, units=[1280.0], bound=1.7e6, lat_seed=15,
                        distance=(380, 560)),
}
MARKET_SEEDS = {"pjm": 101, "spp": 102, "miso": 103, "ercot": 104}

# kind: (capture $/t, compression $/t, concentration %)
CAPTURE = {
    "bioethanol": (0.0, 14.0, 99.8),
    "ammonia": (0.0, 14.0, 97.1),
    "natural_gas": (0.0, 14.0, 99.0),
    "hydrogen": (48.0, 13.0, 44.5),
    "iron_steel": (68.0, 13.0, 24.8),
    "cement": (74.0, 13.0, 22.4),
    "coal": (58.0, 13.0, 12.5),
}
TRANSPORT = dict(a=45.0, b=0.012, c=3.0, beta=0.45)
EFFECTIVE_SPEC = 39.792
CO2_PER_H2 = 6.2


def latent(seed):
    rng = np.random.default_rng(seed)
    t = np.arange(HOURS, dtype=float)
    hour = t % 24
    dow = (t // 24) % 7
    daily = 0.9 * np.exp(-0.5 * ((hour - 17.0) / 3.5) ** 2) - 0.5 * np.exp(-0.5 * ((hour - 3.5) / 2.5) ** 2)
    weekly = np.where(dow >= 5, -0.35, 0.05)
    annual = 0.45 * np.cos(4 * math.pi * (t - 4800) / 8760) + 0.15 * np.cos(2 * math.pi * (t - 5000) / 8760)
    noise = np.zeros(HOURS)
    e = rng.standard_normal(HOURS)
    for i in range(2, HOURS):
        noise[i] = 1.2 * noise[i - 1] - 0.28 * noise[i - 2] + 0.35 * e[i]
    return daily + weekly + annual + noise


def prices_for(market):
    knots = MARKETS[market]
    u = np.linspace(0.0, 1.0, HOURS)
    marginal = np.interp(u, [k[0] for k in knots], [k[1] for k in knots])
    z = latent(MARKET_SEEDS[market])
    out = np.empty(HOURS)
    out[np.argsort(z, kind="stable")] = marginal
    return np.round(out, 2)


def write_prices(root):
    for market in MARKETS:
        p = prices_for(market)
        stamps = START + np.arange(HOURS).astype("timedelta64[h]")
        with open(root / "prices" / f"{market}.csv", "w", newline="\n") as f:
            f.write("timestamp,price_usd_per_mwh\n")
            for ts, v in zip(stamps, p):
                f.write(f"{str(ts)}:00Z,{v:.2f}\n")


def naphtha_history():
    rng = np.random.default_rng(7)
    months = [f"{y}-{m:02d}" for y in range(2010, 2022) for m in range(1, 13)]
    gasoline = 2.1 + 0.45 * np.sin(np.arange(len(months)) / 9.0) + rng.normal(0, 0.12, len(months))
    naphtha = 0.86 * gasoline + rng.normal(0, 0.06, len(months))
    gasoline = np.round(gasoline, 3)
    naphtha = np.round(naphtha, 3)
    ratio = float(np.dot(gasoline, naphtha) / np.dot(gasoline, gasoline))
    return months, gasoline, naphtha, ratio


def gate_shape():
    years = np.arange(FIRST_YEAR, LAST_YEAR + 1)
    return years, 0.85 + 0.30 * (years - FIRST_YEAR) / (LAST_YEAR - FIRST_YEAR)


def write_fuel(root, ratio):
    years, shape = gate_shape()
    with open(root / "fuel" / "adjustments.csv", "w", newline="\n") as f:
        f.write("region,state,transport,fuel,tax_usd_per_gal,pct_of_retail,marketing_usd_per_gal,"
                "distribution_usd_per_gal\n")
        for region, (state, transport, _, taxes) in REGIONS.items():
            f.write(f"{region},{state},{transport},diesel,{taxes[0]},{DIESEL_PCT},0,0\n")
            f.write(f"{region},{state},{transport},jet,{taxes[1]},0,{JET_MARKETING},{JET_DISTRIBUTION}\n")
            f.write(f"{region},{state},{transport},gasoline,{taxes[2]},{GASOLINE_PCT},0,0\n")
            f.write(f"{region},{state},{transport},naphtha,{NAPHTHA_TAX},0,{NAPHTHA_MARKETING},"
                    f"{NAPHTHA_DISTRIBUTION[transport]}\n")
    for region, (_, transport, (naphtha, diesel, jet), taxes) in REGIONS.items():
        rows = []
        for y, s in zip(years, shape):
            diesel_retail = (diesel * s + taxes[0]) / (1 - DIESEL_PCT)
            jet_retail = jet * s + taxes[1] + JET_MARKETING + JET_DISTRIBUTION
            naphtha_market = naphtha * s + NAPHTHA_TAX + NAPHTHA_MARKETING + NAPHTHA_DISTRIBUTION[transport]
            gasoline_gate = naphtha_market / ratio
            gasoline_retail = (gasoline_gate + taxes[2]) / (1 - GASOLINE_PCT)
            rows += [(y, "diesel", diesel_retail), (y, "jet", jet_retail), (y, "gasoline", gasoline_retail)]
        with open(root / "fuel" / f"retail_{region}.csv", "w", newline="\n") as f:
            f.write("year,fuel,usd_per_gal\n")
            for y, fuel, v in rows:
                f.write(f"{int(y)},{fuel},{float(v)!r}\n")


def write_co2(root):
    with open(root / "co2" / "capture_costs.csv", "w", newline="\n") as f:
        f.write("kind,capture_usd_per_t,compression_usd_per_t\n")
        for kind, (cap, comp, _) in CAPTURE.items():
            f.write(f"{kind},{cap},{comp}\n")
    rng = np.random.default_rng(5)
    with open(root / "co2" / "transport_calibration.csv", "w", newline="\n") as f:
        f.write("distance_km,flow_tpy,cost_usd_per_t\n")
        for _ in range(60):
            d = float(rng.uniform(20, 900))
            q = float(10 ** rng.uniform(4.5, 6.5))
            cost = TRANSPORT["a"] * d * q ** -TRANSPORT["beta"] + TRANSPORT["b"] * d + TRANSPORT["c"]
            cost *= 1 + rng.normal(0, 0.02)
            f.write(f"{d:.1f},{q:.0f},{cost:.4f}\n")
    kinds = list(CAPTURE)
    weights = np.array([0.22, 0.12, 0.2, 0.12, 0.1, 0.1, 0.14])
    for site, s in SITES.items():
        rng = np.random.default_rng(s["lat_seed"] + 1000)
        max_ft = (min(1000.0, s["npp"]) - 14.9) / EFFECTIVE_SPEC * 1000.0
        need = max(s["bound"], max_ft * 8760 * CO2_PER_H2 / 1000.0) * 1.3
        lo, hi = s["distance"]
        rows, total, i = [], 0.0, 0
        while total < need:
            kind = kinds[rng.choice(len(kinds), p=weights / weights.sum())]
            cap = float(np.round(10 ** rng.uniform(4.3, 5.6), -2))
            conc = CAPTURE[kind][2]
            dist = float(np.round(rng.uniform(lo, hi), 1))
            i += 1
            rows.append((f"{site[:3].upper()}{i:03d}", kind, cap, conc, dist))
            total += cap
        with open(root / "co2" / f"registry_{site}.csv", "w", newline="\n") as f:
            f.write("id,kind,capacity_tpy,concentration_pct,distance_km\n")
            for r in rows:
                f.write(f"{r[0]},{r[1]},{r[2]:.0f},{r[3]},{r[4]}\n")


def scenario(site, s, configuration=None, name=None):
    doc = {
        "schema": "synfuel.scenario.v1",
        "name": name or site,
        "site": {
            "id": site,
            "name": s["name"],
            "npp_capacity_mw": s["npp"],
            "market": s["market"].upper(),
            "state": s["state"],
            "state_tax_rate": s["tax"],
            "fuel_region": s["region"],
            "capacity_payment_rate": s["capacity_rate"],
            "unit_capacities_mw": s["units"],
            "co2_demand_bound_tpy": s["bound"],
        },
        "techno": {"effective_spec_override": EFFECTIVE_SPEC},
        "finance": {"project_life": 20, "wacc": 0.10, "inflation": 0.0218, "federal_tax": 0.21,
                    "ptc_duration": 20, "tax_losses": "zero"},
        "prices": {"history": f"../prices/{s['market']}.csv", "periods": [8760, 168, 24], "harmonics": 3,
                   "ar_order": 3, "ma_order": 1, "preserve_cdf": True},
        "co2": {"registry": f"../co2/registry_{site}.csv", "cost_table": "../co2/capture_costs.csv",
                "transport_calibration": "../co2/transport_calibration.csv", "purity_threshold_pct": 95.0,
                "ordering": "unit_cost"},
        "fuel": {"retail": f"../fuel/retail_{s['region']}.csv", "adjustments": "../fuel/adjustments.csv",
                 "naphtha_history": "../fuel/naphtha_history.csv", "first_operating_year": 2025},
        "dispatch": {"initial_storage_fraction": 0.5},
        "study": {"realizations": 20, "base_seed": 20230101, "sweep_points": 5, "jobs": 1},
    }
    if configuration is not None:
        doc["configuration"] = configuration
    return doc


def write_scenarios(root):
    for site, s in SITES.items():
        with open(root / "scenarios" / f"{site}.json", "w", newline="\n") as f:
            json.dump(scenario(site, s), f, indent=2)
            f.write("\n")
    zero = scenario("prairie_island", SITES["prairie_island"],
                    {"htse_mw": 0.0, "ft_kg_h": 0.0, "storage_kg": 0.0}, name="prairie_island_zero_capacity")
    with open(root / "scenarios" / "prairie_island_zero.json", "w", newline="\n") as f:
        json.dump(zero, f, indent=2)
        f.write("\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()
    root = Path(args.out)
    for sub in ("prices", "co2", "fuel", "scenarios"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    write_prices(root)
    months, gasoline, naphtha, ratio = naphtha_history()
    with open(root / "fuel" / "naphtha_history.csv", "w", newline="\n") as f:
        f.write("period,gasoline_usd_per_gal,naphtha_usd_per_gal\n")
        for m, g, n in zip(months, gasoline, naphtha):
            f.write(f"{m},{g:.3f},{n:.3f}\n")
    write_fuel(root, ratio)
    write_co2(root)
    write_scenarios(root)


if __name__ == "__main__":
    main()
