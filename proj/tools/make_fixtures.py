#!/usr/bin/env python3
"""Regenerate the synthetic station fixtures under data/fixtures/stations.

Three stations, one year (2021) of 10-minute wind speeds at 10 m, written in
the canonical layout. The series are seeded, so reruns are byte-identical.

  inland   low mean speed, complete
  lakeside moderate speed, one 6-slot gap (one slot holds a negative value)
  coastal  high mean speed, complete
"""

import datetime as dt
import pathlib

import numpy as np

SLOTS = 365 * 24 * 6
ROOT = pathlib.Path(__file__).resolve().parents[1] / "data" / "fixtures" / "stations"

STATIONS = [
    # id, name, lat, lon, weibull scale, weibull shape, seed
    ("100001", "Inland Fixture", 62.40, 25.67, 3.2, 1.9, 11),
    ("100002", "Lakeside Fixture", 61.05, 28.15, 4.3, 2.0, 12),
    ("100003", "Coastal Fixture", 60.10, 24.95, 6.1, 2.2, 13),
]


def series(scale, shape, seed):
    rng = np.random.default_rng(seed)
    # AR(1) Gaussian process with a ~6 h correlation time plus a diurnal cycle,
    # mapped through the normal CDF onto a Weibull marginal.
    phi = np.exp(-1.0 / 36.0)
    z = np.empty(SLOTS)
    z[0] = rng.standard_normal()
    noise = rng.standard_normal(SLOTS) * np.sqrt(1 - phi * phi)
    for i in range(1, SLOTS):
        z[i] = phi * z[i - 1] + noise[i]
    hours = (np.arange(SLOTS) % 144) / 6.0
    days = np.arange(SLOTS) / 144.0
    z += 0.35 * np.sin(2 * np.pi * (hours - 9) / 24) + 0.3 * np.cos(2 * np.pi * (days - 30) / 365)
    from math import erf

    u = 0.5 * (1 + np.vectorize(erf)(z / np.sqrt(2 * (1 + 0.35**2 / 2 + 0.3**2 / 2))))
    u = np.clip(u, 1e-9, 1 - 1e-9)
    v = scale * (-np.log(1 - u)) ** (1 / shape)
    return np.round(v, 1)


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    start = dt.datetime(2021, 1, 1)
    stamps = [(start + dt.timedelta(minutes=10 * i)).strftime("%Y-%m-%dT%H:%M:%S") for i in range(SLOTS)]
    with open(ROOT / "stations.csv", "w") as f:
        f.write("station_id,name,latitude,longitude\n")
        for sid, name, lat, lon, *_ in STATIONS:
            f.write(f"{sid},{name},{lat},{lon}\n")
    for sid, _, _, _, scale, shape, seed in STATIONS:
        v = series(scale, shape, seed)
        rows = [f"{sid},{stamps[i]},{v[i]:.1f}" for i in range(SLOTS)]
        if sid == "100002":
            gap = range(20000, 20006)
            rows[gap.start + 2] = f"{sid},{stamps[gap.start + 2]},-1.0"
            for i in gap:
                if i != gap.start + 2:
                    rows[i] = None
        with open(ROOT / f"{sid}.csv", "w") as f:
            f.write("station_id,timestamp_iso8601,wind_speed_ms\n")
            f.write("\n".join(r for r in rows if r is not None))
            f.write("\n")


if __name__ == "__main__":
    main()
