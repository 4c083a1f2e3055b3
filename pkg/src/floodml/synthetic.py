"""Seeded synthetic rainfall/flood files in the same CSV layouts as the real data.

Each station gets a multiplicative wetness factor; each day is wet with a
month-dependent probability and wet-day amounts are gamma distributed so the
expected monthly total follows ``monthly_profile``. A station-year is labelled
a flood iff its recorded annual total (missing cells counted as 0) plus
Gaussian noise exceeds ``flood_threshold``, so learnability is known up front.
"""

from __future__ import annotations

import calendar
import configparser
import csv
import io
from dataclasses import dataclass, fields

import numpy as np

from .dataset import N_DAYS

# rough monsoon climatology (mm per month)
DEFAULT_PROFILE = (8.0, 25.0, 60.0, 150.0, 300.0, 400.0, 450.0, 350.0, 300.0, 150.0, 30.0, 10.0)


@dataclass(frozen=True)
class SyntheticSpec:
    stations: int = 34
    start_year: int = 2011
    end_year: int = 2020
    monthly_profile: tuple = DEFAULT_PROFILE
    station_spread: float = 0.25  # sigma of the log station factor
    year_spread: float = 0.15  # sigma of the log station-year factor
    wet_day_floor: float = 0.05
    flood_threshold: float = 2600.0
    flood_noise: float = 0.0
    missing_rate: float = 0.0

    def __post_init__(self):
        if self.stations < 1:
            raise ValueError("stations must be at least 1")
        if self.start_year > self.end_year:
            raise ValueError("start_year is after end_year")
        if len(self.monthly_profile) != 12 or min(self.monthly_profile) < 0:
            raise ValueError("monthly_profile needs 12 non-negative values")
        if not 0.0 <= self.missing_rate < 1.0:
            raise ValueError("missing_rate must lie in [0, 1)")
        if self.flood_noise < 0 or self.station_spread < 0 or self.year_spread < 0:
            raise ValueError("spreads and noise must be non-negative")
        if not 0.0 < self.wet_day_floor <= 1.0:
            raise ValueError("wet_day_floor must lie in (0, 1]")


def read_spec(text) -> SyntheticSpec:
    """Parse ``key = value`` lines (an optional ``[synthetic]`` header is allowed)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not text.lstrip().startswith("["):
        text = "[synthetic]\n" + text
    parser.read_string(text)
    section = parser["synthetic"] if parser.has_section("synthetic") else {}
    kwargs = {}
    known = {f.name: f for f in fields(SyntheticSpec)}
    for key, raw in section.items():
        if key not in known:
            raise ValueError(f"unknown synthetic spec key {key!r}")
        if key == "monthly_profile":
            kwargs[key] = tuple(float(v) for v in raw.replace(",", " ").split())
        elif key in ("stations", "start_year", "end_year"):
            kwargs[key] = int(raw)
        else:
            kwargs[key] = float(raw)
    return SyntheticSpec(**kwargs)


def station_names(n):
    return [f"Station{i + 1:02d}" for i in range(n)]


def generate_synthetic(spec: SyntheticSpec, seed=0):
    """Return ``(rainfall_csv_text, flood_csv_text)``."""
    rng = np.random.default_rng(seed)
    profile = np.asarray(spec.monthly_profile, dtype=float)
    # wetter months rain on more days
    wet_prob = np.clip(profile / (profile.max() or 1.0), spec.wet_day_floor, 0.9)
    shape = 0.8

    rain = io.StringIO()
    rw = csv.writer(rain, lineterminator="\n")
    rw.writerow(["Station", "Year", "Month", *range(1, N_DAYS + 1)])
    flood = io.StringIO()
    fw = csv.writer(flood, lineterminator="\n")
    fw.writerow(["Station", "Year", "Flood"])

    names = station_names(spec.stations)
    station_factor = np.exp(rng.normal(0.0, spec.station_spread, size=spec.stations))
    for s, name in enumerate(names):
        for year in range(spec.start_year, spec.end_year + 1):
            factor = station_factor[s] * np.exp(rng.normal(0.0, spec.year_spread))
            annual = 0
            for month in range(1, 13):
                ndays = calendar.monthrange(year, month)[1]
                mean_wet = profile[month - 1] * factor / (ndays * wet_prob[month - 1])
                wet = rng.random(ndays) < wet_prob[month - 1]
                amounts = np.where(wet, rng.gamma(shape, mean_wet / shape, size=ndays), 0.0)
                amounts = np.rint(amounts).astype(int)
                missing = rng.random(ndays) < spec.missing_rate
                cells = []
                for d in range(ndays):
                    if missing[d]:
                        cells.append("NaN")
                    else:
                        cells.append(str(amounts[d]))
                        annual += int(amounts[d])
                cells.extend([""] * (N_DAYS - ndays))
                rw.writerow([name, year, month, *cells])
            noise = rng.normal(0.0, spec.flood_noise) if spec.flood_noise > 0 else 0.0
            fw.writerow([name, year, "YES" if annual + noise > spec.flood_threshold else "NO"])
    return rain.getvalue(), flood.getvalue()
