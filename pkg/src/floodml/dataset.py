"""Rainfall and flood-table ingestion, cleaning, monthly aggregation and encoding.

Raw rainfall arrives as one row per station-month with 31 day columns; short
months and absent readings are missing cells. The pipeline here is::

    parse_daily_rainfall -> impute_missing -> aggregate_monthly
        -> merge_flood_labels -> encode_labels

Rainfall amounts stay integers (mm) until the feature matrix is built.
"""

from __future__ import annotations

import contextlib
import csv
import io
import logging
import os
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

log = logging.getLogger(__name__)

N_DAYS = 31
MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)
MISSING_TOKENS = frozenset({"", "NaN", "nan", "NA"})
FLOOD_CODES = {"NO": 0, "YES": 1}

PROCESSED_HEADER = ("Station", "StationName", "Year", *MONTH_NAMES, "Annual", "Flood")


class DataError(ValueError):
    """Base class for ingestion failures."""


class ParseError(DataError):
    def __init__(self, row, column, message):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: {message}")


class AggregationError(DataError):
    pass


class MergeError(DataError):
    def __init__(self, missing_flood, missing_rainfall):
        self.missing_flood = sorted(missing_flood)
        self.missing_rainfall = sorted(missing_rainfall)
        parts = []
        if self.missing_flood:
            parts.append(f"no flood record for {self.missing_flood}")
        if self.missing_rainfall:
            parts.append(f"no rainfall rows for {self.missing_rainfall}")
        super().__init__("; ".join(parts))


class EncodingError(DataError):
    pass


@dataclass(frozen=True)
class DailyRainfallRecord:
    """One station-month. ``days`` has 31 cells; ``None`` marks a missing cell."""

    station: str
    year: int
    month: int
    days: tuple

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month {self.month} outside 1-12")
        if len(self.days) != N_DAYS:
            raise ValueError(f"expected {N_DAYS} day cells, got {len(self.days)}")
        if any(d is not None and d < 0 for d in self.days):
            raise ValueError("negative rainfall value")

    @property
    def n_missing(self):
        return sum(d is None for d in self.days)


@dataclass(frozen=True)
class FloodRecord:
    station: str
    year: int
    flood: str

    def __post_init__(self):
        if self.flood not in FLOOD_CODES:
            raise ValueError(f"flood label must be YES or NO, got {self.flood!r}")


@dataclass(frozen=True)
class MonthlyAggregate:
    station: str
    year: int
    monthly: tuple
    annual: int


@dataclass(frozen=True)
class MergedRow:
    """A station-year aggregate joined with its textual flood label."""

    station: str
    year: int
    monthly: tuple
    annual: int
    flood: str


@dataclass(frozen=True)
class FeatureRow:
    station_id: int
    station_name: str
    year: int
    monthly: tuple
    annual: int
    flood: int

    def __post_init__(self):
        if self.annual != sum(self.monthly):
            raise ValueError("annual total differs from the sum of monthly totals")
        if self.flood not in (0, 1):
            raise ValueError("flood must be 0 or 1")


@dataclass(frozen=True)
class LabeledDataset:
    rows: tuple
    station_codes: dict  # name -> id

    def __len__(self):
        return len(self.rows)

    @property
    def station_names(self):
        """Names indexed by code."""
        names = [None] * len(self.station_codes)
        for name, code in self.station_codes.items():
            names[code] = name
        return names

    @property
    def labels(self):
        return np.array([r.flood for r in self.rows], dtype=int)

    @property
    def years(self):
        return np.array([r.year for r in self.rows], dtype=int)

    def feature_matrix(self, include_annual=True):
        """Return ``(X, y, column_names)`` with columns Station, Year, months[, Annual]."""
        names = ["Station", "Year", *MONTH_NAMES]
        if include_annual:
            names.append("Annual")
        X = np.empty((len(self.rows), len(names)), dtype=float)
        for i, r in enumerate(self.rows):
            vals = [r.station_id, r.year, *r.monthly]
            if include_annual:
                vals.append(r.annual)
            X[i] = vals
        return X, self.labels, names


def _parse_int(raw, row, column):
    text = raw.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise ParseError(row, column, f"not a number: {raw!r}") from None
    if not value.is_integer():
        raise ParseError(row, column, f"expected an integer amount, got {raw!r}")
    return int(value)


def parse_daily_rainfall(stream: TextIO) -> list[DailyRainfallRecord]:
    """Parse the rainfall CSV (``Station,Year,Month,1..31``).

    Row numbers in errors are 1-based data rows (the header is row 0).
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return []
    header = [h.strip().lstrip("﻿") for h in header]
    if header[:3] != ["Station", "Year", "Month"]:
        raise ParseError(0, "header", f"expected Station,Year,Month first, got {header[:3]}")

    records = []
    for rownum, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        cells = cells + [""] * max(0, 3 - len(cells))
        station = cells[0].strip()
        if not station:
            raise ParseError(rownum, "Station", "missing value")
        for col, raw in (("Year", cells[1]), ("Month", cells[2])):
            if raw.strip() in MISSING_TOKENS:
                raise ParseError(rownum, col, "missing value")
        year = _parse_int(cells[1], rownum, "Year")
        month = _parse_int(cells[2], rownum, "Month")
        if not 1 <= month <= 12:
            raise ParseError(rownum, "Month", f"month {month} outside 1-12")

        day_cells = cells[3:]
        extra = day_cells[N_DAYS:]
        if any(c.strip() not in MISSING_TOKENS for c in extra):
            raise ParseError(rownum, str(N_DAYS + 1), "more than 31 day values")
        days = []
        for d, raw in enumerate(day_cells[:N_DAYS], start=1):
            if raw.strip() in MISSING_TOKENS:
                days.append(None)
                continue
            value = _parse_int(raw, rownum, str(d))
            if value < 0:
                raise ParseError(rownum, str(d), f"negative rainfall {value}")
            days.append(value)
        days.extend([None] * (N_DAYS - len(days)))
        records.append(DailyRainfallRecord(station, year, month, tuple(days)))
    return records


def parse_floods(stream: TextIO) -> list[FloodRecord]:
    """Parse the flood CSV (``Station,Year,Flood``)."""
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        return []
    fields = [f.strip().lstrip("﻿") for f in reader.fieldnames]
    if fields[:3] != ["Station", "Year", "Flood"]:
        raise ParseError(0, "header", f"expected Station,Year,Flood, got {fields}")
    reader.fieldnames = fields
    out = []
    for rownum, row in enumerate(reader, start=1):
        station = (row["Station"] or "").strip()
        if not station:
            raise ParseError(rownum, "Station", "missing value")
        year = _parse_int(row["Year"] or "", rownum, "Year")
        flood = (row["Flood"] or "").strip()
        if flood not in FLOOD_CODES:
            raise ParseError(rownum, "Flood", f"expected YES or NO, got {flood!r}")
        out.append(FloodRecord(station, year, flood))
    return out


def impute_missing(records: Sequence[DailyRainfallRecord]):
    """Zero-fill every missing day cell. Returns ``(records, n_filled)``."""
    out = []
    n_filled = 0
    for rec in records:
        missing = rec.n_missing
        if missing:
            n_filled += missing
            rec = DailyRainfallRecord(
                rec.station, rec.year, rec.month,
                tuple(0 if d is None else d for d in rec.days),
            )
        out.append(rec)
    return out, n_filled


def aggregate_monthly(records: Iterable[DailyRainfallRecord]) -> list[MonthlyAggregate]:
    """Sum days into monthly totals per (station, year); output sorted by key.

    Months with no record count as zero and are logged as a warning.
    """
    grid = {}
    for rec in records:
        if rec.n_missing:
            raise AggregationError(
                f"({rec.station}, {rec.year}, {rec.month}) still has missing cells; impute first"
            )
        months = grid.setdefault((rec.station, rec.year), [None] * 12)
        if months[rec.month - 1] is not None:
            raise AggregationError(
                f"duplicate record for ({rec.station}, {rec.year}, {rec.month})"
            )
        months[rec.month - 1] = sum(rec.days)

    out = []
    for (station, year) in sorted(grid):
        months = grid[(station, year)]
        absent = [m + 1 for m, v in enumerate(months) if v is None]
        if absent:
            log.warning("%s %d: no rows for months %s, treated as zero", station, year, absent)
        monthly = tuple(0 if v is None else v for v in months)
        out.append(MonthlyAggregate(station, year, monthly, sum(monthly)))
    return out


def count_absent_months(aggregates_source: Iterable[DailyRainfallRecord]):
    """Number of (station, year, month) cells with no input row."""
    seen = {}
    for rec in aggregates_source:
        seen.setdefault((rec.station, rec.year), set()).add(rec.month)
    return sum(12 - len(m) for m in seen.values())


def merge_flood_labels(features: Sequence[MonthlyAggregate], floods: Sequence[FloodRecord]):
    """Exact inner join on (station, year); any unmatched key on either side is an error."""
    labels = {}
    for f in floods:
        key = (f.station, f.year)
        if key in labels and labels[key] != f.flood:
            raise DataError(f"conflicting flood records for {key}")
        labels[key] = f.flood
    feature_keys = {(a.station, a.year) for a in features}
    no_flood = feature_keys - labels.keys()
    no_rain = labels.keys() - feature_keys
    if no_flood or no_rain:
        raise MergeError(no_flood, no_rain)
    return [
        MergedRow(a.station, a.year, a.monthly, a.annual, labels[(a.station, a.year)])
        for a in features
    ]


def encode_labels(rows: Sequence[MergedRow]) -> LabeledDataset:
    """Label-encode stations (lexicographic order) and binary-encode flood."""
    codes = {name: i for i, name in enumerate(sorted({r.station for r in rows}))}
    out = []
    seen = set()
    for r in rows:
        if r.flood not in FLOOD_CODES:
            raise EncodingError(f"flood label {r.flood!r} for ({r.station}, {r.year}) is not YES/NO")
        key = (r.station, r.year)
        if key in seen:
            raise EncodingError(f"duplicate station-year {key}")
        seen.add(key)
        out.append(FeatureRow(codes[r.station], r.station, r.year, r.monthly, r.annual,
                              FLOOD_CODES[r.flood]))
    out.sort(key=lambda r: (r.station_id, r.year))
    return LabeledDataset(tuple(out), codes)


def _as_stream(source, stack):
    # paths are opened here, anything else is assumed to be a text stream
    if isinstance(source, (str, os.PathLike)):
        return stack.enter_context(open(source, newline="", encoding="utf-8"))
    return source


def load_dataset(rainfall, floods):
    """Full ingestion from paths or text streams.

    Returns ``(dataset, stats)`` where stats counts cleaning work.
    """
    with contextlib.ExitStack() as stack:
        records = parse_daily_rainfall(_as_stream(rainfall, stack))
        flood_records = parse_floods(_as_stream(floods, stack))
    imputed, n_filled = impute_missing(records)
    aggregates = aggregate_monthly(imputed)
    merged = merge_flood_labels(aggregates, flood_records)
    dataset = encode_labels(merged)
    stats = {
        "rainfall_rows": len(records),
        "imputed_cells": n_filled,
        "absent_months": count_absent_months(records),
        "flood_rows": len(flood_records),
        "dataset_rows": len(dataset),
        "stations": len(dataset.station_codes),
    }
    return dataset, stats


def filter_timeline(dataset: LabeledDataset, start_year, end_year) -> LabeledDataset:
    """Keep rows with ``start_year <= year <= end_year``; the station code map is kept as is."""
    if start_year > end_year:
        raise ValueError(f"start year {start_year} is after end year {end_year}")
    rows = tuple(r for r in dataset.rows if start_year <= r.year <= end_year)
    if not rows:
        raise DataError(f"no rows in timeline {start_year}-{end_year}")
    return LabeledDataset(rows, dataset.station_codes)


def write_processed_csv(dataset: LabeledDataset, stream: TextIO):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(PROCESSED_HEADER)
    for r in dataset.rows:
        w.writerow([r.station_id, r.station_name, r.year, *r.monthly, r.annual, r.flood])


def read_processed_csv(stream: TextIO) -> LabeledDataset:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != PROCESSED_HEADER:
        raise ParseError(0, "header", "not a processed dataset export")
    rows = []
    codes = {}
    for rownum, cells in enumerate(reader, start=1):
        if not cells:
            continue
        if len(cells) != len(PROCESSED_HEADER):
            raise ParseError(rownum, "*", f"expected {len(PROCESSED_HEADER)} cells")
        vals = [_parse_int(c, rownum, PROCESSED_HEADER[i]) if i != 1 else c
                for i, c in enumerate(cells)]
        sid, name, year = vals[0], vals[1], vals[2]
        if codes.setdefault(name, sid) != sid:
            raise EncodingError(f"station {name!r} has two codes")
        try:
            rows.append(FeatureRow(sid, name, year, tuple(vals[3:15]), vals[15], vals[16]))
        except ValueError as exc:
            raise ParseError(rownum, "*", str(exc)) from None
    if sorted(codes.values()) != list(range(len(codes))):
        raise EncodingError("station codes are not consecutive from 0")
    return LabeledDataset(tuple(rows), codes)


def dumps_processed(dataset: LabeledDataset) -> str:
    buf = io.StringIO()
    write_processed_csv(dataset, buf)
    return buf.getvalue()
