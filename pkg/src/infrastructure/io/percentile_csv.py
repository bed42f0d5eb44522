"""Strict CSV reader and writers for grouped percentile data and GC_n panels."""

import io
import logging
import math
from collections.abc import Callable
from pathlib import Path
from typing import IO, Any

import pandas as pd

from ...application.dto.reports import PanelTable, share_column
from ...domain.entities.grouped_distribution import Bracket, GroupedDistribution
from ...domain.exceptions import GroupedDataError

logger = logging.getLogger(__name__)

HEADER = ["entity", "year", "p_lo", "p_hi", "avg"]
CSV_FLOAT_FORMAT = "%.9g"

ErrorHandler = Callable[[str, int, GroupedDataError], None]


def _read_frame(source: str | Path | IO[str]) -> pd.DataFrame | None:
    try:
        return pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=False)
    except pd.errors.EmptyDataError:
        return None
    except pd.errors.ParserError as exc:
        raise GroupedDataError(f"malformed CSV: {exc}") from exc


def _number(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise GroupedDataError(f"{column} {text!r} is not a number", line=line) from None
    if not math.isfinite(value):
        raise GroupedDataError(f"{column} must be finite, got {text!r}", line=line)
    return value


def _year(text: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise GroupedDataError(f"year {text!r} is not an integer", line=line) from None


def parse_percentile_csv(
    source: str | Path | IO[str],
    allow_nonmonotone: bool = False,
    on_error: ErrorHandler | None = None,
) -> list[GroupedDistribution]:
    """Parse ``entity,year,p_lo,p_hi,avg`` rows into one distribution per (entity, year).

    Row-level problems always raise. A group that fails validation raises too,
    unless ``on_error`` is given, in which case it is reported and skipped.
    """
    frame = _read_frame(source)
    if frame is None:
        raise GroupedDataError("empty input: the header entity,year,p_lo,p_hi,avg is required", line=1)
    if list(frame.columns) != HEADER:
        raise GroupedDataError(f"header must be {','.join(HEADER)}, got {','.join(frame.columns)}", line=1)

    groups: dict[tuple[str, int], list[Bracket]] = {}
    first_line: dict[tuple[str, int], int] = {}
    for index, row in enumerate(frame.itertuples(index=False)):
        line = index + 2
        entity = row.entity.strip()
        if not entity:
            raise GroupedDataError("entity is empty", line=line)
        key = (entity, _year(row.year, line))
        bracket = Bracket(
            _number(row.p_lo, "p_lo", line),
            _number(row.p_hi, "p_hi", line),
            _number(row.avg, "avg", line),
        )
        groups.setdefault(key, []).append(bracket)
        first_line.setdefault(key, line)

    distributions = []
    for key in sorted(groups):
        entity, year = key
        try:
            distributions.append(GroupedDistribution(entity, year, groups[key], allow_nonmonotone))
        except GroupedDataError as exc:
            if on_error is None:
                raise GroupedDataError(str(exc), line=first_line[key]) from exc
            on_error(entity, year, exc)
    logger.debug("parsed %d grouped distributions from %d rows", len(distributions), len(frame))
    return distributions


def panel_records(table: PanelTable) -> list[dict[str, Any]]:
    records = []
    for row in table.rows:
        record: dict[str, Any] = {"entity": row.entity, "year": row.year}
        record.update({f"gc_{n}": row.gc[n] for n in table.orders})
        record.update({share_column(alpha): row.top_shares[alpha] for alpha in table.shares})
        records.append(record)
    return records


def panel_frame(table: PanelTable) -> pd.DataFrame:
    return pd.DataFrame(panel_records(table), columns=table.columns())


def write_panel_csv(table: PanelTable, destination: str | Path | IO[str] | None = None) -> str | None:
    """Write the panel with 9 significant digits; returns the text when no destination is given."""
    return panel_frame(table).to_csv(
        destination, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
    )


def write_grouped_csv(distributions: list[GroupedDistribution], destination: str | Path | IO[str] | None = None) -> str | None:
    rows = [
        (g.entity, g.year, b.p_lo, b.p_hi, b.avg)
        for g in distributions
        for b in g.brackets
    ]
    return pd.DataFrame(rows, columns=HEADER).to_csv(
        destination, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
    )


def parse_percentile_text(text: str, allow_nonmonotone: bool = False) -> list[GroupedDistribution]:
    return parse_percentile_csv(io.StringIO(text), allow_nonmonotone)
