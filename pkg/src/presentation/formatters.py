"""Rendering of report models as CSV, JSON or a rich table on standard output."""

import json
from collections.abc import Mapping, Sequence
from enum import Enum
from typing import Any

import pandas as pd
import typer
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

CSV_FLOAT_FORMAT = "%.9g"

# tuple-valued fields split into named columns
_PAIR_COLUMNS = {"ci": ("ci_lo", "ci_hi")}


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    TABLE = "table"


Record = Mapping[str, Any]


def to_record(model: BaseModel) -> dict[str, Any]:
    return model.model_dump(mode="json", by_alias=True)


def flatten(record: Record) -> dict[str, Any]:
    """One scalar per column: pairs become ``_lo``/``_hi``, lists and dicts get suffixes."""
    flat: dict[str, Any] = {}
    for key, value in record.items():
        if key in _PAIR_COLUMNS and isinstance(value, (list, tuple)):
            flat.update(zip(_PAIR_COLUMNS[key], value, strict=True))
        elif isinstance(value, Mapping):
            flat.update({f"{key}_{inner}": item for inner, item in value.items()})
        elif isinstance(value, (list, tuple)):
            flat.update({f"{key}_{i + 1}": item for i, item in enumerate(value)})
        else:
            flat[key] = value
    return flat


def render_csv(records: Sequence[Record], columns: Sequence[str] | None = None) -> str:
    frame = pd.DataFrame([flatten(r) for r in records], columns=list(columns) if columns else None)
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def render_json(payload: Record | Sequence[Record]) -> str:
    return json.dumps(payload, indent=2, allow_nan=False)


def render_table(records: Sequence[Record], title: str | None = None) -> Table:
    flat = [flatten(r) for r in records]
    columns = list(dict.fromkeys(key for row in flat for key in row))
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for column in columns:
        table.add_column(column, style="cyan" if column in ("distribution", "entity") else None)
    for row in flat:
        table.add_row(*(_cell(row.get(column)) for column in columns))
    return table


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def emit(
    payload: BaseModel | Sequence[BaseModel] | Sequence[Record],
    fmt: OutputFormat,
    console: Console | None = None,
    columns: Sequence[str] | None = None,
    title: str | None = None,
) -> None:
    """Write one report or a list of rows to standard output in the chosen format."""
    single = isinstance(payload, BaseModel)
    items = [payload] if single else list(payload)
    records = [to_record(item) if isinstance(item, BaseModel) else dict(item) for item in items]
    if fmt is OutputFormat.JSON:
        typer.echo(render_json(records[0] if single else records))
    elif fmt is OutputFormat.CSV:
        typer.echo(render_csv(records, columns), nl=False)
    else:
        (console or Console()).print(render_table(records, title))
