"""Readers for newline-delimited samples and observation-tuple files."""

import logging
from pathlib import Path
from typing import IO

import numpy as np
import pandas as pd

from ...domain.entities.observation_tuple import TupleSet
from ...domain.entities.sample import Sample
from ...domain.exceptions import GiniDomainError

logger = logging.getLogger(__name__)


def _read_table(source: str | Path | IO[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(source, header=None, comment="#", skip_blank_lines=True, sep=r"[,\s]+", engine="python")
    except pd.errors.EmptyDataError:
        raise GiniDomainError("input holds no values") from None
    except pd.errors.ParserError as exc:
        raise GiniDomainError(f"malformed numeric input: {exc}") from exc
    frame = frame.dropna(axis=1, how="all")
    try:
        return frame.astype(np.float64)
    except ValueError as exc:
        raise GiniDomainError(f"non-numeric value in input: {exc}") from exc


def read_sample(source: str | Path | IO[str]) -> Sample:
    """One value per line; blank lines and ``#`` comments are skipped."""
    frame = _read_table(source)
    if frame.shape[1] != 1:
        raise GiniDomainError(f"sample files hold one value per line, found {frame.shape[1]} columns")
    return Sample(frame.iloc[:, 0].to_numpy())


def read_tuples(source: str | Path | IO[str], n: int) -> TupleSet:
    """Either ``n`` values per line, or a single column chunked into consecutive groups of ``n``."""
    frame = _read_table(source)
    if frame.isna().to_numpy().any():
        raise GiniDomainError("every tuple line must hold the same number of values")
    if frame.shape[1] == 1:
        return TupleSet.from_stream(frame.iloc[:, 0].to_numpy(), n)
    if frame.shape[1] != n:
        raise GiniDomainError(f"tuple lines hold {frame.shape[1]} values, expected {n}")
    logger.debug("read %d tuples of %d", len(frame), n)
    return TupleSet(frame.to_numpy())

