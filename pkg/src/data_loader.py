"""
Data loader for bivariate samples stored as CSV.

The file may have a header row (``has_header``); any delimiter is accepted.
Two columns are selected (default: the first two) either by 0-based
position or by header name. Every selected cell must parse as a finite
number; the first offending cell is reported with its line number.
"""

import os
from typing import Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from .empirical_copula import Sample
from .exceptions import DataQualityError


def _select_columns(frame: pd.DataFrame, columns: Optional[Sequence[str]],
                    has_header: bool) -> Sequence:
    if frame.shape[1] < 2:
        raise DataQualityError(f"need at least 2 columns, found {frame.shape[1]}")
    if not columns:
        return list(frame.columns[:2])
    if len(columns) != 2:
        raise DataQualityError(f"exactly 2 columns must be selected, got {len(columns)}")

    selected = []
    for col in columns:
        col = str(col).strip()
        if has_header and col in frame.columns:
            selected.append(col)
        elif col.isdigit() and int(col) < frame.shape[1]:
            selected.append(frame.columns[int(col)])
        else:
            raise DataQualityError(f"column '{col}' not found")
    return selected


def load_sample_csv(filepath: Union[str, os.PathLike, TextIO], has_header: bool = False,
                    delimiter: str = ",", columns: Optional[Sequence[str]] = None) -> Sample:
    """
    Load a bivariate sample from a CSV file.

    Args:
        filepath: Path or open text stream
        has_header: First line holds column names
        delimiter: Field separator
        columns: Two column names or 0-based indices (default: first two)

    Returns:
        Sample with one row per data line
    """
    if isinstance(filepath, (str, os.PathLike)) and not os.path.exists(filepath):
        raise FileNotFoundError(f"CSV file not found: {filepath}")

    try:
        frame = pd.read_csv(filepath, sep=delimiter, header=0 if has_header else None,
                            dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        raise DataQualityError(f"no data in {filepath}") from None
    except pd.errors.ParserError as e:
        raise DataQualityError(f"cannot parse {filepath}: {e}") from None

    if has_header:
        frame.columns = [str(c).strip() for c in frame.columns]
    selected = _select_columns(frame, columns, has_header)

    first_line = 2 if has_header else 1
    values = []
    for col in selected:
        raw = frame[col]
        numeric = pd.to_numeric(raw.astype(str).str.strip(), errors="coerce")
        parsed = numeric.to_numpy(dtype=float, na_value=np.nan)
        bad = ~np.isfinite(parsed)
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            cell = raw.iloc[row]
            shown = "" if pd.isna(cell) else str(cell)
            raise DataQualityError(
                f"non-numeric or non-finite value {shown!r} in column {col!r} at line {first_line + row}")
        values.append(parsed)

    return Sample.from_columns(values[0], values[1])


def write_sample_csv(sample: Sample, out: Union[str, os.PathLike, TextIO], header: bool = True):
    """
    Write a sample as CSV with columns u1, u2 in round-trip precision.

    Args:
        sample: Sample to write
        out: Path or open text stream
        header: Emit the u1,u2 header line
    """
    frame = pd.DataFrame({"u1": sample.x1, "u2": sample.x2})
    frame.to_csv(out, index=False, header=header, float_format="%.17g", lineterminator="\n")
