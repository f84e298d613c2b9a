"""
Diagonal diagnostics and process-field exports.
"""

import os
from typing import Optional, TextIO, Union

import numpy as np
import pandas as pd

from .associativity import ProcessField
from .copula_models import CopulaModel
from .empirical_copula import EmpiricalCopula


def diagonal_table(ec: Optional[EmpiricalCopula] = None, model: Optional[CopulaModel] = None,
                   n: Optional[int] = None) -> pd.DataFrame:
    """
    Diagonal of the empirical copula and/or a model on the lattice u = i/n.

    Columns: ``u``; ``cn_diag`` and ``fixed_point`` (C_n(u,u) = u) when an
    empirical copula is given; ``model_diag`` when a model is given.

    Args:
        ec: Empirical copula (defines n)
        model: Copula model
        n: Lattice size when only a model is given

    Returns:
        DataFrame with one row per i = 0..n
    """
    if ec is None and model is None:
        raise ValueError("need an empirical copula or a model")
    if ec is not None:
        n = ec.n
    elif n is None or int(n) < 1:
        raise ValueError("lattice size n must be given for a model-only table")
    n = int(n)

    i = np.arange(n + 1)
    table = pd.DataFrame({"u": i / n})
    if ec is not None:
        diag = ec.cum[i, i]
        table["cn_diag"] = diag / n
    if model is not None:
        table["model_diag"] = model.diagonal(i / n)
    if ec is not None:
        table["fixed_point"] = diag == i
    return table


def tail_summary(model: CopulaModel) -> dict:
    """Family, Kendall's tau (if available) and tail dependence of a model."""
    lower, upper = model.tail_dependence()
    try:
        tau = model.kendall_tau()
    except NotImplementedError:
        tau = None
    return {"family": model.family, "kendall_tau": tau, "lambda_L": lower, "lambda_U": upper}


def save_field(field: ProcessField, out: Union[str, os.PathLike, TextIO]):
    """
    Dump a process field.

    Paths ending in ``.npy`` receive the (m, m, m) array in numpy binary
    format; anything else receives CSV with columns x, y, z, value.
    """
    if isinstance(out, (str, os.PathLike)) and str(out).endswith(".npy"):
        np.save(out, field.values)
        return
    field.to_frame().to_csv(out, index=False, float_format="%.17g", lineterminator="\n")
