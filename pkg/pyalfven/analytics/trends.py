# External:
import numpy as np
import pandas as pd
from scipy import stats


def refinement_ratio(series: pd.Series) -> pd.Series:
    """
    Computes successive error ratios ``e(h) / e(h/2)`` of an error series indexed by resolution.

    Notes
    -----
    1. The series is sorted by index descending (coarse first), so each entry is the factor gained by refining.

    Parameters
    ----------
    series : pd.Series
        Errors indexed by grid spacing (or time step).

    Returns
    -------
    pd.Series
        Ratios indexed by the finer spacing of each pair.
    """
    ordered = series.sort_index(ascending=False)
    return (ordered.shift(1) / ordered).iloc[1:]


def observed_order(series: pd.Series) -> float:
    """
    Computes the observed convergence order as the slope of ``log e`` against ``log h``.

    Notes
    -----
    1. Fitted by least squares (``scipy.stats.linregress``) over all points, so a single pair gives the classical
       two-level order ``log(e₁/e₂) / log(h₁/h₂)``.
    2. Requires at least two strictly positive errors.

    Parameters
    ----------
    series : pd.Series
        Errors indexed by spacing.

    Returns
    -------
    float
        Observed Order
    """
    clean = series[series > 0]
    if len(clean) < 2:
        raise ValueError("Input Error: observed order needs at least two positive errors.")
    fit = stats.linregress(np.log(clean.index.to_numpy(dtype=float)), np.log(clean.to_numpy(dtype=float)))
    return float(fit.slope)


def decay_exponent(series: pd.Series) -> float:
    """
    Computes the dyadic decay exponent ``a`` of a sequence behaving like ``C 2^{-a n}``.

    Parameters
    ----------
    series : pd.Series
        Magnitudes indexed by the dyadic level ``n``.

    Returns
    -------
    float
        Decay Exponent
    """
    clean = series[series > 0]
    if len(clean) < 2:
        raise ValueError("Input Error: decay exponent needs at least two positive magnitudes.")
    fit = stats.linregress(clean.index.to_numpy(dtype=float), np.log2(clean.to_numpy(dtype=float)))
    return float(-fit.slope)


def running_sup(series: pd.Series) -> pd.Series:
    """
    Computes the running supremum ``sup_{s ≤ t} x(s)`` of a time-indexed series.
    """
    return series.sort_index().cummax()


def richardson(coarse: float, fine: float, order: float, factor: float = 2.0) -> float:
    """
    Computes the Richardson error estimate of the fine-level value.

    Parameters
    ----------
    coarse : float
        Value at spacing ``h``.

    fine : float
        Value at spacing ``h / factor``.

    order : float
        Convergence order of the method.

    factor : float, default=2.0
        Refinement factor.

    Returns
    -------
    float
        Estimated error of ``fine``.
    """
    return abs(fine - coarse) / (factor ** order - 1.0)


def ratio_series(values: list[float], index: list[float], name: str = None) -> pd.Series:
    """Wraps measured values into a float series for the trend utilities."""
    return pd.Series(np.asarray(values, dtype=float), index=pd.Index(np.asarray(index, dtype=float)), name=name)
