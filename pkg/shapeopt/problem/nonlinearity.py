"""Nonlinearity library: f, f' and f'' with truncation and W^{1,inf} bounds.

Truncation clamps the argument to [-X, X]: f is constant outside the
window and its derivatives vanish there, which keeps every library entry
globally Lipschitz.
"""

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
import logging
import math
from typing import Any, Literal

import numpy as np

from shapeopt.core.errors import ConfigError

logger = logging.getLogger(__name__)

NonlinearityKind = Literal["zero", "affine", "one_minus_two_x", "neg_exp_square", "tabulated"]
Order = Literal[0, 1, 2]

ArrayFn = Callable[[np.ndarray], np.ndarray]

_BOUND_SAMPLES = 20001


@dataclass(frozen=True, eq=False)
class NonlinearitySpec:
    """Evaluator triple (f, f', f'') with its truncation window and bounds."""

    kind: str
    params: Mapping[str, Any]
    window: float
    f: ArrayFn = field(repr=False)
    df: ArrayFn = field(repr=False)
    d2f: ArrayFn = field(repr=False)
    sup_f: float = 0.0
    sup_df: float = 0.0

    @property
    def lip(self) -> float:
        """||f||_{W^{1,inf}} = max(||f||_inf, ||f'||_inf)."""
        return max(self.sup_f, self.sup_df)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def evaluate(self, x: float | np.ndarray, order: Order = 0) -> np.ndarray:
        """f, f' or f'' at x with truncation applied."""
        arr = np.asarray(x, dtype=float)
        clamped = np.clip(arr, -self.window, self.window)
        if order == 0:
            return self.f(clamped)
        inside = np.abs(arr) <= self.window
        if order == 1:
            return np.where(inside, self.df(clamped), 0.0)
        if order == 2:
            return np.where(inside, self.d2f(clamped), 0.0)
        raise ValueError(f"order must be 0, 1 or 2, got {order}")


def nl_eval(spec: NonlinearitySpec, x: float, order: Order = 0) -> float:
    """Scalar evaluation of f (order 0), f' (order 1) or f'' (order 2)."""
    return float(spec.evaluate(x, order))


def _finalize(
    kind: str,
    params: Mapping[str, Any],
    window: float,
    f: ArrayFn,
    df: ArrayFn,
    d2f: ArrayFn,
    extra_samples: np.ndarray | None = None,
    extra_slopes: float = 0.0,
) -> NonlinearitySpec:
    if not (math.isfinite(window) and window > 0):
        raise ConfigError(f"truncation window must be positive and finite, got {window}")
    samples = np.linspace(-window, window, _BOUND_SAMPLES)
    if extra_samples is not None:
        samples = np.union1d(samples, extra_samples)
    sup_f = float(np.max(np.abs(f(samples))))
    sup_df = max(float(np.max(np.abs(df(samples)))), extra_slopes)
    spec = NonlinearitySpec(
        kind=kind,
        params=dict(params),
        window=window,
        f=f,
        df=df,
        d2f=d2f,
        sup_f=sup_f,
        sup_df=sup_df,
    )
    logger.debug(
        "Built nonlinearity",
        extra={"kind": kind, "window": window, "sup_f": sup_f, "sup_df": sup_df},
    )
    return spec


def zero() -> NonlinearitySpec:
    """f ≡ 0 (the linear problem)."""
    return NonlinearitySpec(
        kind="zero",
        params={},
        window=math.inf,
        f=np.zeros_like,
        df=np.zeros_like,
        d2f=np.zeros_like,
    )


def affine(a: float, b: float, window: float = 10.0) -> NonlinearitySpec:
    """f(x) = a + b·x truncated outside [-window, window]."""
    return _finalize(
        "affine",
        {"a": a, "b": b, "window": window},
        window,
        lambda x: a + b * x,
        lambda x: np.full_like(x, b),
        np.zeros_like,
    )


def one_minus_two_x(window: float = 1.0) -> NonlinearitySpec:
    """f(x) = 1 - 2x truncated outside [-window, window]."""
    spec = affine(1.0, -2.0, window)
    return NonlinearitySpec(
        kind="one_minus_two_x",
        params={"window": window},
        window=spec.window,
        f=spec.f,
        df=spec.df,
        d2f=spec.d2f,
        sup_f=spec.sup_f,
        sup_df=spec.sup_df,
    )


def neg_exp_square(window: float = 1.0) -> NonlinearitySpec:
    """f(x) = -exp(x^2) truncated outside [-window, window]."""
    return _finalize(
        "neg_exp_square",
        {"window": window},
        window,
        lambda x: -np.exp(x**2),
        lambda x: -2.0 * x * np.exp(x**2),
        lambda x: -(2.0 + 4.0 * x**2) * np.exp(x**2),
    )


def tabulated(
    x: list[float] | np.ndarray,
    f: list[float] | np.ndarray,
    df: list[float] | np.ndarray,
    d2f: list[float] | np.ndarray | None = None,
) -> NonlinearitySpec:
    """Custom entry interpolated from tables; the window is the table range."""
    xs = np.asarray(x, dtype=float)
    fs = np.asarray(f, dtype=float)
    dfs = np.asarray(df, dtype=float)
    d2fs = np.zeros_like(xs) if d2f is None else np.asarray(d2f, dtype=float)
    if xs.ndim != 1 or xs.size < 2:
        raise ConfigError("tabulated nonlinearity needs at least two abscissae")
    if not (fs.shape == dfs.shape == d2fs.shape == xs.shape):
        raise ConfigError("tabulated nonlinearity columns differ in length")
    if np.any(np.diff(xs) <= 0):
        raise ConfigError("tabulated abscissae must be strictly increasing")
    window = float(max(abs(xs[0]), abs(xs[-1])))
    slopes = float(np.max(np.abs(np.diff(fs) / np.diff(xs))))
    return _finalize(
        "tabulated",
        {"x": xs.tolist(), "f": fs.tolist(), "df": dfs.tolist(), "d2f": d2fs.tolist()},
        window,
        lambda t: np.interp(t, xs, fs),
        lambda t: np.interp(t, xs, dfs),
        lambda t: np.interp(t, xs, d2fs),
        extra_samples=xs,
        extra_slopes=slopes,
    )


def build_nonlinearity(kind: str, params: Mapping[str, Any] | None = None) -> NonlinearitySpec:
    """Build a library entry by name.

    Raises:
        ConfigError: If the kind is unknown or its parameters are invalid.
    """
    params = dict(params or {})
    try:
        if kind == "zero":
            return zero()
        if kind == "affine":
            return affine(float(params["a"]), float(params["b"]), float(params.get("window", 10.0)))
        if kind == "one_minus_two_x":
            return one_minus_two_x(float(params.get("window", 1.0)))
        if kind == "neg_exp_square":
            return neg_exp_square(float(params.get("window", 1.0)))
        if kind == "tabulated":
            return tabulated(params["x"], params["f"], params["df"], params.get("d2f"))
    except KeyError as e:
        raise ConfigError(f"nonlinearity '{kind}' is missing parameter {e}") from e
    raise ConfigError(f"unknown nonlinearity kind '{kind}'")


__all__ = [
    "NonlinearityKind",
    "NonlinearitySpec",
    "affine",
    "build_nonlinearity",
    "neg_exp_square",
    "nl_eval",
    "one_minus_two_x",
    "tabulated",
    "zero",
]
