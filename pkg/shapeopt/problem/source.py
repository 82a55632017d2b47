"""Source term g: library of radial profiles and the H1 bounds declaration."""

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from shapeopt.core.errors import ConfigError, HypothesisError
from shapeopt.fields.grid import Grid2D

SourceKind = Literal["constant", "radial_linear", "radial_gaussian", "tabulated_radial"]


@dataclass(frozen=True, eq=False)
class SourceSpec:
    """A radially symmetric source g(r) and its optional H1 declaration.

    ``h1_bounds = (g0, g1)`` declares g0 <= sign·g <= g1 with 0 < g0 <= g1;
    ``sign = -1`` is the mirrored case in which -g satisfies H1.
    """

    kind: str
    params: Mapping[str, Any]
    profile: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    h1_bounds: tuple[float, float] | None = None
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ConfigError("source sign must be +1 or -1", sign=self.sign)
        if self.h1_bounds is not None:
            g0, g1 = self.h1_bounds
            if g0 <= 0 or g0 > g1:
                raise HypothesisError(
                    "contradictory H1 declaration: need 0 < g0 <= g1",
                    hypothesis="H1",
                    g0=g0,
                    g1=g1,
                )

    def at_radius(self, r: np.ndarray | float) -> np.ndarray:
        """g evaluated at radius r."""
        return np.asarray(self.profile(np.asarray(r, dtype=float)), dtype=float)

    def on_nodes(self, grid: Grid2D) -> np.ndarray:
        x, y = grid.node_coordinates
        return self.at_radius(np.hypot(x, y))

    def on_cells(self, grid: Grid2D) -> np.ndarray:
        x, y = grid.cell_centers
        return self.at_radius(np.hypot(x, y))

    def samples(self, grid: Grid2D) -> np.ndarray:
        """Node and cell-center samples together."""
        return np.concatenate([self.on_nodes(grid).ravel(), self.on_cells(grid).ravel()])

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def is_identically(self, value: float) -> bool:
        return self.kind == "constant" and float(self.params["value"]) == value


def constant(value: float, h1: tuple[float, float] | None = None, sign: int = 1) -> SourceSpec:
    return SourceSpec(
        "constant",
        {"value": value},
        lambda r: np.full_like(r, float(value)),
        h1,
        sign,
    )


def radial_linear(
    a: float, b: float, h1: tuple[float, float] | None = None, sign: int = 1
) -> SourceSpec:
    """g(r) = a - b·r with b >= 0 (non-increasing)."""
    if b < 0:
        raise ConfigError("radial_linear source must be non-increasing (b >= 0)", b=b)
    return SourceSpec("radial_linear", {"a": a, "b": b}, lambda r: a - b * r, h1, sign)


def radial_gaussian(
    g0: float, g1: float, width: float, h1: tuple[float, float] | None = None, sign: int = 1
) -> SourceSpec:
    """g(r) = g0 + (g1 - g0)·exp(-r²/(2·width²)), valued in [g0, g1]."""
    if width <= 0 or g1 < g0:
        raise ConfigError("radial_gaussian needs width > 0 and g1 >= g0", g0=g0, g1=g1)
    return SourceSpec(
        "radial_gaussian",
        {"g0": g0, "g1": g1, "width": width},
        lambda r: g0 + (g1 - g0) * np.exp(-(r**2) / (2.0 * width**2)),
        h1,
        sign,
    )


def tabulated_radial(
    r: list[float], g: list[float], h1: tuple[float, float] | None = None, sign: int = 1
) -> SourceSpec:
    """Piecewise-linear profile, held constant beyond the table."""
    rs = np.asarray(r, dtype=float)
    gs = np.asarray(g, dtype=float)
    if rs.shape != gs.shape or rs.size < 2 or np.any(np.diff(rs) <= 0):
        raise ConfigError("tabulated_radial needs matching, strictly increasing tables")
    if np.any(np.diff(gs) > 0):
        raise ConfigError("tabulated_radial profile must be non-increasing")
    return SourceSpec(
        "tabulated_radial",
        {"r": rs.tolist(), "g": gs.tolist()},
        lambda t: np.interp(t, rs, gs),
        h1,
        sign,
    )


def build_source(
    kind: str,
    params: Mapping[str, Any] | None = None,
    h1: tuple[float, float] | None = None,
    sign: int = 1,
) -> SourceSpec:
    """Build a source by name.

    Raises:
        ConfigError: If the kind is unknown or parameters are missing.
        HypothesisError: If the H1 declaration is contradictory.
    """
    params = dict(params or {})
    try:
        if kind == "constant":
            return constant(float(params["value"]), h1, sign)
        if kind == "radial_linear":
            return radial_linear(float(params["a"]), float(params["b"]), h1, sign)
        if kind == "radial_gaussian":
            return radial_gaussian(
                float(params["g0"]), float(params["g1"]), float(params["width"]), h1, sign
            )
        if kind == "tabulated_radial":
            return tabulated_radial(params["r"], params["g"], h1, sign)
    except KeyError as e:
        raise ConfigError(f"source '{kind}' is missing parameter {e}") from e
    raise ConfigError(f"unknown source kind '{kind}'")


__all__ = [
    "SourceKind",
    "SourceSpec",
    "build_source",
    "constant",
    "radial_gaussian",
    "radial_linear",
    "tabulated_radial",
]
