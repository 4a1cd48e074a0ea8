"""Catalog of initial data for the shallow-water experiments.

Resolution-dependent entries receive the grid's retained cutoff
N = floor(2M/3), so the injected high mode sits exactly at the edge of
the retained band.
"""

from __future__ import annotations

import numpy as np

from .spectral import Grid, StateField, state_from_samples

__all__ = ["build_initial", "INITIAL_NAMES", "initial_params_doc"]

_DOCS = {
    "init1": "localized heap of water: eta = exp(-|x|^alpha) exp(-4 x^2) / 2, u = 0 (params: alpha > 0)",
    "init2": "eta = -cos(x)/2, u = sin(x) + sin(Nx)/N^2 (inside 1+eta>0, outside 1+eta-u^2>0)",
    "init_zero_depth": "eta = -cos(x), u = sin(x) + sin(Nx)/N^2 (touches zero depth at x=0)",
    "init2D": "separable 2D data with an N-mode perturbation (params: h0, u_l, v_l, u_h, v_h, s)",
}
INITIAL_NAMES = tuple(_DOCS)


def initial_params_doc(name: str) -> str:
    return _DOCS[name]


def _init1(grid: Grid, alpha: float) -> StateField:
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x = grid.mesh[0]
    eta = 0.5 * np.exp(-np.abs(x) ** alpha) * np.exp(-4.0 * x**2)
    return state_from_samples(grid, np.stack([eta, np.zeros_like(x)]))


def _init2(grid: Grid) -> StateField:
    x = grid.mesh[0]
    n = grid.dealias_N
    eta = -0.5 * np.cos(x)
    u = np.sin(x) + np.sin(n * x) / n**2
    return state_from_samples(grid, np.stack([eta, u]))


def _init_zero_depth(grid: Grid) -> StateField:
    x = grid.mesh[0]
    n = grid.dealias_N
    eta = -np.cos(x)
    u = np.sin(x) + np.sin(n * x) / n**2
    return state_from_samples(grid, np.stack([eta, u]))


def _init2d(
    grid: Grid,
    h0: float,
    u_l: float,
    v_l: float,
    u_h: float,
    v_h: float,
    s: float,
) -> StateField:
    x, y = grid.mesh
    n = grid.dealias_N
    eta = (h0 - 1.0) * np.cos(x) * np.cos(y)
    u = u_l * np.sin(x) * np.cos(y) + u_h * np.sin(n * x) * np.cos(n * y) / n**s
    v = v_l * np.cos(x) * np.sin(y) + v_h * np.cos(n * x) * np.sin(n * y) / n**s
    return state_from_samples(grid, np.stack([eta, u, v]))


def build_initial(name: str, params: dict | None, grid: Grid) -> StateField:
    """Build a catalog entry on the given grid."""
    if name not in INITIAL_NAMES:
        known = ", ".join(INITIAL_NAMES)
        raise ValueError(f"unknown initial data {name!r}; catalog: {known}")
    want_d = 2 if name == "init2D" else 1
    if grid.d != want_d:
        raise ValueError(f"{name} requires a {want_d}-dimensional grid, got d={grid.d}")
    params = dict(params or {})
    if name == "init1":
        state = _init1(grid, alpha=float(params.pop("alpha", 1.5)))
    elif name == "init2":
        state = _init2(grid)
    elif name == "init_zero_depth":
        state = _init_zero_depth(grid)
    else:
        state = _init2d(
            grid,
            h0=float(params.pop("h0", 0.5)),
            u_l=float(params.pop("u_l", 0.5)),
            v_l=float(params.pop("v_l", -0.5)),
            u_h=float(params.pop("u_h", 1.0)),
            v_h=float(params.pop("v_h", -1.0)),
            s=float(params.pop("s", 2.0)),
        )
    if params:
        raise ValueError(f"unused parameters for {name}: {sorted(params)}")
    return state
