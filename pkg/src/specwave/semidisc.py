"""Spatial right-hand sides of the filtered semi-discretizations.

Three schemes are provided: 'sharp' projects the full advective sum with
the sharp cutoff, 'smooth-all' applies the smooth filter to the full sum,
and 'smooth-nl' applies the smooth filter to the nonlinear part only while
the constant-coefficient part acts exactly in Fourier space.

Nonlinear terms are evaluated pointwise at the collocation points on the
2M-point grid and dealiased by zeroing the top third of the modes, which
is exact for quadratic products; coefficient polynomials of degree above
one are multiplied pairwise with a re-projection after every product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Poly, PolyMatrix
from .spectral import (
    FilterSpec,
    Grid,
    StateField,
    differentiate,
    filter_multiplier,
    hermitian_symmetrize,
    to_samples,
)
from .systems import SystemDef, saint_venant_2d_hamiltonian, saint_venant_2d_standard

__all__ = [
    "SchemeSpec",
    "SCHEME_KINDS",
    "advective_term",
    "matrix_advective",
    "poly_coefficient_samples",
    "rhs",
    "irrotational_equivalence_check",
]

SCHEME_KINDS = ("sharp", "smooth-all", "smooth-nl")


@dataclass(frozen=True)
class SchemeSpec:
    """Semi-discretization choice: filter placement and cutoff N."""

    kind: str
    N: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"scheme kind must be one of {SCHEME_KINDS}, got {self.kind!r}")

    def cutoff(self, grid: Grid) -> int:
        n = self.N if self.N is not None else grid.dealias_N
        if n > grid.M:
            raise ValueError(f"cutoff N={n} exceeds resolved modes M={grid.M}")
        return n


def _forward_raw(grid: Grid, samples: np.ndarray) -> np.ndarray:
    """Forward transform without finiteness checks; non-finite data propagates."""
    axes = tuple(range(-grid.d, 0))
    c = np.fft.fftn(samples, axes=axes) * grid.phase / grid.npoints
    return hermitian_symmetrize(c, grid.d)


def _sharp_mask(grid: Grid, N: int) -> np.ndarray:
    if N == grid.dealias_N:
        return grid.dealias_mask
    return (grid.k_inf <= N).astype(np.float64)


def _project_samples(grid: Grid, samples: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Re-projection of a pointwise product back to the retained mode cube."""
    c = _forward_raw(grid, samples) * mask
    return np.real(np.fft.ifftn(c * grid.phase_conj, axes=tuple(range(-grid.d, 0))) * grid.npoints)


def poly_coefficient_samples(
    poly: Poly,
    comp_samples: np.ndarray,
    grid: Grid,
    N: int | None,
) -> np.ndarray:
    """Collocation values of a polynomial coefficient field.

    Degree <= 1 entries are evaluated directly (exact on the grid).  Higher
    degrees are built monomial by monomial with a projection onto modes
    <= N after each pairwise product; N=None skips the projections, which
    is exact only when the working grid resolves the full product.
    """
    if poly.degree() <= 1:
        return poly.eval_on(list(comp_samples))
    mask = _sharp_mask(grid, N) if N is not None else None
    out = np.zeros(grid.shape)
    for expo, coeff in poly.terms:
        cur = None
        for i, p in enumerate(expo):
            for _ in range(p):
                if cur is None:
                    cur = comp_samples[i]
                elif mask is None:
                    cur = cur * comp_samples[i]
                else:
                    cur = _project_samples(grid, cur * comp_samples[i], mask)
        out = out + (coeff if cur is None else coeff * cur)
    return out


def matrix_advective(
    P: PolyMatrix,
    state: StateField,
    axis: int,
    N: int | None,
) -> StateField:
    """P(U) applied to the spectral derivative of U along one axis.

    All products happen at the collocation points; the result is projected
    onto modes <= N (no projection when N is None).
    """
    grid = state.grid
    deriv = differentiate(state, axis)
    u_samp = to_samples(state)
    d_samp = to_samples(deriv)
    rows = np.zeros_like(u_samp)
    for i in range(state.n):
        acc = np.zeros(grid.shape)
        for c in range(state.n):
            entry = P.entries[i][c]
            if not entry.terms:
                continue
            coeff_field = poly_coefficient_samples(entry, u_samp, grid, N)
            acc = acc + coeff_field * d_samp[c]
        rows[i] = acc
    coeffs = _forward_raw(grid, rows)
    if N is not None:
        coeffs = coeffs * _sharp_mask(grid, N)
    return StateField(grid, coeffs)


def advective_term(sys: SystemDef, state: StateField, axis: int, N: int | None = None) -> StateField:
    """Dealiased A_j(U) d_j U for one spatial direction."""
    if state.n != sys.n:
        raise ValueError(f"state has {state.n} components, system expects {sys.n}")
    if N is None:
        N = state.grid.dealias_N
    return matrix_advective(sys.A[axis], state, axis, N)


def rhs(scheme: SchemeSpec, sys: SystemDef, state: StateField) -> StateField:
    """Right-hand side of the chosen semi-discretization at a state."""
    grid = state.grid
    if state.n != sys.n:
        raise ValueError(f"state has {state.n} components, system expects {sys.n}")
    if grid.d != sys.d:
        raise ValueError(f"grid dimension {grid.d} does not match system d={sys.d}")
    N = scheme.cutoff(grid)

    if scheme.kind == "sharp":
        total = matrix_advective(sys.A[0], state, 0, N)
        for j in range(1, sys.d):
            total = total + matrix_advective(sys.A[j], state, j, N)
        return -total

    if scheme.kind == "smooth-all":
        total = matrix_advective(sys.A[0], state, 0, N)
        for j in range(1, sys.d):
            total = total + matrix_advective(sys.A[j], state, j, N)
        mult = filter_multiplier(FilterSpec("smooth", N), grid)
        return StateField(grid, -total.coeffs * mult)

    # smooth-nl: constant part exact in Fourier space, smooth filter on the rest
    lin = np.zeros_like(state.coeffs)
    for j in range(sys.d):
        dU = differentiate(state, j).coeffs
        lin = lin + np.einsum("ab,b...->a...", sys.A0[j], dU)
    nl = matrix_advective(sys.A1[0], state, 0, N)
    for j in range(1, sys.d):
        nl = nl + matrix_advective(sys.A1[j], state, j, N)
    mult = filter_multiplier(FilterSpec("smooth", N), grid)
    return StateField(grid, -(lin + nl.coeffs * mult))


def irrotational_equivalence_check(state: StateField, scheme: SchemeSpec | None = None) -> float:
    """Max coefficient gap between the two 2D shallow-water right-hand sides.

    The advective forms (u.grad)u and grad(|u|^2)/2 agree exactly when the
    velocity is curl-free, so the gap measures how far the given state is
    from that regime.
    """
    if state.grid.d != 2 or state.n != 3:
        raise ValueError("equivalence check expects a 2D three-component state")
    if scheme is None:
        scheme = SchemeSpec("sharp")
    r_std = rhs(scheme, saint_venant_2d_standard(), state)
    r_ham = rhs(scheme, saint_venant_2d_hamiltonian(), state)
    return float(np.max(np.abs(r_std.coeffs - r_ham.coeffs)))
