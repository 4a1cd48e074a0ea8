"""Periodic spectral substrate: grids, fields, transforms, filters, norms.

Everything works on the torus [-pi, pi)^d with 2M uniformly spaced
collocation points per axis and integer wavenumbers k in {-M+1, ..., M}.
Fields are stored as true Fourier coefficients (the value c_k such that
f(x) = sum_k c_k exp(i k.x)), kept in FFT index order with the Nyquist
slot interpreted as +M.  All operations are pure; fields are treated as
immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Grid",
    "SpectralField",
    "StateField",
    "FilterSpec",
    "make_grid",
    "from_function",
    "field_from_samples",
    "state_from_samples",
    "state_from_fields",
    "to_samples",
    "differentiate",
    "apply_lambda",
    "filter_symbol",
    "filter_multiplier",
    "apply_filter",
    "dealias",
    "smooth_ramp",
    "hermitian_symmetrize",
    "sobolev_norm",
    "l2_inner",
    "linf",
    "max_mode_support",
    "embed",
    "zero_state",
]


def _mode_values(two_m: int) -> np.ndarray:
    """Integer wavenumbers in FFT index order, with the Nyquist slot as +M."""
    m = two_m // 2
    k = np.rint(np.fft.fftfreq(two_m, d=1.0 / two_m)).astype(np.int64)
    k[m] = m
    return k


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-pi, pi)^d with 2M collocation points per axis.

    Collocation points are x_n = -pi + pi*n/M for n = 1..2M (the grid
    excludes -pi and includes +pi); the represented mode set is
    {-M+1, ..., M}^d.  Derived arrays (meshes, wavenumber grids, phase
    factors, dealiasing mask) are precomputed once.
    """

    d: int
    M: int

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ValueError(f"spatial dimension must be 1 or 2, got {self.d}")
        if self.M < 4:
            raise ValueError(f"half-resolution M must be >= 4, got {self.M}")
        two_m = 2 * self.M
        axis_points = -np.pi + np.pi * np.arange(1, two_m + 1) / self.M
        modes = _mode_values(two_m)
        mesh = np.meshgrid(*([axis_points] * self.d), indexing="ij")
        kmesh = np.meshgrid(*([modes.astype(np.float64)] * self.d), indexing="ij")
        k_inf = np.maximum.reduce([np.abs(km) for km in kmesh])
        k_sq = sum(km**2 for km in kmesh)
        # Phase factor translating FFT output on the shifted grid into true
        # Fourier coefficients: c_k = FFT(y)_k / (2M)^d * exp(-i k . x_1).
        x0 = axis_points[0]
        axis_phase = np.exp(-1j * modes * x0)
        phase = axis_phase.copy()
        for _ in range(self.d - 1):
            phase = np.multiply.outer(phase, axis_phase)
        diff_mult = []
        for a in range(self.d):
            dk = 1j * modes.astype(np.float64)
            dk[self.M] = 0.0  # Nyquist plane carries no data; avoid ik*M artifact
            shape = [1] * self.d
            shape[a] = two_m
            diff_mult.append(dk.reshape(shape))
        # Orszag two-thirds cutoff; when 3 | 2M the floor would let the top
        # product mode fold exactly onto the retained edge, so step back one.
        n_dealias = (two_m - 1) // 3 if two_m % 3 == 0 else two_m // 3
        object.__setattr__(self, "two_m", two_m)
        object.__setattr__(self, "shape", (two_m,) * self.d)
        object.__setattr__(self, "npoints", two_m**self.d)
        object.__setattr__(self, "axis_points", axis_points)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "mesh", tuple(mesh))
        object.__setattr__(self, "kmesh", tuple(kmesh))
        object.__setattr__(self, "k_inf", k_inf)
        object.__setattr__(self, "k_sq", k_sq)
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "phase_conj", np.conj(phase))
        object.__setattr__(self, "diff_mult", tuple(diff_mult))
        object.__setattr__(self, "dealias_N", n_dealias)
        object.__setattr__(self, "dealias_mask", (k_inf <= n_dealias).astype(np.float64))
        object.__setattr__(self, "cell_volume", (2.0 * np.pi / two_m) ** self.d)

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid) and self.d == other.d and self.M == other.M

    def __hash__(self) -> int:
        return hash((self.d, self.M))


def make_grid(d: int, M: int) -> Grid:
    """Build a periodic grid with 2M collocation points per axis."""
    return Grid(d=d, M=M)


@dataclass(frozen=True)
class SpectralField:
    """One real scalar periodic field stored as complex Fourier coefficients."""

    grid: Grid
    coeffs: np.ndarray


@dataclass(frozen=True)
class StateField:
    """Vector of n scalar fields on one shared grid, stacked along axis 0."""

    grid: Grid
    coeffs: np.ndarray

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    def component(self, i: int) -> SpectralField:
        return SpectralField(self.grid, self.coeffs[i])

    @property
    def components(self) -> tuple[SpectralField, ...]:
        return tuple(self.component(i) for i in range(self.n))

    def __add__(self, other: "StateField") -> "StateField":
        return StateField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "StateField") -> "StateField":
        return StateField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, a: float) -> "StateField":
        return StateField(self.grid, self.coeffs * a)

    __rmul__ = __mul__

    def __neg__(self) -> "StateField":
        return StateField(self.grid, -self.coeffs)


def zero_state(grid: Grid, n: int) -> StateField:
    return StateField(grid, np.zeros((n,) + grid.shape, dtype=np.complex128))


def _grid_axes(grid: Grid) -> tuple[int, ...]:
    return tuple(range(-grid.d, 0))


def hermitian_symmetrize(coeffs: np.ndarray, d: int) -> np.ndarray:
    """Project onto Hermitian-symmetric coefficients (real-valued field)."""
    rev = coeffs
    for ax in range(-d, 0):
        rev = np.flip(np.roll(rev, -1, axis=ax), axis=ax)
    return 0.5 * (coeffs + np.conj(rev))


def field_from_samples(grid: Grid, values: np.ndarray) -> SpectralField:
    """Transform real samples at the collocation points into a field."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.shape:
        raise ValueError(f"sample shape {values.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite sample values")
    c = np.fft.fftn(values, axes=_grid_axes(grid)) * grid.phase / grid.npoints
    return SpectralField(grid, hermitian_symmetrize(c, grid.d))


def state_from_samples(grid: Grid, values: np.ndarray) -> StateField:
    """Transform a stack of real sample arrays (n, *grid.shape) into a state."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != grid.d + 1 or values.shape[1:] != grid.shape:
        raise ValueError(f"sample shape {values.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite sample values")
    c = np.fft.fftn(values, axes=_grid_axes(grid)) * grid.phase / grid.npoints
    return StateField(grid, hermitian_symmetrize(c, grid.d))


def state_from_fields(fields: Sequence[SpectralField]) -> StateField:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise ValueError("all components must share one grid")
    return StateField(grid, np.stack([f.coeffs for f in fields]))


def from_function(grid: Grid, f: Callable[..., np.ndarray]) -> SpectralField:
    """Sample a real function of d coordinates at the collocation points."""
    values = np.asarray(f(*grid.mesh), dtype=np.float64)
    values = np.broadcast_to(values, grid.shape)
    return field_from_samples(grid, values)


def to_samples(x: SpectralField | StateField) -> np.ndarray:
    """Real values at the collocation points (imaginary residue discarded)."""
    grid = x.grid
    z = x.coeffs * grid.phase_conj
    return np.real(np.fft.ifftn(z, axes=_grid_axes(grid)) * grid.npoints)


def differentiate(x: SpectralField | StateField, axis: int = 0):
    """Spectral derivative along a grid axis (0-based); Nyquist plane zeroed."""
    grid = x.grid
    if not 0 <= axis < grid.d:
        raise ValueError(f"axis {axis} out of range for d={grid.d}")
    return replace(x, coeffs=x.coeffs * grid.diff_mult[axis])


def apply_lambda(x: SpectralField | StateField, s: float):
    """Apply the Bessel multiplier (1 + |k|^2)^(s/2)."""
    grid = x.grid
    return replace(x, coeffs=x.coeffs * (1.0 + grid.k_sq) ** (s / 2.0))


# ---------------------------------------------------------------------------
# Low-pass filters


def smooth_ramp(xi) -> np.ndarray:
    """1D smooth cutoff profile: equals 1 for |xi|<=1/2, 0 for |xi|>=1."""
    return np.clip(2.0 - 2.0 * np.abs(xi), 0.0, 1.0) ** 2


@dataclass(frozen=True)
class FilterSpec:
    """Low-pass filter acting in Fourier space.

    kind 'sharp' is the indicator of the cube max_j |k_j| <= N; kind
    'smooth' is the tensor product of the 1D ramp evaluated at k_j/N.
    """

    kind: str
    N: int

    def __post_init__(self) -> None:
        if self.kind not in ("sharp", "smooth"):
            raise ValueError(f"filter kind must be 'sharp' or 'smooth', got {self.kind!r}")
        if self.N < 1:
            raise ValueError(f"filter cutoff must be positive, got {self.N}")


def filter_symbol(spec: FilterSpec, k: Sequence[float]) -> float:
    """Exact Fourier multiplier of the filter at mode tuple k."""
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    if spec.kind == "sharp":
        return float(np.max(np.abs(k)) <= spec.N)
    return float(np.prod(smooth_ramp(k / spec.N)))


def filter_multiplier(spec: FilterSpec, grid: Grid) -> np.ndarray:
    """Multiplier array of the filter on the grid's mode set."""
    if spec.N > grid.M:
        raise ValueError(f"filter cutoff N={spec.N} exceeds resolved modes M={grid.M}")
    if spec.kind == "sharp":
        return (grid.k_inf <= spec.N).astype(np.float64)
    mult = np.ones(grid.shape)
    for km in grid.kmesh:
        mult = mult * smooth_ramp(km / spec.N)
    return mult


def apply_filter(x: SpectralField | StateField, spec: FilterSpec):
    return replace(x, coeffs=x.coeffs * filter_multiplier(spec, x.grid))


def dealias(x: SpectralField | StateField):
    """Zero the top third of modes: sharp cutoff at N = floor(2M/3)."""
    return replace(x, coeffs=x.coeffs * x.grid.dealias_mask)


# ---------------------------------------------------------------------------
# Norms and inner products


def sobolev_norm(x: SpectralField | StateField, s: float) -> float:
    """H^s norm, matching the continuous norm on the 2pi-periodic torus.

    Computed from the coefficients as
    ((2pi)^d * sum_k (1+|k|^2)^s sum_components |c_k|^2)^(1/2).
    """
    if s < 0:
        raise ValueError(f"regularity index must be >= 0, got {s}")
    grid = x.grid
    w = (1.0 + grid.k_sq) ** s if s != 0 else 1.0
    total = np.sum(w * np.abs(x.coeffs) ** 2)
    return float(np.sqrt(total * (2.0 * np.pi) ** grid.d))


def l2_inner(a: SpectralField | StateField, b: SpectralField | StateField) -> float:
    """L^2 inner product on the torus, summed over components."""
    if a.grid != b.grid:
        raise ValueError("inner product requires a shared grid")
    if a.coeffs.shape != b.coeffs.shape:
        raise ValueError("inner product requires matching component counts")
    total = np.sum(a.coeffs * np.conj(b.coeffs))
    return float(np.real(total) * (2.0 * np.pi) ** a.grid.d)


def linf(x: SpectralField | StateField) -> float:
    """Max absolute value over collocation points and components."""
    return float(np.max(np.abs(to_samples(x))))


def max_mode_support(x: SpectralField | StateField, tol: float = 1e-13) -> int:
    """Largest max_j|k_j| carrying a coefficient above tol (relative)."""
    mag = np.abs(x.coeffs)
    if mag.ndim > x.grid.d:
        mag = mag.max(axis=0)
    scale = mag.max()
    if scale == 0.0:
        return 0
    active = mag > tol * scale
    if not np.any(active):
        return 0
    return int(np.max(x.grid.k_inf[active]))


def embed(x: StateField, fine: Grid) -> StateField:
    """Zero-pad a state onto a finer grid's mode set (same d)."""
    grid = x.grid
    if fine.d != grid.d:
        raise ValueError("grids must share the spatial dimension")
    if fine.M < grid.M:
        raise ValueError("target grid must be at least as fine")
    if fine.M == grid.M:
        return x
    tgt = np.zeros((x.n,) + fine.shape, dtype=np.complex128)
    idx = [np.mod(grid.modes, fine.two_m)]
    sel = np.ix_(np.arange(x.n), *[idx[0]] * grid.d)
    tgt[sel] = x.coeffs
    return StateField(fine, hermitian_symmetrize(tgt, fine.d))
