"""Fourier pseudospectral solver for quasilinear hyperbolic systems on periodic domains."""

from .spectral import (
    FilterSpec,
    Grid,
    SpectralField,
    StateField,
    apply_filter,
    apply_lambda,
    dealias,
    differentiate,
    field_from_samples,
    filter_multiplier,
    filter_symbol,
    from_function,
    l2_inner,
    linf,
    make_grid,
    sobolev_norm,
    state_from_fields,
    state_from_samples,
    to_samples,
)

__version__ = "0.1.0"
