"""Fixed-step RK4 evolution with blow-up detection and trajectory monitors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .semidisc import SchemeSpec, rhs
from .spectral import (
    FilterSpec,
    StateField,
    apply_filter,
    differentiate,
    linf,
    sobolev_norm,
    to_samples,
)
from .systems import SystemDef, hamiltonian_energy, hyperbolicity_margin

__all__ = [
    "BlowUpError",
    "EvolveConfig",
    "EvolveResult",
    "rk4_step",
    "evolve",
    "standard_monitors",
    "monitor_csv",
]

Monitor = tuple[str, Callable[[StateField], float]]


class BlowUpError(RuntimeError):
    """Raised when an RK4 stage produces non-finite coefficients."""

    def __init__(self, stage: str):
        super().__init__(f"non-finite values in RK4 stage {stage}")
        self.stage = stage


def _check_finite(state: StateField, stage: str) -> StateField:
    if not np.all(np.isfinite(state.coeffs)):
        raise BlowUpError(stage)
    return state


def rk4_step(rhs_fn: Callable[[StateField], StateField], state: StateField, dt: float) -> StateField:
    """One classical Runge-Kutta 4 update."""
    k1 = _check_finite(rhs_fn(state), "k1")
    k2 = _check_finite(rhs_fn(state + (0.5 * dt) * k1), "k2")
    k3 = _check_finite(rhs_fn(state + (0.5 * dt) * k2), "k3")
    k4 = _check_finite(rhs_fn(state + dt * k3), "k4")
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class EvolveConfig:
    """Time-stepping parameters and runtime diagnostics."""

    dt: float
    T: float
    monitor_stride: int | None = None  # default: about 200 samples per run
    blowup_threshold: float = 1e6  # L-infinity growth factor
    monitors: tuple[Monitor, ...] | None = None

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.T < 0:
            raise ValueError("final time must be nonnegative")


@dataclass
class EvolveResult:
    final_state: StateField
    status: str  # 'completed' | 'blowup'
    blowup_time: float | None
    monitor_names: list[str]
    monitor_rows: list[tuple[float, ...]] = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return self.status == "completed"


def standard_monitors(sys: SystemDef) -> list[Monitor]:
    """Default diagnostics: Sobolev norms, domain margins, energy, curvature."""
    monitors: list[Monitor] = [
        ("Hs0", lambda st: sobolev_norm(st, 0)),
        ("Hs1", lambda st: sobolev_norm(st, 1)),
    ]
    for name, _ in sys.predicates:
        monitors.append(
            (f"margin_{name}", lambda st, _n=name: hyperbolicity_margin(sys, st)[_n])
        )
    if sys.n == sys.d + 1:
        monitors.append(("hamiltonian", hamiltonian_energy))
    monitors.append(
        ("max_d2u", lambda st: linf(differentiate(differentiate(st.component(1), 0), 0)))
    )
    return monitors


def _step_plan(T: float, dt: float) -> list[float]:
    """Step sizes covering [0, T] exactly: full dt steps plus a final partial."""
    if T == 0.0:
        return []
    n_full = int(math.floor(T / dt + 1e-9))
    remainder = T - n_full * dt
    steps = [dt] * n_full
    if remainder > 1e-9 * dt:
        steps.append(remainder)
    return steps


def evolve(
    scheme: SchemeSpec,
    sys: SystemDef,
    state0: StateField,
    cfg: EvolveConfig,
) -> EvolveResult:
    """March the semi-discrete system from the projected initial data to T.

    The initial state is projected onto the retained mode cube (all schemes
    start from the sharp projection of the data).  Monitors are sampled at
    t=0, every stride steps and at the final time; blow-up is declared on
    non-finite stage values or when the max-norm exceeds the configured
    growth factor.
    """
    grid = state0.grid
    N = scheme.cutoff(grid)
    state = apply_filter(state0, FilterSpec("sharp", N))
    steps = _step_plan(cfg.T, cfg.dt)
    if cfg.monitor_stride is not None:
        stride = cfg.monitor_stride
    else:
        stride = max(1, math.ceil(len(steps) / 200))
    monitors = list(cfg.monitors) if cfg.monitors is not None else standard_monitors(sys)
    names = [name for name, _ in monitors]
    rows: list[tuple[float, ...]] = []

    linf0 = linf(state)
    rhs_fn = lambda st: rhs(scheme, sys, st)

    def sample(t: float, st: StateField) -> None:
        rows.append((t, *(fn(st) for _, fn in monitors)))

    def exploded(st: StateField) -> bool:
        vals = np.abs(to_samples(st))
        if not np.all(np.isfinite(vals)):
            return True
        return linf0 > 0.0 and float(vals.max()) > cfg.blowup_threshold * linf0

    sample(0.0, state)
    t = 0.0
    for i, h in enumerate(steps):
        try:
            new_state = rk4_step(rhs_fn, state, h)
        except BlowUpError:
            return EvolveResult(state, "blowup", t + h, names, rows)
        t = t + h
        state = new_state
        last = i == len(steps) - 1
        if (i + 1) % stride == 0 or last:
            if exploded(state):
                return EvolveResult(state, "blowup", t, names, rows)
            sample(t, state)
    return EvolveResult(state, "completed", None, names, rows)


def monitor_csv(result: EvolveResult) -> str:
    """Monitor series as CSV text (deterministic byte-for-byte)."""
    lines = ["time," + ",".join(result.monitor_names)]
    for row in result.monitor_rows:
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"
