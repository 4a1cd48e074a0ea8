"""Quasilinear systems with polynomial coefficient matrices.

A system is d coefficient matrices A_j(U) with polynomial entries,
optionally a polynomial symmetrizer S(U) (and a constant factorization
A_j = SJ0_j S(U) when the system has Hamiltonian structure), plus named
hyperbolicity predicates that must stay positive.  The two shallow-water
variants used throughout are built here, together with executable checks
of the structural conditions they are supposed to satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .poly import Poly, PolyMatrix
from .spectral import StateField, dealias, field_from_samples, l2_inner, to_samples

__all__ = [
    "SystemDef",
    "CheckReport",
    "saint_venant_1d",
    "saint_venant_2d_standard",
    "saint_venant_2d_hamiltonian",
    "standard_symmetrizer_1d",
    "builtin_system",
    "BUILTIN_SYSTEMS",
    "eval_matrix",
    "check_symmetrizer",
    "check_compatibility_AS",
    "check_factorization",
    "hyperbolicity_margin",
    "hamiltonian_energy",
    "sample_hyperbolic_points",
]

SYM_TOL = 1e-12


@dataclass(frozen=True)
class SystemDef:
    """Quasilinear first-order system dU/dt + sum_j A_j(U) d_j U = 0."""

    name: str
    d: int
    n: int
    A: tuple[PolyMatrix, ...]
    S: PolyMatrix | None = None
    SJ0: tuple[np.ndarray, ...] | None = None
    predicates: tuple[tuple[str, Poly], ...] = ()

    def __post_init__(self) -> None:
        if len(self.A) != self.d:
            raise ValueError("need one coefficient matrix per spatial direction")
        A0 = tuple(Aj.constant_part() for Aj in self.A)
        A1 = tuple(Aj.minus_constant() for Aj in self.A)
        for Aj, A0j, A1j in zip(self.A, A0, A1):
            if not (PolyMatrix.from_constant(A0j, Aj.nvars) + A1j).equals(Aj):
                raise AssertionError("constant/varying split does not reproduce A_j")
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "A1", A1)
        if self.S is not None:
            object.__setattr__(self, "S0", self.S.constant_part())
            object.__setattr__(self, "S1", self.S.minus_constant())
        else:
            object.__setattr__(self, "S0", None)
            object.__setattr__(self, "S1", None)

    def in_domain(self, point: Sequence[float]) -> bool:
        return all(p(point) > 0.0 for _, p in self.predicates)


def eval_matrix(P: PolyMatrix, u: Sequence[float]) -> np.ndarray:
    """Entrywise polynomial evaluation of a matrix at a state point."""
    u = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(u)):
        raise ValueError("evaluation point must be finite")
    return P.eval(u)


# ---------------------------------------------------------------------------
# Built-in Saint-Venant systems


def _sv_predicate_depth(nvars: int) -> Poly:
    # 1 + eta
    return Poly.const(nvars, 1.0) + Poly.var(nvars, 0)


def _sv_predicate_strict(nvars: int) -> Poly:
    # 1 + eta - |u|^2
    p = _sv_predicate_depth(nvars)
    for i in range(1, nvars):
        p = p - Poly.var(nvars, i) * Poly.var(nvars, i)
    return p


def saint_venant_1d() -> SystemDef:
    """1D shallow water: A(U) = [[u, 1+eta], [1, u]] with U = (eta, u).

    Carries the energy symmetrizer S = [[1, u], [u, 1+eta]] together with
    the constant factor SJ0 = [[0, 1], [1, 0]] realizing A = SJ0 S(U); both
    hyperbolicity predicates (1+eta and 1+eta-u^2) are registered since
    experiments are classified against both.
    """
    nv = 2
    one, eta, u = Poly.const(nv, 1.0), Poly.var(nv, 0), Poly.var(nv, 1)
    A = PolyMatrix.build(2, [[u, one + eta], [one, u]])
    S = PolyMatrix.build(2, [[one, u], [u, one + eta]])
    sj0 = np.array([[0.0, 1.0], [1.0, 0.0]])
    return SystemDef(
        name="saint-venant-1d",
        d=1,
        n=2,
        A=(A,),
        S=S,
        SJ0=(sj0,),
        predicates=(("U", _sv_predicate_depth(nv)), ("UH", _sv_predicate_strict(nv))),
    )


def saint_venant_2d_standard() -> SystemDef:
    """2D shallow water with (u.grad)u advection; symmetrizer diag(1, 1+eta, 1+eta)."""
    nv = 3
    one = Poly.const(nv, 1.0)
    zero = Poly.zero(nv)
    eta, u, v = Poly.var(nv, 0), Poly.var(nv, 1), Poly.var(nv, 2)
    A1 = PolyMatrix.build(3, [[u, one + eta, zero], [one, u, zero], [zero, zero, u]])
    A2 = PolyMatrix.build(3, [[v, zero, one + eta], [zero, v, zero], [one, zero, v]])
    S = PolyMatrix.build(3, [[one, zero, zero], [zero, one + eta, zero], [zero, zero, one + eta]])
    return SystemDef(
        name="saint-venant-2d-standard",
        d=2,
        n=3,
        A=(A1, A2),
        S=S,
        predicates=(("U", _sv_predicate_depth(nv)),),
    )


def saint_venant_2d_hamiltonian() -> SystemDef:
    """2D shallow water with grad(|u|^2)/2 advection; A_j = SJ0_j S(U)."""
    nv = 3
    one = Poly.const(nv, 1.0)
    zero = Poly.zero(nv)
    eta, u, v = Poly.var(nv, 0), Poly.var(nv, 1), Poly.var(nv, 2)
    A1 = PolyMatrix.build(3, [[u, one + eta, zero], [one, u, v], [zero, zero, zero]])
    A2 = PolyMatrix.build(3, [[v, zero, one + eta], [zero, zero, zero], [one, u, v]])
    S = PolyMatrix.build(3, [[one, u, v], [u, one + eta, zero], [v, zero, one + eta]])
    sj1 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    sj2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    return SystemDef(
        name="saint-venant-2d-hamiltonian",
        d=2,
        n=3,
        A=(A1, A2),
        S=S,
        SJ0=(sj1, sj2),
        predicates=(("UH", _sv_predicate_strict(nv)),),
    )


def standard_symmetrizer_1d() -> PolyMatrix:
    """The diagonal symmetrizer diag(1, 1+eta) of the 1D system.

    Distinct from the one registered on saint_venant_1d(); it does not
    factor A(U) but is the one for which the filter-commutator pairing
    grows linearly in the cutoff.
    """
    nv = 2
    one, eta = Poly.const(nv, 1.0), Poly.var(nv, 0)
    return PolyMatrix.build(2, [[one, Poly.zero(nv)], [Poly.zero(nv), one + eta]])


BUILTIN_SYSTEMS = {
    "saint-venant-1d": saint_venant_1d,
    "saint-venant-2d-standard": saint_venant_2d_standard,
    "saint-venant-2d-hamiltonian": saint_venant_2d_hamiltonian,
}


def builtin_system(name: str) -> SystemDef:
    try:
        return BUILTIN_SYSTEMS[name]()
    except KeyError:
        known = ", ".join(sorted(BUILTIN_SYSTEMS))
        raise ValueError(f"unknown system {name!r}; built-ins: {known}") from None


# ---------------------------------------------------------------------------
# Structural checks


@dataclass
class CheckReport:
    """Outcome of a structural check over a set of sample points."""

    name: str
    passed: bool
    n_samples: int
    failures: list[str] = field(default_factory=list)

    def add_failure(self, msg: str) -> None:
        self.passed = False
        self.failures.append(msg)


def sample_hyperbolic_points(
    sys: SystemDef,
    count: int = 200,
    box: tuple[float, float] = (-0.9, 0.9),
    max_draws: int = 20000,
) -> np.ndarray:
    """Deterministic low-discrepancy samples inside the hyperbolicity domain."""
    sampler = qmc.Halton(d=sys.n, scramble=False)
    lo, hi = box
    accepted: list[np.ndarray] = []
    drawn = 0
    while len(accepted) < count and drawn < max_draws:
        batch = sampler.random(256)
        drawn += 256
        pts = lo + (hi - lo) * batch
        for p in pts:
            if sys.in_domain(p):
                accepted.append(p)
                if len(accepted) == count:
                    break
    return np.array(accepted)


def check_symmetrizer(sys: SystemDef, samples: np.ndarray | None = None) -> CheckReport:
    """S(U) symmetric positive definite with S(U)A_j(U) symmetric, sampled."""
    if sys.S is None:
        raise ValueError(f"system {sys.name!r} has no symmetrizer registered")
    if samples is None:
        samples = sample_hyperbolic_points(sys)
    report = CheckReport("symmetrizer", True, len(samples))
    for p in samples:
        S = sys.S.eval(p)
        if np.max(np.abs(S - S.T)) > SYM_TOL:
            report.add_failure(f"S not symmetric at {tuple(p)}")
            continue
        lam = np.linalg.eigvalsh(S)
        if lam[0] <= 0.0:
            report.add_failure(f"S not positive definite at {tuple(p)} (min eig {lam[0]:.3e})")
        for j, Aj in enumerate(sys.A):
            SA = S @ Aj.eval(p)
            asym = np.max(np.abs(SA - SA.T))
            if asym > SYM_TOL:
                report.add_failure(f"S*A_{j} asymmetry {asym:.3e} at {tuple(p)}")
    return report


def check_compatibility_AS(sys: SystemDef, samples: np.ndarray | None = None) -> CheckReport:
    """Symmetry of S0 A0_j, S0 A1_j(U) + S1(U) A0_j and S1(U) A1_j(U)."""
    if sys.S is None:
        raise ValueError(f"system {sys.name!r} has no symmetrizer registered")
    if samples is None:
        samples = sample_hyperbolic_points(sys)
    report = CheckReport("compatibility", True, len(samples))
    S0, S1 = sys.S0, sys.S1
    for j, (A0j, A1j) in enumerate(zip(sys.A0, sys.A1)):
        M0 = S0 @ A0j
        if np.max(np.abs(M0 - M0.T)) > SYM_TOL:
            report.add_failure(f"S0*A0_{j} not symmetric")
        for p in samples:
            A1p = A1j.eval(p)
            S1p = S1.eval(p)
            mixed = S0 @ A1p + S1p @ A0j
            if np.max(np.abs(mixed - mixed.T)) > SYM_TOL:
                report.add_failure(f"S0*A1_{j} + S1*A0_{j} asymmetric at {tuple(p)}")
                break
            quad = S1p @ A1p
            if np.max(np.abs(quad - quad.T)) > SYM_TOL:
                report.add_failure(f"S1*A1_{j} asymmetric at {tuple(p)}")
                break
    return report


def check_factorization(sys: SystemDef) -> CheckReport:
    """Exact polynomial identity A_j(U) = SJ0_j S(U), coefficient by coefficient."""
    report = CheckReport("factorization", True, 0)
    if sys.SJ0 is None or sys.S is None:
        report.add_failure("no constant factor matrices registered")
        return report
    for j, (sj0, Aj) in enumerate(zip(sys.SJ0, sys.A)):
        if np.max(np.abs(sj0 - sj0.T)) > 0.0:
            report.add_failure(f"SJ0_{j} not symmetric")
        if not sys.S.left_mul_constant(sj0).equals(Aj):
            report.add_failure(f"A_{j} != SJ0_{j} * S as polynomials")
    return report


# ---------------------------------------------------------------------------
# State-level diagnostics


def hyperbolicity_margin(sys: SystemDef, state: StateField) -> dict[str, float]:
    """Minimum of each named predicate over the collocation points."""
    if state.n != sys.n:
        raise ValueError(f"state has {state.n} components, system expects {sys.n}")
    samples = to_samples(state)
    comps = [samples[i] for i in range(state.n)]
    return {name: float(np.min(p.eval_on(comps))) for name, p in sys.predicates}


def hamiltonian_energy(state: StateField) -> float:
    """Shallow-water energy (integral of eta^2 + (1+eta)|u|^2, halved).

    The cubic term goes through a dealiased pointwise square of the
    velocity, which keeps the collocation sum exact for the trigonometric
    polynomials involved.
    """
    grid = state.grid
    eta = state.component(0)
    samp = to_samples(state)
    total = l2_inner(eta, eta)
    for i in range(1, state.n):
        ui = state.component(i)
        total += l2_inner(ui, ui)
        sq = dealias(field_from_samples(grid, samp[i] * samp[i]))
        total += l2_inner(eta, sq)
    return 0.5 * total
