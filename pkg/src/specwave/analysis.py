"""Error metrics, convergence studies, energy functionals and probes."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .initial import build_initial
from .poly import PolyMatrix
from .semidisc import SchemeSpec, poly_coefficient_samples
from .spectral import (
    FilterSpec,
    StateField,
    apply_filter,
    apply_lambda,
    dealias,
    differentiate,
    embed,
    field_from_samples,
    l2_inner,
    linf,
    make_grid,
    max_mode_support,
    sobolev_norm,
    state_from_samples,
    to_samples,
)
from .systems import SystemDef, standard_symmetrizer_1d
from .timeint import EvolveConfig, evolve

__all__ = [
    "relative_error",
    "eoc",
    "energy_functional",
    "energy_symmetrizer",
    "jn_probe",
    "jn_counterexample_states",
    "jn_study",
    "second_derivative_max",
    "ConvergenceRow",
    "ConvergenceReport",
    "convergence_study",
    "report_csv",
    "report_table",
    "fit_loglog_slope",
]


def relative_error(u: StateField, ref: StateField, s: float) -> float:
    """Relative H^s gap to a reference on a finer (or equal) grid.

    The coarse state is zero-padded onto the reference mode set and the
    norms are taken directly on the Fourier coefficients.
    """
    if ref.grid.M < u.grid.M:
        raise ValueError("reference grid must be at least as fine as the candidate")
    padded = embed(u, ref.grid)
    denom = sobolev_norm(ref, s)
    if denom == 0.0:
        raise ValueError("reference state has zero norm")
    return sobolev_norm(padded - ref, s) / denom


def eoc(error_coarse: float, error_fine: float) -> float | None:
    """Experimental order of convergence under resolution doubling."""
    if error_coarse <= 0.0 or error_fine <= 0.0:
        return None
    return math.log(error_coarse / error_fine) / math.log(2.0)


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=np.float64))
    ly = np.log(np.asarray(ys, dtype=np.float64))
    return float(np.polyfit(lx, ly, 1)[0])


# ---------------------------------------------------------------------------
# Energy functionals


def energy_symmetrizer(sys: SystemDef, variant: str) -> PolyMatrix:
    """Resolve the symmetrizer backing an energy functional variant.

    'hamiltonian' needs the factorized structure; 'standard' uses the
    diagonal-type symmetrizer (for the 1D shallow-water system this is not
    the registered one, which realizes the factorization instead).
    """
    if variant == "hamiltonian":
        if sys.S is None or sys.SJ0 is None:
            raise ValueError(f"system {sys.name!r} has no factorized (Hamiltonian) symmetrizer")
        return sys.S
    if variant == "standard":
        if sys.name == "saint-venant-1d":
            return standard_symmetrizer_1d()
        if sys.S is not None and sys.SJ0 is None:
            return sys.S
        raise ValueError(f"system {sys.name!r} has no standard symmetrizer")
    raise ValueError(f"variant must be 'standard' or 'hamiltonian', got {variant!r}")


def energy_functional(
    sys: SystemDef,
    state: StateField,
    s: float,
    variant: str = "standard",
    symmetrizer: PolyMatrix | None = None,
) -> float:
    """Quadratic form of the symmetrizer applied to the Bessel-smoothed state.

    Products are dealiased pairwise so the collocation quadrature is exact
    for the trigonometric polynomials involved.
    """
    S = symmetrizer if symmetrizer is not None else energy_symmetrizer(sys, variant)
    grid = state.grid
    n = state.n
    v = apply_lambda(state, s)
    v_samp = to_samples(v)
    u_samp = to_samples(state)
    total = 0.0
    for a in range(n):
        for b in range(n):
            entry = S.entries[a][b]
            if not entry.terms:
                continue
            w_ab = dealias(field_from_samples(grid, v_samp[a] * v_samp[b]))
            coeff = poly_coefficient_samples(entry, u_samp, grid, grid.dealias_N)
            total += l2_inner(field_from_samples(grid, coeff), w_ab)
    return total


# ---------------------------------------------------------------------------
# Counterexample probe


def jn_probe(
    sys: SystemDef,
    U: StateField,
    V: StateField,
    N: int,
    axis: int = 0,
    symmetrizer: PolyMatrix | None = None,
) -> float:
    """Pairing that measures how the sharp projection defeats a symmetrizer.

    Computes the inner product of P_N(S(U) (Id-P_N)(A_j(U) d_j P_N V))
    with V, all products evaluated exactly (the working grid must resolve
    the full mode content, 2M >= 3(N + p) for data of bandwidth p).
    """
    grid = U.grid
    if V.grid != grid:
        raise ValueError("probe states must share one grid")
    S = symmetrizer if symmetrizer is not None else energy_symmetrizer(sys, "standard")
    p = max(max_mode_support(U), 1)
    if 2 * grid.M < 3 * (N + p):
        raise ValueError(
            f"working grid too coarse for exact products: need 2M >= {3 * (N + p)}, have {2 * grid.M}"
        )
    pn = FilterSpec("sharp", N)
    w = apply_filter(V, pn)
    t = _matvec_exact(sys.A[axis], U, differentiate(w, axis))
    t2 = t - apply_filter(t, pn)
    t3 = _matvec_exact(S, U, t2)
    t4 = apply_filter(t3, pn)
    return l2_inner(t4, V)


def _matvec_exact(P: PolyMatrix, coeff_state: StateField, vec: StateField) -> StateField:
    """P(U) applied pointwise to a vector field, no projection."""
    grid = coeff_state.grid
    u_samp = to_samples(coeff_state)
    v_samp = to_samples(vec)
    rows = np.zeros_like(v_samp)
    for i in range(P.n):
        acc = np.zeros(grid.shape)
        for c in range(P.n):
            entry = P.entries[i][c]
            if not entry.terms:
                continue
            acc = acc + poly_coefficient_samples(entry, u_samp, grid, None) * v_samp[c]
        rows[i] = acc
    return state_from_samples(grid, rows)


def jn_counterexample_states(N: int, p: int, q: int) -> tuple[StateField, StateField, int]:
    """Single-mode data for the probe: U = (-cos(px)/2, sin(px)), V = (0, sin((N-q)x)).

    Returns the states on a working grid fine enough for exact products,
    together with the grid half-resolution used.
    """
    if not 0 <= q < p:
        raise ValueError(f"need 0 <= q < p, got q={q}, p={p}")
    if p >= N:
        raise ValueError(f"need p << N, got p={p}, N={N}")
    m_work = 1 << max(4, math.ceil(math.log2(3.0 * (N + p) / 2.0)))
    grid = make_grid(1, m_work)
    x = grid.mesh[0]
    U = state_from_samples(grid, np.stack([-0.5 * np.cos(p * x), np.sin(p * x)]))
    V = state_from_samples(grid, np.stack([np.zeros_like(x), np.sin((N - q) * x)]))
    return U, V, m_work


def jn_study(sys: SystemDef, N_list: list[int], p: int = 1, q: int = 0) -> dict:
    """Probe values over a range of cutoffs plus the fitted linear slope."""
    if sorted(N_list) != list(N_list):
        raise ValueError("N_list must be ascending")
    values = []
    for N in N_list:
        U, V, _ = jn_counterexample_states(N, p, q)
        values.append(jn_probe(sys, U, V, N))
    slope = None
    if len(N_list) >= 2:
        A = np.vstack([np.asarray(N_list, dtype=np.float64), np.ones(len(N_list))]).T
        slope = float(np.linalg.lstsq(A, np.asarray(values), rcond=None)[0][0])
    return {"N": list(N_list), "J": values, "slope": slope, "p": p, "q": q}


def second_derivative_max(state: StateField, component: int = 1, axis: int = 0) -> float:
    """Max over collocation points of the second spectral derivative."""
    d2 = differentiate(differentiate(state.component(component), axis), axis)
    return linf(d2)


# ---------------------------------------------------------------------------
# Convergence studies


@dataclass
class ConvergenceRow:
    M: int
    scheme: str
    status: str
    errors: dict[float, float] = field(default_factory=dict)
    eocs: dict[float, float | None] = field(default_factory=dict)

    @property
    def two_m(self) -> int:
        return 2 * self.M


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow]
    s_norms: tuple[float, ...]
    reference: str


def _run_case(args) -> tuple[int, str, str, np.ndarray | None]:
    sys, scheme_kind, initial_name, params, M, dt, T = args
    grid = make_grid(sys.d, M)
    state0 = build_initial(initial_name, params, grid)
    result = evolve(SchemeSpec(scheme_kind), sys, state0, EvolveConfig(dt=dt, T=T))
    coeffs = result.final_state.coeffs if result.completed else None
    return (M, scheme_kind, result.status, coeffs)


def convergence_study(
    sys: SystemDef,
    schemes: list[str],
    initial_name: str,
    initial_params: dict | None,
    M_list: list[int],
    M_ref: int,
    dt: float,
    T: float,
    s_norms: tuple[float, ...] = (0.0, 1.0),
    jobs: int = 1,
) -> ConvergenceReport:
    """Errors and convergence orders against a fine sharp-filter reference."""
    if M_ref <= max(M_list):
        raise ValueError("reference resolution must exceed every tested resolution")
    ref_grid = make_grid(sys.d, M_ref)
    ref0 = build_initial(initial_name, initial_params, ref_grid)
    ref_result = evolve(SchemeSpec("sharp"), sys, ref0, EvolveConfig(dt=dt, T=T))
    if not ref_result.completed:
        raise RuntimeError(f"reference run blew up at t={ref_result.blowup_time}")
    ref = ref_result.final_state

    cases = [
        (sys, kind, initial_name, initial_params, M, dt, T)
        for M in M_list
        for kind in schemes
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_case, cases))
    else:
        outcomes = [_run_case(c) for c in cases]

    rows = []
    for M, kind, status, coeffs in outcomes:
        row = ConvergenceRow(M=M, scheme=kind, status=status)
        if coeffs is not None:
            state = StateField(make_grid(sys.d, M), coeffs)
            for s in s_norms:
                row.errors[s] = relative_error(state, ref, s)
        rows.append(row)

    # EOC pairs successive resolutions within one scheme
    by_scheme: dict[str, list[ConvergenceRow]] = {}
    for row in rows:
        by_scheme.setdefault(row.scheme, []).append(row)
    for scheme_rows in by_scheme.values():
        scheme_rows.sort(key=lambda r: r.M)
        for cur, nxt in zip(scheme_rows, scheme_rows[1:]):
            for s in s_norms:
                if s in cur.errors and s in nxt.errors:
                    cur.eocs[s] = eoc(cur.errors[s], nxt.errors[s])

    rows.sort(key=lambda r: (r.M, schemes.index(r.scheme)))
    reference = f"sharp filter, 2M={2 * M_ref}, dt={dt}, T={T}"
    return ConvergenceReport(rows=rows, s_norms=tuple(s_norms), reference=reference)


def _fmt_s(s: float) -> str:
    return str(int(s)) if float(s).is_integer() else str(s)


def report_csv(report: ConvergenceReport) -> str:
    cols = ["two_M", "scheme"]
    for s in report.s_norms:
        cols.append(f"E{_fmt_s(s)}")
    for s in report.s_norms:
        cols.append(f"EOC{_fmt_s(s)}")
    cols.append("status")
    lines = [",".join(cols)]
    for row in report.rows:
        cells = [str(row.two_m), row.scheme]
        for s in report.s_norms:
            cells.append(repr(row.errors[s]) if s in row.errors else "")
        for s in report.s_norms:
            v = row.eocs.get(s)
            cells.append(repr(v) if v is not None else "")
        cells.append(row.status)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def report_table(report: ConvergenceReport) -> str:
    """Aligned text table with one block of columns per scheme."""
    schemes = []
    for row in report.rows:
        if row.scheme not in schemes:
            schemes.append(row.scheme)
    ms = sorted({row.M for row in report.rows})
    lookup = {(row.M, row.scheme): row for row in report.rows}
    header = ["2M"]
    for kind in schemes:
        for s in report.s_norms:
            header.append(f"{kind} EOC{_fmt_s(s)}")
    lines = ["  ".join(f"{h:>16}" for h in header)]
    for M in ms:
        cells = [f"{2 * M:>16}"]
        for kind in schemes:
            row = lookup.get((M, kind))
            for s in report.s_norms:
                v = row.eocs.get(s) if row is not None else None
                if row is not None and row.status != "completed":
                    cells.append(f"{row.status:>16}")
                elif v is None:
                    cells.append(f"{'-':>16}")
                else:
                    cells.append(f"{v:>16.2f}")
        lines.append("  ".join(cells))
    lines.append(f"reference: {report.reference}")
    return "\n".join(lines) + "\n"
