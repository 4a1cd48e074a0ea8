"""Built-in shallow-water systems, structural checks, margins and energy."""

import numpy as np
import pytest

from specwave.poly import Poly, PolyMatrix
from specwave.spectral import make_grid, state_from_samples
from specwave.systems import (
    builtin_system,
    check_compatibility_AS,
    check_factorization,
    check_symmetrizer,
    eval_matrix,
    hamiltonian_energy,
    hyperbolicity_margin,
    saint_venant_1d,
    saint_venant_2d_hamiltonian,
    saint_venant_2d_standard,
    sample_hyperbolic_points,
    standard_symmetrizer_1d,
)

from oracles import quadrature_inner

ALL_SYSTEMS = [saint_venant_1d, saint_venant_2d_standard, saint_venant_2d_hamiltonian]


class TestEvalMatrix:
    def test_sv1d_at_origin(self):
        sv = saint_venant_1d()
        assert np.allclose(eval_matrix(sv.A[0], [0, 0]), [[0, 1], [1, 0]])

    def test_sv1d_at_point(self):
        sv = saint_venant_1d()
        assert np.allclose(eval_matrix(sv.A[0], [0.5, 0.2]), [[0.2, 1.5], [1.0, 0.2]])

    def test_zero_matrix(self):
        z = PolyMatrix.zero(2, 2)
        assert np.allclose(eval_matrix(z, [3.0, -1.0]), np.zeros((2, 2)))

    def test_nonfinite_point_rejected(self):
        sv = saint_venant_1d()
        with pytest.raises(ValueError):
            eval_matrix(sv.A[0], [np.nan, 0.0])


class TestSaintVenant1D:
    def test_symmetrizer_at_origin_is_identity(self):
        sv = saint_venant_1d()
        assert np.allclose(sv.S.eval([0, 0]), np.eye(2))

    def test_factorization_exact(self):
        rep = check_factorization(saint_venant_1d())
        assert rep.passed, rep.failures

    def test_factorization_sampled(self):
        sv = saint_venant_1d()
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = rng.normal(size=2)
            assert np.allclose(sv.SJ0[0] @ sv.S.eval(p), sv.A[0].eval(p), atol=1e-14)

    def test_sa_symmetric_in_domain(self):
        sv = saint_venant_1d()
        rng = np.random.default_rng(1)
        count = 0
        while count < 100:
            p = rng.uniform(-0.9, 0.9, size=2)
            if not sv.in_domain(p):
                continue
            count += 1
            sa = sv.S.eval(p) @ sv.A[0].eval(p)
            assert np.max(np.abs(sa - sa.T)) < 1e-14

    def test_both_predicates_registered(self):
        names = [n for n, _ in saint_venant_1d().predicates]
        assert names == ["U", "UH"]


class TestSaintVenant2D:
    def test_standard_a1_at_origin(self):
        sv = saint_venant_2d_standard()
        assert np.allclose(sv.A[0].eval([0, 0, 0]), [[0, 1, 0], [1, 0, 0], [0, 0, 0]])

    def test_standard_compatibility(self):
        rep = check_compatibility_AS(saint_venant_2d_standard())
        assert rep.passed, rep.failures

    def test_standard_predicate_violation(self):
        sv = saint_venant_2d_standard()
        assert not sv.in_domain([-1.1, 0.0, 0.0])

    def test_hamiltonian_factorization_exact(self):
        rep = check_factorization(saint_venant_2d_hamiltonian())
        assert rep.passed, rep.failures

    def test_hamiltonian_spd_at_origin(self):
        sv = saint_venant_2d_hamiltonian()
        assert np.allclose(np.linalg.eigvalsh(sv.S.eval([0, 0, 0])), [1, 1, 1])

    def test_hamiltonian_not_spd_outside_domain(self):
        sv = saint_venant_2d_hamiltonian()
        lam = np.linalg.eigvalsh(sv.S.eval([0.0, 0.8, 0.8]))
        assert lam[0] < 0  # 1 + eta - |u|^2 = -0.28

    def test_strict_domain_inside_standard_domain(self):
        ham = saint_venant_2d_hamiltonian()
        std = saint_venant_2d_standard()
        pts = sample_hyperbolic_points(ham, count=100)
        assert all(std.in_domain(p) for p in pts)


class TestStructuralChecks:
    @pytest.mark.parametrize("factory", ALL_SYSTEMS)
    def test_symmetrizer_check_passes(self, factory):
        rep = check_symmetrizer(factory())
        assert rep.passed, rep.failures
        assert rep.n_samples == 200

    @pytest.mark.parametrize("factory", ALL_SYSTEMS)
    def test_compatibility_check_passes(self, factory):
        rep = check_compatibility_AS(factory())
        assert rep.passed, rep.failures

    def test_symmetrizer_failure_reported_outside_domain(self):
        sv = saint_venant_2d_standard()
        rep = check_symmetrizer(sv, samples=np.array([[-1.5, 0.0, 0.0]]))
        assert not rep.passed
        assert any("positive definite" in msg for msg in rep.failures)

    def test_hamiltonian_failure_outside_strict_domain(self):
        ham = saint_venant_2d_hamiltonian()
        rep = check_symmetrizer(ham, samples=np.array([[0.0, 0.9, 0.9]]))
        assert not rep.passed

    def test_synthetic_asymmetric_system_fails_third_condition(self):
        # A = [[0, x], [x, 0]], S = diag(1+x, 1): A0 = 0 and A1 symmetric keep
        # the first two conditions, while S1*A1 = [[0, x^2], [0, 0]] is not
        x = Poly.var(2, 0)
        zero, one = Poly.zero(2), Poly.const(2, 1.0)
        a = PolyMatrix.build(2, [[zero, x], [x, zero]])
        s = PolyMatrix.build(2, [[one + x, zero], [zero, one]])
        from specwave.systems import SystemDef

        sysd = SystemDef(name="synthetic", d=1, n=2, A=(a,), S=s)
        rep = check_compatibility_AS(sysd, samples=np.array([[0.5, 0.3]]))
        assert not rep.passed
        assert any("S1*A1" in msg for msg in rep.failures)

    def test_zero_system_passes(self):
        from specwave.systems import SystemDef

        sysd = SystemDef(
            name="zero",
            d=1,
            n=2,
            A=(PolyMatrix.zero(2, 2),),
            S=PolyMatrix.from_constant(np.eye(2), 2),
        )
        assert check_compatibility_AS(sysd, samples=np.array([[0.1, 0.2]])).passed

    def test_split_exactness(self):
        for factory in ALL_SYSTEMS:
            sysd = factory()
            for j in range(sysd.d):
                recon = PolyMatrix.from_constant(sysd.A0[j], sysd.n) + sysd.A1[j]
                assert recon.equals(sysd.A[j])

    def test_missing_symmetrizer_rejected(self):
        from specwave.systems import SystemDef

        sysd = SystemDef(name="bare", d=1, n=2, A=(PolyMatrix.zero(2, 2),))
        with pytest.raises(ValueError):
            check_symmetrizer(sysd)

    def test_sample_points_deterministic(self):
        sv = saint_venant_1d()
        a = sample_hyperbolic_points(sv, count=50)
        b = sample_hyperbolic_points(sv, count=50)
        assert np.array_equal(a, b)
        assert all(sv.in_domain(p) for p in a)


class TestMargins:
    def test_init1_margins(self):
        from specwave.initial import build_initial

        g = make_grid(1, 64)
        st = build_initial("init1", {"alpha": 1.5}, g)
        m = hyperbolicity_margin(saint_venant_1d(), st)
        assert m["U"] >= 0.5
        assert m["UH"] >= 0.5

    def test_init2_margins(self):
        from specwave.initial import build_initial

        g = make_grid(1, 64)
        st = build_initial("init2", {}, g)
        m = hyperbolicity_margin(saint_venant_1d(), st)
        assert m["U"] > 0.49
        assert m["UH"] <= 0.0

    def test_flat_negative_depth(self):
        g = make_grid(1, 8)
        x = g.mesh[0]
        st = state_from_samples(g, np.stack([-np.ones_like(x), np.zeros_like(x)]))
        m = hyperbolicity_margin(saint_venant_1d(), st)
        assert abs(m["U"]) < 1e-12


class TestHamiltonianEnergy:
    def test_zero_state(self):
        g = make_grid(1, 8)
        st = state_from_samples(g, np.zeros((2,) + g.shape))
        assert hamiltonian_energy(st) == 0.0

    def test_flat_depth_sine_velocity(self):
        g = make_grid(1, 32)
        x = g.mesh[0]
        st = state_from_samples(g, np.stack([np.zeros_like(x), np.sin(x)]))
        assert np.isclose(hamiltonian_energy(st), 0.5 * np.pi)

    def test_cubic_term_against_quadrature(self):
        g = make_grid(1, 64)
        x = g.mesh[0]
        eta = -0.5 * np.cos(x)
        u = np.sin(x)
        st = state_from_samples(g, np.stack([eta, u]))
        assert np.isclose(hamiltonian_energy(st), 5 * np.pi / 8)
        direct = 0.5 * quadrature_inner(eta, eta, 1) + 0.5 * quadrature_inner(
            (1 + eta) * u, u, 1
        )
        assert np.isclose(hamiltonian_energy(st), direct, rtol=1e-12)

    def test_2d_energy(self):
        g = make_grid(2, 16)
        x, y = g.mesh
        eta = 0.1 * np.cos(x) * np.cos(y)
        u = np.sin(x) * np.cos(y)
        v = -np.cos(x) * np.sin(y)
        st = state_from_samples(g, np.stack([eta, u, v]))
        direct = 0.5 * quadrature_inner(eta, eta, 2)
        direct += 0.5 * quadrature_inner((1 + eta) * u, u, 2)
        direct += 0.5 * quadrature_inner((1 + eta) * v, v, 2)
        assert np.isclose(hamiltonian_energy(st), direct, rtol=1e-12)


class TestStandardSymmetrizer1D:
    def test_diagonal_form(self):
        s = standard_symmetrizer_1d()
        assert np.allclose(s.eval([0.3, 0.7]), [[1.0, 0.0], [0.0, 1.3]])

    def test_symmetrizes_a(self):
        sv = saint_venant_1d()
        s = standard_symmetrizer_1d()
        rng = np.random.default_rng(2)
        for _ in range(20):
            p = rng.uniform(-0.5, 0.5, size=2)
            sa = s.eval(p) @ sv.A[0].eval(p)
            assert np.max(np.abs(sa - sa.T)) < 1e-14


def test_builtin_lookup():
    assert builtin_system("saint-venant-1d").n == 2
    with pytest.raises(ValueError):
        builtin_system("no-such-system")
