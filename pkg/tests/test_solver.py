"""Tests for the characteristic system, the pencil, candidate selection and the pipeline."""

import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from src.bench.noise import NoiseSpec, apply_noise
from src.bench.synthetic import default_rig, generate_instance, sample_motion
from src.constraints.cost import CostPoly, eval_cost, min_eigen, min_eigenvalues, stack_cost
from src.constraints.rows import build_rows
from src.geometry.metrics import eps_rotation
from src.solver import pipeline
from src.solver.char_system import CharSystem, char_polys, nominal_degrees
from src.solver.pencil import (
    EXPECTED_COMPANION_SIZE,
    CandidateSet,
    build_pencil,
    companion_eigen,
    companion_matrix,
    deflate,
    equilibrate,
    schur_eigenvalues,
)
from src.solver.pipeline import RelativePoseSolver
from src.solver.polynomials import pad, polymat_det, polymat_mul, polymat_trace, truncate
from src.solver.selection import grid_oracle, polish_candidate, select_solution, stationarity
from src.utils.exceptions import IllConditionedError, SolverError, StructuralError, ValidationError
from tests.conftest import make_instance


def _cost(inst, mode="full") -> CostPoly:
    return stack_cost(build_rows(list(inst.correspondences), inst.rig, inst.imu_i, inst.imu_j, mode))


def _solve(inst, mode="full", polish=True):
    solver = RelativePoseSolver(mode=mode, polish=polish)
    return solver.solve(list(inst.correspondences), inst.rig, inst.imu_i, inst.imu_j)


def _constant_cost(matrix: np.ndarray) -> CostPoly:
    """Linearized cost that does not depend on the parameter."""
    num = np.zeros((4, 4, 5))
    num[:, :, 0] = matrix
    return CostPoly(numerator=num, n_rows=6, mode="linearized")


def _assert_exact(inst, report, size):
    truth = inst.truth.relative
    assert report.fallback is False
    assert report.companion_size == size
    assert eps_rotation(truth.R, report.relative.R) <= 1e-6
    assert np.linalg.norm(report.relative.t - truth.t) <= 1e-8 * np.linalg.norm(truth.t)


def _small_yaw_instance(rng):
    return generate_instance(
        default_rig(), "random", rng, n_planes=30, motion_sample=sample_motion("random", rng, max_yaw_deg=1.0)
    )


class TestPolynomials:
    def test_det_matches_pointwise(self, rng):
        A = rng.standard_normal((4, 4, 5))
        det = polymat_det(A)
        assert det.shape == (17,)
        for s in (-1.3, 0.0, 0.4, 2.0):
            value = np.linalg.det(P.polyval(s, np.moveaxis(A, -1, 0)))
            assert P.polyval(s, det) == pytest.approx(value, rel=1e-9, abs=1e-9)

    def test_mul_and_trace(self, rng):
        A = rng.standard_normal((3, 3, 2))
        B = rng.standard_normal((3, 3, 3))
        AB = polymat_mul(A, B)
        s = 0.7
        at = lambda M: P.polyval(s, np.moveaxis(M, -1, 0))  # noqa: E731
        np.testing.assert_allclose(at(AB), at(A) @ at(B), atol=1e-12)
        assert P.polyval(s, polymat_trace(A)) == pytest.approx(np.trace(at(A)))

    def test_truncate(self):
        np.testing.assert_array_equal(truncate(np.array([1.0, 2.0, 1e-12]), 1, 1e-9), [1.0, 2.0])
        assert truncate(np.array([1.0, 2.0, 0.5]), 1, 1e-9) is None
        np.testing.assert_array_equal(truncate(np.array([3.0]), 2, 1e-9), [3.0, 0.0, 0.0])
        np.testing.assert_array_equal(pad(np.array([1.0, 2.0]), 4), [1.0, 2.0, 0.0, 0.0])


class TestCharSystem:
    @pytest.mark.parametrize("mode", ["full", "linearized"])
    def test_degrees(self, instance, mode):
        cs = char_polys(_cost(instance, mode))
        g_deg, w_deg = nominal_degrees(mode)
        assert [g.shape[0] - 1 for g in cs.g] == list(g_deg)
        assert [w.shape[0] - 1 for w in cs.w] == list(w_deg)

    def test_characteristic_identity(self, instance, rng):
        cp = _cost(instance)
        cs = char_polys(cp)
        for s in (-2.0, -0.1, 0.0, 0.35, 3.0):
            C = eval_cost(cp, s)
            f = cs.f(s)
            for lam in rng.uniform(0.05, 1.0, size=3) * np.trace(C):
                terms = np.array([lam**4, f[0] * lam**3, f[1] * lam**2, f[2] * lam, f[3]])
                det = np.linalg.det(C - lam * np.eye(4))
                assert abs(terms.sum() - det) <= 1e-9 * np.abs(terms).sum()

    @pytest.mark.slow
    @pytest.mark.parametrize("mode", ["full", "linearized"])
    def test_degrees_on_many_instances(self, mode):
        g_deg, w_deg = nominal_degrees(mode)
        for seed in range(100):
            cs = char_polys(_cost(make_instance(seed=1000 + seed, n_planes=10), mode))
            assert [g.shape[0] - 1 for g in cs.g] == list(g_deg)
            assert [w.shape[0] - 1 for w in cs.w] == list(w_deg)

    @pytest.mark.slow
    def test_characteristic_identity_on_many_triples(self, rng):
        checked = 0
        for seed in range(10):
            cp = _cost(make_instance(seed=3000 + seed, n_planes=20))
            cs = char_polys(cp)
            for s in rng.uniform(-5.0, 5.0, size=10):
                C = eval_cost(cp, float(s))
                f = cs.f(float(s))
                for lam in rng.uniform(0.0, 1.5, size=10) * np.trace(C):
                    terms = np.array([lam**4, f[0] * lam**3, f[1] * lam**2, f[2] * lam, f[3]])
                    det = np.linalg.det(C - lam * np.eye(4))
                    assert abs(terms.sum() - det) <= 1e-9 * np.abs(terms).sum()
                    checked += 1
        assert checked == 1000

    def test_stationarity_matches_finite_difference(self, instance):
        cs = char_polys(_cost(instance))
        h = 1e-6
        for s in (-0.8, 0.2, 1.5):
            alpha = 1.0 + s * s
            fd = (cs.f(s + h)[0] - cs.f(s - h)[0]) / (2.0 * h)
            assert P.polyval(s, cs.w[0]) / alpha**3 == pytest.approx(fd, rel=1e-5, abs=1e-6 * abs(cs.f(s)[0]))

    def test_linearized_rejects_high_degree(self, instance):
        cp = _cost(instance)
        bad = CostPoly(numerator=cp.numerator, n_rows=cp.n_rows, mode="linearized")
        with pytest.raises(StructuralError):
            char_polys(bad)


class TestPencil:
    def test_entry_pattern(self, instance):
        cs = char_polys(_cost(instance).normalized())
        pb = build_pencil(cs)
        assert pb.coeffs.shape == (17, 7, 7)
        for r in range(3):
            assert pb.coeffs[0, r, 2 - r] == 1.0
            np.testing.assert_array_equal(pb.coeffs[:, r, 3 - r + 3], cs.g[3])
        for q in range(4):
            np.testing.assert_array_equal(pb.coeffs[:, 3 + q, 3 - q], pad(cs.w[0], 17))
        assert pb.coeffs[:, 0, 6].any() and not pb.coeffs[:, 0, 0].any()

    def test_characteristic_rows_vanish_at_eigenvalues(self, instance):
        cp = _cost(instance).normalized()
        pb = build_pencil(char_polys(cp))
        s = 0.3
        alpha = 1.0 + s * s
        B = pb.evaluate(s)
        for lam in np.linalg.eigvalsh(eval_cost(cp, s)):
            beta = alpha**2 * lam
            mono = beta ** np.arange(6, -1, -1)
            terms = B[:3] * mono
            assert np.all(np.abs(terms.sum(axis=1)) <= 1e-6 * np.abs(terms).sum(axis=1))

    @pytest.mark.parametrize("mode", ["full", "linearized"])
    def test_companion_size(self, instance, mode):
        candidates = companion_eigen(build_pencil(char_polys(_cost(instance, mode).normalized())))
        assert candidates.companion_size == EXPECTED_COMPANION_SIZE[mode]
        assert candidates.values[-1] == 0.0 and candidates.sources[-1] == "injected"

    def test_candidate_near_truth(self):
        inst = make_instance(seed=21, theta_deg=2.0, n_planes=30)
        s_true = inst.truth.aligned.s
        cp = _cost(inst)
        candidates = companion_eigen(build_pencil(char_polys(cp.normalized())))
        nearest = min(candidates.values, key=lambda s: abs(s - s_true))
        assert abs(nearest - s_true) <= 1e-2 * (1.0 + abs(s_true))
        assert polish_candidate(cp, nearest) == pytest.approx(s_true, abs=1e-10)

    def test_equilibration_keeps_roots(self, instance):
        pb = build_pencil(char_polys(_cost(instance).normalized()))
        scaled = equilibrate(pb)
        np.testing.assert_array_equal(scaled.coeffs == 0.0, pb.coeffs == 0.0)
        ratios = [np.linalg.det(scaled.evaluate(s)) / np.linalg.det(pb.evaluate(s)) for s in (-1.7, -0.4, 0.25, 2.0)]
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-6)

    def test_singular_b0(self):
        g = tuple(np.zeros(4 * i + 1) for i in range(1, 5))
        w = tuple(np.append(0.0, np.ones(4 * i)) for i in range(1, 5))
        with pytest.raises(IllConditionedError):
            companion_matrix(build_pencil(CharSystem(g=g, w=w, mode="full")))

    def test_deflate_is_iterative(self):
        G = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 5.0]])
        np.testing.assert_array_equal(deflate(G), [[5.0]])

    def test_schur_eigenvalues(self):
        G = np.zeros((3, 3))
        G[:2, :2] = [[1.0, -2.0], [2.0, 1.0]]
        G[2, 2] = 3.0
        eigs = sorted(schur_eigenvalues(G), key=lambda z: (z.real, z.imag))
        np.testing.assert_allclose(eigs, [1.0 - 2.0j, 1.0 + 2.0j, 3.0], atol=1e-12)


class TestSelection:
    U = np.full(4, 0.5)

    def test_tie_break_smallest_magnitude(self):
        cp = _constant_cost(5.0 * np.eye(4) - 4.0 * np.outer(self.U, self.U))
        candidates = CandidateSet()
        for s in (0.7, -0.2, 0.5):
            candidates.add(s, "companion")
        sel = select_solution(candidates, cp, polish=False)
        assert sel.s == -0.2
        assert sel.lambda_min == pytest.approx(1.0)
        np.testing.assert_allclose(sel.t_tilde, [1.0, 1.0, 1.0], atol=1e-12)
        assert not sel.degenerate

    def test_degenerate_translation(self):
        cp = _constant_cost(np.diag([1.0, 2.0, 3.0, 4.0]))
        candidates = CandidateSet()
        candidates.add(0.1, "companion")
        sel = select_solution(candidates, cp, polish=False)
        assert sel.degenerate
        assert sel.t_hat[3] == 0.0
        assert np.linalg.norm(sel.t_tilde) == pytest.approx(1.0)

    def test_empty_candidates(self):
        with pytest.raises(ValidationError):
            select_solution(CandidateSet(), _constant_cost(np.eye(4)))

    def test_pure_rotation(self):
        inst = make_instance(seed=4, theta_deg=0.0, t_tilde=(0.0, 0.0, 0.0))
        candidates = CandidateSet()
        candidates.add(0.0, "injected")
        sel = select_solution(candidates, _cost(inst))
        assert sel.s == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(sel.t_tilde, 0.0, atol=1e-10)

    def test_polish_recovers_noise_free_root(self):
        inst = make_instance(seed=9, theta_deg=12.0, n_planes=20)
        s_true = inst.truth.aligned.s
        cp = _cost(inst)
        for offset in (-4e-3, 1e-3, 1e-2):
            root = polish_candidate(cp, s_true + offset)
            assert root == pytest.approx(s_true, abs=1e-10)

    def test_polish_without_stationary_point(self):
        num = np.zeros((4, 4, 5))
        num[:, :, 0] = np.diag([1.0, 2.0, 3.0, 4.0])
        num[:, :, 1] = 0.1 * np.eye(4)
        assert polish_candidate(CostPoly(numerator=num, n_rows=6, mode="linearized"), 0.3) is None

    def test_polish_moves_every_candidate(self):
        inst = make_instance(seed=9, theta_deg=12.0, n_planes=20)
        s_true = inst.truth.aligned.s
        candidates = CandidateSet()
        candidates.add(s_true + 4e-3, "companion")
        candidates.add(0.0, "injected")
        sel = select_solution(candidates, _cost(inst))
        assert sel.polished
        assert sel.s == pytest.approx(s_true, abs=1e-10)
        assert all(c.polished for c in sel.scored if c.source == "companion")

    def test_polished_root_is_stationary(self):
        inst = make_instance(seed=8, n_planes=40)
        cp = _cost(inst)
        sel = select_solution(companion_eigen(build_pencil(char_polys(cp.normalized()))), cp)
        scale = float(np.trace(eval_cost(cp, sel.s)))
        assert abs(stationarity(cp, sel.s)) <= 1e-6 * (1.0 + scale)


class TestGridOracle:
    def test_noise_free_recovers_yaw(self):
        inst = make_instance(seed=13, theta_deg=-6.0)
        result = grid_oracle(_cost(inst))
        assert math.degrees(2.0 * math.atan(result.s)) == pytest.approx(-6.0, abs=1e-6)

    def test_not_worse_than_random_samples(self, instance, rng):
        cp = _cost(instance)
        result = grid_oracle(cp)
        samples = np.tan(np.radians(rng.uniform(-179.0, 179.0, size=1000)) / 2.0)
        scale = float(np.trace(eval_cost(cp, result.s)))
        assert result.lambda_min <= min_eigenvalues(cp, samples).min() + 1e-12 * scale


class TestPipeline:
    @pytest.mark.parametrize("motion", ["random", "forward", "planar", "sideways"])
    def test_noise_free_recovery(self, motion):
        for seed in range(5):
            inst = make_instance(seed=100 + seed, motion=motion, n_planes=10)
            _assert_exact(inst, _solve(inst), EXPECTED_COMPANION_SIZE["full"])

    @pytest.mark.parametrize(("motion", "seed"), [("planar", 1044), ("sideways", 1065)])
    def test_companion_root_is_exact_after_polish(self, motion, seed):
        inst = make_instance(seed=seed, motion=motion, n_planes=10)
        report = _solve(inst)
        _assert_exact(inst, report, EXPECTED_COMPANION_SIZE["full"])
        assert report.aligned.s == pytest.approx(inst.truth.aligned.s, abs=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize("motion", ["random", "forward", "planar", "sideways"])
    def test_noise_free_recovery_on_many_instances(self, motion):
        for seed in range(100):
            inst = make_instance(seed=1000 + seed, motion=motion, n_planes=10)
            _assert_exact(inst, _solve(inst), EXPECTED_COMPANION_SIZE["full"])

    def test_agrees_with_grid_oracle(self):
        agree = 0
        for seed in range(10):
            inst = make_instance(seed=200 + seed, n_planes=30)
            noisy = apply_noise(inst, NoiseSpec(pixel_sigma=1.0), np.random.default_rng(seed))
            cp = _cost(noisy)
            report = _solve(noisy)
            oracle = grid_oracle(cp)
            if abs(report.aligned.s - oracle.s) <= 1e-6:
                agree += 1
            scale = float(np.trace(eval_cost(cp, oracle.s)))
            assert report.lambda_min <= oracle.lambda_min + 1e-9 * scale
        assert agree >= 9

    @pytest.mark.slow
    def test_agrees_with_grid_oracle_on_many_instances(self):
        agree = 0
        for seed in range(100):
            inst = make_instance(seed=5000 + seed, n_planes=30)
            noisy = apply_noise(inst, NoiseSpec(pixel_sigma=1.0), np.random.default_rng(seed))
            report = _solve(noisy)
            assert report.fallback is False
            if abs(report.aligned.s - grid_oracle(_cost(noisy)).s) <= 1e-6:
                agree += 1
        assert agree >= 99

    def test_linearized_small_yaw(self):
        inst = make_instance(seed=31, theta_deg=0.5, n_planes=40)
        report = _solve(inst, mode="linearized")
        assert report.fallback is False
        assert report.companion_size == EXPECTED_COMPANION_SIZE["linearized"]
        assert report.theta_y_deg == pytest.approx(0.5, abs=0.01)
        full = _solve(inst)
        assert abs(full.theta_y_deg - report.theta_y_deg) <= 0.01

    @pytest.mark.slow
    def test_linearized_matches_full_on_many_instances(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            inst = _small_yaw_instance(rng)
            full = _solve(inst)
            linearized = _solve(inst, mode="linearized")
            assert linearized.fallback is False
            assert linearized.companion_size == EXPECTED_COMPANION_SIZE["linearized"]
            assert abs(full.theta_y_deg) <= 1.0 + 1e-6
            assert abs(full.theta_y_deg - linearized.theta_y_deg) <= 0.01

    def test_too_few_correspondences(self, instance):
        with pytest.raises(ValidationError, match="need at least 2 affine correspondences"):
            RelativePoseSolver().solve(list(instance.correspondences[:1]), instance.rig, instance.imu_i, instance.imu_j)

    def test_fallback_to_grid(self, monkeypatch):
        def ill_conditioned(pb):
            raise IllConditionedError("B0 condition number too large")

        monkeypatch.setattr(pipeline, "companion_eigen", ill_conditioned)
        inst = make_instance(seed=17, theta_deg=3.0)
        report = _solve(inst)
        assert report.fallback
        assert report.companion_size is None
        assert [c.source for c in report.candidates] == ["grid"]
        assert report.theta_y_deg == pytest.approx(3.0, abs=1e-6)

    def test_eigen_failure_is_solver_error(self, monkeypatch):
        def broken(pb):
            raise np.linalg.LinAlgError("Schur decomposition did not converge")

        monkeypatch.setattr(pipeline, "companion_eigen", broken)
        inst = make_instance(seed=17)
        with pytest.raises(SolverError):
            _solve(inst)

    def test_report_fields(self, instance):
        report = pipeline.solve(list(instance.correspondences), instance.rig, instance.imu_i, instance.imu_j)
        assert report.mode == "full"
        assert report.wall_time_ms >= 0.0
        assert any(c.source == "injected" for c in report.candidates)
        lam, _ = min_eigen(_cost(instance), report.aligned.s)
        assert report.lambda_min == pytest.approx(lam, abs=1e-12)
