import numpy as np
import pytest

from conftest import FOUR_POINT_D, random_dissimilarity
from mmds.convergence import (
    measure_sequence_experiment,
    perturb_dissimilarities,
    procrustes_align,
    sample_iid,
    sampling_convergence_experiment,
    sibson_stability,
)
from mmds.errors import LengthMismatch, ShapeMismatch
from mmds.mmspace import (
    DiscreteMeasure,
    build_circle_space,
    build_sphere_space,
    validate_dissimilarity,
)


class TestProcrustes:
    def test_exact_gauge(self, rng):
        x = rng.standard_normal((12, 3))
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        y = x @ q + np.array([1.0, -2.0, 0.5])
        al = procrustes_align(x, y)
        assert al.residual <= 1e-8
        np.testing.assert_allclose(x @ al.rotation + al.translation, y, atol=1e-10)

    def test_identity(self, rng):
        x = rng.standard_normal((5, 2))
        al = procrustes_align(x, x)
        assert al.residual == 0
        np.testing.assert_array_equal(al.rotation, np.eye(2))

    def test_scaling_not_absorbed(self):
        sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
        al = procrustes_align(sq, 2 * sq)
        # oracle: brute force over rotations and reflections on a fine grid
        xc = sq - sq.mean(axis=0)
        yc = 2 * sq - (2 * sq).mean(axis=0)
        best = np.inf
        for t in np.linspace(0, 2 * np.pi, 20001):
            c, s = np.cos(t), np.sin(t)
            for q in (np.array([[c, -s], [s, c]]), np.array([[c, s], [s, -c]])):
                best = min(best, np.linalg.norm(xc @ q - yc) / 2)
        assert al.residual > 0
        assert al.residual == pytest.approx(best, abs=1e-6)
        assert al.residual == pytest.approx(np.sqrt(0.5), abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            procrustes_align(np.zeros((3, 2)), np.zeros((3, 3)))


class TestPerturb:
    def test_zero_eps(self):
        out = perturb_dissimilarities(FOUR_POINT_D, 0.0, 1)
        np.testing.assert_array_equal(out.entries, FOUR_POINT_D)

    def test_closure(self, rng):
        d = random_dissimilarity(rng, 10)
        validate_dissimilarity(np.array(perturb_dissimilarities(d, 1e-3, 5).entries))

    def test_clamp(self):
        d = np.full((30, 30), 1e-6)
        np.fill_diagonal(d, 0.0)
        out = perturb_dissimilarities(d, 10.0, 0).entries
        assert np.all(out >= 0)
        np.testing.assert_array_equal(out, out.T)
        # roughly half of the noise draws are negative enough to clamp
        assert np.count_nonzero(out[np.triu_indices(30, 1)] == 0) > 100

    def test_seeded(self, rng):
        d = random_dissimilarity(rng, 6)
        a = perturb_dissimilarities(d, 0.1, 3).entries
        b = perturb_dissimilarities(d, 0.1, 3).entries
        np.testing.assert_array_equal(a, b)


class TestSibson:
    def test_zero(self):
        d = build_sphere_space(20, 2, 3).dist
        rows = sibson_stability(d, 2, [0.0], 3, 0)
        assert rows[0].eigenvalue_drift == 0.0
        assert rows[0].residual == 0.0

    def test_monotone_trend(self):
        d = build_sphere_space(30, 2, 4).dist
        eps = [1e-4 * 2**i for i in range(8)]
        rows = sibson_stability(d, 2, eps, 10, 0)
        res = [r.residual for r in rows]
        inversions = sum(b < a for a, b in zip(res, res[1:]))
        assert inversions <= 1

    def test_repeated_eigenvalue(self):
        # circle eigenvalues come in pairs; the residual is still small
        d = build_circle_space(16).dist
        rows = sibson_stability(d, 2, [1e-4], 5, 0)
        assert rows[0].eigenvalue_drift < 1e-2
        assert rows[0].residual < 1e-2


class TestSampling:
    def test_single(self):
        s = sample_iid(build_circle_space(10), 1, 0)
        assert s.n == 1
        np.testing.assert_array_equal(s.weights, [1.0])

    def test_point_mass(self):
        space = build_circle_space(10).with_measure(DiscreteMeasure(np.eye(10)[6]))
        s = sample_iid(space, 20, 1)
        assert set(s.description["indices"]) == {6}

    def test_quarter_arcs(self):
        s = sample_iid(build_circle_space(2048), 500, 3)
        idx = np.array(s.description["indices"])
        mass = np.bincount(idx // 512, minlength=4) / 500
        # binomial sd is sqrt(0.25 * 0.75 / 500) ~ 0.019, so 0.1 is over 5 sd
        np.testing.assert_allclose(mass, 0.25, atol=0.1)


class TestExperiments:
    def test_constant_sequence(self):
        space = build_circle_space(30, ("hemisphere", 0.7))
        rep = measure_sequence_experiment(space, [space.measure] * 3, 2)
        assert max(rep.residuals) <= 1e-8
        assert rep.tv_distances == [0, 0, 0]

    def test_interpolation_tv_decreasing(self):
        space = build_circle_space(24)
        mu0 = build_circle_space(24, ("hemisphere", 0.9)).weights
        mu = space.weights
        ts = [0.0, 0.25, 0.5, 0.75, 1.0]
        rep = measure_sequence_experiment(space, [(1 - t) * mu0 + t * mu for t in ts], 2)
        tv = rep.tv_distances
        assert all(b < a for a, b in zip(tv, tv[1:]))

    def test_hemisphere_residual(self):
        space = build_circle_space(64)
        measures = [build_circle_space(64, ("hemisphere", q)).measure for q in (0.9, 0.7, 0.55, 0.5)]
        rep = measure_sequence_experiment(space, measures, 2)
        assert rep.residuals[-1] < rep.residuals[0]

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            measure_sequence_experiment(build_circle_space(5), [DiscreteMeasure.uniform(4)], 2)

    def test_full_support(self):
        space = build_circle_space(64)
        rep = sampling_convergence_experiment(space, [64], 2, [0], replace=False)
        assert rep.residuals[0] <= 1e-8

    def test_m1_well_formed(self):
        space = build_sphere_space(40, 2, 0)
        rep = sampling_convergence_experiment(space, [10, 20], 1, [0, 1])
        assert len(rep.stages) == 2
        assert np.all(np.isfinite(rep.residuals))
        assert all(len(s.eigenvalue_gaps) == 1 for s in rep.stages)

    def test_sampling_trend(self):
        space = build_circle_space(512)
        rep = sampling_convergence_experiment(space, [20, 400], 2, [0, 1, 2])
        assert rep.residuals[-1] < rep.residuals[0]
