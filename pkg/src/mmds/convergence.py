"""Stability and convergence experiments for MDS embeddings.

Embeddings are compared only after Procrustes alignment, since MDS output is
defined up to translation and an orthogonal transformation.  Every random
draw comes from ``numpy.random.default_rng`` seeded by ``(seed, trial)``, so
results do not depend on evaluation order.
"""

from dataclasses import dataclass, field

import numpy as np

from .classical import classical_mds, centered_gram
from .eigen import symmetric_eigendecomposition
from .errors import LengthMismatch, ShapeMismatch
from .measure import measure_mds
from .mmspace import (
    DiscreteMeasure,
    DissimilarityMatrix,
    MetricMeasureSpace,
    as_dissimilarity,
    total_variation,
)


@dataclass(frozen=True)
class AlignmentResult:
    rotation: np.ndarray
    translation: np.ndarray
    residual: float


@dataclass(frozen=True)
class Stage:
    label: object
    tv_distance: float
    aligned_residual: float
    eigenvalue_gaps: tuple
    metric_label: str = None


@dataclass
class ConvergenceReport:
    stages: list
    metadata: dict = field(default_factory=dict)

    @property
    def residuals(self):
        return [s.aligned_residual for s in self.stages]

    @property
    def tv_distances(self):
        return [s.tv_distance for s in self.stages]

    def to_dict(self):
        return {
            "metadata": self.metadata,
            "stages": [
                {
                    "label": s.label,
                    "tv_distance": s.tv_distance,
                    "aligned_residual": s.aligned_residual,
                    "eigenvalue_gaps": list(s.eigenvalue_gaps),
                    "metric_label": s.metric_label,
                }
                for s in self.stages
            ],
        }


def procrustes_align(x, y):
    """Best orthogonal-plus-translation fit of ``x`` onto ``y``.

    Reflections are allowed.  ``residual`` is the RMS point distance
    ``||Xc Q - Yc||_F / sqrt(n)`` after alignment.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] < 1:
        raise ShapeMismatch(f"cannot align shapes {x.shape} and {y.shape}")
    if np.array_equal(x, y):
        return AlignmentResult(np.eye(x.shape[1]), np.zeros(x.shape[1]), 0.0)
    xm = x.mean(axis=0)
    ym = y.mean(axis=0)
    xc, yc = x - xm, y - ym
    u, _, vt = np.linalg.svd(xc.T @ yc)
    q = u @ vt
    resid = float(np.linalg.norm(xc @ q - yc) / np.sqrt(x.shape[0]))
    return AlignmentResult(q, ym - xm @ q, resid)


def perturb_dissimilarities(d, eps, seed):
    """Add symmetric uniform noise in ``[-eps, eps]``, clamp at 0, keep a zero diagonal."""
    dm = as_dissimilarity(d)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = dm.n
    noise = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    noise[iu] = rng.uniform(-1.0, 1.0, size=iu[0].size)
    noise = noise + noise.T
    out = np.maximum(dm.entries + eps * noise, 0.0)
    np.fill_diagonal(out, 0.0)
    out.setflags(write=False)
    return DissimilarityMatrix(out)


def _trial_rng(seed, trial):
    return np.random.default_rng([int(seed), int(trial)])


@dataclass(frozen=True)
class StabilityRow:
    eps: float
    eigenvalue_drift: float
    residual: float
    trial_drifts: tuple
    trial_residuals: tuple


def sibson_stability(d, m, eps_list, trials, seed):
    """Eigenvalue drift and aligned residual under dissimilarity noise.

    Trial ``t`` draws its noise pattern from ``(seed, t)`` and scales it by
    each ``eps``, so rows for different magnitudes share noise directions.
    """
    if not len(eps_list) or trials < 1:
        raise ValueError("need a nonempty eps_list and trials >= 1")
    dm = as_dissimilarity(d)
    base = classical_mds(dm, m)
    base_vals = base.eigenvalues[:m]
    rows = []
    for eps in eps_list:
        drifts, resids = [], []
        for t in range(trials):
            pert = perturb_dissimilarities(dm, eps, _trial_rng(seed, t))
            e = classical_mds(pert, m)
            drifts.append(float(np.mean(np.abs(e.eigenvalues[:m] - base_vals))))
            resids.append(procrustes_align(e.coords, base.coords).residual)
        rows.append(StabilityRow(float(eps), float(np.mean(drifts)), float(np.mean(resids)),
                                 tuple(drifts), tuple(resids)))
    return rows


def sample_indices(space: MetricMeasureSpace, n, seed, replace=True):
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.choice(space.n, size=int(n), replace=replace, p=space.weights)


def sample_iid(space: MetricMeasureSpace, n, seed):
    """``n`` i.i.d. draws from the space's measure, each carrying mass ``1/n``."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    idx = sample_indices(space, n, seed)
    sub = space.subset(idx)
    sub.description["indices"] = [int(i) for i in idx]
    return sub


def _gaps(a, b, m):
    a = np.asarray(a)[:m]
    b = np.asarray(b)[:m]
    k = min(a.size, b.size)
    return tuple(float(v) for v in np.abs(a[:k] - b[:k]))


def measure_sequence_experiment(space: MetricMeasureSpace, measures, m):
    """Embed ``(X, d, mu_k)`` for each measure and compare with the last one.

    Points with zero mass under ``mu_k`` are placed by Nystrom extension, so
    every stage is an embedding of the full support.
    """
    mus = [mu if isinstance(mu, DiscreteMeasure) else DiscreteMeasure(mu) for mu in measures]
    if not mus:
        raise ValueError("need at least one measure")
    for mu in mus:
        if len(mu) != space.n:
            raise LengthMismatch(f"measure of length {len(mu)} on a {space.n}-point space")
    limit_mu = mus[-1]
    limit = measure_mds(space.with_measure(limit_mu), m)
    stages = []
    for k, mu in enumerate(mus):
        e = limit if k == len(mus) - 1 else measure_mds(space.with_measure(mu), m)
        al = procrustes_align(e.coords, limit.coords)
        stages.append(Stage(k, total_variation(mu, limit_mu), al.residual,
                            _gaps(e.spectrum.eigenvalues, limit.spectrum.eigenvalues, m)))
    meta = {"space": dict(space.description), "m": m, "experiment": "measure_sequence"}
    return ConvergenceReport(stages, meta)


def sampling_convergence_experiment(space: MetricMeasureSpace, sizes, m, seeds, replace=True):
    """Median aligned residual between sample embeddings and the full-space embedding.

    The full-space embedding is evaluated at the sampled support points and
    compared with the embedding of the empirical measure.  ``tv_distance``
    is between ``mu`` and the empirical measure pushed onto the support.
    """
    sizes = [int(s) for s in sizes]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    limit = measure_mds(space, m)
    stages = []
    for n in sizes:
        resid, tvs, gaps = [], [], []
        for seed in seeds:
            idx = sample_indices(space, n, seed, replace=replace)
            e = measure_mds(space.subset(idx), m)
            ref = limit.coords[idx]
            resid.append(procrustes_align(e.coords, ref).residual)
            emp = np.bincount(idx, minlength=space.n) / n
            tvs.append(total_variation(emp, space.weights))
            gaps.append(_gaps(e.spectrum.eigenvalues, limit.spectrum.eigenvalues, m))
        stages.append(Stage(n, float(np.median(tvs)), float(np.median(resid)),
                            tuple(float(g) for g in np.median(np.array(gaps), axis=0))))
    meta = {"space": dict(space.description), "m": m, "seeds": list(seeds),
            "experiment": "sampling"}
    return ConvergenceReport(stages, meta)


def spectrum_of(d):
    """Descending spectrum of the centered Gram matrix of ``d``."""
    return symmetric_eigendecomposition(centered_gram(d).entries).eigenvalues
