"""Dissimilarity matrices, discrete probability measures and metric measure spaces.

A metric measure space is stored as a finite support: opaque point labels, the
pairwise distance matrix and one probability weight per point.  Infinite
spaces such as the circle are approached through refinements (``n -> inf``).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricEntry,
    DimensionMismatch,
    InvalidMeasure,
    LengthMismatch,
    NegativeEntry,
    NonSquare,
    NonzeroDiagonal,
    TooFewPoints,
    ValidationError,
)

SYMMETRY_RTOL = 1e-9
MEASURE_ATOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric, nonnegative, hollow matrix.  The triangle inequality is not required."""

    entries: np.ndarray

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability weights on a finite support."""

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1 or w.size == 0:
            raise InvalidMeasure("weights must be a nonempty vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidMeasure("weights must be finite and nonnegative")
        total = float(np.sum(w))
        if abs(total - 1.0) > MEASURE_ATOL:
            raise InvalidMeasure(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def normalized(cls, raw):
        """Rescale nonnegative masses to total 1."""
        raw = np.asarray(raw, dtype=float)
        return cls(raw / raw.sum())

    @property
    def is_uniform(self):
        w = self.weights
        return bool(np.all(w == w[0]))


@dataclass(frozen=True)
class MetricMeasureSpace:
    points: list
    dist: DissimilarityMatrix
    measure: DiscreteMeasure
    description: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.measure) != self.dist.n:
            raise LengthMismatch(
                f"measure has {len(self.measure)} weights for {self.dist.n} points"
            )
        if len(self.points) != self.dist.n:
            raise LengthMismatch(f"{len(self.points)} labels for {self.dist.n} points")

    @property
    def n(self):
        return self.dist.n

    @property
    def weights(self):
        return self.measure.weights

    def with_measure(self, measure):
        if not isinstance(measure, DiscreteMeasure):
            measure = DiscreteMeasure(measure)
        return MetricMeasureSpace(self.points, self.dist, measure, dict(self.description))

    def subset(self, indices, measure=None):
        """Restrict to ``indices`` (repeats allowed).  Defaults to uniform weights."""
        idx = np.asarray(indices, dtype=np.intp)
        d = self.dist.entries[np.ix_(idx, idx)]
        if measure is None:
            measure = DiscreteMeasure.uniform(idx.size)
        pts = [self.points[i] for i in idx]
        return MetricMeasureSpace(pts, DissimilarityMatrix(_frozen(d)), measure, dict(self.description))


def validate_dissimilarity(m):
    """Check a raw square matrix against the dissimilarity axioms.

    Raises the first violation found, in the order: shape, symmetry,
    sign, diagonal.  Entries are copied, never altered.
    """
    if isinstance(m, DissimilarityMatrix):
        return m
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(a.shape)
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains non-finite entries")
    gap = np.abs(a - a.T)
    bad = gap > SYMMETRY_RTOL * np.maximum(1.0, np.abs(a))
    if bad.any():
        r, s = map(int, np.argwhere(bad)[0])
        raise AsymmetricEntry(r, s, a[r, s], a[s, r])
    neg = np.argwhere(a < 0)
    if neg.size:
        r, s = map(int, neg[0])
        raise NegativeEntry(r, s, a[r, s])
    diag = np.flatnonzero(np.diag(a) != 0)
    if diag.size:
        r = int(diag[0])
        raise NonzeroDiagonal(r, a[r, r])
    return DissimilarityMatrix(_frozen(a))


def as_dissimilarity(d):
    return d if isinstance(d, DissimilarityMatrix) else validate_dissimilarity(d)


def _as_measure(mu, n):
    if mu is None:
        return DiscreteMeasure.uniform(n)
    if not isinstance(mu, DiscreteMeasure):
        mu = DiscreteMeasure(mu)
    if len(mu) != n:
        raise LengthMismatch(f"measure has {len(mu)} weights for {n} points")
    return mu


def hemisphere_weights(angles, north_mass):
    """Mass ``north_mass`` spread evenly over angles in [0, pi), the rest over [pi, 2 pi)."""
    if not 0.0 < north_mass < 1.0:
        raise InvalidMeasure(f"north_mass must lie in (0, 1), got {north_mass!r}")
    north = (angles >= 0.0) & (angles < np.pi)
    k = int(north.sum())
    if k == 0 or k == angles.size:
        raise InvalidMeasure("both hemispheres need at least one point")
    return np.where(north, north_mass / k, (1.0 - north_mass) / (angles.size - k))


def build_circle_space(n, measure="uniform"):
    """``n`` evenly spaced points on the unit circle with arc-length distance.

    ``measure`` is ``"uniform"``, ``("hemisphere", q)`` or ``{"hemisphere": q}``.
    """
    n = int(n)
    if n < 2:
        raise TooFewPoints(f"circle needs n >= 2, got {n}")
    i = np.arange(n)
    theta = 2.0 * np.pi * i / n
    # distances from the integer offset keep the matrix exactly circulant
    k = np.abs(i[:, None] - i[None, :])
    k = np.minimum(k, n - k)
    d = (2.0 * np.pi / n) * k

    desc = {"kind": "circle", "n": n}
    if isinstance(measure, dict):
        measure = ("hemisphere", measure["hemisphere"]) if "hemisphere" in measure else "uniform"
    if measure == "uniform" or measure is None:
        w = np.full(n, 1.0 / n)
        desc["measure"] = "uniform"
    elif isinstance(measure, (tuple, list)) and measure[0] == "hemisphere":
        q = float(measure[1])
        w = hemisphere_weights(theta, q)
        desc["measure"] = {"hemisphere": q}
    else:
        raise InvalidMeasure(f"unknown measure spec {measure!r}")
    return MetricMeasureSpace(
        [float(t) for t in theta],
        DissimilarityMatrix(_frozen(d)),
        DiscreteMeasure(w),
        desc,
    )


def sample_sphere(n, dim, rng):
    """``n`` i.i.d. uniform points on the unit sphere in R^(dim+1)."""
    g = rng.standard_normal((n, dim + 1))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def geodesic_distances(points):
    p = np.asarray(points, dtype=float)
    d = np.arccos(np.clip(p @ p.T, -1.0, 1.0))
    np.fill_diagonal(d, 0.0)
    return 0.5 * (d + d.T)


def build_sphere_space(n, dim, seed):
    """i.i.d. uniform sample of S^dim with great-circle distances.

    Points come from normalized Gaussian draws of ``numpy.random.default_rng(seed)``
    (PCG64), so a given ``(n, dim, seed)`` always yields the same space.
    """
    n, dim = int(n), int(dim)
    if n < 2:
        raise TooFewPoints(f"sphere sample needs n >= 2, got {n}")
    if dim < 1:
        raise DimensionMismatch(f"sphere dimension must be >= 1, got {dim}")
    pts = sample_sphere(n, dim, np.random.default_rng(seed))
    return MetricMeasureSpace(
        [tuple(map(float, p)) for p in pts],
        DissimilarityMatrix(_frozen(geodesic_distances(pts))),
        DiscreteMeasure.uniform(n),
        {"kind": "sphere", "n": n, "dim": dim, "seed": seed},
    )


def euclidean_distances(coords):
    x = np.asarray(coords, dtype=float)
    # explicit differences, not the Gram trick: no cancellation near zero
    return np.sqrt(np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1))


def build_euclidean_space(coords):
    """Point cloud in R^k with Euclidean distances and uniform weights."""
    rows = [np.atleast_1d(np.asarray(c, dtype=float)) for c in coords]
    if not rows:
        raise TooFewPoints("need at least one point")
    k = rows[0].size
    if k < 1:
        raise DimensionMismatch("points must have dimension >= 1")
    for i, r in enumerate(rows):
        if r.ndim != 1 or r.size != k:
            raise DimensionMismatch(f"point {i} has shape {r.shape}, expected ({k},)")
    x = np.vstack(rows)
    return MetricMeasureSpace(
        [tuple(map(float, r)) for r in x],
        DissimilarityMatrix(_frozen(euclidean_distances(x))),
        DiscreteMeasure.uniform(x.shape[0]),
        {"kind": "euclidean", "n": x.shape[0], "dim": k},
    )


def space_from_matrix(d, weights=None, labels=None):
    dm = as_dissimilarity(d)
    mu = _as_measure(weights, dm.n)
    labels = list(range(dm.n)) if labels is None else list(labels)
    return MetricMeasureSpace(labels, dm, mu, {"kind": "matrix", "n": dm.n})


def total_variation(a, b):
    """Half the L1 distance between two weight vectors on a common support."""
    wa = a.weights if isinstance(a, DiscreteMeasure) else np.asarray(a, dtype=float)
    wb = b.weights if isinstance(b, DiscreteMeasure) else np.asarray(b, dtype=float)
    if wa.shape != wb.shape:
        raise LengthMismatch(f"measures have lengths {wa.size} and {wb.size}")
    return float(min(1.0, 0.5 * np.sum(np.abs(wa - wb))))
