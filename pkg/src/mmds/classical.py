"""Classical (Torgerson-Gower) multidimensional scaling.

Pipeline: squared dissimilarities -> ``-d^2 / 2`` -> double centering ->
symmetric eigendecomposition -> ``X = V_m diag(sqrt(lambda_m))``.
"""

from dataclasses import dataclass, field

import numpy as np

from .eigen import SpectralDecomposition, symmetric_eigendecomposition
from .errors import LengthMismatch, NonSquare, ShapeMismatch
from .mmspace import DiscreteMeasure, DissimilarityMatrix, as_dissimilarity, euclidean_distances

ZERO_EIG_RTOL = 1e-10


@dataclass(frozen=True)
class CenteredGram:
    entries: np.ndarray

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class Embedding:
    """Rows are embedded points.  Unique only up to translation and orthogonal maps."""

    coords: np.ndarray
    retained_eigenvalues: np.ndarray
    eigenvalues: np.ndarray = None
    warnings: tuple = field(default_factory=tuple)

    @property
    def rank_deficient(self):
        return bool(self.warnings)

    @property
    def n(self):
        return self.coords.shape[0]

    @property
    def m(self):
        return self.coords.shape[1]


def _square(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(a.shape)
    return a


def to_neg_half_square(d):
    """Entrywise ``-d_ij^2 / 2``."""
    e = as_dissimilarity(d).entries
    return -0.5 * e * e


def double_center(a):
    """Subtract row and column means, add back the grand mean.

    Written term by term rather than as ``J A J`` so that exact-rational
    inputs stay exact as long as floating point allows.
    """
    a = _square(a)
    if a.shape[0] == 0:
        return CenteredGram(a.copy())
    b = a - a.mean(axis=1, keepdims=True) - a.mean(axis=0, keepdims=True) + a.mean()
    b = 0.5 * (b + b.T)
    b.setflags(write=False)
    return CenteredGram(b)


def weighted_double_center(a, mu):
    """Double centering against a probability measure.

    ``b_rs = a_rs - sum_w mu_w a_ws - sum_z mu_z a_rz + sum_wz mu_w mu_z a_wz``.
    A uniform measure takes the unweighted path, so the two agree bit for bit.
    """
    a = _square(a)
    if not isinstance(mu, DiscreteMeasure):
        mu = DiscreteMeasure(mu)
    w = mu.weights
    if w.size != a.shape[0]:
        raise LengthMismatch(f"measure has {w.size} weights for a {a.shape[0]}x{a.shape[0]} matrix")
    if mu.is_uniform:
        return double_center(a)
    col = w @ a  # sum_w mu_w a_ws
    row = a @ w  # sum_z mu_z a_rz
    grand = w @ a @ w
    b = a - col[None, :] - row[:, None] + grand
    b = 0.5 * (b + b.T)
    b.setflags(write=False)
    return CenteredGram(b)


def centered_gram(d):
    return double_center(to_neg_half_square(d))


def _zero_threshold(values):
    return ZERO_EIG_RTOL * (np.max(np.abs(values)) if values.size else 0.0)


def embed_from_spectrum(spec: SpectralDecomposition, m):
    """``V_m diag(sqrt(max(lambda, 0)))`` with zero-padding past the positive rank."""
    if m < 1:
        raise ValueError(f"target dimension must be >= 1, got {m}")
    n = spec.n
    vals = spec.eigenvalues
    thr = _zero_threshold(vals)
    k = min(m, n)
    top = vals[:k]
    keep = top > thr
    lam = np.where(keep, top, 0.0)
    coords = np.zeros((n, m))
    coords[:, :k] = spec.eigenvectors[:, :k] * np.sqrt(lam)[None, :]
    retained = np.zeros(m)
    retained[:k] = lam
    warnings = ()
    n_pos = int(np.sum(vals > thr))
    if n_pos < m:
        warnings = (f"only {n_pos} eigenvalue(s) above the zero threshold; "
                    f"{m - n_pos} coordinate column(s) are zero",)
    coords.setflags(write=False)
    retained.setflags(write=False)
    return Embedding(coords, retained, spec.eigenvalues, warnings)


def classical_mds(d, m, method="auto"):
    """Embed a dissimilarity matrix in R^m.

    Parameters
    ----------
    d : DissimilarityMatrix or (n, n) array_like
    m : int
        Target dimension.  Columns beyond the positive rank are zero and the
        result carries a warning.

    Returns
    -------
    Embedding
    """
    b = centered_gram(d)
    spec = symmetric_eigendecomposition(b.entries, method=method)
    return embed_from_spectrum(spec, m)


def _configuration(candidate):
    x = candidate.coords if isinstance(candidate, Embedding) else candidate
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return x


def strain(b, candidate):
    """``sum_ij (b_ij - bhat_ij)^2`` with ``bhat`` the Gram matrix of the centered candidate."""
    b = np.asarray(b.entries if isinstance(b, CenteredGram) else b, dtype=float)
    x = _configuration(candidate)
    if x.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"candidate has {x.shape[0]} rows, B is {b.shape[0]}x{b.shape[0]}")
    xc = x - x.mean(axis=0, keepdims=True)
    diff = b - xc @ xc.T
    return float(np.sum(diff * diff))


def is_euclidean(d, tol=None, method="auto"):
    """Decide realizability in Euclidean space via positive semi-definiteness of B.

    ``d`` may also be a ``CenteredGram``, which is tested as is.  Returns
    ``{"euclidean": bool, "min_eigenvalue": float}``.  The default tolerance
    is ``1e-9 * |lambda_max|``.
    """
    b = d if isinstance(d, CenteredGram) else centered_gram(d)
    spec = symmetric_eigendecomposition(b.entries, method=method)
    vals = spec.eigenvalues
    if vals.size == 0:
        return {"euclidean": True, "min_eigenvalue": 0.0}
    if tol is None:
        tol = 1e-9 * float(np.max(np.abs(vals)))
    lmin = float(vals[-1])
    return {"euclidean": bool(lmin >= -tol), "min_eigenvalue": lmin}


def embedding_distances(e):
    x = _configuration(e)
    return DissimilarityMatrix(euclidean_distances(x))
