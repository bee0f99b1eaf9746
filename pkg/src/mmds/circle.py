"""Closed-form MDS of the geodesic circle.

For ``n`` evenly spaced points the centered matrix ``B`` is a symmetric
circulant, so its eigenvectors are the discrete Fourier modes and each
eigenvalue is the dot product of the first row with the mode.  Positive
eigenvalues come from odd modes; even modes carry the negative spectrum.
In the continuum limit the operator eigenvalues are ``(-1)^(k+1) / k^2``
and the embedding is the curve

    gamma(theta) = sqrt(2) (cos t, sin t, cos 3t / 3, sin 3t / 3, ...).
"""

from dataclasses import dataclass

import numpy as np

from .classical import ZERO_EIG_RTOL, Embedding, double_center, to_neg_half_square
from .eigen import canonical_sign
from .errors import BadCutoff, ModeOutOfRange, ValidationError, ZeroMode
from .mmspace import build_circle_space


@dataclass(frozen=True)
class CirculantMatrix:
    first_row: np.ndarray

    def __post_init__(self):
        r = np.array(self.first_row, dtype=float, copy=True)
        r.setflags(write=False)
        object.__setattr__(self, "first_row", r)

    @property
    def n(self):
        return self.first_row.size

    @property
    def is_symmetric(self):
        r = self.first_row
        return bool(np.allclose(r[1:], r[1:][::-1], rtol=0, atol=1e-10 * max(1.0, np.abs(r).max())))

    def dense(self):
        n = self.n
        idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
        return self.first_row[idx]


@dataclass(frozen=True)
class FourierMode:
    k: int
    n: int

    def __post_init__(self):
        if not 0 <= self.k < self.n:
            raise ModeOutOfRange(f"mode {self.k} outside 0..{self.n - 1}")

    def vector(self):
        j = np.arange(self.n)
        return np.exp(2j * np.pi * ((j * self.k) % self.n) / self.n)


def circulant_eigenvalue(c: CirculantMatrix, k):
    """Eigenvalue of Fourier mode ``k``: ``sum_j first_row[j] * w^(j k)``."""
    c = c if isinstance(c, CirculantMatrix) else CirculantMatrix(c)
    return complex(c.first_row @ FourierMode(int(k), c.n).vector())


def circulant_spectrum(c: CirculantMatrix):
    """Real parts of all mode eigenvalues, indexed by mode ``k = 0..n-1``."""
    c = c if isinstance(c, CirculantMatrix) else CirculantMatrix(c)
    n = c.n
    j = np.arange(n)
    phase = 2.0 * np.pi * ((j[:, None] * j[None, :]) % n) / n
    return c.first_row @ np.cos(phase)


def circle_B(n):
    return double_center(to_neg_half_square(build_circle_space(n).dist))


def circle_B_first_row(n):
    b = circle_B(n).entries
    c = CirculantMatrix(b[0])
    if not np.allclose(c.dense(), b, rtol=0, atol=1e-10 * max(1.0, np.abs(b).max())):
        raise ValidationError("centered circle matrix is not circulant")
    return c


@dataclass(frozen=True)
class CircleMDS:
    embedding: Embedding
    modes: tuple  # Fourier mode behind each coordinate column (0 for padding)
    coefficients: dict  # odd j -> a_{j,n}
    mode_eigenvalues: np.ndarray  # matrix eigenvalue per mode k = 0..n-1


def circle_mds_analytic(n, m):
    """Classical MDS of ``n`` evenly spaced circle points from Fourier modes alone.

    Modes with positive eigenvalue are kept in descending order.  A mode
    ``0 < k < n/2`` contributes the normalized cosine and sine samples (in
    that order); ``k = n/2`` contributes the single alternating vector.  The
    radial coefficient of an odd mode ``j`` is ``a_{j,n} = sqrt(2 lambda_j / n)``.
    """
    if m < 1:
        raise ValueError(f"target dimension must be >= 1, got {m}")
    row = circle_B_first_row(n)
    lam = circulant_spectrum(row)
    theta = 2.0 * np.pi * np.arange(n) / n
    thr = ZERO_EIG_RTOL * np.max(np.abs(lam))

    half = np.arange(1, n // 2 + 1)
    order = sorted((k for k in half if lam[k] > thr), key=lambda k: (-lam[k], k))
    cols, modes, vals = [], [], []
    for k in order:
        phase = 2.0 * np.pi * ((np.arange(n) * k) % n) / n
        if 2 * k == n:
            vecs = [np.cos(phase) / np.sqrt(n)]
        else:
            vecs = [np.cos(phase) / np.sqrt(n / 2), np.sin(phase) / np.sqrt(n / 2)]
        for v in vecs:
            cols.append(v)
            modes.append(int(k))
            vals.append(lam[k])
        if len(cols) >= m:
            break

    coords = np.zeros((n, m))
    retained = np.zeros(m)
    used = min(m, len(cols))
    if used:
        basis = canonical_sign(np.column_stack(cols[:used]))
        coords[:, :used] = basis * np.sqrt(np.array(vals[:used]))[None, :]
        retained[:used] = vals[:used]
    warnings = ()
    if used < m:
        warnings = (f"only {used} positive-eigenvalue direction(s); {m - used} column(s) are zero",)

    coef = {int(k): float(np.sqrt(2.0 * lam[k] / n)) for k in half if k % 2 == 1 and 2 * k < n}
    coords.setflags(write=False)
    retained.setflags(write=False)
    emb = Embedding(coords, retained, np.sort(lam)[::-1], warnings)
    return CircleMDS(emb, tuple(modes[:used]) + (0,) * (m - used), coef, lam)


def operator_eigenvalue_circle(k):
    """Eigenvalue ``(-1)^(k+1) / k^2`` of the centered circle operator for mode ``k != 0``."""
    k = int(k)
    if k == 0:
        raise ZeroMode("mode 0 is the constant function, removed by centering (eigenvalue 0)")
    return (-1.0) ** (k + 1) / (k * k)


def limit_curve_gamma(theta, m):
    """First ``m`` coordinates of the continuum embedding curve at angle ``theta``."""
    c = np.arange(int(m))
    j = 2 * (c // 2) + 1
    trig = np.where(c % 2 == 0, np.cos(j * theta), np.sin(j * theta))
    return np.sqrt(2.0) * trig / j


def gamma_norm_sq_partial(K):
    """``2 sum_{k odd <= K} 1/k^2``; tends to ``pi^2 / 4``."""
    k = np.arange(1, int(K) + 1, 2, dtype=float)
    return float(2.0 * np.sum(1.0 / k**2))


def _check_delta(delta):
    if not -np.pi < delta <= np.pi:
        raise ValidationError(f"angle difference must lie in (-pi, pi], got {delta!r}")


def odd_mode_series(delta, K):
    """``4 sum_{k odd <= K} (1 - cos k delta) / k^2``, the squared distance between points of gamma."""
    if K < 1:
        raise BadCutoff(f"cutoff must be >= 1, got {K}")
    _check_delta(delta)
    k = np.arange(1, int(K) + 1, 2, dtype=float)
    return float(4.0 * np.sum((1.0 - np.cos(k * delta)) / k**2))


def geodesic_error_series(delta, K):
    """Even-mode part ``4 sum_{k even <= K} (1 - cos k delta) / k^2``.

    ``delta^2 = odd_mode_series - geodesic_error_series`` up to a truncation
    error of at most ``8 / K``.
    """
    if K < 2:
        raise BadCutoff(f"even-mode cutoff must be >= 2, got {K}")
    _check_delta(delta)
    k = np.arange(2, int(K) + 1, 2, dtype=float)
    return float(4.0 * np.sum((1.0 - np.cos(k * delta)) / k**2))
