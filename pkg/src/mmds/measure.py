"""MDS of finite metric measure spaces through the centered integral operator.

On a finite support the operator ``phi -> sum_s K_B(., s) phi(s) mu_s`` is the
matrix ``K_B diag(mu)``.  It is solved through its symmetric form
``diag(sqrt(mu)) K_B diag(sqrt(mu))``; an eigenvector ``psi`` of that matrix
gives the eigenfunction ``phi = psi / sqrt(mu)``, orthonormal in ``L^2(mu)``.
Zero-weight points are left out of the eigenproblem and filled in afterwards
by Nystrom extension.
"""

from dataclasses import dataclass

import numpy as np

from .classical import ZERO_EIG_RTOL, weighted_double_center
from .eigen import symmetric_eigendecomposition
from .errors import LengthMismatch, NonSquare, ZeroWeightRequested
from .mmspace import DiscreteMeasure, MetricMeasureSpace


@dataclass(frozen=True)
class KernelMatrix:
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float, copy=True)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise NonSquare(e.shape)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class OperatorSpectrum:
    """Eigenpairs of the weighted operator.

    ``eigenfunctions[:, i]`` holds ``phi_i`` sampled at every support point,
    zero-weight points included (those values come from Nystrom extension).
    ``kernel`` is the centered kernel the spectrum was computed from; it is
    kept for out-of-sample evaluation.
    """

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    measure: DiscreteMeasure
    kernel: KernelMatrix = None

    def __len__(self):
        return self.eigenvalues.size


@dataclass(frozen=True)
class MeasureEmbedding:
    coords: np.ndarray
    truncated_eigenvalues: np.ndarray
    spectrum: OperatorSpectrum
    warnings: tuple = ()

    @property
    def m(self):
        return self.coords.shape[1]


def _measure(mu, n):
    if not isinstance(mu, DiscreteMeasure):
        mu = DiscreteMeasure(mu)
    if len(mu) != n:
        raise LengthMismatch(f"measure has {len(mu)} weights for {n} points")
    return mu


def kernel_KA(space: MetricMeasureSpace):
    d = space.dist.entries
    return KernelMatrix(-0.5 * d * d)


def kernel_KB(ka, mu):
    """Center a kernel against ``mu`` (same arithmetic as ``weighted_double_center``)."""
    ka = ka if isinstance(ka, KernelMatrix) else KernelMatrix(ka)
    mu = _measure(mu, ka.n)
    return KernelMatrix(weighted_double_center(ka.entries, mu).entries)


def operator_spectrum(kb, mu, k=None, method="auto"):
    """Top ``k`` eigenpairs of the operator with kernel ``kb`` on ``L^2(mu)``.

    ``k`` defaults to the number of positive-weight points.  A uniform measure
    is solved by decomposing ``kb`` itself and rescaling (``diag(sqrt(mu)) K
    diag(sqrt(mu)) = K / n``), which keeps this route identical to classical
    MDS.
    """
    kb = kb if isinstance(kb, KernelMatrix) else KernelMatrix(kb)
    mu = _measure(mu, kb.n)
    w = mu.weights
    support = np.flatnonzero(w > 0)
    n_pos = support.size
    if k is None:
        k = n_pos
    if k > n_pos:
        raise ZeroWeightRequested(f"requested {k} eigenpairs but only {n_pos} points carry mass")
    k = max(int(k), 0)

    if mu.is_uniform:
        spec = symmetric_eigendecomposition(kb.entries, method=method)
        lam = spec.eigenvalues[:k] * w[0]
        phi = spec.eigenvectors[:, :k] / np.sqrt(w[0])
    else:
        sq = np.sqrt(w[support])
        sub = kb.entries[np.ix_(support, support)]
        spec = symmetric_eigendecomposition(sq[:, None] * sub * sq[None, :], method=method)
        lam = spec.eigenvalues[:k].copy()
        psi = spec.eigenvectors[:, :k]
        phi = np.zeros((kb.n, k))
        phi[support] = psi / sq[:, None]
        missing = np.flatnonzero(w == 0)
        if missing.size and k:
            # Nystrom: phi(x) = (1 / lambda) sum_s K(x, s) mu_s phi(s)
            thr = ZERO_EIG_RTOL * max(np.max(np.abs(spec.eigenvalues)), 0.0)
            proj = kb.entries[np.ix_(missing, support)] @ (w[support, None] * phi[support])
            ok = np.abs(lam) > thr
            phi[np.ix_(missing, np.flatnonzero(ok))] = proj[:, ok] / lam[ok]
    lam = np.array(lam)
    lam.setflags(write=False)
    phi.setflags(write=False)
    return OperatorSpectrum(lam, phi, mu, kb)


def truncate_spectrum(s: OperatorSpectrum):
    """Clamp negative eigenvalues to zero; eigenfunctions are untouched."""
    lam = np.maximum(s.eigenvalues, 0.0)
    lam.setflags(write=False)
    return OperatorSpectrum(lam, s.eigenfunctions, s.measure, s.kernel)


def kernel_KB_hat(s: OperatorSpectrum, m=None):
    """``sum_{i<=m} lambda_i phi_i(x_r) phi_i(x_s)`` at the support points."""
    m = len(s) if m is None else int(m)
    if m > len(s):
        raise ValueError(f"m={m} exceeds the {len(s)} available eigenpairs")
    phi = s.eigenfunctions[:, :m]
    return KernelMatrix((phi * s.eigenvalues[:m]) @ phi.T)


def _retained_count(lam_hat, m):
    thr = ZERO_EIG_RTOL * (lam_hat[0] if lam_hat.size else 0.0)
    positive = int(np.sum(lam_hat > thr))
    return positive if m is None else int(m)


def measure_mds(space: MetricMeasureSpace, m=None, method="auto"):
    """Embedding ``x -> (sqrt(lambda_hat_i) phi_i(x))_{i <= m}`` of every support point.

    ``m=None`` keeps every eigenvalue above ``1e-10 * lambda_hat_1`` (the
    finite stand-in for the embedding into l^2).
    """
    if m is not None and m < 1:
        raise ValueError(f"target dimension must be >= 1, got {m}")
    kb = kernel_KB(kernel_KA(space), space.measure)
    spec = operator_spectrum(kb, space.measure, method=method)
    hat = truncate_spectrum(spec)
    lam_hat = hat.eigenvalues
    m = _retained_count(lam_hat, m)
    thr = ZERO_EIG_RTOL * (np.max(np.abs(spec.eigenvalues)) if len(spec) else 0.0)

    k = min(m, len(hat))
    lam = np.where(lam_hat[:k] > thr, lam_hat[:k], 0.0)
    coords = np.zeros((space.n, m))
    coords[:, :k] = hat.eigenfunctions[:, :k] * np.sqrt(lam)[None, :]
    trunc = np.zeros(m)
    trunc[:k] = lam
    n_pos = int(np.sum(lam_hat > thr))
    warnings = ()
    if n_pos < m:
        warnings = (f"only {n_pos} eigenvalue(s) above the zero threshold; "
                    f"{m - n_pos} coordinate column(s) are zero",)
    coords.setflags(write=False)
    trunc.setflags(write=False)
    return MeasureEmbedding(coords, trunc, spec, warnings)


def operator_strain(s: OperatorSpectrum, m):
    """Squared Hilbert-Schmidt norm of the discarded spectrum.

    Sums ``lambda_i^2`` over ``i > m`` and over every negative eigenvalue.
    """
    lam = np.asarray(s.eigenvalues)
    idx = np.arange(lam.size)
    dropped = (idx >= m) | (lam < 0)
    return float(np.sum(lam[dropped] ** 2))


def weighted_strain(kb, mu, coords):
    """``sum_rs mu_r mu_s (K_B - K_hat)_rs^2`` where ``K_hat`` is the mu-centered Gram of ``coords``."""
    kb = np.asarray(kb.entries if isinstance(kb, KernelMatrix) else kb, dtype=float)
    w = mu.weights if isinstance(mu, DiscreteMeasure) else np.asarray(mu, dtype=float)
    x = np.asarray(coords, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    xc = x - w @ x
    diff = kb - xc @ xc.T
    return float(w @ (diff * diff) @ w)


def nystrom_extend(s: OperatorSpectrum, space: MetricMeasureSpace, distances_to_support, m):
    """Embed a new point from its distances to the support.

    Returns ``(coords, zero_filled)`` where ``zero_filled`` lists the
    coordinates left at 0 because their eigenvalue is not positive.
    """
    dx = np.asarray(distances_to_support, dtype=float)
    if dx.shape != (space.n,):
        raise LengthMismatch(f"expected {space.n} distances, got shape {dx.shape}")
    if s.kernel is None:
        raise ValueError("spectrum carries no kernel; build it with operator_spectrum")
    w = s.measure.weights
    ka_support = -0.5 * space.dist.entries ** 2
    kx = -0.5 * dx * dx
    # center the new row against mu, as in the kernel centering formula
    kb_x = kx - w @ ka_support - kx @ w + w @ ka_support @ w
    lam = np.maximum(s.eigenvalues[:m], 0.0)
    thr = ZERO_EIG_RTOL * (np.max(np.abs(s.eigenvalues)) if len(s) else 0.0)
    proj = (kb_x * w) @ s.eigenfunctions[:, :m]
    coords = np.zeros(m)
    ok = lam > thr
    coords[ok] = proj[ok] / np.sqrt(lam[ok])
    return coords, tuple(int(i) for i in np.flatnonzero(~ok))
