"""Dense symmetric eigensolver.

The default solver is cyclic Jacobi with a round-robin (tournament) pivot
ordering: each round applies ``n // 2`` disjoint plane rotations at once, so a
sweep costs ``n - 1`` vectorized updates instead of ``n (n - 1) / 2`` scalar
ones.  Large matrices go to LAPACK (``numpy.linalg.eigh``) under
``method="auto"``; both routes share the same ordering and basis
normalization, so callers see one contract.

Basis normalization
-------------------
Eigenvectors are only defined up to sign, and inside a repeated eigenvalue up
to an orthogonal change of basis.  Both are pinned down here:

* eigenvalues within ``cluster_tol * max|lambda|`` of each other form one
  eigenspace; its basis is rotated so that the first basis vector is the
  normalized projection of the lowest-index coordinate axis that has a
  non-negligible projection, the next basis vector handles the next such axis,
  and so on (a greedy Gram-Schmidt over the rows of the basis);
* each vector is then flipped so its largest-magnitude entry (lowest index on
  ties) is positive.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonSquare, NotSymmetric

JACOBI_MAX_SWEEPS = 50
JACOBI_TOL = 1e-12
SYMMETRY_TOL = 1e-9
CLUSTER_TOL = 1e-10
AUTO_JACOBI_MAX_N = 128


@dataclass(frozen=True)
class SpectralDecomposition:
    """Descending eigenvalues and matching unit eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0
    method: str = "jacobi"

    @property
    def n(self):
        return self.eigenvalues.shape[0]


def _round_robin_schedule(n):
    """Pairings for one Jacobi sweep; each round is a set of disjoint pairs.

    Uses the circle method; with odd ``n`` a phantom index ``n`` is added and
    pairs touching it are dropped.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return np.linalg.norm(off)


def jacobi_eigh(matrix, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Raw cyclic Jacobi: returns ``(eigenvalues, eigenvectors, sweeps)`` unsorted.

    Raises :class:`NoConvergence` if the off-diagonal Frobenius norm has not
    dropped to ``tol * ||matrix||_F`` after ``max_sweeps`` sweeps.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = tol * np.linalg.norm(a)
    if n < 2:
        return np.diag(a).copy(), v, 0
    schedule = _round_robin_schedule(n)
    sweeps = 0
    while _off_norm(a) > target:
        if sweeps >= max_sweeps:
            raise NoConvergence(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e} > {target:.3e})"
            )
        for p, q in schedule:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(
                big,
                0.5 / np.where(big, theta, 1.0),
                np.sign(th) / (np.abs(th) + np.sqrt(th * th + 1.0)),
            )
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            rp, rq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p], v[:, q]
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
        sweeps += 1
    return np.diag(a).copy(), v, sweeps


def canonical_sign(vectors, rel_tie=1e-9):
    """Flip columns so the largest-|entry| component (lowest index on ties) is positive."""
    out = np.array(vectors, dtype=float, copy=True)
    if out.size == 0:
        return out
    mags = np.abs(out)
    peak = mags.max(axis=0)
    for j in range(out.shape[1]):
        if peak[j] == 0.0:
            continue
        idx = int(np.flatnonzero(mags[:, j] >= peak[j] * (1.0 - rel_tie))[0])
        if out[idx, j] < 0:
            out[:, j] = -out[:, j]
    return out


def canonical_basis(basis, tol=1e-8):
    """Rotate an orthonormal basis of a subspace into the greedy row-echelon form.

    The returned columns span the same subspace; column ``i`` is the normalized
    component of the ``i``-th admissible coordinate axis orthogonal to the
    previous columns.
    """
    w = np.asarray(basis, dtype=float)
    n, r = w.shape
    if r <= 1:
        return w.copy()
    dirs = []
    for t in range(n):
        if len(dirs) == r:
            break
        row = w[t].copy()
        for d in dirs:
            row -= (row @ d) * d
        norm = np.linalg.norm(row)
        if norm > tol:
            dirs.append(row / norm)
    if len(dirs) < r:
        # degenerate rows; complete with an orthonormal complement
        q, _ = np.linalg.qr(np.column_stack(dirs + [np.eye(r)[:, k] for k in range(r)]))
        dirs = [q[:, k] for k in range(r)]
    return w @ np.column_stack(dirs)


def _eigen_clusters(values, tol):
    scale = max(np.max(np.abs(values)), 1e-300) if values.size else 1.0
    groups = []
    start = 0
    for i in range(1, values.size + 1):
        if i == values.size or values[i - 1] - values[i] > tol * scale:
            groups.append((start, i))
            start = i
    return groups


def symmetric_eigendecomposition(matrix, method="auto", cluster_tol=CLUSTER_TOL):
    """Full spectrum of a real symmetric matrix, descending, with a canonical basis.

    Parameters
    ----------
    matrix : (n, n) array_like
        Symmetric within ``1e-9`` (relative to its largest entry, floor 1).
    method : {"auto", "jacobi", "lapack"}
        ``"auto"`` uses Jacobi up to ``AUTO_JACOBI_MAX_N`` rows and LAPACK above.

    Returns
    -------
    SpectralDecomposition
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(m.shape)
    n = m.shape[0]
    if n == 0:
        return SpectralDecomposition(np.zeros(0), np.zeros((0, 0)), 0, method)
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(m))):
        raise NotSymmetric(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")
    m = 0.5 * (m + m.T)

    if method == "auto":
        method = "jacobi" if n <= AUTO_JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        vals, vecs, sweeps = jacobi_eigh(m)
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(m)
        sweeps = 0
    else:
        raise ValueError(f"unknown method {method!r}")

    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for lo, hi in _eigen_clusters(vals, cluster_tol):
        if hi - lo > 1:
            vecs[:, lo:hi] = canonical_basis(vecs[:, lo:hi])
    vecs = canonical_sign(vecs)
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralDecomposition(vals, vecs, sweeps, method)
