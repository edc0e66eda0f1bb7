"""Dense numerical kernel for small symmetric matrices.

Cyclic Jacobi eigendecomposition, pivoted Cholesky, numerical rank,
exact quadratic-form minimization over the standard simplex, and a dense
two-phase simplex LP.  All orders are tiny (n <= ~12), so robustness and
high relative accuracy beat asymptotic speed everywhere.

A single :class:`Tolerance` object is threaded through every caller; it is
the one accuracy knob of the whole library.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SimplexCyclingError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_sym",
    "eig_sym",
    "num_rank",
    "psd_check",
    "pivoted_cholesky",
    "simplex_stationary_points",
    "simplex_form_min",
    "lp_feasible",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative epsilon pair; comparisons use ``abs + rel * scale``."""

    abs: float = 1e-9
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be nonnegative")

    def scaled(self, scale: float) -> float:
        return self.abs + self.rel * abs(scale)


DEFAULT_TOL = Tolerance()


def as_sym(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Validate a square symmetric array and return its exact symmetrization.

    Raises ``ValueError`` if the input is not square, not finite, or not
    symmetric within the tolerance.
    """
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("order must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    scale = np.abs(arr).max()
    if np.abs(arr - arr.T).max() > tol.scaled(scale):
        raise ValueError("matrix is not symmetric within tolerance")
    return 0.5 * (arr + arr.T)


def eig_sym(a, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic-by-rows Jacobi.

    Returns ``(w, q)`` with eigenvalues ``w`` in descending order and
    orthonormal eigenvector columns ``q``, so that ``a = q @ diag(w) @ q.T``.
    """
    a = np.array(a, dtype=float)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    q = np.eye(n)
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    converged = False
    for _ in range(max_sweeps):
        off = 0.0
        if n > 1:
            off = np.abs(a - np.diag(np.diag(a))).max()
        if off <= 1e-14 * scale:
            converged = True
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) <= 1e-18 * scale:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                if theta >= 0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- G.T A G with the rotation acting on the (p, r) plane.
                ap, ar = a[:, p].copy(), a[:, r].copy()
                a[:, p] = c * ap - s * ar
                a[:, r] = s * ap + c * ar
                ap, ar = a[p, :].copy(), a[r, :].copy()
                a[p, :] = c * ap - s * ar
                a[r, :] = s * ap + c * ar
                a[p, r] = a[r, p] = 0.5 * (a[p, r] + a[r, p])
                qp, qr = q[:, p].copy(), q[:, r].copy()
                q[:, p] = c * qp - s * qr
                q[:, r] = s * qp + c * qr
    else:
        converged = n == 1
    if not converged:
        raise RuntimeError("Jacobi iteration failed to converge")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], q[:, order]


def num_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: eigenvalues of magnitude above the scaled threshold."""
    w, _ = eig_sym(np.asarray(a, dtype=float))
    scale = np.abs(w).max() if w.size else 0.0
    if scale == 0.0:
        return 0
    return int(np.count_nonzero(np.abs(w) > tol.scaled(scale)))


def psd_check(a, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, np.ndarray | None]:
    """Positive-semidefiniteness test.

    Returns ``(True, None)`` if the minimum eigenvalue is above the scaled
    ``-tol`` threshold, else ``(False, w)`` with a unit witness vector
    satisfying ``w.T @ a @ w < 0``.
    """
    a = np.asarray(a, dtype=float)
    w, q = eig_sym(a)
    scale = np.abs(a).max()
    if w[-1] >= -tol.scaled(scale):
        return True, None
    return False, q[:, -1]


def pivoted_cholesky(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Rank-revealing Cholesky of a PSD matrix: ``a ~= L @ L.T``, L is n x r.

    Full diagonal pivoting; stops when the largest residual diagonal drops
    below the scaled threshold.
    """
    r = np.array(a, dtype=float)
    n = r.shape[0]
    scale = max(np.diag(r).max(initial=0.0), 0.0)
    thr = tol.scaled(scale)
    cols = []
    for _ in range(n):
        d = np.diag(r)
        j = int(np.argmax(d))
        if d[j] <= thr:
            break
        col = r[:, j] / np.sqrt(d[j])
        cols.append(col)
        r = r - np.outer(col, col)
    if not cols:
        return np.zeros((n, 0))
    return np.column_stack(cols)


def simplex_stationary_points(q):
    """Yield ``(value, lam)`` for all KKT points of ``lam.T @ q @ lam`` on the
    standard simplex, enumerated over support sets.

    Every face's relative-interior stationary points are produced (vertices
    included as singleton supports), so the global minimum over the simplex
    is always among the yielded values.  Supports whose stationarity system
    is inconsistent are skipped: their face attains its minimum on a subface.
    """
    q = np.asarray(q, dtype=float)
    q = 0.5 * (q + q.T)
    n = q.shape[0]
    if n > 16:
        raise ValueError("support enumeration is limited to order 16")
    scale = max(1.0, np.abs(q).max())
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        k = len(idx)
        lam_full = np.zeros(n)
        if k == 1:
            lam_full[idx[0]] = 1.0
            yield float(q[idx[0], idx[0]]), lam_full
            continue
        qs = q[np.ix_(idx, idx)]
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = 2.0 * qs
        kkt[:k, k] = -1.0
        kkt[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[k] = 1.0
        try:
            sol = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        if not np.all(np.isfinite(sol)):
            continue
        if np.abs(kkt @ sol - rhs).max() > 1e-8 * scale:
            continue  # inconsistent: no stationary point in this face interior
        lam = sol[:k]
        if lam.min() < -1e-10:
            continue
        lam = np.clip(lam, 0.0, None)
        total = lam.sum()
        if total <= 0.0:
            continue
        lam /= total
        lam_full[idx] = lam
        yield float(lam @ qs @ lam), lam_full


def simplex_form_min(q) -> tuple[float, np.ndarray]:
    """Global minimum of the quadratic form over the standard simplex.

    Returns ``(value, lam)`` with ``lam >= 0``, ``sum(lam) == 1``.  Exact up
    to roundoff via KKT support enumeration; ties resolved deterministically
    by enumeration order.
    """
    best_val = np.inf
    best_lam = None
    for val, lam in simplex_stationary_points(q):
        if val < best_val:
            best_val, best_lam = val, lam
    return best_val, best_lam


def lp_feasible(
    a_eq=None,
    b_eq=None,
    a_ub=None,
    b_ub=None,
    *,
    pivot_tol: float = 1e-10,
    feas_tol: float = 1e-9,
    max_iter: int = 5000,
) -> np.ndarray | None:
    """Find ``x >= 0`` with ``a_eq @ x == b_eq`` and ``a_ub @ x <= b_ub``.

    Dense two-phase simplex (phase 1 drives out artificial variables; there
    is no objective, so phase 2 is vacuous).  Dantzig pricing with a Bland's
    rule fallback to guard against cycling.  Returns a feasible point, or
    ``None`` if the system is infeasible.
    """
    rows = []
    rhs = []
    n = None
    for a, b in ((a_eq, b_eq), (a_ub, b_ub)):
        if a is None:
            continue
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if a.shape[0] != b.shape[0]:
            raise ValueError("constraint matrix/rhs shape mismatch")
        if n is None:
            n = a.shape[1]
        elif a.shape[1] != n:
            raise ValueError("inconsistent variable counts")
    if n is None:
        raise ValueError("no constraints given")
    if n > 64:
        raise ValueError("lp_feasible is limited to 64 variables")

    n_ub = 0 if a_ub is None else np.atleast_2d(a_ub).shape[0]
    n_eq = 0 if a_eq is None else np.atleast_2d(a_eq).shape[0]
    m = n_eq + n_ub
    width = n + n_ub  # structural + slack variables
    body = np.zeros((m, width))
    rhs = np.zeros(m)
    if a_eq is not None:
        body[:n_eq, :n] = np.atleast_2d(np.asarray(a_eq, dtype=float))
        rhs[:n_eq] = np.atleast_1d(np.asarray(b_eq, dtype=float))
    if a_ub is not None:
        body[n_eq:, :n] = np.atleast_2d(np.asarray(a_ub, dtype=float))
        body[n_eq:, n:] = np.eye(n_ub)
        rhs[n_eq:] = np.atleast_1d(np.asarray(b_ub, dtype=float))
    neg = rhs < 0
    body[neg] *= -1.0
    rhs[neg] *= -1.0

    # Tableau [body | artificials | rhs], artificial basis, phase-1 cost row.
    tab = np.hstack([body, np.eye(m), rhs[:, None]])
    basis = [width + i for i in range(m)]
    obj = np.zeros(width + m + 1)
    obj[width : width + m] = 1.0
    obj -= tab.sum(axis=0)

    scale = 1.0 + (np.abs(rhs).max() if m else 0.0)
    for it in range(max_iter):
        reduced = obj[:-1]
        if it < max_iter // 2:
            col = int(np.argmin(reduced))
            if reduced[col] >= -pivot_tol:
                break
        else:  # Bland's rule: first improving index
            candidates = np.nonzero(reduced < -pivot_tol)[0]
            if candidates.size == 0:
                break
            col = int(candidates[0])
        ratios = np.full(m, np.inf)
        pos = tab[:, col] > pivot_tol
        ratios[pos] = tab[pos, -1] / tab[pos, col]
        if not np.isfinite(ratios).any():
            raise SimplexCyclingError("phase-1 column unbounded")
        best = ratios.min()
        ties = np.nonzero(ratios <= best * (1 + 1e-12) + 1e-300)[0]
        row = int(min(ties, key=lambda i: basis[i]))
        pivot = tab[row, col]
        tab[row] /= pivot
        for i in range(m):
            if i != row and tab[i, col] != 0.0:
                tab[i] -= tab[i, col] * tab[row]
        obj -= obj[col] * tab[row]
        basis[row] = col
    else:
        raise SimplexCyclingError("simplex iteration cap exceeded")

    if -obj[-1] > feas_tol * scale:
        return None
    x = np.zeros(width)
    for i, bi in enumerate(basis):
        if bi < width:
            x[bi] = tab[i, -1]
    return np.clip(x[:n], 0.0, None)
