"""Constructive cp factorizations and factor transformations.

Covers the diagonally dominant expansion, the interior
construction for positive diagonally dominant matrices, the positive-factor
perturbation, the order-6 Horn-orthogonal assembly with at most 15 columns,
order-3 factorization of doubly nonnegative matrices, Newton continuation of
a positive square factor, and a rotation-based heuristic for small column
counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernel, special
from .cones import InteriorCertificate, cp_interior_certificate, is_dnn, Answer
from .errors import (
    ColumnOutsideConesError,
    KOutOfRangeError,
    NewtonDivergedError,
    NotDiagonallyDominantError,
    NotDnnError,
    NotNonnegativeError,
    NotOrthogonalToHornError,
    NotPositiveError,
    OrderTooSmallError,
    PerronNotPositiveError,
    PositivityLostError,
)
from .kernel import DEFAULT_TOL, Tolerance

__all__ = [
    "NonnegFactor",
    "ContinuationResult",
    "dd_factorize",
    "positive_dd_factorize",
    "perturb_positify",
    "support_split",
    "horn_orthogonal_factorize",
    "cp3_factorize",
    "truncate_factor",
    "factor_continuation",
    "heuristic_min_factor",
]


class NonnegFactor:
    """Entrywise nonnegative n x p factor V; M = V @ V.T is the product.

    Zero columns are dropped on construction and entries within tolerance of
    zero are clamped; a genuinely negative entry raises.
    """

    def __init__(self, columns, tol: Tolerance = DEFAULT_TOL):
        v = np.asarray(columns, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ValueError("factor must be a 2-d array of columns")
        if not np.all(np.isfinite(v)):
            raise ValueError("factor entries must be finite")
        scale = np.abs(v).max(initial=0.0)
        if v.size and v.min(initial=0.0) < -tol.scaled(scale):
            raise NotNonnegativeError("factor has a negative entry beyond tolerance")
        v = np.clip(v, 0.0, None)
        keep = v.max(axis=0, initial=0.0) > 0.0 if v.shape[1] else np.zeros(0, dtype=bool)
        self.v = np.array(v[:, keep]) if v.shape[1] else v

    @property
    def n(self) -> int:
        return self.v.shape[0]

    @property
    def p(self) -> int:
        return self.v.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.v[:, j].copy()

    def product(self) -> np.ndarray:
        return self.v @ self.v.T

    def __repr__(self):
        return f"NonnegFactor(n={self.n}, p={self.p})"


def _check_nonneg(m: np.ndarray, thr: float) -> np.ndarray:
    if m.min() < -thr:
        raise NotNonnegativeError("matrix has a negative entry")
    return np.clip(m, 0.0, None)


def dd_factorize(m, tol: Tolerance = DEFAULT_TOL) -> NonnegFactor:
    """Factorize a nonnegative diagonally dominant matrix.

    Rank-1 expansion: sqrt(M_ij) (e_i + e_j) for each positive off-diagonal
    entry plus sqrt(M_ii - sum_j M_ij) e_i for each positive diagonal
    residual.  Exact up to roundoff; at most n(n+1)/2 columns.
    """
    m = kernel.as_sym(m, tol)
    n = m.shape[0]
    thr = tol.scaled(np.abs(m).max())
    m = _check_nonneg(m, thr)
    off_sums = m.sum(axis=1) - np.diag(m)
    if np.any(np.diag(m) - off_sums < -thr):
        raise NotDiagonallyDominantError("diagonal dominance fails")
    cols = []
    for i in range(n):
        for j in range(i + 1, n):
            if m[i, j] > 0.0:
                c = np.zeros(n)
                c[i] = c[j] = np.sqrt(m[i, j])
                cols.append(c)
        resid = m[i, i] - off_sums[i]
        if resid > 0.0:
            c = np.zeros(n)
            c[i] = np.sqrt(resid)
            cols.append(c)
    if not cols:
        return NonnegFactor(np.zeros((n, 0)), tol)
    return NonnegFactor(np.column_stack(cols), tol)


def positive_dd_factorize(
    m, tol: Tolerance = DEFAULT_TOL
) -> tuple[NonnegFactor, InteriorCertificate]:
    """Factorize a positive diagonally dominant matrix with an interior
    certificate.

    Peels off mu = min M_ij times the all-ones matrix: the first column is
    sqrt(mu) e, the rest factor the strictly diagonally dominant remainder.
    The result has a positive column and rank n, certifying membership in
    the interior of the completely positive cone.  Orders n <= 2 are
    rejected: there, positive diagonally dominant matrices can sit on the
    boundary.
    """
    m = kernel.as_sym(m, tol)
    n = m.shape[0]
    if n <= 2:
        raise OrderTooSmallError("interior construction needs order >= 3")
    thr = tol.scaled(np.abs(m).max())
    mu = m.min()
    if mu <= thr:
        raise NotPositiveError("matrix must be entrywise positive")
    off_sums = m.sum(axis=1) - np.diag(m)
    if np.any(np.diag(m) - off_sums < -thr):
        raise NotDiagonallyDominantError("diagonal dominance fails")
    rest = dd_factorize(m - mu * special.all_ones(n), tol)
    first = np.full((n, 1), np.sqrt(mu))
    factor = NonnegFactor(np.hstack([first, rest.v]), tol)
    cert = cp_interior_certificate(factor, tol)
    if cert is None:  # strict dominance guarantees rank n; only roundoff can break this
        raise NotPositiveError("interior certificate unexpectedly failed")
    return factor, cert


def _perron_vector(m: np.ndarray, tol: Tolerance) -> tuple[np.ndarray, float]:
    """Unit Perron vector and eigenvalue of a nonnegative symmetric matrix.

    Power iteration on a shifted matrix to 1e-14; requires the support graph
    to be connected (irreducibility), else the Perron vector need not be
    positive.
    """
    n = m.shape[0]
    thr = tol.scaled(np.abs(m).max())
    # connectivity of the support pattern via BFS
    adj = (m > thr) | np.eye(n, dtype=bool)
    reached = np.zeros(n, dtype=bool)
    frontier = [0]
    reached[0] = True
    while frontier:
        i = frontier.pop()
        for j in np.nonzero(adj[i])[0]:
            if not reached[j]:
                reached[j] = True
                frontier.append(int(j))
    if not reached.all():
        raise PerronNotPositiveError("support graph is not connected")
    shift = np.abs(m).max()
    shifted = m + shift * np.eye(n)
    v = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(100000):
        nxt = shifted @ v
        nxt /= np.linalg.norm(nxt)
        if np.abs(nxt - v).max() <= 1e-14:
            v = nxt
            break
        v = nxt
    else:
        # degenerate spectral gap; fall back to the deterministic eigensolver
        _, q = kernel.eig_sym(shifted)
        v = q[:, 0]
        if v.sum() < 0:
            v = -v
    lam = float(v @ m @ v)
    if v.min() <= tol.scaled(np.abs(v).max()):
        raise PerronNotPositiveError("Perron vector has a vanishing coordinate")
    return v, lam


def perturb_positify(
    v0: NonnegFactor, eps: float, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, NonnegFactor]:
    """Perturb M0 = V0 V0.T along its Perron direction so that the factor
    becomes entrywise positive with the same column count.

    With unit Perron vector v, eigenvalue lam and x = V0.T v / lam > 0, the
    returned pair is M = M0 + eps v v.T and V = V0 (I + delta x x.T) where
    delta makes (I + delta x x.T)^2 = I + eps x x.T, so V V.T = M exactly.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    m0 = v0.product()
    v, lam = _perron_vector(m0, tol)
    x = v0.v.T @ v / lam
    if x.size == 0 or x.min() <= 0.0:
        raise PerronNotPositiveError("factor columns do not all meet the Perron vector")
    delta = (np.sqrt(1.0 + eps * float(x @ x)) - 1.0) / float(x @ x)
    vout = v0.v + delta * np.outer(v0.v @ x, x)
    m = m0 + eps * np.outer(v, v)
    return m, NonnegFactor(vout, tol)


def support_split(
    v: NonnegFactor, index: int, tol: Tolerance = DEFAULT_TOL
) -> tuple[NonnegFactor, NonnegFactor]:
    """Split columns by whether coordinate ``index`` is in their support.

    The two parts regroup the rank-1 terms, so V1 V1.T + V2 V2.T = V V.T
    exactly.
    """
    if not 0 <= index < v.n:
        raise KOutOfRangeError("index out of range")
    thr = tol.scaled(v.v.max(initial=0.0))
    mask = v.v[index, :] > thr
    return NonnegFactor(v.v[:, mask], tol), NonnegFactor(v.v[:, ~mask], tol)


def truncate_factor(v: NonnegFactor, k: int) -> NonnegFactor:
    """Keep the first k columns.  For a minimal factor the product of the
    truncation has cp-rank exactly k."""
    if not 1 <= k <= v.p:
        raise KOutOfRangeError(f"k must be in 1..{v.p}")
    return NonnegFactor(v.v[:, :k])


# ---------------------------------------------------------------------------
# order-3 factorization


def _rotation_scan_2d(l: np.ndarray) -> np.ndarray | None:
    """Search G in O(2) with l @ G >= 0 by angle scan plus local refinement."""
    best = None
    lo, hi, steps = 0.0, 2.0 * np.pi, 360
    for reflect in (1.0, -1.0):
        a, b, m = lo, hi, steps
        for _ in range(8):  # refine towards 1e-12 angular resolution
            theta = np.linspace(a, b, m, endpoint=False)
            c, s = np.cos(theta), np.sin(theta)
            # stack of rotations (optionally composed with a reflection)
            g = np.empty((m, 2, 2))
            g[:, 0, 0] = c
            g[:, 0, 1] = -s * reflect
            g[:, 1, 0] = s
            g[:, 1, 1] = c * reflect
            prod = np.einsum("nr,mrk->mnk", l, g)
            mins = prod.min(axis=(1, 2))
            j = int(np.argmax(mins))
            cand = prod[j]
            if best is None or cand.min() > best.min():
                best = cand
            width = (b - a) / m
            a, b, m = theta[j] - width, theta[j] + width, 64
    if best is not None and best.min() >= -1e-12 * max(1.0, np.abs(l).max()):
        return np.clip(best, 0.0, None)
    return None


def _procrustes_polish(l: np.ndarray, g0: np.ndarray, scale: float) -> np.ndarray | None:
    """Alternate clipping to the nonnegative orthant with an orthogonal
    Procrustes fit; returns the nonnegative product l @ G on success."""
    g = g0
    for _ in range(300):
        prod = l @ g
        if prod.min() >= -1e-12 * scale:
            return np.clip(prod, 0.0, None)
        target = np.clip(prod, 0.0, None)
        u, _, vt = np.linalg.svd(l.T @ target)
        g_next = u @ vt
        if np.abs(g_next - g).max() < 1e-16:
            break
        g = g_next
    prod = l @ g
    if prod.min() >= -1e-12 * scale:
        return np.clip(prod, 0.0, None)
    return None


def _orth_seeds(r: int) -> list[np.ndarray]:
    seeds = [np.eye(r)]
    for mask in range(1, 1 << r):
        d = np.diag([-1.0 if mask >> i & 1 else 1.0 for i in range(r)])
        seeds.append(d)
    rng = np.random.default_rng(20240517)
    for _ in range(24):
        q, _ = np.linalg.qr(rng.standard_normal((r, r)))
        seeds.append(q)
    return seeds


def cp3_factorize(y, tol: Tolerance = DEFAULT_TOL) -> NonnegFactor:
    """Completely positive factorization of a doubly nonnegative matrix of
    order at most 3, with at most 3 columns.

    At these orders doubly nonnegative already implies completely positive
    with cp-rank <= 3 <= order, so some orthogonal rotation of the pivoted
    Cholesky root is nonnegative; the rotation is found by direct checks,
    an angle scan (rank 2), and Procrustes alternation (rank 3).
    """
    y = kernel.as_sym(y, tol)
    n = y.shape[0]
    if n > 3:
        raise ValueError("cp3_factorize handles orders up to 3")
    if is_dnn(y, tol).answer is not Answer.IN:
        raise NotDnnError("matrix is not doubly nonnegative")
    scale = max(1.0, np.abs(y).max())
    l = kernel.pivoted_cholesky(y, tol)
    r = l.shape[1]
    if r == 0:
        return NonnegFactor(np.zeros((n, 0)), tol)
    if l.min() >= -1e-12 * scale:
        return NonnegFactor(np.clip(l, 0.0, None), tol)
    if r == 1:
        return NonnegFactor(np.abs(l), tol)
    if r == 2:
        prod = _rotation_scan_2d(l)
        if prod is not None:
            return NonnegFactor(prod, tol)
    for seed in _orth_seeds(r):
        prod = _procrustes_polish(l, seed, scale)
        if prod is not None:
            return NonnegFactor(prod, tol)
    if r == 3:
        # coarse Euler-angle sweep to seed a final polish
        grid = np.linspace(0.0, 2.0 * np.pi, 24, endpoint=False)
        best, best_min = None, -np.inf
        for ta in grid:
            ra = np.array(
                [[np.cos(ta), -np.sin(ta), 0], [np.sin(ta), np.cos(ta), 0], [0, 0, 1.0]]
            )
            for tb in grid:
                rb = np.array(
                    [[1.0, 0, 0], [0, np.cos(tb), -np.sin(tb)], [0, np.sin(tb), np.cos(tb)]]
                )
                for tc in grid:
                    rc = np.array(
                        [
                            [np.cos(tc), -np.sin(tc), 0],
                            [np.sin(tc), np.cos(tc), 0],
                            [0, 0, 1.0],
                        ]
                    )
                    g = ra @ rb @ rc
                    low = (l @ g).min()
                    if low > best_min:
                        best, best_min = g, low
        if best is not None:
            prod = _procrustes_polish(l, best, scale)
            if prod is not None:
                return NonnegFactor(prod, tol)
    raise NotDnnError("no nonnegative rotation of the Cholesky root was found")


# ---------------------------------------------------------------------------
# order-6 Horn-orthogonal factorization


def horn_orthogonal_factorize(v: NonnegFactor, tol: Tolerance = DEFAULT_TOL) -> NonnegFactor:
    """Re-factor an order-6 matrix orthogonal to the Horn block with at most
    15 columns.

    Each input column must lie in one of the five cones spanned by the
    generator pairs (e_i + e_{i+1}, e_{i+1} + e_{i+2}) together with e6
    (indices cyclic over 1..5); columns are grouped per cone, the 3x3
    coefficient Gram matrices are factorized with at most 3 columns each,
    and the pieces are mapped back through the generators.
    """
    if v.n != 6:
        raise ValueError("order-6 input required")
    m = v.product()
    scale = np.abs(m).max(initial=0.0)
    thr = tol.scaled(scale)
    hb = special.horn_block6()
    if abs(float(np.sum(m * hb))) > max(thr, tol.scaled(1.0)):
        raise NotOrthogonalToHornError("product is not orthogonal to the Horn block")
    w = special.horn_generators()
    groups: dict[int, list[np.ndarray]] = {}
    for j in range(v.p):
        col = v.column(j)
        col_thr = tol.scaled(col.max(initial=0.0))
        support = set(np.nonzero(col[:5] > col_thr)[0])
        coeffs = None
        for i in range(5):
            if not support <= {i, (i + 1) % 5, (i + 2) % 5}:
                continue
            gens = w[:, [i, (i + 1) % 5, 5]]
            c = kernel.lp_feasible(a_eq=gens, b_eq=col)
            if c is None or np.abs(gens @ c - col).max() > max(col_thr, thr):
                continue
            coeffs = (i, c)
            break
        if coeffs is None:
            raise ColumnOutsideConesError(f"column {j} lies outside the generator cones")
        groups.setdefault(coeffs[0], []).append(coeffs[1])
    out_cols = []
    for i in sorted(groups):
        c = np.column_stack(groups[i])  # 3 x p_i coefficient block
        y = c @ c.T
        z = cp3_factorize(y, tol)
        gens = w[:, [i, (i + 1) % 5, 5]]
        if z.p:
            out_cols.append(gens @ z.v)
    if not out_cols:
        return NonnegFactor(np.zeros((6, 0)), tol)
    return NonnegFactor(np.hstack(out_cols), tol)


# ---------------------------------------------------------------------------
# Newton continuation of a positive square factor


@dataclass(frozen=True)
class ContinuationResult:
    factor: NonnegFactor
    iterations: int
    residuals: tuple[float, ...]


def factor_continuation(
    vbar,
    vtilde,
    mhat,
    tol: Tolerance = DEFAULT_TOL,
    max_iter: int = 30,
) -> ContinuationResult:
    """Adjust a positive square factor so the combined factor matches a
    nearby target matrix, keeping the column count.

    Newton iteration on F(V) = V V.T against Mhat - Vtilde Vtilde.T; each
    step solves the linearized equation E V.T + V E.T = R through the SVD
    V = U diag(s) W.T, which diagonalizes it into Z_ij = (U.T R U)_ij /
    (s_i + s_j), E = U Z W.T.  Quadratic convergence inside the radius set
    by the smallest singular value.
    """
    vc = np.array(vbar, dtype=float)
    n = vc.shape[0]
    if vc.shape != (n, n):
        raise ValueError("square positive factor required")
    vtilde = np.asarray(vtilde, dtype=float).reshape(n, -1)
    mhat = kernel.as_sym(mhat, tol)
    thr = tol.scaled(np.abs(vc).max())
    if vc.min() <= thr:
        raise NotPositiveError("square factor must be entrywise positive")
    scale = max(np.abs(mhat).max(), np.finfo(float).tiny)
    target = mhat - vtilde @ vtilde.T
    residuals = []
    stop = 1e-12 * scale
    for it in range(max_iter):
        r = target - vc @ vc.T
        rnorm = float(np.abs(r).max())
        residuals.append(rnorm)
        if rnorm <= stop:
            break
        if len(residuals) >= 2 and rnorm > 0.9 * residuals[-2]:
            raise NewtonDivergedError("Newton residual stopped decreasing")
        u, s, wt = np.linalg.svd(vc)
        if s[-1] <= 1e4 * np.finfo(float).eps * s[0] or rnorm > s[-1] ** 2:
            raise NewtonDivergedError("perturbation exceeds the continuation radius")
        z = (u.T @ r @ u) / (s[:, None] + s[None, :])
        vc = vc + u @ z @ wt
    else:
        raise NewtonDivergedError("iteration cap reached without convergence")
    if vc.min() <= 0.0:
        raise PositivityLostError("continuation pushed a factor entry to zero")
    return ContinuationResult(
        NonnegFactor(np.hstack([vc, vtilde]), tol), len(residuals) - 1, tuple(residuals)
    )


# ---------------------------------------------------------------------------
# heuristic minimal factorization


def heuristic_min_factor(
    m,
    p_target: int,
    restarts: int = 20,
    tol: Tolerance = DEFAULT_TOL,
) -> NonnegFactor | None:
    """Search a nonnegative factor with exactly ``p_target`` columns.

    Alternating projection between the manifold {B Q : Q has orthonormal
    rows} of exact roots and the nonnegative orthant, with deterministic
    random restarts; the first restart index to succeed wins.  ``None``
    means the search failed, which is not a proof of impossibility.
    """
    m = kernel.as_sym(m, tol)
    if is_dnn(m, tol).answer is not Answer.IN:
        raise NotDnnError("matrix is not doubly nonnegative")
    rank = kernel.num_rank(m, tol)
    if p_target < rank:
        return None  # cp-rank is bounded below by rank
    w, q = kernel.eig_sym(m)
    w = np.clip(w[:rank], 0.0, None)
    b = q[:, :rank] * np.sqrt(w)[None, :]  # n x r root of m
    scale = max(np.abs(m).max(), np.finfo(float).tiny)
    rng = np.random.default_rng(0)
    for _ in range(max(1, restarts)):
        g = rng.standard_normal((rank, p_target))
        qr, _ = np.linalg.qr(g.T)
        rot = qr[:, :rank].T  # r x p with orthonormal rows
        for _ in range(500):
            prod = b @ rot
            if prod.min() >= -1e-9 * scale:
                v = NonnegFactor(np.clip(prod, 0.0, None), tol)
                if np.abs(v.product() - m).max() <= 1e-7 * scale and v.p <= p_target:
                    return v
                break
            targ = np.clip(prod, 0.0, None)
            u, _, vt = np.linalg.svd(b.T @ targ, full_matrices=False)
            rot = u @ vt
    return None
