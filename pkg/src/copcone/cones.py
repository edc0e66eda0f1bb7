"""Certified membership tests for the matrix cones: nonnegative, PSD,
copositive, doubly nonnegative, plus the sufficient interior certificate for
complete positivity.

Every negative verdict carries a certificate that re-verifies with plain
arithmetic; copositivity is decided by simplicial branch-and-bound on the
standard simplex with exact KKT resolution of the surviving cells.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .errors import NotCopositiveError
from .kernel import DEFAULT_TOL, Tolerance

__all__ = [
    "Answer",
    "ConeVerdict",
    "NegativeEntry",
    "ViolationVector",
    "BoundaryZero",
    "FactorCertificate",
    "InteriorCertificate",
    "is_nonneg",
    "is_psd",
    "is_copositive",
    "copositive_boundary_zeros",
    "is_dnn",
    "cp_interior_certificate",
]


class Answer(str, enum.Enum):
    IN = "IN"
    NOT_IN = "NOT_IN"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class NegativeEntry:
    """Most negative entry of a matrix failing the nonnegativity test."""

    i: int
    j: int
    value: float


@dataclass(frozen=True)
class ViolationVector:
    """Vector x >= 0, ||x||_1 = 1, with x.T A x < 0."""

    x: np.ndarray
    value: float


@dataclass(frozen=True)
class BoundaryZero:
    """Simplex point where the quadratic form of a copositive matrix vanishes."""

    x: np.ndarray
    value: float


@dataclass(frozen=True)
class FactorCertificate:
    """Nonnegative factor certifying complete positivity."""

    factor: object  # NonnegFactor


@dataclass(frozen=True)
class InteriorCertificate:
    """Sufficient certificate for the interior of the completely positive
    cone: a rank-n nonnegative factor with an entrywise positive column."""

    factor: object  # NonnegFactor
    positive_column_index: int
    rank: int


@dataclass(frozen=True)
class ConeVerdict:
    cone: str
    answer: Answer
    certificate: object = None
    minimum: float | None = field(default=None)


def is_nonneg(a, tol: Tolerance = DEFAULT_TOL) -> ConeVerdict:
    """Membership in the cone of entrywise nonnegative symmetric matrices."""
    a = kernel.as_sym(a, tol)
    thr = tol.scaled(np.abs(a).max())
    i, j = np.unravel_index(np.argmin(a), a.shape)
    if a[i, j] < -thr:
        return ConeVerdict("NONNEG", Answer.NOT_IN, NegativeEntry(int(i), int(j), float(a[i, j])))
    return ConeVerdict("NONNEG", Answer.IN)


def is_psd(a, tol: Tolerance = DEFAULT_TOL) -> ConeVerdict:
    """Membership in the positive-semidefinite cone, with an eigenvector
    witness on failure."""
    a = kernel.as_sym(a, tol)
    ok, witness = kernel.psd_check(a, tol)
    if ok:
        return ConeVerdict("PSD", Answer.IN)
    value = float(witness @ a @ witness)
    return ConeVerdict("PSD", Answer.NOT_IN, ViolationVector(witness, value))


# Depth at which surviving branch-and-bound cells are resolved exactly via
# KKT support enumeration.  Cells on the cone boundary (zero minimum) are
# never settled by vertex tests alone, so this keeps boundary inputs fast.
_KKT_DEPTH = 3


def is_copositive(a, tol: Tolerance = DEFAULT_TOL, max_depth: int = 40) -> ConeVerdict:
    """Copositivity test by simplicial partition of the standard simplex.

    A cell with vertex matrix U is pruned when all entries of U.T A U clear
    the -tol threshold (the form is then certified above -tol on the cell),
    refuted when a vertex value drops below it, and otherwise bisected along
    its longest edge.  Cells surviving past a fixed shallow depth are
    resolved exactly by KKT support enumeration, so matrices on the cone
    boundary terminate quickly; UNDECIDED is only possible when ``max_depth``
    undercuts the resolution depth.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    a = kernel.as_sym(a, tol)
    n = a.shape[0]
    thr = tol.scaled(np.abs(a).max())
    min_seen = np.inf
    undecided = False
    stack = [(np.eye(n), 0)]
    while stack:
        u, depth = stack.pop()
        q = u.T @ a @ u
        q = 0.5 * (q + q.T)
        diag = np.diag(q)
        i = int(np.argmin(diag))
        if diag[i] < -thr:
            return ConeVerdict(
                "COPOSITIVE", Answer.NOT_IN, ViolationVector(u[:, i].copy(), float(diag[i]))
            )
        min_seen = min(min_seen, float(diag[i]))
        if q.min() >= -thr:
            continue  # form >= -thr on the whole cell
        if depth >= _KKT_DEPTH:
            val, lam = kernel.simplex_form_min(q)
            x = u @ lam
            value = float(x @ a @ x)
            if value < -thr:
                return ConeVerdict("COPOSITIVE", Answer.NOT_IN, ViolationVector(x, value))
            min_seen = min(min_seen, value)
            continue
        if depth >= max_depth:
            undecided = True
            continue
        # Bisect the longest edge, lowest vertex pair first on ties.
        best = (-1.0, 0, 1)
        for p in range(n - 1):
            for r in range(p + 1, n):
                d = float(np.abs(u[:, p] - u[:, r]).sum())
                if d > best[0] + 1e-15:
                    best = (d, p, r)
        _, p, r = best
        mid = 0.5 * (u[:, p] + u[:, r])
        child1 = u.copy()
        child1[:, p] = mid
        child2 = u.copy()
        child2[:, r] = mid
        stack.append((child2, depth + 1))
        stack.append((child1, depth + 1))
    if undecided:
        return ConeVerdict("COPOSITIVE", Answer.UNDECIDED, minimum=min_seen)
    certificate = None
    if abs(min_seen) <= thr:
        # boundary matrix: record one vanishing point of the form
        val, lam = kernel.simplex_form_min(a)
        if abs(val) <= thr:
            certificate = BoundaryZero(lam, float(val))
            min_seen = min(min_seen, float(val))
    return ConeVerdict("COPOSITIVE", Answer.IN, certificate, minimum=min_seen)


def copositive_boundary_zeros(a, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Unit-simplex zeros of the quadratic form of a copositive matrix.

    Each returned x satisfies x >= 0, ||x||_1 = 1, |x.T A x| <= tol and
    |[A x]_k| <= tol for every k in the support of x.  Zeros are collected
    from the KKT stationary points of every support set; where the zero set
    is a continuum, one representative per support is returned.
    """
    a = kernel.as_sym(a, tol)
    verdict = is_copositive(a, tol)
    if verdict.answer is not Answer.IN:
        raise NotCopositiveError("matrix is not certified copositive")
    thr = tol.scaled(np.abs(a).max())
    zeros = []
    seen = set()
    for val, lam in kernel.simplex_stationary_points(a):
        if abs(val) > thr:
            continue
        support = lam > thr
        if np.abs((a @ lam)[support]).max(initial=0.0) > thr:
            continue
        key = tuple(np.round(lam, 9))
        if key in seen:
            continue
        seen.add(key)
        zeros.append(lam)
    zeros.sort(key=lambda x: tuple(np.round(x, 12)))
    return zeros


def is_dnn(m, tol: Tolerance = DEFAULT_TOL) -> ConeVerdict:
    """Doubly nonnegative test: entrywise nonnegative and PSD.

    A cheap necessary condition for complete positivity.
    """
    nn = is_nonneg(m, tol)
    if nn.answer is Answer.NOT_IN:
        return ConeVerdict("DNN", Answer.NOT_IN, nn.certificate)
    psd = is_psd(m, tol)
    if psd.answer is Answer.NOT_IN:
        return ConeVerdict("DNN", Answer.NOT_IN, psd.certificate)
    return ConeVerdict("DNN", Answer.IN)


def cp_interior_certificate(v, tol: Tolerance = DEFAULT_TOL) -> InteriorCertificate | None:
    """Sufficient interior-of-CP certificate from a nonnegative factor.

    Succeeds iff the factor has full row rank n and some column is entrywise
    positive; returns ``None`` (not proven) otherwise.
    """
    cols = np.asarray(v.v, dtype=float)
    n = cols.shape[0]
    thr = tol.scaled(cols.max(initial=0.0))
    rank = kernel.num_rank(cols @ cols.T, tol)
    if rank != n:
        return None
    for j in range(cols.shape[1]):
        if cols[:, j].min() > thr:
            return InteriorCertificate(v, j, rank)
    return None
