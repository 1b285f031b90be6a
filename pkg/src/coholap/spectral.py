"""Spectral analysis of group-ring matrices under exact representations.

``evaluate`` turns a k x k matrix over the group ring into an exact
rational (k * dim) x (k * dim) block matrix, block (i, j) being
``sum_w coeff * pi(w)``.  Everything downstream of the evaluation keeps
both the exact matrix and a float64 shadow; the exact-to-float boundary
sits immediately before eigenvalue computation and nowhere earlier.

Spectral quantities follow one convention throughout:

* the zero cluster of a PSD operator is every eigenvalue at most
  ``zero_tolerance * max(1, ||M||_1)``;
* the spectral gap is the first eigenvalue above that cluster, and it is
  "resolved" when it exceeds ten times the cluster threshold.

Kernel projections come from two independent routes, eigenvector outer
products and heat-semigroup squaring (exp(-tM) with t doubling), which
the tests require to agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .cosets import Representation
from .errors import (
    NotPositiveSemidefiniteError,
    ShapeMismatchError,
    UnresolvedGapError,
)
from .groupring import GroupRingMatrix

DEFAULT_ZERO_TOLERANCE = 1e-8
DENSE_EIG_CUTOFF = 4096
GAP_RESOLUTION_FACTOR = 10.0


class EvaluatedOperator:
    """A group-ring matrix pushed through a representation.

    Carries the exact rational matrix and a float64 shadow.  ``rows`` and
    ``cols`` are total dimensions (ring rows/cols times representation
    dimension).
    """

    __slots__ = ("exact_matrix", "shadow", "rows", "cols", "provenance")

    def __init__(self, exact_matrix: exact.Matrix, provenance: str = ""):
        self.exact_matrix = exact_matrix
        self.rows, self.cols = exact.shape(exact_matrix)
        self.shadow = exact.to_float(exact_matrix)
        self.provenance = provenance

    @property
    def dimension(self) -> int:
        if self.rows != self.cols:
            raise ShapeMismatchError("dimension is defined for square operators")
        return self.rows

    def is_symmetric_exact(self) -> bool:
        return exact.is_symmetric(self.exact_matrix)

    def is_zero_exact(self) -> bool:
        return exact.is_zero(self.exact_matrix)

    def __matmul__(self, other: "EvaluatedOperator") -> "EvaluatedOperator":
        product = exact.matmul(self.exact_matrix, other.exact_matrix)
        return EvaluatedOperator(
            product, provenance=f"({self.provenance})*({other.provenance})")

    def __sub__(self, other: "EvaluatedOperator") -> "EvaluatedOperator":
        return EvaluatedOperator(
            exact.sub(self.exact_matrix, other.exact_matrix),
            provenance=f"({self.provenance})-({other.provenance})")

    def one_norm(self) -> float:
        if self.rows == 0 or self.cols == 0:
            return 0.0
        return float(np.abs(self.shadow).sum(axis=0).max())

    def __repr__(self) -> str:
        return (f"EvaluatedOperator({self.rows}x{self.cols}, "
                f"provenance={self.provenance!r})")


def evaluate(matrix: GroupRingMatrix, rep: Representation,
             provenance: str = "") -> EvaluatedOperator:
    """Exact block evaluation of a group-ring matrix under a representation.

    A *-homomorphism: products, sums, and adjoints commute with
    evaluation, and self-adjoint inputs give exactly symmetric outputs.
    """
    dim = rep.dimension
    total_rows = matrix.rows * dim
    total_cols = matrix.cols * dim
    grid: list[list[Fraction]] = [
        [Fraction(0)] * total_cols for _ in range(total_rows)]
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            element = matrix.entry(i, j)
            if element.is_zero():
                continue
            row0, col0 = i * dim, j * dim
            if rep.perms is not None:
                for word, coeff in element.terms():
                    perm = rep.word_perm(word)
                    for col in range(dim):
                        grid[row0 + perm[col]][col0 + col] += coeff
            else:
                for word, coeff in element.terms():
                    block = rep.word_matrix(word)
                    for r in range(dim):
                        block_row = block[r]
                        grid_row = grid[row0 + r]
                        for col in range(dim):
                            if block_row[col]:
                                grid_row[col0 + col] += coeff * block_row[col]
    exact_matrix = tuple(tuple(row) for row in grid)
    if not provenance:
        provenance = f"{matrix.rows}x{matrix.cols}@{rep.label or 'rep'}"
    result = EvaluatedOperator(exact_matrix, provenance=provenance)
    if matrix.rows == matrix.cols and matrix.is_self_adjoint():
        if not result.is_symmetric_exact():
            raise AssertionError(
                "self-adjoint input evaluated to a non-symmetric matrix")
    return result


@dataclass(frozen=True)
class GapReport:
    """Zero cluster and first nonzero eigenvalue of a PSD operator."""

    dimension: int
    kernel_dim: int
    gap: float
    resolved: bool
    zero_tolerance: float
    threshold: float
    scale: float
    lowest: tuple[float, ...]
    provenance: str

    def require_resolved(self) -> "GapReport":
        if not self.resolved:
            raise UnresolvedGapError(
                f"zero cluster of {self.provenance!r} is not separated: "
                f"gap={self.gap:.3e} threshold={self.threshold:.3e}")
        return self


def _symmetric_eigh(op: EvaluatedOperator) -> tuple[np.ndarray, np.ndarray]:
    if op.rows != op.cols:
        raise ShapeMismatchError("eigencomputation requires a square operator")
    if not op.is_symmetric_exact():
        raise NotPositiveSemidefiniteError(
            f"operator {op.provenance!r} is not symmetric")
    if op.rows == 0:
        return np.array([]), np.empty((0, 0))
    return np.linalg.eigh(op.shadow)


def lanczos_lowest(shadow: np.ndarray, count: int,
                   iterations: int | None = None) -> np.ndarray:
    """Lowest eigenvalues of a large symmetric matrix, with multiplicity.

    Rayleigh-Ritz on a block Krylov subspace whose block width equals the
    number of requested values.  The width matters: a single-vector
    Krylov space carries at most one copy of each eigenvalue, so a block
    at least as wide as the largest expected cluster is required to count
    multiplicities correctly.  Full reorthogonalization keeps the basis
    orthonormal, and a fixed-seed start block makes every run identical.

    ``iterations`` bounds the number of block expansions; the default
    grows the subspace to roughly four blocks (or the full space when
    that is smaller) and stops early once the requested values stop
    moving.
    """
    n = shadow.shape[0]
    count = min(count, n)
    if count <= 0:
        return np.array([])
    scale = float(np.abs(shadow).sum(axis=0).max()) + 1.0
    block = min(n, max(count, 2))
    if iterations is None:
        target = min(n, max(8 * block, 256))
        iterations = max(1, -(-target // block))

    start = np.random.Generator(np.random.PCG64(20080514))
    basis, _ = np.linalg.qr(start.standard_normal((n, block)))

    def ritz_lowest(q: np.ndarray) -> np.ndarray:
        projected = q.T @ (shadow @ q)
        projected = 0.5 * (projected + projected.T)
        return np.linalg.eigvalsh(projected)[:count]

    q = basis
    lowest = None
    for _ in range(iterations):
        w = shadow @ q[:, -block:]
        w = w - q @ (q.T @ w)
        w = w - q @ (q.T @ w)  # second pass for numerical orthogonality
        w, r = np.linalg.qr(w)
        alive = np.abs(np.diag(r)) > 1e-10 * scale
        w = w[:, alive]
        if w.shape[1] == 0:
            break  # invariant subspace: Ritz values there are exact
        block = w.shape[1]
        q = np.concatenate([q, w], axis=1)
        current = ritz_lowest(q)
        if (lowest is not None and len(current) == len(lowest)
                and np.all(np.abs(current - lowest) <= 1e-13 * scale)):
            return current
        lowest = current
    return ritz_lowest(q) if lowest is None else lowest


def spectrum_low(op: EvaluatedOperator, count: int | None = None,
                 dense_cutoff: int = DENSE_EIG_CUTOFF) -> np.ndarray:
    """Sorted ascending eigenvalues (all of them below the dense cutoff,
    the lowest ``count`` via Lanczos above it)."""
    if op.rows != op.cols:
        raise ShapeMismatchError("spectrum requires a square operator")
    if op.rows <= dense_cutoff:
        values = np.linalg.eigvalsh(op.shadow) if op.rows else np.array([])
        return values if count is None else values[:count]
    if count is None:
        raise ValueError(
            f"dimension {op.rows} exceeds the dense cutoff; pass count=")
    return lanczos_lowest(op.shadow, count)


def spectral_gap(op: EvaluatedOperator,
                 zero_tolerance: float = DEFAULT_ZERO_TOLERANCE,
                 dense_cutoff: int = DENSE_EIG_CUTOFF) -> GapReport:
    """Locate the zero cluster of a PSD operator and the gap above it.

    The cluster threshold is ``zero_tolerance * max(1, ||M||_1)``; the
    report is marked resolved only when the first eigenvalue above the
    cluster exceeds ten times that threshold.
    """
    if op.rows != op.cols:
        raise ShapeMismatchError("spectral gap requires a square operator")
    if not op.is_symmetric_exact():
        raise NotPositiveSemidefiniteError(
            f"operator {op.provenance!r} is not symmetric")
    scale = max(1.0, op.one_norm())
    threshold = zero_tolerance * scale
    dimension = op.rows

    if dimension <= dense_cutoff:
        values = np.linalg.eigvalsh(op.shadow) if dimension else np.array([])
    else:
        want = 32
        while True:
            values = lanczos_lowest(op.shadow, want)
            if len(values) < want or values[-1] > threshold:
                break
            if want >= dimension:
                break
            want = min(dimension, want * 2)

    if len(values) and values[0] < -threshold:
        raise NotPositiveSemidefiniteError(
            f"operator {op.provenance!r} has eigenvalue {values[0]:.6e} "
            f"below -threshold={-threshold:.3e}")

    kernel_dim = int(np.searchsorted(values, threshold, side="right"))
    if kernel_dim < len(values):
        gap = float(values[kernel_dim])
    else:
        gap = math.inf
    resolved = gap >= GAP_RESOLUTION_FACTOR * threshold
    return GapReport(
        dimension=dimension,
        kernel_dim=kernel_dim,
        gap=gap,
        resolved=resolved,
        zero_tolerance=zero_tolerance,
        threshold=threshold,
        scale=scale,
        lowest=tuple(float(v) for v in values[:10]),
        provenance=op.provenance,
    )


@dataclass(frozen=True)
class ProjectionMatrix:
    """A numerical spectral projection with its invariant defects."""

    matrix: np.ndarray
    method: str
    idempotency_defect: float
    selfadjoint_defect: float
    provenance: str

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def max_abs_entry(self) -> float:
        return float(np.abs(self.matrix).max()) if self.matrix.size else 0.0

    def distance(self, other: "ProjectionMatrix") -> float:
        return float(np.linalg.norm(self.matrix - other.matrix, 2))


def _projection_from_array(matrix: np.ndarray, method: str,
                           provenance: str) -> ProjectionMatrix:
    idem = float(np.linalg.norm(matrix @ matrix - matrix, 2)) if matrix.size else 0.0
    sym = float(np.linalg.norm(matrix - matrix.T, 2)) if matrix.size else 0.0
    return ProjectionMatrix(
        matrix=matrix, method=method,
        idempotency_defect=idem, selfadjoint_defect=sym,
        provenance=provenance)


def kernel_projection(op: EvaluatedOperator,
                      zero_tolerance: float = DEFAULT_ZERO_TOLERANCE) -> ProjectionMatrix:
    """Orthogonal projection onto the zero cluster via eigenvectors.

    Requires the gap to be resolved; raises UnresolvedGapError otherwise.
    """
    report = spectral_gap(op, zero_tolerance).require_resolved()
    values, vectors = _symmetric_eigh(op)
    k = report.kernel_dim
    basis = vectors[:, :k]
    matrix = basis @ basis.T
    return _projection_from_array(
        matrix, "eigen", f"ker[{op.provenance}]")


def _expm_neg(shadow: np.ndarray, t: float) -> np.ndarray:
    """exp(-t * M) for symmetric PSD M by Taylor series plus squaring."""
    norm = float(np.abs(shadow).sum(axis=0).max()) if shadow.size else 0.0
    squarings = max(0, math.ceil(math.log2(max(1.0, t * norm))) + 1)
    small = shadow * (-t / (2 ** squarings))
    n = shadow.shape[0]
    term = np.eye(n)
    total = np.eye(n)
    for k in range(1, 24):
        term = term @ small / k
        total = total + term
    for _ in range(squarings):
        total = total @ total
        total = 0.5 * (total + total.T)
    return total


def heat_projection(op: EvaluatedOperator, gap_hint: float,
                    tolerance: float = DEFAULT_ZERO_TOLERANCE,
                    max_doublings: int = 64) -> ProjectionMatrix:
    """Kernel projection as the limit of the heat semigroup exp(-tM).

    Starts from a safe t, then squares the matrix so t doubles each step,
    until successive iterates differ by less than the tolerance and the
    a-priori bound exp(-t * gap_hint) <= tolerance certifies that the
    iterate is within tolerance of the exact projection.
    """
    if op.rows != op.cols:
        raise ShapeMismatchError("heat projection requires a square operator")
    if not (gap_hint > 0) or not math.isfinite(gap_hint):
        if gap_hint == math.inf:
            # Zero operator: the heat semigroup is constant at the identity.
            return _projection_from_array(
                np.eye(op.rows), "heat", f"heat[{op.provenance}]")
        raise UnresolvedGapError(
            f"heat projection needs a positive resolved gap hint, "
            f"got {gap_hint!r}")
    shadow = op.shadow
    t = 1.0 / max(1.0, float(np.abs(shadow).sum(axis=0).max()) if shadow.size else 1.0)
    current = _expm_neg(shadow, t)
    for _ in range(max_doublings):
        squared = current @ current
        squared = 0.5 * (squared + squared.T)
        t *= 2.0
        diff = float(np.linalg.norm(squared - current, 2)) if current.size else 0.0
        current = squared
        if diff <= tolerance / 2 and math.exp(-t * gap_hint) <= tolerance / 2:
            break
    else:
        raise UnresolvedGapError(
            f"heat iteration failed to converge for {op.provenance!r}; "
            f"the gap hint {gap_hint} may be wrong")
    return _projection_from_array(current, "heat", f"heat[{op.provenance}]")
