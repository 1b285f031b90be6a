"""Betti numbers of finite quotients and trace asymptotics along chains.

For a chain of finite quotients G/N_i with quasi-regular representations
lambda_i, the degree-n Betti number of N_i equals the kernel dimension of
lambda_i(Delta_n) (restriction/induction moves coefficients between the
subgroup and the quotient module).  This module computes those integers,
their normalized ratios beta_n(N_i) / [G : N_i], exact group-ring upper
bounds on the limiting normalized Betti number, Euler-characteristic
traces, and the diagnostic reports that compare kernel dimensions against
a lifted reference value along the chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .complexes import CochainComplexSpec, LaplacianBundle, build_laplacian
from .cosets import QuotientChain, Representation, todd_coxeter
from .errors import (
    IncompleteComplexError,
    MalformedInputError,
    TraceBackendError,
)
from .groupring import GroupRingElement, GroupRingMatrix, Word
from .spectral import (
    DEFAULT_ZERO_TOLERANCE,
    EvaluatedOperator,
    GapReport,
    ProjectionMatrix,
    evaluate,
    heat_projection,
    kernel_projection,
    spectral_gap,
)


def laplacian_operator(spec: CochainComplexSpec, degree: int,
                       rep: Representation) -> EvaluatedOperator:
    bundle = build_laplacian(spec, degree)
    return evaluate(bundle.laplacian, rep,
                    provenance=f"Delta_{degree}@{rep.label or 'rep'}")


def betti_report(spec: CochainComplexSpec, degree: int, rep: Representation,
                 zero_tolerance: float = DEFAULT_ZERO_TOLERANCE
                 ) -> tuple[int, GapReport]:
    """Kernel dimension of the evaluated Laplacian, with its gap report."""
    op = laplacian_operator(spec, degree, rep)
    report = spectral_gap(op, zero_tolerance).require_resolved()
    return report.kernel_dim, report


def betti_finite_quotient(spec: CochainComplexSpec, degree: int,
                          rep: Representation,
                          zero_tolerance: float = DEFAULT_ZERO_TOLERANCE) -> int:
    """dim ker lambda(Delta_degree): the degree-n Betti number of the
    finite-index subgroup the representation comes from."""
    kernel_dim, _ = betti_report(spec, degree, rep, zero_tolerance)
    return kernel_dim


# ---------------------------------------------------------------------------
# Higher Kazhdan projections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KazhdanProjections:
    """Spectral projections onto ker Delta_n, ker Delta_n^+, ker Delta_n^-."""

    degree: int
    projection: ProjectionMatrix
    plus: ProjectionMatrix
    minus: ProjectionMatrix
    gap: GapReport
    gap_plus: GapReport
    gap_minus: GapReport
    product_defect: float

    def traces(self) -> tuple[float, float, float]:
        return (self.projection.trace(), self.plus.trace(), self.minus.trace())


def _rank_of(op: EvaluatedOperator, threshold: float) -> int:
    if op.rows == 0 or op.cols == 0:
        return 0
    return int(np.linalg.matrix_rank(op.shadow, tol=math.sqrt(threshold)))


def higher_kazhdan_projection(spec: CochainComplexSpec, degree: int,
                              rep: Representation,
                              zero_tolerance: float = DEFAULT_ZERO_TOLERANCE,
                              method: str = "eigen") -> KazhdanProjections:
    """Projections p_n, p_n^+, p_n^- for one representation.

    All three gaps must resolve.  Kernel identifications
    ker Delta_n^+ = ker d_n and ker Delta_n^- = ker d_{n-1}* are verified
    through numerical rank checks, and the factorization p = p^+ p^-
    (exact in the limit because Delta^+ Delta^- = 0) is recorded as a
    defect norm.
    """
    if method not in ("eigen", "heat"):
        raise MalformedInputError(f"unknown projection method {method!r}")
    bundle = build_laplacian(spec, degree)
    tag = rep.label or "rep"
    ops = {
        "": evaluate(bundle.laplacian, rep, f"Delta_{degree}@{tag}"),
        "+": evaluate(bundle.plus_part, rep, f"Delta_{degree}^+@{tag}"),
        "-": evaluate(bundle.minus_part, rep, f"Delta_{degree}^-@{tag}"),
    }
    gaps = {key: spectral_gap(op, zero_tolerance).require_resolved()
            for key, op in ops.items()}

    # The evaluated parts must annihilate each other exactly.
    if not (ops["+"] @ ops["-"]).is_zero_exact():
        raise AssertionError(
            f"Delta^+ Delta^- is nonzero under {tag!r}; the chain identity "
            "must have failed upstream")

    dim = ops[""].rows
    d_up = spec.differential(degree)
    if d_up is not None:
        rank_up = _rank_of(evaluate(d_up, rep, f"d_{degree}@{tag}"),
                           gaps["+"].threshold)
    else:
        rank_up = 0
    if gaps["+"].kernel_dim != dim - rank_up:
        raise AssertionError(
            f"ker Delta^+ ({gaps['+'].kernel_dim}) differs from ker d_n "
            f"({dim - rank_up}) under {tag!r}")
    d_down = spec.differential(degree - 1) if degree >= 1 else None
    if d_down is not None:
        rank_down = _rank_of(evaluate(d_down, rep, f"d_{degree - 1}@{tag}"),
                             gaps["-"].threshold)
    else:
        rank_down = 0
    if gaps["-"].kernel_dim != dim - rank_down:
        raise AssertionError(
            f"ker Delta^- ({gaps['-'].kernel_dim}) differs from ker d_(n-1)* "
            f"({dim - rank_down}) under {tag!r}")

    def project(key: str) -> ProjectionMatrix:
        if method == "heat":
            return heat_projection(ops[key], gaps[key].gap, zero_tolerance)
        return kernel_projection(ops[key], zero_tolerance)

    p, p_plus, p_minus = project(""), project("+"), project("-")
    defect = float(np.linalg.norm(
        p.matrix - p_plus.matrix @ p_minus.matrix, 2)) if dim else 0.0
    return KazhdanProjections(
        degree=degree, projection=p, plus=p_plus, minus=p_minus,
        gap=gaps[""], gap_plus=gaps["+"], gap_minus=gaps["-"],
        product_defect=defect)


# ---------------------------------------------------------------------------
# Luck approximation along a chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LuckRecord:
    position: int
    quotient_order: int
    betti: int
    ratio: Fraction
    gap: float


@dataclass(frozen=True)
class LuckReport:
    degree: int
    records: tuple[LuckRecord, ...]
    tail_estimates: tuple[Fraction, ...]
    extrapolated: Fraction | None
    extrapolation_note: str

    @property
    def ratios(self) -> tuple[Fraction, ...]:
        return tuple(r.ratio for r in self.records)


def luck_approximation(spec: CochainComplexSpec, degree: int,
                       chain: QuotientChain,
                       zero_tolerance: float = DEFAULT_ZERO_TOLERANCE
                       ) -> LuckReport:
    """Normalized Betti numbers beta_n(N_i) / [G : N_i] along the chain.

    The ratios are exact rationals.  Successive absolute differences are
    reported as a Cauchy-tail estimate, and a limit candidate is
    extrapolated from the slope of the Betti numbers against the index
    (exact whenever Betti growth is affine in the index); both are
    reported, never asserted.
    """
    records = []
    for position, order, _table, rep in chain.stages():
        betti, report = betti_report(spec, degree, rep, zero_tolerance)
        records.append(LuckRecord(
            position=position, quotient_order=order, betti=betti,
            ratio=Fraction(betti, order), gap=report.gap))
    ratios = [r.ratio for r in records]
    tails = tuple(abs(b - a) for a, b in zip(ratios, ratios[1:]))
    if len(records) >= 2:
        last, prev = records[-1], records[-2]
        slope = Fraction(last.betti - prev.betti,
                         last.quotient_order - prev.quotient_order)
        note = ("slope of Betti numbers against quotient order over the "
                "last two stages")
    else:
        slope = ratios[-1] if ratios else None
        note = "single stage; the ratio itself is the only candidate"
    return LuckReport(
        degree=degree, records=tuple(records), tail_estimates=tails,
        extrapolated=slope, extrapolation_note=note)


# ---------------------------------------------------------------------------
# Exact group-ring upper bounds u_M = tau((I - Delta/R)^M)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UpperBoundReport:
    degree: int
    norm_bound: Fraction
    values: tuple[Fraction, ...]          # u_1 .. u_M, nonincreasing
    lower_bounds: tuple[float, ...] | None
    cutoff: bool
    backend: str
    term_budget: int
    gap_hint: float | None


def _int_coeff_matrix(matrix: GroupRingMatrix,
                      denominator_clear: int) -> list[list[dict[Word, int]]]:
    out = []
    for i in range(matrix.rows):
        row = []
        for j in range(matrix.cols):
            entry = {}
            for word, coeff in matrix.entry(i, j).terms():
                value = coeff * denominator_clear
                if value.denominator != 1:
                    raise AssertionError("denominator clearing failed")
                entry[word] = entry.get(word, 0) + value.numerator
            row.append({w: c for w, c in entry.items() if c})
        out.append(row)
    return out


def _int_matrix_mul(a: list[list[dict[Word, int]]],
                    b: list[list[dict[Word, int]]]) -> list[list[dict[Word, int]]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[dict() for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            left = a[i][k]
            if not left:
                continue
            for j in range(cols):
                right = b[k][j]
                if not right:
                    continue
                acc = out[i][j]
                for u, cu in left.items():
                    for v, cv in right.items():
                        w = u * v
                        value = acc.get(w, 0) + cu * cv
                        if value:
                            acc[w] = value
                        else:
                            del acc[w]
    return out


def _int_matrix_terms(m: list[list[dict[Word, int]]]) -> int:
    return sum(len(entry) for row in m for entry in row)


def _paired_trace(a: list[list[dict[Word, int]]],
                  b: list[list[dict[Word, int]]]) -> int:
    """tau(A B) = sum_{i,j,w} A[i][j](w) * B[j][i](w^-1), no convolution."""
    total = 0
    k = len(a)
    for i in range(k):
        for j in range(k):
            left = a[i][j]
            right = b[j][i]
            if not left or not right:
                continue
            for w, c in left.items():
                other = right.get(w.inverse())
                if other:
                    total += c * other
    return total


def l2_betti_upper_bounds(spec: CochainComplexSpec, degree: int,
                          m_max: int,
                          gap_hint: float | None = None,
                          norm_bound: Fraction | None = None,
                          term_budget: int = 2_000_000,
                          max_cosets: int = 10**6) -> UpperBoundReport:
    """Exact values u_M = tau_k((I - Delta_n / R)^M) for M = 1..m_max.

    Each u_M bounds the limiting normalized Betti number from above when
    the spectrum lies in {0} union [gap, R]; with a gap hint epsilon the
    slack k_n (1 - epsilon/R)^M also yields reported lower bounds.  The
    trace is the free-group-ring trace when the presentation has no
    relators, and the exact normalized regular trace when the presented
    group is finite; other groups have no exact backend here.

    Support growth beyond ``term_budget`` stops the sequence early and
    sets the ``cutoff`` flag instead of raising.
    """
    bundle = build_laplacian(spec, degree)
    l1_bound = bundle.laplacian.l1_operator_bound()
    if norm_bound is None:
        norm_bound = l1_bound
    else:
        norm_bound = Fraction(norm_bound)
        if norm_bound < l1_bound:
            raise MalformedInputError(
                f"norm bound {norm_bound} is below the certified l1 bound "
                f"{l1_bound}")
    if m_max < 1:
        raise MalformedInputError("m_max must be at least 1")

    if not spec.presentation.relators:
        values, cutoff = _upper_bounds_free(
            spec, bundle, norm_bound, m_max, term_budget)
        backend = "free-ring"
    else:
        from .errors import EnumerationOverflowError

        try:
            table = todd_coxeter(spec.presentation, (), max_cosets=max_cosets)
        except EnumerationOverflowError as exc:
            raise TraceBackendError(
                "exact traces are available only for free presentations "
                "(free-ring backend) or finite groups (regular backend); "
                "this group did not enumerate within the coset budget") from exc
        values = _upper_bounds_finite(bundle, norm_bound, m_max, table)
        cutoff = False
        backend = "finite-regular"

    lower = None
    if gap_hint is not None:
        if not (0 < gap_hint <= float(norm_bound)):
            raise MalformedInputError(
                f"gap hint {gap_hint} outside (0, {float(norm_bound)}]")
        shrink = 1.0 - gap_hint / float(norm_bound)
        lower = tuple(
            float(u) - bundle.cell_count * shrink ** (m + 1)
            for m, u in enumerate(values))
    return UpperBoundReport(
        degree=degree, norm_bound=norm_bound, values=values,
        lower_bounds=lower, cutoff=cutoff, backend=backend,
        term_budget=term_budget, gap_hint=gap_hint)


def _upper_bounds_free(spec: CochainComplexSpec, bundle: LaplacianBundle,
                       r_bound: Fraction, m_max: int,
                       term_budget: int) -> tuple[tuple[Fraction, ...], bool]:
    """Free-ring powers with the split-and-pair trace.

    tau(T^m) is evaluated as tau(T^a T^b) with a = ceil(m/2), so only
    powers up to ceil(m_max/2) are convolved; the trace of a product
    pairs supports without multiplying them out.
    """
    down = spec.differential(bundle.degree - 1) if bundle.degree >= 1 else None
    if down is not None and bundle.plus_part.is_zero():
        return _upper_bounds_free_cyclic(bundle, down, r_bound, m_max,
                                         term_budget)
    k = bundle.cell_count
    denominators = [r_bound.denominator]
    for i in range(k):
        for j in range(k):
            for _w, c in bundle.laplacian.entry(i, j).terms():
                denominators.append(c.denominator)
    clear = math.lcm(*denominators)
    numerator = GroupRingMatrix.identity(k).scale(r_bound) - bundle.laplacian
    base = _int_coeff_matrix(numerator, clear)
    scale_per_power = Fraction(clear) * r_bound  # u_m uses (clear * R)^m

    powers: list[list[list[dict[Word, int]]]] = [base]
    cutoff = False
    top = (m_max + 1) // 2
    while len(powers) < top:
        nxt = _int_matrix_mul(powers[-1], base)
        if _int_matrix_terms(nxt) > term_budget:
            cutoff = True
            break
        powers.append(nxt)

    values = []
    for m in range(1, m_max + 1):
        a = (m + 1) // 2
        b = m - a
        if a > len(powers):
            cutoff = True
            break
        if b == 0:
            total = sum(
                (Fraction(powers[a - 1][i][i].get(Word(), 0)) for i in range(k)),
                Fraction(0))
        else:
            total = Fraction(_paired_trace(powers[a - 1], powers[b - 1]))
        values.append(total / scale_per_power ** m)
    return tuple(values), cutoff


def _upper_bounds_free_cyclic(bundle: LaplacianBundle, down: GroupRingMatrix,
                              r_bound: Fraction, m_max: int, term_budget: int
                              ) -> tuple[tuple[Fraction, ...], bool]:
    """Top-degree reduction through the cyclic trace.

    When Delta_n = d d* (no part above), tau((d d*)^j) = tau((d* d)^j),
    and for the presentation's d_0 the element d* d has support of word
    length one, so its powers live in far smaller balls than powers of
    the Laplacian itself.  u_m is assembled binomially from those traces.
    """
    k = bundle.cell_count
    small = down.adjoint() @ down
    denominators = [r_bound.denominator]
    for i in range(small.rows):
        for j in range(small.cols):
            for _w, c in small.entry(i, j).terms():
                denominators.append(c.denominator)
    clear = math.lcm(*denominators)
    base = _int_coeff_matrix(small, clear)

    powers: list[list[list[dict[Word, int]]]] = [base]
    cutoff = False
    top = (m_max + 1) // 2
    while len(powers) < top:
        nxt = _int_matrix_mul(powers[-1], base)
        if _int_matrix_terms(nxt) > term_budget:
            cutoff = True
            break
        powers.append(nxt)

    traces: list[Fraction] = []          # traces[j-1] = tau((d* d)^j)
    for j in range(1, m_max + 1):
        a = (j + 1) // 2
        b = j - a
        if a > len(powers):
            cutoff = True
            break
        if b == 0:
            raw = sum(powers[a - 1][i][i].get(Word(), 0)
                      for i in range(small.rows))
        else:
            raw = _paired_trace(powers[a - 1], powers[b - 1])
        traces.append(Fraction(raw, clear ** j))

    values = []
    for m in range(1, len(traces) + 1):
        total = Fraction(k)
        for j in range(1, m + 1):
            total += (math.comb(m, j) * Fraction(-1) ** j
                      * traces[j - 1] / r_bound ** j)
        values.append(total)
    return tuple(values), cutoff


def _upper_bounds_finite(bundle: LaplacianBundle, r_bound: Fraction,
                         m_max: int, table) -> tuple[Fraction, ...]:
    """Exact normalized regular trace of (I - Delta/R)^m for finite groups."""
    from . import exact

    rep = Representation.from_coset_table(table, label="full-regular")
    op = evaluate(bundle.laplacian, rep, provenance="Delta@full-regular")
    n = op.rows
    order = table.coset_count
    t_matrix = exact.sub(
        exact.identity(n), exact.scale(op.exact_matrix, Fraction(1) / r_bound))
    values = []
    power = t_matrix
    for _m in range(m_max):
        trace = sum((power[i][i] for i in range(n)), Fraction(0))
        values.append(trace / order)
        if _m + 1 < m_max:
            power = exact.matmul(power, t_matrix)
    return tuple(values)


# ---------------------------------------------------------------------------
# Membership in the ring of fractions with finite-subgroup denominators
# ---------------------------------------------------------------------------


def _prime_factors(n: int) -> set[int]:
    factors = set()
    n = abs(n)
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors.add(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.add(n)
    return factors


def lambda_ring_membership(value: Fraction,
                           finite_subgroup_orders: Iterable[int]) -> bool:
    """Whether a rational lies in Z extended by inverses of the orders.

    True exactly when every prime factor of the reduced denominator
    divides at least one of the listed finite-subgroup orders; integers
    always belong (torsion-free case: empty order list).
    """
    orders = [int(o) for o in finite_subgroup_orders]
    if any(o <= 0 for o in orders):
        raise MalformedInputError("finite subgroup orders must be positive")
    value = Fraction(value)
    denominator_primes = _prime_factors(value.denominator)
    return all(any(order % p == 0 for order in orders)
               for p in denominator_primes)


# ---------------------------------------------------------------------------
# Euler-characteristic traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EulerRecord:
    position: int
    quotient_order: int
    kernel_dims: tuple[int, ...]
    euler_trace: Fraction


@dataclass(frozen=True)
class EulerReport:
    euler_characteristic: int
    records: tuple[EulerRecord, ...]
    all_match: bool


def euler_class_trace(spec: CochainComplexSpec, chain: QuotientChain,
                      zero_tolerance: float = DEFAULT_ZERO_TOLERANCE
                      ) -> EulerReport:
    """Alternating normalized kernel dimensions along the chain.

    Needs the full classifying complex; each quotient's alternating sum
    of Betti numbers divided by the order must reproduce the Euler
    characteristic exactly (multiplicativity under finite index).
    """
    if not spec.aspherical:
        raise IncompleteComplexError(
            "Euler traces need the full classifying complex; this one is "
            "only a truncation")
    chi = spec.euler_characteristic()
    records = []
    all_match = True
    for position, order, _table, rep in chain.stages():
        dims = tuple(
            betti_report(spec, n, rep, zero_tolerance)[0]
            for n in range(spec.top_degree + 1))
        trace = Fraction(
            sum((-1) ** n * d for n, d in enumerate(dims)), order)
        records.append(EulerRecord(
            position=position, quotient_order=order,
            kernel_dims=dims, euler_trace=trace))
        if trace != chi:
            all_match = False
    return EulerReport(
        euler_characteristic=chi, records=tuple(records), all_match=all_match)


# ---------------------------------------------------------------------------
# Box-space obstruction and ghost-projection diagnostics
# ---------------------------------------------------------------------------

BETA_REF_PROVENANCES = ("user-cited", "luck-extrapolated")


@dataclass(frozen=True)
class BetaRef:
    """Reference normalized Betti value to lift along the chain."""

    value: Fraction
    provenance: str
    citation: str | None = None

    def __post_init__(self):
        if self.provenance not in BETA_REF_PROVENANCES:
            raise MalformedInputError(
                f"beta_ref provenance must be one of {BETA_REF_PROVENANCES}, "
                f"got {self.provenance!r}")
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class ObstructionRecord:
    position: int
    quotient_order: int
    d_star_value: int
    lifted_value: Fraction
    discrepancy: Fraction
    gap: float


@dataclass(frozen=True)
class ObstructionReport:
    degree: int
    beta_ref: BetaRef
    records: tuple[ObstructionRecord, ...]
    verdict: str
    gap_decay: bool
    min_gap: float
    uniform_gap_certified: bool
    certified_epsilon: float | None
    box_metric_note: str = ("pairwise separation 2^(i+j) between the i-th "
                            "and j-th quotient blocks; recorded only")


def box_obstruction_report(spec: CochainComplexSpec, degree: int,
                           chain: QuotientChain, beta_ref: BetaRef,
                           gap_claim=None,
                           zero_tolerance: float = DEFAULT_ZERO_TOLERANCE
                           ) -> ObstructionReport:
    """Compare kernel dimensions against the lifted reference value.

    For each quotient the kernel dimension of lambda_i(Delta_n) is set
    against [G : N_i] * beta_ref.  Verdicts:

    * ``persistent-discrepancy``: nonzero for every stage beyond the
      first (downgraded to inconclusive for an extrapolated reference
      unless the discrepancies are integers bounded away from zero);
    * ``eventually-equal``: zero for every stage beyond the first;
    * ``inconclusive`` otherwise, or when only one stage was computed.

    A verified certificate gap claim upgrades the decaying per-quotient
    gaps to a certified uniform gap in the report.
    """
    records = []
    for position, order, _table, rep in chain.stages():
        kernel_dim, report = betti_report(spec, degree, rep, zero_tolerance)
        lifted = order * beta_ref.value
        records.append(ObstructionRecord(
            position=position, quotient_order=order, d_star_value=kernel_dim,
            lifted_value=lifted, discrepancy=kernel_dim - lifted,
            gap=report.gap))

    tail = [r.discrepancy for r in records[1:]]
    if not tail:
        verdict = "inconclusive"
    elif all(d != 0 for d in tail):
        verdict = "persistent-discrepancy"
        if beta_ref.provenance == "luck-extrapolated":
            integral = all(d.denominator == 1 and abs(d) >= 1 for d in tail)
            if not integral:
                verdict = "inconclusive"
    elif all(d == 0 for d in tail):
        verdict = "eventually-equal"
    else:
        verdict = "inconclusive"

    gaps = [r.gap for r in records]
    decaying = len(gaps) >= 2 and all(
        later < earlier for earlier, later in zip(gaps, gaps[1:]))
    certified = bool(gap_claim is not None and
                     getattr(gap_claim, "verified", False) and
                     getattr(gap_claim, "epsilon", None) is not None)
    return ObstructionReport(
        degree=degree, beta_ref=beta_ref, records=tuple(records),
        verdict=verdict, gap_decay=decaying,
        min_gap=min(gaps) if gaps else math.inf,
        uniform_gap_certified=certified,
        certified_epsilon=float(gap_claim.epsilon) if certified else None)


@dataclass(frozen=True)
class GhostRecord:
    position: int
    quotient_order: int
    max_abs_entry: float
    trace: float


@dataclass(frozen=True)
class GhostReport:
    degree: int
    records: tuple[GhostRecord, ...]
    ghost_like: bool


def ghost_diagnostic(spec: CochainComplexSpec, degree: int,
                     chain: QuotientChain,
                     zero_tolerance: float = DEFAULT_ZERO_TOLERANCE,
                     method: str = "eigen") -> GhostReport:
    """Largest matrix entry of the kernel projection along the chain.

    Entry decay (strictly decreasing maxima) is the finite-dimensional
    shadow of a ghost projection: blockwise the operator vanishes
    entrywise while staying a nonzero projection.
    """
    records = []
    for position, order, _table, rep in chain.stages():
        projections = higher_kazhdan_projection(
            spec, degree, rep, zero_tolerance, method=method)
        records.append(GhostRecord(
            position=position, quotient_order=order,
            max_abs_entry=projections.projection.max_abs_entry(),
            trace=projections.projection.trace()))
    maxima = [r.max_abs_entry for r in records]
    ghost_like = (len(maxima) >= 2
                  and all(later <= earlier * (1 - 1e-9)
                          for earlier, later in zip(maxima, maxima[1:]))
                  # a ghost must stay a nonzero projection: kernel
                  # dimensions are integers, so any true kernel has
                  # trace at least one at every stage
                  and all(r.trace > 0.5 for r in records))
    return GhostReport(degree=degree, records=tuple(records),
                       ghost_like=ghost_like)
