"""Canonical lattice elements relative to an opposite filtration.

For a flat vector ``e`` in ``U^p H`` the solver finds the lattice element
``w`` with ``w - dt^{-p} e`` vanishing below weight ``p`` and lying in ``U^1``
at every weight from ``p`` on.  It works upward: at each weight the current
discrepancy is split into an ``F_0`` part, cancelled by a multiple of the
shifted generators, and a ``U^1`` part that is left in place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InsufficientPrecision
from .gmsystem import GMElement, HVector
from .lattice import Lattice, MembershipWitness, NotMember, hodge_filtration, reduce
from .linalg import rank
from .opposite import Frame, is_opposite, split, u_subspace
from .series import MultiSeries, as_rational


@dataclass
class CanonicalSolution:
    """``w`` in the lattice with ``w - dt^{-p} e`` in ``U^1`` at every weight."""

    w: GMElement
    target: GMElement
    p: int
    bound: int
    u_terms: dict
    witness: MembershipWitness

    def residual(self) -> GMElement:
        return self.w - self.target


@dataclass
class CanonicalSet:
    solutions: list
    generation: dict = field(default_factory=dict)

    @property
    def generates(self) -> bool:
        return all(not isinstance(x, NotMember) for x in self.generation.values())

    def elements(self) -> list[GMElement]:
        return [s.w for s in self.solutions]


def _constant_vector(lat: Lattice, e) -> HVector:
    sys = lat.system
    if isinstance(e, HVector):
        coords = e.at_origin()
        if e != sys.hvector(coords):
            raise DomainError("e must have constant coefficients")
        return e
    return sys.hvector([as_rational(x) for x in e])


def infer_level(frame: Frame, e: Sequence) -> int:
    """Smallest ``p`` with ``e`` in ``U^p H``: its first nonzero f-coordinate."""
    tilde = frame.to_tilde(list(e))
    for j, c in enumerate(tilde):
        if c != 0:
            return j
    raise DomainError("e must be nonzero")


def canonical_element(lat: Lattice, frame: Frame, e, p="auto", bound: int | None = None,
                      order=None) -> CanonicalSolution:
    """The unique lattice element congruent to ``dt^{-p} e`` modulo ``U^1``."""
    sys = lat.system
    if frame.dim != sys.dim:
        raise DomainError("frame size does not match the system")
    ev = _constant_vector(lat, e)
    if p == "auto":
        p = infer_level(frame, ev.at_origin())
    # no operator is applied, so generator data is exact through K
    B = sys.weight_bound if bound is None else bound
    if B > sys.weight_bound:
        raise InsufficientPrecision(f"bound {B} exceeds the weight bound {sys.weight_bound}")
    if p > B:
        raise InsufficientPrecision(f"level {p} is above the bound {B}")
    target = sys.element({p: ev})
    w = sys.zero()
    coeffs = tuple({} for _ in lat.generators)
    u_terms = {}
    for k in range(p, B + 1):
        d = (w - target).terms.get(k)
        if d is None:
            continue
        fb = hodge_filtration(lat, k)
        ub = u_subspace(frame, k, 1)
        try:
            parts = split(sys, d, fb, ub, order)
        except DomainError as exc:
            where = "no F_0 representative of e modulo U^1" if k == p else f"split failed at weight {k}"
            raise DomainError(f"{where}: {exc}") from None
        for j, c in zip(lat.columns_at(k), parts.f_coeffs):
            if c.is_zero():
                continue
            shift = k - lat.lead_weights[j]
            w = w - lat.generators[j].shift(shift).scale(c)
            coeffs[j][shift] = coeffs[j].get(shift, sys.series()) - c
        if not parts.u_part.is_zero():
            u_terms[k] = parts.u_part
    return CanonicalSolution(w.truncated(B), target, p, B, u_terms, MembershipWitness(coeffs, B))


def residual_law(sol: CanonicalSolution, frame: Frame) -> tuple[bool, int | None]:
    """Check the defining condition directly in f-coordinates.

    Returns ``(ok, first_bad_weight)``."""
    res = sol.residual()
    for k in range(sol.bound + 1):
        v = res.terms.get(k)
        if v is None:
            continue
        if k < sol.p:
            return False, k
        tilde = frame.to_tilde(list(v.coords))
        # U^1 at weight k is spanned by f_j, j >= k + 1
        if any(not tilde[j].is_zero() for j in range(min(k + 1, frame.dim))):
            return False, k
    return True, None


def canonical_generators(lat: Lattice, frame: Frame, bound: int | None = None, order=None,
                         check_generation: bool = True) -> CanonicalSet:
    """One canonical element per ``f_j`` at level ``j``; optionally verifies that
    they regenerate the original lattice."""
    flag = lat.hodge_flag_at_origin()
    cert = is_opposite(frame, flag)
    if not cert:
        raise DomainError(f"frame is not opposite to F_0 (fails at p = {cert.failing_p})")
    sols = [canonical_element(lat, frame, frame.tilde_vector(j), j, bound, order) for j in range(lat.r + 1)]
    out = CanonicalSet(sols)
    if check_generation:
        B = sols[0].bound
        new = Lattice(lat.system, [s.w for s in sols], "canonical")
        for j, v in enumerate(lat.generators):
            out.generation[j] = reduce(new, v, B)
    return out


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------


@dataclass
class InvariantTuple:
    g: tuple
    g_tilde: MultiSeries

    def jacobian_at_origin(self) -> list[list[Fraction]]:
        n = len(self.g)
        rows = []
        for gj in self.g:
            rows.append([gj.coefficient(tuple(int(i == k) for i in range(gj.nvars))) for k in range(n)])
        return rows

    def is_coordinate_system(self) -> bool:
        return rank(self.jacobian_at_origin()) == len(self.g)


def extract_invariants(sol: CanonicalSolution, frame: Frame) -> InvariantTuple:
    """``g_j``: the ``f_j`` coordinate of the weight ``j - 1`` component of ``w``;
    ``g~``: the ``f_2`` coordinate of the weight-0 component."""
    r = frame.r
    if sol.bound < r - 1:
        raise InsufficientPrecision(f"need weights through {r - 1}, solution has {sol.bound}")
    w = sol.w
    tilde = {k: frame.to_tilde(list(w.component(k).coords)) for k in range(r)}
    g = tuple(tilde[j - 1][j] for j in range(1, r + 1))
    return InvariantTuple(g, tilde[0][2])


# ---------------------------------------------------------------------------
# Period mapping
# ---------------------------------------------------------------------------


def reference_span(r: int) -> set:
    """``{(1, 0)}`` together with ``(k, j)`` for ``1 <= j <= r``, ``1 <= k <= j``."""
    return {(1, 0)} | {(k, j) for j in range(1, r + 1) for k in range(1, j + 1)}


@dataclass
class PeriodSupport:
    support: set
    samples: dict
    in_span: bool
    outside_span: set
    distinct: bool

    def to_dict(self) -> dict:
        return {
            "support": sorted([list(x) for x in self.support]),
            "in_span": self.in_span,
            "outside_span": sorted([list(x) for x in self.outside_span]),
            "distinct": self.distinct,
            "samples": {",".join(str(c) for c in pt): [str(v) for v in vec]
                        for pt, vec in self.samples.items()},
        }


def period_support(lat: Lattice, frame: Frame, sample_points: Sequence[Sequence], bound: int | None = None,
                   sol: CanonicalSolution | None = None) -> PeriodSupport:
    """Support of the canonical ``w_0`` and its values at rational points."""
    if sol is None:
        sol = canonical_element(lat, frame, frame.tilde_vector(0), 0, bound)
    w = sol.w
    sys = lat.system
    support = set()
    for k, v in w.terms.items():
        for i, c in enumerate(v.coords):
            if not c.is_zero():
                support.add((k, i))
    keys = sorted(support)
    samples = {}
    for pt in sample_points:
        pt = tuple(as_rational(x) for x in pt)
        if len(pt) != sys.nvars:
            raise DomainError(f"sample point needs {sys.nvars} coordinates")
        samples[pt] = tuple(w.terms[k].coords[i].evaluate(pt) for k, i in keys)
    images = list(samples.values())
    distinct = len(set(images)) == len(images)
    outside = support - reference_span(lat.r)
    return PeriodSupport(support, samples, not outside, outside, distinct)
