"""The three-parameter group acting on deformation functions ``h``.

Parameters ``(alpha, beta, gamma)`` are the entries ``A[1][0]``, ``A[2][0]``,
``A[2][1]`` of a frame.  With ``u = 1/(1 + alpha s + beta h)`` put

    g1 = u (s + gamma h),    g~ = u h,

and define ``h^A = g~ o g1^{<-1>}``.  Everything here works over any
coefficient ring the series kernel supports, so the same code yields
numeric results over the rationals and polynomial formulas over
``QQ[alpha, beta, gamma, c2, ...]``.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .canonical import canonical_element, extract_invariants
from .errors import DomainError, StructuralError
from .gmsystem import GMSystem
from .lattice import special_deformation
from .linalg import rank
from .opposite import Frame, frame_from_matrix
from .series import QQ, MultiSeries, PolyRing, compose_univariate, compositional_inverse


@dataclass(frozen=True)
class GammaParams:
    alpha: object = Fraction(0)
    beta: object = Fraction(0)
    gamma: object = Fraction(0)

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)

    def matrix(self) -> tuple:
        """The 3x3 unit lower-triangular matrix carrying the parameters."""
        one, zero = self.alpha ** 0, self.alpha * 0
        return ((one, zero, zero), (self.alpha, one, zero), (self.beta, self.gamma, one))

    @classmethod
    def from_frame(cls, frame: Frame) -> GammaParams:
        return cls(*frame.params)

    def __matmul__(self, other: GammaParams) -> GammaParams:
        return compose_params(self, other)


IDENTITY = GammaParams()


def compose_params(p: GammaParams, q: GammaParams) -> GammaParams:
    """Acting by ``p`` and then by ``q`` is acting by this product."""
    return GammaParams(p.alpha + q.alpha, p.beta + q.beta + p.gamma * q.alpha, p.gamma + q.gamma)


def inverse_params(p: GammaParams) -> GammaParams:
    return GammaParams(-p.alpha, -p.beta + p.gamma * p.alpha, -p.gamma)


def _check_h(h: MultiSeries):
    if h.nvars != 1:
        raise StructuralError("h must be a series in one variable")
    c = h.univariate_coefficients()
    if any(not h.ring.is_zero(x) for x in c[:2]):
        raise DomainError("h must satisfy h(0) = h'(0) = 0")


def normal_form(params: GammaParams, h: MultiSeries) -> tuple[MultiSeries, MultiSeries]:
    """``(g1, g~)`` for the given parameters."""
    _check_h(h)
    ring = h.ring
    s = MultiSeries.variable(1, 1, h.degree, ring)
    denom = MultiSeries.constant(ring.one, 1, h.degree, ring) + s.scale(ring.coerce(params.alpha)) \
        + h.scale(ring.coerce(params.beta))
    u = denom.inverse()
    g1 = u * (s + h.scale(ring.coerce(params.gamma)))
    return g1, u * h


def act_on_h(params: GammaParams, h: MultiSeries) -> MultiSeries:
    """``h^A = g~ o g1^{<-1>}``."""
    g1, gt = normal_form(params, h)
    return compose_univariate(gt, compositional_inverse(g1))


def full_pipeline_action(A, h: MultiSeries, weight_bound: int | None = None) -> MultiSeries:
    """``h^A`` computed through the lattice: build the special lattice for
    ``h``, solve for the canonical element of ``f_0``, read off ``g1`` and
    ``g~`` and return ``g~ o g1^{<-1>}``."""
    frame = A if isinstance(A, Frame) else frame_from_matrix(A)
    r = frame.r
    _check_h(h)
    K = r + 2 if weight_bound is None else weight_bound
    sys = GMSystem.constant(r, K, h.degree)
    lat = special_deformation(sys, h)
    sol = canonical_element(lat, frame, frame.tilde_vector(0), 0, max(r - 1, 0))
    inv = extract_invariants(sol, frame)
    g1, gt = inv.g[0], inv.g_tilde
    if (g1.variables_used() | gt.variables_used()) - {1}:
        raise DomainError("g1 and g~ are expected to depend on s1 only")
    return compose_univariate(gt.restrict([1]), compositional_inverse(g1.restrict([1])))


# ---------------------------------------------------------------------------
# Symbolic orbit coefficients
# ---------------------------------------------------------------------------


@contextmanager
def recording_inversions(ring: PolyRing):
    """Collect the constants a polynomial ring is asked to invert."""
    previous = ring._invert_log
    ring._invert_log = []
    try:
        yield ring._invert_log
    finally:
        ring._invert_log = previous


def orbit_ring(k: int) -> PolyRing:
    return PolyRing(["alpha", "beta", "gamma"] + [f"c{i}" for i in range(2, k + 1)])


def symbolic_orbit(k: int, ring: PolyRing | None = None, with_log: bool = False):
    """``[c^A_2, ..., c^A_k]`` as polynomials in ``alpha, beta, gamma, c2..ck``.

    With ``with_log`` the constants inverted along the way are returned too;
    polynomiality means that list only ever contains 1.
    """
    if k < 2:
        raise StructuralError("level must be at least 2")
    R = orbit_ring(k) if ring is None else ring
    h = MultiSeries.univariate([0, 0] + [R.gen(f"c{i}") for i in range(2, k + 1)], k, ring=R)
    params = GammaParams(R.gen("alpha"), R.gen("beta"), R.gen("gamma"))
    with recording_inversions(R) as log:
        out = act_on_h(params, h).univariate_coefficients()[2:k + 1]
        inverted = list(log)
    return (out, inverted) if with_log else out


@dataclass(frozen=True)
class OrbitPoint:
    """The image of ``h`` in the level-``k`` affine space: ``c2`` and
    ``coeffs = (c3, ..., ck)``."""

    k: int
    c2: Fraction
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.k - 2:
            raise StructuralError(f"level {self.k} needs {self.k - 2} coefficients after c2")

    def to_series(self, degree: int | None = None) -> MultiSeries:
        return MultiSeries.univariate([0, 0, self.c2, *self.coeffs], self.k if degree is None else degree)


def project_orbit(h: MultiSeries, k: int) -> OrbitPoint:
    _check_h(h)
    if k > h.degree:
        raise StructuralError(f"level {k} above the series bound {h.degree}")
    c = h.univariate_coefficients()
    return OrbitPoint(k, c[2], tuple(c[3:k + 1]))


def act_on_orbit(params: GammaParams, point: OrbitPoint) -> OrbitPoint:
    return project_orbit(act_on_h(params, point.to_series()), point.k)


def orbit_jacobian(h: MultiSeries, levels: Sequence[int], at: GammaParams = IDENTITY) -> list[list[Fraction]]:
    """Jacobian of ``(alpha, beta, gamma) -> (c^A_m for m in levels)`` at ``at``.

    Computed exactly: the action is run over ``QQ[alpha, beta, gamma]`` with
    the numeric ``h`` and the resulting polynomials are differentiated.
    """
    R = PolyRing(["alpha", "beta", "gamma"])
    hp = h.with_ring(R)
    a, b, g = R.gens()
    shifted = GammaParams(a + R.coerce(at.alpha), b + R.coerce(at.beta), g + R.coerce(at.gamma))
    coeffs = act_on_h(shifted, hp).univariate_coefficients()
    zero = {"alpha": 0, "beta": 0, "gamma": 0}
    rows = []
    for m in levels:
        c = coeffs[m]
        rows.append([Fraction(c.derivative(name).evaluate(zero)) for name in ("alpha", "beta", "gamma")])
    return rows


def orbit_rank(h: MultiSeries, levels: Sequence[int], at: GammaParams = IDENTITY) -> int:
    return rank(orbit_jacobian(h, levels, at))
