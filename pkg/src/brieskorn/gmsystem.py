"""Weight-graded model of a constant Gauss-Manin deformation.

An element of the system is a finite map ``w -> HVector`` where weight ``w``
stands for the power ``dt^{-w}`` and the HVector holds the coordinates on
the flat basis ``e_0..e_r`` as truncated series in ``s_1..s_nvars``.  Weight
``w`` is the graded piece on which ``dt*t`` acts with generalised eigenvalue
``w + 1``.

Weights above the system's bound ``K`` are never stored.  Every element
records ``valid_through``: the largest weight at which it is fully known.
Operators that push information upward (``t``, ``dt^{-1}``) cap it at ``K``;
``dt`` lowers it by one.  Comparisons beyond it raise
:class:`InsufficientPrecision` instead of silently passing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import InsufficientPrecision, StructuralError
from .series import QQ, MultiSeries, as_rational, format_series

Matrix = tuple  # tuple of row tuples of Fractions


def _as_matrix(rows, n: int) -> Matrix:
    rows = tuple(tuple(as_rational(x) for x in row) for row in rows)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise StructuralError(f"expected a {n}x{n} matrix")
    return rows


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
                 for i in range(n))


def mat_pow(a: Matrix, k: int) -> Matrix:
    n = len(a)
    out = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def shift_matrix(r: int) -> Matrix:
    """The nilpotent ``N`` with ``N e_i = e_{i+1}`` and ``N e_r = 0``.

    Matrices act on coordinate columns: ``(N x)_i = sum_j N[i][j] x_j``.
    """
    return tuple(tuple(Fraction(int(i == j + 1)) for j in range(r + 1)) for i in range(r + 1))


@dataclass(frozen=True)
class GMSystem:
    """The ambient system: basis ``e_0..e_r``, nilpotent ``N``, bounds.

    ``nilpotent`` acts on coordinate columns; ``weight_bound`` is ``K``;
    ``nvars`` and ``degree`` describe the series ring of the base.
    """

    r: int
    weight_bound: int
    nvars: int
    degree: int
    nilpotent: Matrix = None
    ring: object = field(default=QQ, compare=False)

    def __post_init__(self):
        if self.r < 1:
            raise StructuralError("rank parameter r must be at least 1")
        n = self.r + 1
        nil = self.nilpotent
        if nil is None:
            nil = tuple((Fraction(0),) * n for _ in range(n))
        nil = _as_matrix(nil, n)
        object.__setattr__(self, "nilpotent", nil)
        if any(any(row) for row in mat_pow(nil, n)):
            raise StructuralError(f"N^{n} != 0: the matrix is not nilpotent")
        if self.weight_bound < self.r + 2:
            raise StructuralError(f"weight bound K={self.weight_bound} must be at least r+2={self.r + 2}")
        if self.nvars < 1 or self.degree < 0:
            raise StructuralError("invalid series parameters")

    @classmethod
    def constant(cls, r: int, weight_bound: int, degree: int, nvars: int | None = None) -> GMSystem:
        """The system with ``N = 0`` (the action of ``t`` is diagonal)."""
        return cls(r, weight_bound, r if nvars is None else nvars, degree)

    @classmethod
    def shifted(cls, r: int, weight_bound: int, degree: int, nvars: int | None = None) -> GMSystem:
        """The system whose ``N`` is the shift matrix."""
        return cls(r, weight_bound, r if nvars is None else nvars, degree, shift_matrix(r))

    @property
    def dim(self) -> int:
        return self.r + 1

    @property
    def has_nilpotent(self) -> bool:
        return any(any(row) for row in self.nilpotent)

    # -- building blocks --------------------------------------------------

    def series(self, terms: Mapping | None = None) -> MultiSeries:
        return MultiSeries(self.nvars, self.degree, terms, self.ring)

    def scalar(self, value) -> MultiSeries:
        return MultiSeries.constant(value, self.nvars, self.degree, self.ring)

    def s(self, i: int) -> MultiSeries:
        return MultiSeries.variable(i, self.nvars, self.degree, self.ring)

    def hvector(self, coords: Sequence) -> HVector:
        """HVector from series or scalars (scalars become constants)."""
        if len(coords) != self.dim:
            raise StructuralError(f"expected {self.dim} coordinates, got {len(coords)}")
        out = []
        for c in coords:
            if isinstance(c, MultiSeries):
                if c.nvars != self.nvars or c.degree != self.degree:
                    raise StructuralError("coordinate series does not match the system")
                out.append(c)
            else:
                out.append(self.scalar(c))
        return HVector(tuple(out))

    def zero_hvector(self) -> HVector:
        z = self.series()
        return HVector((z,) * self.dim)

    def basis_hvector(self, j: int, coeff=None) -> HVector:
        if not 0 <= j <= self.r:
            raise StructuralError(f"basis index {j} outside 0..{self.r}")
        coeff = self.scalar(1) if coeff is None else coeff
        z = self.series()
        return HVector(tuple(coeff if i == j else z for i in range(self.dim)))

    def element(self, terms: Mapping[int, HVector] | None = None,
                valid_through: int | None = None) -> GMElement:
        return GMElement(self, terms or {}, self.weight_bound if valid_through is None else valid_through)

    def zero(self) -> GMElement:
        return self.element({})

    def basis_element(self, j: int, weight: int = 0, coeff=None) -> GMElement:
        """``coeff * dt^{-weight} e_j``."""
        return self.element({weight: self.basis_hvector(j, coeff)})


@dataclass(frozen=True)
class HVector:
    """Coordinates of an element of ``H (x) O_S`` on the basis ``e_0..e_r``."""

    coords: tuple

    def __post_init__(self):
        if not self.coords:
            raise StructuralError("empty HVector")
        first = self.coords[0]
        for c in self.coords[1:]:
            if c.nvars != first.nvars or c.degree != first.degree:
                raise StructuralError("HVector entries must share series parameters")

    def __len__(self):
        return len(self.coords)

    def __iter__(self) -> Iterator[MultiSeries]:
        return iter(self.coords)

    def __getitem__(self, j: int) -> MultiSeries:
        return self.coords[j]

    def __add__(self, other: HVector) -> HVector:
        if len(other) != len(self):
            raise StructuralError("HVector length mismatch")
        return HVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: HVector) -> HVector:
        if len(other) != len(self):
            raise StructuralError("HVector length mismatch")
        return HVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> HVector:
        return HVector(tuple(-a for a in self.coords))

    def scale(self, c) -> HVector:
        """Multiply every coordinate by a series or a scalar."""
        if isinstance(c, MultiSeries):
            return HVector(tuple(c * a for a in self.coords))
        return HVector(tuple(a.scale(c) for a in self.coords))

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def apply_matrix(self, m: Matrix) -> HVector:
        n = len(self.coords)
        out = []
        for i in range(n):
            acc = self.coords[0].like({})
            for j in range(n):
                if m[i][j]:
                    acc = acc + self.coords[j].scale(m[i][j])
            out.append(acc)
        return HVector(tuple(out))

    def at_origin(self) -> tuple:
        """Constant terms: the specialisation ``s = 0``."""
        return tuple(c.constant_term() for c in self.coords)

    def evaluate(self, point: Sequence) -> tuple:
        return tuple(c.evaluate(point) for c in self.coords)

    def map(self, fn) -> HVector:
        return HVector(tuple(fn(c) for c in self.coords))

    def __str__(self):
        return "[" + ", ".join(format_series(c) for c in self.coords) + "]"


class GMElement:
    """A weight-graded element of the Gauss-Manin system over the base."""

    __slots__ = ("system", "terms", "valid_through")

    def __init__(self, system: GMSystem, terms: Mapping[int, HVector], valid_through: int):
        K = system.weight_bound
        valid_through = min(valid_through, K)
        self.system = system
        self.terms = {w: v for w, v in terms.items() if w <= K and not v.is_zero()}
        bad = [w for w in self.terms if w > valid_through]
        if bad:
            # weights beyond the precision ledger carry no information
            for w in bad:
                del self.terms[w]
        self.valid_through = valid_through

    # -- inspection -------------------------------------------------------

    def weights(self) -> list[int]:
        return sorted(self.terms)

    def lowest_weight(self) -> int | None:
        return min(self.terms, default=None)

    def component(self, w: int) -> HVector:
        if w > self.valid_through:
            raise InsufficientPrecision(f"weight {w} requested, element known through {self.valid_through}")
        return self.terms.get(w) or self.system.zero_hvector()

    def is_zero(self) -> bool:
        return not self.terms

    def is_zero_through(self, bound: int) -> bool:
        if bound > self.valid_through:
            raise InsufficientPrecision(f"bound {bound} exceeds valid_through {self.valid_through}")
        return all(w > bound for w in self.terms)

    def equal_through(self, other: GMElement, bound: int) -> bool:
        """Equality of all components of weight ``<= bound``."""
        return (self - other).is_zero_through(bound)

    def __eq__(self, other):
        if not isinstance(other, GMElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def truncated(self, valid_through: int) -> GMElement:
        return GMElement(self.system, self.terms, min(valid_through, self.valid_through))

    # -- module structure -------------------------------------------------

    def _combine(self, other: GMElement, sign: int) -> GMElement:
        if other.system != self.system:
            raise StructuralError("elements belong to different systems")
        out = dict(self.terms)
        for w, v in other.terms.items():
            if w in out:
                out[w] = out[w] + v if sign > 0 else out[w] - v
            else:
                out[w] = v if sign > 0 else -v
        return GMElement(self.system, out, min(self.valid_through, other.valid_through))

    def __add__(self, other: GMElement) -> GMElement:
        return self._combine(other, 1)

    def __sub__(self, other: GMElement) -> GMElement:
        return self._combine(other, -1)

    def __neg__(self) -> GMElement:
        return GMElement(self.system, {w: -v for w, v in self.terms.items()}, self.valid_through)

    def scale(self, c) -> GMElement:
        """Multiply by a function on the base (series) or a scalar."""
        return GMElement(self.system, {w: v.scale(c) for w, v in self.terms.items()}, self.valid_through)

    __rmul__ = scale

    def shift(self, k: int) -> GMElement:
        """Apply ``dt^{-k}`` (``k`` may be negative)."""
        if k == 0:
            return self
        vt = self.valid_through + k
        return GMElement(self.system, {w + k: v for w, v in self.terms.items()}, vt)

    def map_vectors(self, fn) -> GMElement:
        return GMElement(self.system, {w: fn(v) for w, v in self.terms.items()}, self.valid_through)

    def at_origin(self) -> dict[int, tuple]:
        return {w: v.at_origin() for w, v in sorted(self.terms.items()) if any(v.at_origin())}

    # -- text -------------------------------------------------------------

    def to_text(self) -> str:
        """One line ``dt^<-w> : [c_0, ..., c_r]`` per stored weight."""
        if not self.terms:
            return "0"
        return "\n".join(f"dt^{-w} : {self.terms[w]}" for w in sorted(self.terms))

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GMElement(valid_through={self.valid_through}, {self.to_text()!r})"


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


def apply_dti(x: GMElement) -> GMElement:
    """``dt^{-1}``: shift every weight up by one."""
    return x.shift(1)


def apply_dt(x: GMElement) -> GMElement:
    """``dt``: shift every weight down by one (negative weights allowed)."""
    return x.shift(-1)


def apply_t(sys: GMSystem, x: GMElement) -> GMElement:
    """``t dt^{-w} v = dt^{-w-1} ((w+1) v + N v)``, extended O_S-linearly."""
    if x.system != sys:
        raise StructuralError("element does not belong to this system")
    nil = sys.nilpotent if sys.has_nilpotent else None
    out = {}
    for w, v in x.terms.items():
        image = v.scale(Fraction(w + 1))
        if nil is not None:
            image = image + v.apply_matrix(nil)
        out[w + 1] = image
    return GMElement(sys, out, x.valid_through + 1)


def apply_dsi(x: GMElement, i: int) -> GMElement:
    """``d/ds_i`` acting on coefficients (the flat basis is constant).

    Inherits the derivative caveat: series coefficients are exact only
    through degree ``N - 1`` afterwards.
    """
    if not 1 <= i <= x.system.nvars:
        raise StructuralError(f"variable index {i} outside 1..{x.system.nvars}")
    return x.map_vectors(lambda v: v.map(lambda c: c.derivative(i)))


def apply_dti_dsi(x: GMElement, i: int) -> GMElement:
    return apply_dti(apply_dsi(x, i))


def weight_component(x: GMElement, k: int) -> HVector:
    """Projection onto the graded piece of weight ``k`` (``dt^{-k}``)."""
    return x.component(k)


def apply_nilpotent(x: GMElement, power: int = 1) -> GMElement:
    """Apply ``N^power`` to every coordinate vector."""
    m = mat_pow(x.system.nilpotent, power)
    return x.map_vectors(lambda v: v.apply_matrix(m))


def nilpotent_term(sys: GMSystem, x: GMElement, i: int) -> GMElement:
    """``s_i dt^{1-i} N^i x``, the exponent of the i-th factor."""
    return apply_nilpotent(x, i).shift(i - 1).scale(sys.s(i))


def exp_nilpotent_apply(sys: GMSystem, x: GMElement, indices: Sequence[int] | None = None) -> GMElement:
    """``prod_i exp(s_i dt^{1-i} N^i) x`` for ``i = 1..r`` (in index order).

    Each exponential is a finite sum because ``N^{r+1} = 0``; the factors
    commute, so the order is immaterial mathematically.
    """
    if indices is None:
        indices = range(1, min(sys.r, sys.nvars) + 1)
    for i in indices:
        total = x
        term = x
        k = 1
        while True:
            term = nilpotent_term(sys, term, i).scale(Fraction(1, k))
            if term.is_zero():
                break
            total = total + term
            k += 1
        x = total
    return x

