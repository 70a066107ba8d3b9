"""Truncated multivariate power series with exact coefficients.

Series are truncated by *total* degree: a :class:`MultiSeries` with
``degree == N`` stores only monomials ``s1^a1 ... sr^ar`` with
``a1 + ... + ar <= N``.  Coefficients live in a pluggable commutative ring;
two rings ship with the package:

* :data:`QQ` -- the rationals, backed by :class:`fractions.Fraction`;
* :class:`PolyRing` -- polynomials over the rationals in named
  indeterminates, used for symbolic orbit computations.

Everything here is immutable.  The text form used in reports and
configuration files is ``c * s1^a1 * ... * sr^ar`` terms joined by ``+``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from operator import add
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, SeriesParseError, StructuralError

Rational = Fraction
Exponent = tuple


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently corrupt exact data.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SeriesParseError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Coefficient rings
# ---------------------------------------------------------------------------


class RationalField:
    """The field of rationals as a coefficient ring."""

    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value) -> Fraction:
        return as_rational(value)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def negate(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def is_unit(self, a) -> bool:
        return bool(a)

    def invert(self, a) -> Fraction:
        if not a:
            raise DomainError("zero is not invertible")
        return 1 / a

    def format(self, a) -> str:
        return format_rational(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


class PolyRing:
    """Polynomials over QQ in a fixed, ordered tuple of indeterminates."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise StructuralError(f"repeated indeterminate in {names}")
        self.names = names
        self.nvars = len(names)
        self.zero = PolyElement(self, {})
        self.one = PolyElement(self, {(0,) * self.nvars: Fraction(1)})
        self._invert_log: list | None = None

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.names == self.names

    def __hash__(self):
        return hash(("PolyRing", self.names))

    def gen(self, name: str) -> PolyElement:
        try:
            i = self.names.index(name)
        except ValueError:
            raise StructuralError(f"{name!r} is not an indeterminate of {self}") from None
        e = [0] * self.nvars
        e[i] = 1
        return PolyElement(self, {tuple(e): Fraction(1)})

    def gens(self) -> tuple[PolyElement, ...]:
        return tuple(self.gen(n) for n in self.names)

    def coerce(self, value) -> PolyElement:
        if isinstance(value, PolyElement):
            if value.ring != self:
                raise StructuralError(f"element of {value.ring} used in {self}")
            return value
        q = as_rational(value)
        if not q:
            return self.zero
        return PolyElement(self, {(0,) * self.nvars: q})

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def negate(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def is_unit(self, a) -> bool:
        return a.is_constant() and bool(a.constant_term())

    def invert(self, a) -> PolyElement:
        # units of QQ[x...] are the nonzero constants
        if not self.is_unit(a):
            raise DomainError(f"{a} is not a unit of {self}")
        c = a.constant_term()
        if self._invert_log is not None:
            self._invert_log.append(c)
        return self.coerce(1 / c)

    def format(self, a) -> str:
        return str(a) if len(a.terms) <= 1 else f"({a})"


class PolyElement:
    """A polynomial over QQ; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    def _lift(self, other):
        if isinstance(other, PolyElement):
            if other.ring != self.ring:
                raise StructuralError(f"cannot mix {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return PolyElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(map(add, ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return PolyElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        q = as_rational(other)
        if not q:
            raise ZeroDivisionError("division of a polynomial by zero")
        return PolyElement(self.ring, {e: c / q for e, c in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PolyElement):
            return other.ring == self.ring and other.terms == self.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def derivative(self, name: str) -> PolyElement:
        i = self.ring.names.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return PolyElement(self.ring, out)

    def evaluate(self, values: Mapping[str, object]):
        """Substitute values for indeterminates.

        Indeterminates missing from ``values`` are kept.  If all are
        substituted the result is a Fraction, otherwise a PolyElement.
        """
        idx = {n: i for i, n in enumerate(self.ring.names)}
        for n in values:
            if n not in idx:
                raise StructuralError(f"unknown indeterminate {n!r}")
        if all(n in values for n in self.ring.names):
            vals = [as_rational(values[n]) for n in self.ring.names]
            total = Fraction(0)
            for e, c in self.terms.items():
                term = c
                for v, a in zip(vals, e):
                    if a:
                        term *= v**a
                total += term
            return total
        result = self.ring.zero
        for e, c in self.terms.items():
            term = self.ring.coerce(c)
            for n, a in zip(self.ring.names, e):
                if not a:
                    continue
                term = term * (self.ring.coerce(values[n]) ** a if n in values else self.ring.gen(n) ** a)
            result = result + term
        return result

    def __repr__(self):
        return f"PolyElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        # lexicographic monomial order, highest first
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(self.ring.names, e) if a)
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


def _degree_key(e: tuple) -> tuple:
    return (sum(e), tuple(-a for a in e))


class MultiSeries:
    """A power series in ``s1..s_nvars`` truncated at total degree ``degree``.

    Construct with a mapping from exponent tuples to coefficients; terms of
    total degree above the bound and zero coefficients are discarded, so
    structural equality is mathematical equality of the retained terms.
    """

    __slots__ = ("nvars", "degree", "ring", "terms", "_by_degree")

    def __init__(self, nvars: int, degree: int, terms: Mapping | None = None, ring=QQ):
        if nvars < 1:
            raise StructuralError("a series needs at least one variable")
        if degree < 0:
            raise StructuralError("degree bound must be non-negative")
        self.nvars = nvars
        self.degree = degree
        self.ring = ring
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise StructuralError(f"exponent {e} does not have {nvars} entries")
                if sum(e) > degree or any(a < 0 for a in e):
                    if any(a < 0 for a in e):
                        raise StructuralError(f"negative exponent in {e}")
                    continue
                if not isinstance(c, (Fraction, PolyElement)):
                    c = ring.coerce(c)
                if c:
                    clean[e] = c
        self.terms = clean
        self._by_degree = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int, ring=QQ) -> MultiSeries:
        return cls(nvars, degree, {}, ring)

    @classmethod
    def constant(cls, value, nvars: int, degree: int, ring=QQ) -> MultiSeries:
        return cls(nvars, degree, {(0,) * nvars: ring.coerce(value)}, ring)

    @classmethod
    def variable(cls, i: int, nvars: int, degree: int, ring=QQ) -> MultiSeries:
        """The coordinate function ``s_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise StructuralError(f"variable index {i} outside 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(nvars, degree, {tuple(e): ring.one}, ring)

    @classmethod
    def univariate(cls, coeffs: Sequence, degree: int | None = None, *, var: int = 1,
                   nvars: int = 1, ring=QQ) -> MultiSeries:
        """Series ``sum_k coeffs[k] * s_var^k``."""
        if degree is None:
            degree = max(len(coeffs) - 1, 0)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * nvars
            e[var - 1] = k
            terms[tuple(e)] = ring.coerce(c)
        return cls(nvars, degree, terms, ring)

    def like(self, terms: Mapping) -> MultiSeries:
        """A series with this one's variable count, bound and ring."""
        out = MultiSeries.__new__(MultiSeries)
        out.nvars, out.degree, out.ring = self.nvars, self.degree, self.ring
        out.terms = {e: c for e, c in terms.items() if c}
        out._by_degree = None
        return out

    # -- inspection -------------------------------------------------------

    def _check(self, other: MultiSeries):
        if self.nvars != other.nvars:
            raise StructuralError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        if self.degree != other.degree:
            raise StructuralError(f"degree bound mismatch: {self.degree} vs {other.degree}")
        if self.ring != other.ring:
            raise StructuralError(f"coefficient ring mismatch: {self.ring} vs {other.ring}")

    def _coerce_operand(self, other):
        if isinstance(other, MultiSeries):
            self._check(other)
            return other
        return None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.ring.zero)

    def coefficient(self, exponent: Sequence[int]):
        return self.terms.get(tuple(exponent), self.ring.zero)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.constant_term())

    def order(self) -> int:
        """Lowest total degree present (``degree + 1`` for the zero series)."""
        return min((sum(e) for e in self.terms), default=self.degree + 1)

    def variables_used(self) -> set[int]:
        return {i + 1 for e in self.terms for i, a in enumerate(e) if a}

    def __eq__(self, other):
        if isinstance(other, MultiSeries):
            return (self.nvars == other.nvars and self.degree == other.degree
                    and self.terms == other.terms)
        if isinstance(other, (int, Fraction, PolyElement)) and not isinstance(other, bool):
            return self == MultiSeries.constant(other, self.nvars, self.degree, self.ring)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            if isinstance(other, (int, Fraction, PolyElement)) and not isinstance(other, bool):
                o = MultiSeries.constant(other, self.nvars, self.degree, self.ring)
            else:
                return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return self.like(out)

    __radd__ = __add__

    def __neg__(self):
        return self.like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, MultiSeries) or isinstance(other, (int, Fraction, PolyElement)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> MultiSeries:
        """Multiply every coefficient by a ring element."""
        if not isinstance(c, (Fraction, PolyElement)):
            c = self.ring.coerce(c)
        if not c:
            return self.like({})
        return self.like({e: a * c for e, a in self.terms.items()})

    def _graded(self):
        if self._by_degree is None:
            self._by_degree = sorted(((sum(e), e, c) for e, c in self.terms.items()),
                                     key=lambda t: t[0])
        return self._by_degree

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            if isinstance(other, (int, Fraction, PolyElement)) and not isinstance(other, bool):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        N = self.degree
        out: dict = {}
        right = other._graded()
        for da, ea, ca in self._graded():
            room = N - da
            if room < 0:
                break
            for db, eb, cb in right:
                if db > room:
                    break
                e = tuple(map(add, ea, eb))
                v = ca * cb
                if e in out:
                    out[e] = out[e] + v
                else:
                    out[e] = v
        return self.like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers")
        result = MultiSeries.constant(self.ring.one, self.nvars, self.degree, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, degree: int) -> MultiSeries:
        """Drop terms above ``degree`` while keeping the recorded bound."""
        return self.like({e: c for e, c in self.terms.items() if sum(e) <= degree})

    def with_degree(self, degree: int) -> MultiSeries:
        """Re-bound the series (terms above the new bound are dropped)."""
        return MultiSeries(self.nvars, degree, self.terms, self.ring)

    def with_ring(self, ring) -> MultiSeries:
        return MultiSeries(self.nvars, self.degree,
                           {e: ring.coerce(c) for e, c in self.terms.items()}, ring)

    def embed(self, nvars: int, positions: Sequence[int] | None = None) -> MultiSeries:
        """View this series in a larger variable set.

        ``positions[k]`` is the 1-based target index of variable ``k+1``;
        the default keeps variables in place.
        """
        if positions is None:
            positions = range(1, self.nvars + 1)
        positions = list(positions)
        if len(positions) != self.nvars or any(not 1 <= p <= nvars for p in positions):
            raise StructuralError("invalid variable embedding")
        out = {}
        for e, c in self.terms.items():
            f = [0] * nvars
            for a, p in zip(e, positions):
                f[p - 1] += a
            out[tuple(f)] = c
        return MultiSeries(nvars, self.degree, out, self.ring)

    def restrict(self, keep: Iterable[int]) -> MultiSeries:
        """Set every variable outside ``keep`` (1-based) to zero; the result
        is univariate in the single kept variable when ``len(keep) == 1``."""
        keep = sorted(keep)
        out = {}
        for e, c in self.terms.items():
            if any(a for i, a in enumerate(e) if i + 1 not in keep):
                continue
            out[tuple(e[i - 1] for i in keep)] = c
        return MultiSeries(len(keep), self.degree, out, self.ring)

    def evaluate(self, point: Sequence):
        """Value of the truncated series (a polynomial) at ``point``."""
        if len(point) != self.nvars:
            raise StructuralError(f"point has {len(point)} coordinates, expected {self.nvars}")
        vals = [self.ring.coerce(p) for p in point]
        total = self.ring.zero
        for e, c in self.terms.items():
            term = c
            for v, a in zip(vals, e):
                if a:
                    term = term * v**a
            total = total + term
        return total

    def map_coefficients(self, fn) -> MultiSeries:
        return self.like({e: fn(c) for e, c in self.terms.items()})

    def univariate_coefficients(self) -> list:
        """Coefficient list ``[c0, ..., cN]`` of a one-variable series."""
        if self.nvars != 1:
            raise StructuralError("series is not univariate")
        return [self.terms.get((k,), self.ring.zero) for k in range(self.degree + 1)]

    # -- calculus ---------------------------------------------------------

    def inverse(self) -> MultiSeries:
        return unit_inverse(self)

    def derivative(self, i: int) -> MultiSeries:
        return partial_derivative(self, i)

    def compose(self, f: MultiSeries) -> MultiSeries:
        return compose_univariate(self, f)

    def compositional_inverse(self) -> MultiSeries:
        return compositional_inverse(self)

    # -- text -------------------------------------------------------------

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"MultiSeries(nvars={self.nvars}, degree={self.degree}, '{format_series(self)}')"


def unit_inverse(f: MultiSeries) -> MultiSeries:
    """The multiplicative inverse of ``f`` modulo total degree ``N``.

    Requires the constant term to be a unit of the coefficient ring.
    """
    c0 = f.constant_term()
    if not f.ring.is_unit(c0):
        raise DomainError(f"constant term {c0} is not a unit; series not invertible")
    inv0 = f.ring.invert(c0)
    one = MultiSeries.constant(f.ring.one, f.nvars, f.degree, f.ring)
    # f = c0 (1 + q) with q(0) = 0;  1/f = inv0 * (1 - q + q^2 - ...)
    q = f.scale(inv0) - one
    if q.is_zero():
        return one.scale(inv0)
    neg_q = -q
    result = one
    for _ in range(f.degree):
        result = one + neg_q * result
    return result.scale(inv0)


def partial_derivative(f: MultiSeries, i: int) -> MultiSeries:
    """Termwise derivative in ``s_i`` (1-based).

    The recorded degree bound is *not* lowered: coefficients of total degree
    ``N`` in the result are incomplete, so compare derivatives through
    degree ``N - 1`` only.
    """
    if not 1 <= i <= f.nvars:
        raise StructuralError(f"variable index {i} outside 1..{f.nvars}")
    k = i - 1
    out = {}
    for e, c in f.terms.items():
        a = e[k]
        if a:
            g = list(e)
            g[k] = a - 1
            out[tuple(g)] = c * a
    return f.like(out)


def compose_univariate(g: MultiSeries, f: MultiSeries) -> MultiSeries:
    """``g(f)`` for a one-variable ``g`` and an ``f`` with zero constant term.

    Horner evaluation; the result carries ``min(g.degree, f.degree)`` as its
    bound, which is exact because ``f`` has order at least one.
    """
    if g.nvars != 1:
        raise StructuralError("outer series of a composition must be univariate")
    if g.ring != f.ring:
        raise StructuralError(f"coefficient ring mismatch: {g.ring} vs {f.ring}")
    if f.constant_term():
        raise DomainError("inner series of a composition must have zero constant term")
    N = min(g.degree, f.degree)
    f = f.with_degree(N) if f.degree != N else f
    coeffs = g.univariate_coefficients()[: N + 1]
    result = MultiSeries.zero(f.nvars, N, f.ring)
    for c in reversed(coeffs):
        result = result * f
        if c:
            result = result + MultiSeries.constant(c, f.nvars, N, f.ring)
    return result


def compositional_inverse(f: MultiSeries) -> MultiSeries:
    """The series ``g`` with ``f(g(y)) = y`` modulo ``y^(N+1)``.

    For ``f = a1 x + a2 x^2 + ...`` the coefficients ``b_k`` of the inverse
    of ``f / a1`` are found by increasing induction on ``k``: ``b_k`` is
    minus the ``x^k`` coefficient of ``sum_{i<k} b_i (f/a1)^i``.  The
    normalisation by ``a1`` is undone at the end.
    """
    if f.nvars != 1:
        raise StructuralError("compositional inverse needs a univariate series")
    ring, N = f.ring, f.degree
    coeffs = f.univariate_coefficients()
    if coeffs[0]:
        raise DomainError("series must vanish at the origin to be inverted")
    a1 = coeffs[1] if N >= 1 else ring.zero
    if not ring.is_unit(a1):
        raise DomainError("linear coefficient must be a unit")
    inv_a1 = ring.invert(a1)
    F = f.scale(inv_a1)  # linear coefficient 1
    b = [ring.zero] * (N + 1)
    if N >= 1:
        b[1] = ring.one
    acc = F if N >= 1 else MultiSeries.zero(1, N, ring)  # sum_{i<k} b_i F^i
    power = F
    for k in range(2, N + 1):
        b[k] = -acc.coefficient((k,))
        power = power * F  # F^k
        if b[k]:
            acc = acc + power.scale(b[k])
    # g(y) = G(y / a1) where G has coefficients b
    out = {}
    scale = ring.one
    for k in range(1, N + 1):
        scale = scale * inv_a1
        if b[k]:
            out[(k,)] = b[k] * scale
    return MultiSeries(1, N, out, ring)


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------


def format_series(f: MultiSeries, names: Sequence[str] | None = None) -> str:
    """Canonical text: ``c * s1^a1 * ... * sr^ar`` terms joined by `` + ``.

    Terms are ordered by total degree, then with higher powers of earlier
    variables first.  Exponent 1 is written without ``^1``.
    """
    if not f.terms:
        return "0"
    if names is None:
        names = [f"s{i}" for i in range(1, f.nvars + 1)]
    parts = []
    for e in sorted(f.terms, key=_degree_key):
        c = f.terms[e]
        factors = [f.ring.format(c)]
        factors += [n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a]
        parts.append(" * ".join(factors))
    return " + ".join(parts)


_VAR = re.compile(r"s(\d+)(?:\^(\d+))?$")


def parse_series(text: str, nvars: int, degree: int, ring=QQ) -> MultiSeries:
    """Parse the canonical text form (rational coefficients only).

    Accepts ``+``-joined terms, each a ``*``-product of one optional
    rational (``p`` or ``p/q``, optionally signed) and factors ``s<i>`` or
    ``s<i>^<a>``.  A ``-`` between terms is read as ``+ -``.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise SeriesParseError("empty series literal")
    s = re.sub(r"(?<=[^+*/^])-", "+-", s)
    terms: dict = {}
    for raw in s.split("+"):
        if not raw:
            raise SeriesParseError(f"empty term in {text!r}")
        coeff = Fraction(1)
        exps = [0] * nvars
        for factor in raw.split("*"):
            if not factor:
                raise SeriesParseError(f"empty factor in term {raw!r}")
            sign = 1
            body = factor
            if body.startswith("-") and not re.fullmatch(r"-\d+(/\d+)?", body):
                sign, body = -1, body[1:]
            m = _VAR.match(body)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= nvars:
                    raise SeriesParseError(f"variable s{i} outside s1..s{nvars}")
                exps[i - 1] += int(m.group(2) or 1)
                coeff *= sign
                continue
            if not re.fullmatch(r"-?\d+(/\d+)?", factor):
                raise SeriesParseError(f"cannot parse factor {factor!r}")
            try:
                coeff *= Fraction(factor)
            except ZeroDivisionError as exc:
                raise SeriesParseError(f"zero denominator in {factor!r}") from exc
        e = tuple(exps)
        terms[e] = terms.get(e, Fraction(0)) + coeff
    out = MultiSeries(nvars, degree, terms)
    return out if ring == QQ else out.with_ring(ring)


def all_exponents(nvars: int, degree: int) -> list[tuple]:
    """Every exponent tuple of total degree at most ``degree``."""
    return sorted((e for e in product(range(degree + 1), repeat=nvars) if sum(e) <= degree),
                  key=_degree_key)
