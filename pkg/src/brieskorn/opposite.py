"""Opposite filtrations induced by unipotent frames.

A frame is a unit lower-triangular matrix ``A`` with ``e_i = sum_j A[i][j] f_j``
where ``f_j`` (written ``e~_j`` in comments) is the new basis.  So ``f_j`` has
e-coordinates given by row ``j`` of ``A^{-1}``, and the f-coordinates of a
vector with e-coordinates ``x`` are ``A^T x``.

The filtration ``U^p H`` is spanned by ``f_j`` with ``j >= p``.  On weight ``w``
(``dt^{-w} H``) it is transported by the shift: ``U^p`` there is spanned by
``f_j`` with ``j >= p + w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, StructuralError
from .gmsystem import GMSystem, HVector, mat_mul
from .linalg import inverse, rank, solve_local
from .series import MultiSeries, as_rational

_ZERO = Fraction(0)


def _identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Frame:
    """Unit lower-triangular frame ``A`` together with its inverse."""

    A: tuple
    A_inv: tuple

    @property
    def r(self) -> int:
        return len(self.A) - 1

    @property
    def dim(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, r: int) -> Frame:
        return frame_from_matrix(_identity(r + 1))

    @classmethod
    def from_params(cls, r: int, alpha=0, beta=0, gamma=0) -> Frame:
        """The frame with ``A[1][0] = alpha``, ``A[2][0] = beta``, ``A[2][1] = gamma``
        and zeros elsewhere below the diagonal."""
        if r < 2:
            raise StructuralError("the (alpha, beta, gamma) shorthand needs r >= 2")
        rows = [list(row) for row in _identity(r + 1)]
        rows[1][0] = as_rational(alpha)
        rows[2][0] = as_rational(beta)
        rows[2][1] = as_rational(gamma)
        return frame_from_matrix(rows)

    @property
    def params(self) -> tuple:
        """``(alpha, beta, gamma)`` read off ``A``."""
        return self.A[1][0], self.A[2][0], self.A[2][1]

    def tilde_basis(self) -> tuple:
        """e-coordinates of ``f_0..f_r`` (the rows of ``A^{-1}``)."""
        return self.A_inv

    def tilde_vector(self, j: int) -> tuple:
        return self.A_inv[j]

    def to_tilde(self, coords: Sequence):
        """f-coordinates ``A^T x`` of a vector given in e-coordinates.

        Entries may be rationals or series."""
        n = self.dim
        if len(coords) != n:
            raise StructuralError(f"expected {n} coordinates")
        out = []
        for j in range(n):
            acc = None
            for i in range(j, n):
                a = self.A[i][j]
                if a == 0:
                    continue
                term = coords[i] * a if not isinstance(coords[i], MultiSeries) else coords[i].scale(a)
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else coords[0] * 0)
        return tuple(out)

    def from_tilde(self, coords: Sequence):
        """e-coordinates of a vector given in f-coordinates: ``A^{-T} y``."""
        n = self.dim
        out = []
        for i in range(n):
            acc = None
            for j in range(i, n):
                a = self.A_inv[j][i]
                if a == 0:
                    continue
                term = coords[j] * a if not isinstance(coords[j], MultiSeries) else coords[j].scale(a)
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else coords[0] * 0)
        return tuple(out)

    def compose(self, other: Frame) -> Frame:
        """The frame with matrix ``self.A @ other.A``."""
        if other.dim != self.dim:
            raise StructuralError("frames of different size")
        return frame_from_matrix(mat_mul(self.A, other.A))

    def __matmul__(self, other: Frame) -> Frame:
        return self.compose(other)

    def inverse(self) -> Frame:
        return Frame(self.A_inv, self.A)

    def lower_entries(self) -> dict:
        """Strictly-lower entries ``{(i, j): A[i][j]}``."""
        return {(i, j): self.A[i][j] for i in range(self.dim) for j in range(i)}

    def with_entries(self, entries) -> Frame:
        rows = [list(row) for row in self.A]
        for (i, j), v in dict(entries).items():
            if not i > j:
                raise StructuralError(f"entry ({i}, {j}) is not strictly lower")
            rows[i][j] = as_rational(v)
        return frame_from_matrix(rows)


def frame_from_matrix(A) -> Frame:
    """Validate a unit lower-triangular matrix and cache its inverse."""
    rows = [list(row) for row in A]
    n = len(rows)
    if n < 2 or any(len(row) != n for row in rows):
        raise DomainError("frame must be a square matrix of size at least 2")
    rows = tuple(tuple(as_rational(x) for x in row) for row in rows)
    for i in range(n):
        if rows[i][i] != 1:
            raise DomainError(f"frame diagonal entry ({i}, {i}) is {rows[i][i]}, not 1")
        for j in range(i + 1, n):
            if rows[i][j] != 0:
                raise DomainError(f"frame entry ({i}, {j}) above the diagonal is nonzero")
    return Frame(rows, inverse(rows))


# ---------------------------------------------------------------------------
# U-filtration and oppositeness
# ---------------------------------------------------------------------------


def u_subspace(frame: Frame, w: int, p: int) -> list[tuple]:
    """Basis of ``U^p`` on weight ``w``: ``f_j`` for ``j >= p + w``."""
    if w < 0:
        raise StructuralError("weight must be non-negative")
    start = max(p + w, 0)
    return [frame.A_inv[j] for j in range(start, frame.dim)]


@dataclass
class OppositenessCertificate:
    opposite: bool
    ranks: dict
    failing_p: int | None = None

    def __bool__(self):
        return self.opposite


def is_opposite(frame: Frame, hodge_flag: Sequence[Sequence[Sequence]]) -> OppositenessCertificate:
    """Check ``F_p + U^{p+1} = H`` for every ``p``.

    ``hodge_flag[p]`` is a rational basis of ``F_p H`` at ``s = 0``.  The sum is
    direct exactly when the concatenated rows have full rank ``r + 1``.
    """
    n = frame.dim
    ranks = {}
    for p, fbasis in enumerate(hodge_flag):
        rows = [list(v) for v in fbasis] + [list(frame.A_inv[j]) for j in range(p + 1, n)]
        k = rank(rows) if rows else 0
        ranks[p] = k
        if len(rows) != n or k != n:
            return OppositenessCertificate(False, ranks, p)
    return OppositenessCertificate(True, ranks)


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------


@dataclass
class SplitResult:
    f_part: HVector
    u_part: HVector
    f_coeffs: list
    u_coeffs: list


def split(sys: GMSystem, x: HVector, f_basis: Sequence[HVector], u_basis: Sequence, order=None) -> SplitResult:
    """Write ``x = f + u`` with ``f`` in the span of ``f_basis`` and ``u`` in the
    span of ``u_basis``, over the truncated series ring."""
    fb = [b if isinstance(b, HVector) else sys.hvector(b) for b in f_basis]
    ub = [b if isinstance(b, HVector) else sys.hvector(b) for b in u_basis]
    if len(fb) + len(ub) != sys.dim:
        raise DomainError(f"{len(fb)} + {len(ub)} basis vectors cannot split a space of dimension {sys.dim}")
    cols = [b.coords for b in fb + ub]
    if order == "reversed":
        order = list(range(len(cols)))[::-1]
    try:
        coeffs = solve_local(cols, x.coords, list(range(sys.dim)), order)
    except DomainError:
        raise DomainError("F and U bases do not span at the origin") from None
    fc, uc = coeffs[:len(fb)], coeffs[len(fb):]
    f = sys.zero_hvector()
    for b, c in zip(fb, fc):
        f = f + b.scale(c)
    return SplitResult(f, x - f, fc, uc)
