"""Free modules with an integrable connection over truncated series rings.

The module is ``R^r`` and the connection is given by matrices ``A_1..A_n``
with ``D_i = d/dx_i + A_i``.  Integrability (zero curvature) is checked when
a :class:`Connection` is built; without it the operators ``D_i`` do not
commute and products of them are not well defined.
"""

from math import factorial

from ._rational import ZERO, Q, to_rational
from .series import (
    DimensionMismatch,
    PrecisionError,
    TruncatedSeries,
    _check_var,
    _mul_terms,
)

__all__ = [
    "ModuleVector",
    "SeriesMatrix",
    "Connection",
    "NonIntegrableError",
    "curvature",
    "apply_D",
    "apply_divided_D",
    "apply_DJ",
]


class NonIntegrableError(ValueError):
    """Raised for connection data with nonzero curvature.

    ``i`` and ``j`` are the 1-based variable pair, ``row``/``col`` the
    0-based matrix position of the first nonzero curvature entry and
    ``entry`` that entry as a series.
    """

    def __init__(self, i, j, row, col, entry):
        self.i, self.j, self.row, self.col, self.entry = i, j, row, col, entry
        super().__init__(
            f"connection is not integrable: curvature ({i},{j}) has entry "
            f"[{row}][{col}] = {entry.format()}"
        )


def _series_ring(entries):
    first = entries[0]
    for e in entries[1:]:
        if not e.same_ring(first):
            raise DimensionMismatch("entries live in different series rings")
    return first.n_vars, first.trunc_order


class ModuleVector:
    """Element of ``R^r``; all entries share ring and precision."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("a module vector needs at least one entry")
        _series_ring(entries)
        p = min(e.precision for e in entries)
        self.entries = tuple(e if e.precision == p else e.truncate(p) for e in entries)

    @classmethod
    def basis(cls, k, rank, n_vars, trunc_order):
        """Standard basis vector e_k (0-based k)."""
        return cls(
            TruncatedSeries.constant(1 if i == k else 0, n_vars, trunc_order)
            for i in range(rank)
        )

    @classmethod
    def zero(cls, rank, n_vars, trunc_order):
        return cls(TruncatedSeries.zero(n_vars, trunc_order) for _ in range(rank))

    @property
    def rank(self):
        return len(self.entries)

    @property
    def n_vars(self):
        return self.entries[0].n_vars

    @property
    def trunc_order(self):
        return self.entries[0].trunc_order

    @property
    def precision(self):
        return self.entries[0].precision

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def _check(self, other):
        if len(other.entries) != len(self.entries):
            raise DimensionMismatch(f"rank {len(self.entries)} vs {len(other.entries)}")

    def __add__(self, other):
        self._check(other)
        return ModuleVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other):
        self._check(other)
        return ModuleVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self):
        return ModuleVector(-a for a in self.entries)

    def __mul__(self, scalar):
        # scalar is a rational or a series; both act entrywise
        return ModuleVector(a * scalar for a in self.entries)

    def __rmul__(self, scalar):
        return self * scalar

    def shift(self, index):
        return ModuleVector(a.shift(index) for a in self.entries)

    def truncate(self, precision):
        return ModuleVector(a.truncate(precision) for a in self.entries)

    def constant_vector(self):
        return [a.eval_at_zero() for a in self.entries]

    def is_zero(self):
        return all(a.is_zero() for a in self.entries)

    def restrict_last(self):
        return ModuleVector(a.restrict_last() for a in self.entries)

    def equal_at(self, other, precision):
        self._check(other)
        return all(a.equal_at(b, precision) for a, b in zip(self.entries, other.entries))

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return len(self.entries) == len(other.entries) and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    __hash__ = None

    def __repr__(self):
        body = ", ".join(a.format() for a in self.entries)
        return f"ModuleVector([{body}], precision={self.precision})"

    def format(self):
        return [a.format() for a in self.entries]


class SeriesMatrix:
    """Dense matrix of truncated series (row-major tuple of tuples)."""

    __slots__ = ("entries",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        _series_ring([e for r in rows for e in r])
        self.entries = rows

    @classmethod
    def identity(cls, rank, n_vars, trunc_order):
        return cls(
            [TruncatedSeries.constant(1 if i == j else 0, n_vars, trunc_order) for j in range(rank)]
            for i in range(rank)
        )

    @classmethod
    def zeros(cls, rows, cols, n_vars, trunc_order):
        return cls(
            [TruncatedSeries.zero(n_vars, trunc_order) for _ in range(cols)] for _ in range(rows)
        )

    @classmethod
    def from_columns(cls, columns):
        columns = list(columns)
        return cls(zip(*(tuple(c) for c in columns)))

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0])

    @property
    def n_vars(self):
        return self.entries[0][0].n_vars

    @property
    def trunc_order(self):
        return self.entries[0][0].trunc_order

    @property
    def precision(self):
        return min(e.precision for r in self.entries for e in r)

    def __getitem__(self, pos):
        i, j = pos
        return self.entries[i][j]

    def column(self, j):
        return ModuleVector(r[j] for r in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def map(self, fn):
        return SeriesMatrix([fn(e) for e in r] for r in self.entries)

    def __add__(self, other):
        return SeriesMatrix(
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        )

    def __sub__(self, other):
        return SeriesMatrix(
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        )

    def __neg__(self):
        return self.map(lambda e: -e)

    def __matmul__(self, other):
        if isinstance(other, ModuleVector):
            return self.matvec(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = list(zip(*other.entries))
        return SeriesMatrix(
            [_dot(row, col) for col in cols] for row in self.entries
        )

    def matvec(self, m, precision=None):
        """``self @ m``, optionally computing only degrees ``<= precision``."""
        if self.cols != len(m):
            raise DimensionMismatch(f"{self.rows}x{self.cols} matrix on rank {len(m)} vector")
        return ModuleVector(_dot(row, m.entries, precision) for row in self.entries)

    def partial(self, i):
        return self.map(lambda e: e.partial(i))

    def truncate(self, precision):
        return self.map(lambda e: e.truncate(precision))

    def restrict_last(self):
        return self.map(lambda e: e.restrict_last())

    def eval_at_zero(self):
        """Constant-term matrix as a list of lists of rationals."""
        return [[e.eval_at_zero() for e in r] for r in self.entries]

    def is_zero(self):
        return all(e.is_zero() for r in self.entries for e in r)

    def first_nonzero(self):
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                if not e.is_zero():
                    return i, j, e
        return None

    def equal_at(self, other, precision):
        return all(
            a.equal_at(b, precision)
            for ra, rb in zip(self.entries, other.entries)
            for a, b in zip(ra, rb)
        )

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    __hash__ = None

    def format(self):
        return [[e.format() for e in r] for r in self.entries]

    def __repr__(self):
        return f"SeriesMatrix({self.format()!r})"


def _dot(row, col, precision=None):
    first = row[0]
    p = min(min(a.precision for a in row), min(b.precision for b in col))
    if precision is not None:
        p = min(p, precision)
    acc = {}
    for a, b in zip(row, col):
        for k, v in _mul_terms(a, b, p).items():
            acc[k] = acc.get(k, ZERO) + v
    terms = {k: v for k, v in acc.items() if v}
    return TruncatedSeries._raw(first.n_vars, first.trunc_order, p, terms)


def curvature(coeffs, i, j):
    """``d_i A_j - d_j A_i + A_i A_j - A_j A_i`` at precision d-1.

    ``coeffs`` is the raw list of connection matrices; no integrability is
    assumed.  ``i`` and ``j`` are 1-based and must differ.
    """
    if i == j:
        raise ValueError("curvature needs two distinct variables")
    a_i, a_j = coeffs[i - 1], coeffs[j - 1]
    n_vars = a_i.n_vars
    _check_var(i, n_vars)
    _check_var(j, n_vars)
    out = a_j.partial(i) - a_i.partial(j) + (a_i @ a_j) - (a_j @ a_i)
    return out.truncate(a_i.trunc_order - 1)


class Connection:
    """Integrable connection ``D_i = d/dx_i + A_i`` on a free module of rank r.

    All matrices must be square of the same size, live in one series ring
    with ``trunc_order >= 1`` and carry full precision.  Pass
    ``check=False`` only for data already known to be integrable.
    """

    def __init__(self, coeffs, check=True):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a connection needs at least one variable")
        mats = []
        for a in coeffs:
            if not isinstance(a, SeriesMatrix):
                a = SeriesMatrix(a)
            mats.append(a)
        first = mats[0]
        rank, n_vars, d = first.rows, first.n_vars, first.trunc_order
        if n_vars != len(mats):
            raise DimensionMismatch(f"{len(mats)} matrices for {n_vars} variables")
        if d < 1:
            raise ValueError("trunc_order must be at least 1")
        for a in mats:
            if (a.rows, a.cols) != (rank, rank):
                raise DimensionMismatch("connection matrices must all be rank x rank")
            if (a.n_vars, a.trunc_order) != (n_vars, d):
                raise DimensionMismatch("connection matrices live in different rings")
            if a.precision != d:
                raise PrecisionError("connection matrices must carry full precision")
        self.coeffs = tuple(mats)
        self.n_vars = n_vars
        self.rank = rank
        self.trunc_order = d
        if check:
            self.check_integrable()

    def check_integrable(self):
        for i in range(1, self.n_vars + 1):
            for j in range(i + 1, self.n_vars + 1):
                hit = curvature(self.coeffs, i, j).first_nonzero()
                if hit is not None:
                    raise NonIntegrableError(i, j, *hit)

    @classmethod
    def trivial(cls, n_vars, rank, trunc_order):
        zero = SeriesMatrix.zeros(rank, rank, n_vars, trunc_order)
        return cls([zero] * n_vars, check=False)

    def matrix(self, i):
        _check_var(i, self.n_vars)
        return self.coeffs[i - 1]

    def basis_vector(self, k):
        return ModuleVector.basis(k, self.rank, self.n_vars, self.trunc_order)

    def _check_vector(self, m):
        if len(m) != self.rank:
            raise DimensionMismatch(f"rank {len(m)} vector for rank {self.rank} connection")
        if (m.n_vars, m.trunc_order) != (self.n_vars, self.trunc_order):
            raise DimensionMismatch("vector lives in a different series ring")

    def apply_D(self, i, m):
        return apply_D(self, i, m)

    def __repr__(self):
        return f"Connection(n_vars={self.n_vars}, rank={self.rank}, trunc_order={self.trunc_order})"


def apply_D(C, i, m):
    """``D_i m = d_i m + A_i m``; precision drops by one."""
    _check_var(i, C.n_vars)
    C._check_vector(m)
    if m.precision < 1:
        raise PrecisionError("D_i needs precision >= 1")
    p = m.precision - 1
    am = C.coeffs[i - 1].matvec(m, precision=p)
    return ModuleVector(e.partial(i) + a for e, a in zip(m.entries, am.entries))


def apply_divided_D(C, i, j, m):
    """``D_i^(j) m = D_i^j m / j!``."""
    if j < 0:
        raise ValueError("divided power order must be non-negative")
    if j > m.precision:
        raise PrecisionError(f"D_{i}^({j}) needs precision >= {j}, vector has {m.precision}")
    C._check_vector(m)
    for _ in range(j):
        m = apply_D(C, i, m)
    if j > 1:
        m = m * Q(1, factorial(j))
    return m


def apply_DJ(C, J, m):
    """Divided-power product ``D^(J) m``, applying variable 1 first."""
    J = tuple(J)
    if len(J) != C.n_vars:
        raise DimensionMismatch(f"multi-index of length {len(J)} for {C.n_vars} variables")
    if sum(J) > m.precision:
        raise PrecisionError(f"D^{J} needs precision >= {sum(J)}, vector has {m.precision}")
    for i, j in enumerate(J, start=1):
        if j:
            m = apply_divided_D(C, i, j, m)
    return m


def matrix_from_rationals(rows, n_vars, trunc_order):
    """Constant SeriesMatrix from a nested list of rationals."""
    return SeriesMatrix(
        [TruncatedSeries.constant(to_rational(v), n_vars, trunc_order) for v in r] for r in rows
    )
