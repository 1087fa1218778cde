"""Truncated multivariate power series over exact rationals.

A :class:`TruncatedSeries` is an element of ``Q[x1..xn] / m^(d+1)`` together
with a precision ``p <= d``: coefficients of total degree ``<= p`` are exact,
everything above is unknown and is not stored.  Differentiation costs one
order of precision, multiplication keeps the smaller of the two.

Multi-indices are plain tuples of non-negative ints, one slot per variable.
Variable indices in the public API are 1-based (``x1`` is variable 1).
"""

from itertools import combinations_with_replacement
from operator import add as _add

from ._rational import ONE, ZERO, to_rational

__all__ = [
    "TruncatedSeries",
    "DimensionMismatch",
    "PrecisionError",
    "degree",
    "multi_indices",
    "graded_lex_key",
    "add",
    "mul",
    "partial",
    "eval_at_zero",
    "restrict_last",
]


class DimensionMismatch(ValueError):
    """Operands live in different rings (n_vars or trunc_order differ)."""


class PrecisionError(ValueError):
    """An operation needs more known orders than the operand carries."""


def degree(index):
    return sum(index)


def graded_lex_key(index):
    """Sort key: total degree first, then x1 before x2 before ..."""
    return (sum(index), tuple(-j for j in index))


def multi_indices(n_vars, max_degree, min_degree=0):
    """All exponent tuples of length ``n_vars`` with degree in range, graded-lex."""
    out = []
    for deg in range(min_degree, max_degree + 1):
        block = []
        for combo in combinations_with_replacement(range(n_vars), deg):
            exps = [0] * n_vars
            for v in combo:
                exps[v] += 1
            block.append(tuple(exps))
        if n_vars == 0 and deg > 0:
            block = []
        block.sort(key=graded_lex_key)
        out.extend(block)
    return out


class TruncatedSeries:
    """Immutable truncated power series.

    ``terms`` maps exponent tuples to nonzero rationals and must not be
    mutated by callers.  Equality compares coefficients up to the smaller of
    the two precisions, so a series with precision 2 equals any
    continuation of it.
    """

    __slots__ = ("n_vars", "trunc_order", "precision", "terms", "_graded")

    def __init__(self, n_vars, trunc_order, terms=None, precision=None):
        if n_vars < 0 or trunc_order < 0:
            raise ValueError("n_vars and trunc_order must be non-negative")
        if precision is None:
            precision = trunc_order
        if not 0 <= precision <= trunc_order:
            raise ValueError(f"precision {precision} outside [0, {trunc_order}]")
        clean = {}
        for index, coeff in (terms or {}).items():
            index = tuple(int(j) for j in index)
            if len(index) != n_vars or any(j < 0 for j in index):
                raise ValueError(f"bad exponent tuple {index} for {n_vars} variables")
            if sum(index) > precision:
                continue
            coeff = to_rational(coeff)
            if coeff:
                clean[index] = clean.get(index, ZERO) + coeff
        self.n_vars = n_vars
        self.trunc_order = trunc_order
        self.precision = precision
        self.terms = {k: v for k, v in clean.items() if v}
        self._graded = None

    @classmethod
    def _raw(cls, n_vars, trunc_order, precision, terms):
        # trusted constructor: terms already canonical and within precision
        obj = cls.__new__(cls)
        obj.n_vars = n_vars
        obj.trunc_order = trunc_order
        obj.precision = precision
        obj.terms = terms
        obj._graded = None
        return obj

    def graded_terms(self):
        """Terms bucketed by total degree: list index = degree (cached)."""
        if self._graded is None:
            buckets = [[] for _ in range(self.precision + 1)]
            for k, v in self.terms.items():
                buckets[sum(k)].append((k, v))
            self._graded = buckets
        return self._graded

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n_vars, trunc_order, precision=None):
        p = trunc_order if precision is None else precision
        return cls._raw(n_vars, trunc_order, p, {})

    @classmethod
    def constant(cls, value, n_vars, trunc_order):
        value = to_rational(value)
        terms = {(0,) * n_vars: value} if value else {}
        return cls._raw(n_vars, trunc_order, trunc_order, terms)

    @classmethod
    def monomial(cls, index, n_vars, trunc_order, coeff=1):
        return cls(n_vars, trunc_order, {tuple(index): coeff})

    @classmethod
    def variable(cls, i, n_vars, trunc_order):
        _check_var(i, n_vars)
        index = [0] * n_vars
        index[i - 1] = 1
        return cls(n_vars, trunc_order, {tuple(index): 1})

    # -- inspection -------------------------------------------------------

    def coefficient(self, index):
        return self.terms.get(tuple(index), ZERO)

    def eval_at_zero(self):
        return self.terms.get((0,) * self.n_vars, ZERO)

    def is_zero(self):
        return not self.terms

    def valuation(self):
        """Lowest degree with a nonzero coefficient, or None for zero."""
        return min((sum(k) for k in self.terms), default=None)

    def homogeneous_part(self, deg):
        terms = {k: v for k, v in self.terms.items() if sum(k) == deg}
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, self.precision, terms)

    def same_ring(self, other):
        return self.n_vars == other.n_vars and self.trunc_order == other.trunc_order

    def _check_ring(self, other):
        if not self.same_ring(other):
            raise DimensionMismatch(
                f"ring (n={self.n_vars}, d={self.trunc_order}) vs "
                f"(n={other.n_vars}, d={other.trunc_order})"
            )

    def equal_at(self, other, precision):
        """Coefficient equality in every degree ``<= precision``."""
        self._check_ring(other)
        if precision > min(self.precision, other.precision):
            raise PrecisionError(
                f"cannot compare at precision {precision}; operands carry "
                f"{self.precision} and {other.precision}"
            )
        a = {k: v for k, v in self.terms.items() if sum(k) <= precision}
        b = {k: v for k, v in other.terms.items() if sum(k) <= precision}
        return a == b

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            if not self.same_ring(other):
                return False
            return self.equal_at(other, min(self.precision, other.precision))
        if isinstance(other, int) or hasattr(other, "denominator"):
            return self == TruncatedSeries.constant(other, self.n_vars, self.trunc_order)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return (
            f"TruncatedSeries({self.format()!r}, n_vars={self.n_vars}, "
            f"trunc_order={self.trunc_order}, precision={self.precision})"
        )

    def __str__(self):
        return self.format()

    def format(self):
        """Render in the expression grammar accepted by :func:`parse_series`."""
        from .parser import format_series

        return format_series(self)

    # -- precision management --------------------------------------------

    def truncate(self, precision):
        """Forget coefficients above ``precision``."""
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} to {precision}")
        if precision < 0:
            raise PrecisionError("precision exhausted")
        terms = {k: v for k, v in self.terms.items() if sum(k) <= precision}
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, precision, terms)

    def with_order(self, trunc_order):
        """Move to the ring truncated at ``trunc_order`` (precision clipped)."""
        p = min(self.precision, trunc_order)
        terms = {k: v for k, v in self.terms.items() if sum(k) <= p}
        return TruncatedSeries._raw(self.n_vars, trunc_order, p, terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_ring(other)
            return other
        return TruncatedSeries.constant(other, self.n_vars, self.trunc_order)

    def __add__(self, other):
        other = self._coerce(other)
        p = min(self.precision, other.precision)
        terms = {k: v for k, v in self.terms.items() if sum(k) <= p}
        for k, v in other.terms.items():
            if sum(k) <= p:
                s = terms.get(k, ZERO) + v
                if s:
                    terms[k] = s
                else:
                    terms.pop(k, None)
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, p, terms)

    __radd__ = __add__

    def __neg__(self):
        terms = {k: -v for k, v in self.terms.items()}
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, self.precision, terms)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = to_rational(c)
        if not c:
            return TruncatedSeries.zero(self.n_vars, self.trunc_order, self.precision)
        terms = {k: v * c for k, v in self.terms.items()}
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, self.precision, terms)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_ring(other)
        p = min(self.precision, other.precision)
        terms = _mul_terms(self, other, p)
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, p, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, index):
        """Multiply by the monomial ``x^index``.

        The monomial is exact, so the known range moves up with it: the
        result has precision ``min(trunc_order, precision + |index|)``.
        """
        index = tuple(index)
        if len(index) != self.n_vars:
            raise DimensionMismatch(f"multi-index {index} for {self.n_vars} variables")
        s = sum(index)
        d = self.trunc_order
        p = min(d, self.precision + s)
        terms = {}
        for k, v in self.terms.items():
            if sum(k) + s <= d:
                terms[tuple(map(_add, k, index))] = v
        return TruncatedSeries._raw(self.n_vars, d, p, terms)

    def partial(self, i):
        """Formal derivative in variable ``i`` (1-based); precision drops by one."""
        _check_var(i, self.n_vars)
        if self.precision < 1:
            raise PrecisionError("partial needs precision >= 1")
        v = i - 1
        terms = {}
        for k, c in self.terms.items():
            e = k[v]
            if e:
                terms[k[:v] + (e - 1,) + k[v + 1:]] = c * e
        return TruncatedSeries._raw(self.n_vars, self.trunc_order, self.precision - 1, terms)

    def divided_derivative_at_zero(self, index):
        """``prod 1/j_i! (d/dx_i)^j_i f`` at 0, which is the coefficient of x^index."""
        return self.coefficient(index)

    def restrict_last(self):
        """Image under the map killing the last variable (drops its slot)."""
        if self.n_vars < 1:
            raise DimensionMismatch("cannot restrict a series in zero variables")
        terms = {k[:-1]: v for k, v in self.terms.items() if k[-1] == 0}
        return TruncatedSeries._raw(self.n_vars - 1, self.trunc_order, self.precision, terms)


def _check_var(i, n_vars):
    if not isinstance(i, int) or not 1 <= i <= n_vars:
        raise IndexError(f"variable index {i} outside 1..{n_vars}")


def _mul_terms(a, b, p):
    """Cauchy product of two series, keeping total degree <= p."""
    ga = a.graded_terms()
    gb = b.graded_terms()
    out = {}
    get = out.get
    for da in range(min(p, len(ga) - 1) + 1):
        bucket_a = ga[da]
        if not bucket_a:
            continue
        top = min(p - da, len(gb) - 1)
        for db in range(top + 1):
            bucket_b = gb[db]
            if not bucket_b:
                continue
            for ka, va in bucket_a:
                for kb, vb in bucket_b:
                    k = tuple(map(_add, ka, kb))
                    out[k] = get(k, ZERO) + va * vb
    return {k: v for k, v in out.items() if v}


# Functional spellings of the ring operations.

def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def partial(i, f):
    return f.partial(i)


def eval_at_zero(f):
    return f.eval_at_zero()


def restrict_last(f):
    return f.restrict_last()


def one(n_vars, trunc_order):
    return TruncatedSeries._raw(n_vars, trunc_order, trunc_order, {(0,) * n_vars: ONE})
