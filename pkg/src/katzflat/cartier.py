"""The Cartier projector onto flat sections and everything built from it.

For an integrable connection on ``R^r`` the operator

    P(m) = sum_J (-1)^|J| x^J D^(J) m,     D^(J) = prod_i D_i^(j_i),

is an idempotent with image the flat sections and kernel ``m R^r``.  Modulo
``m^(d+1)`` only multi-indices with ``|J| <= d`` contribute, and each term
``x^J D^(J) m`` is known to full precision because the monomial restores
the ``|J|`` orders the derivatives consumed.
"""

from dataclasses import dataclass, field

from . import linalg
from ._rational import ZERO, Q
from .connection import ModuleVector, SeriesMatrix, apply_D, apply_DJ
from .series import PrecisionError, TruncatedSeries, graded_lex_key, multi_indices

__all__ = [
    "InconsistencyError",
    "FlatFrame",
    "IndependenceCertificate",
    "divided_derivatives",
    "project",
    "project_scalar_rule_check",
    "flat_basis",
    "idempotence_check",
    "kernel_check",
    "is_flat",
    "nakayama_expand",
    "combine",
    "recombine",
    "trivialize",
    "independence_certificate",
]


class InconsistencyError(RuntimeError):
    """A result violated an identity that must hold for integrable input."""


def divided_derivatives(C, m, max_order=None):
    """Map ``J -> D^(J) m`` for every ``|J| <= max_order``.

    ``D^(J)`` is built from ``D^(J - e_i)`` with ``i`` the last variable
    present in ``J``, which is exactly the composition order of
    :func:`apply_DJ` (variable 1 innermost), so each table entry equals
    ``apply_DJ(C, J, m)``.
    """
    if max_order is None:
        max_order = m.precision
    if max_order > m.precision:
        raise PrecisionError(f"order {max_order} exceeds vector precision {m.precision}")
    C._check_vector(m)
    n = C.n_vars
    table = {(0,) * n: m}
    for J in multi_indices(n, max_order, min_degree=1):
        last = max(v for v in range(n) if J[v])
        prev = J[:last] + (J[last] - 1,) + J[last + 1:]
        step = apply_D(C, last + 1, table[prev])
        if J[last] > 1:
            step = step * Q(1, J[last])
        table[J] = step
    return table


def _project(C, m):
    # Cartier sum at whatever precision m carries; result has the same precision.
    p = m.precision
    r = C.rank
    acc = [{} for _ in range(r)]
    for J, dm in divided_derivatives(C, m).items():
        negative = sum(J) % 2 == 1
        for k, entry in enumerate(dm.entries):
            shifted = entry.shift(J)
            bucket = acc[k]
            for idx, c in shifted.terms.items():
                bucket[idx] = bucket.get(idx, ZERO) + (-c if negative else c)
    return ModuleVector(
        TruncatedSeries._raw(C.n_vars, C.trunc_order, p, {k: v for k, v in b.items() if v})
        for b in acc
    )


def project(C, m):
    """Apply the projector to a full-precision vector."""
    C._check_vector(m)
    if m.precision != C.trunc_order:
        raise PrecisionError(
            f"project needs full precision {C.trunc_order}, vector has {m.precision}"
        )
    return _project(C, m)


def is_flat(C, m):
    """``D_i m == 0`` for every i, at precision ``m.precision - 1``."""
    return all(apply_D(C, i, m).is_zero() for i in range(1, C.n_vars + 1))


def project_scalar_rule_check(C, f, m):
    """``P(f m) == f(0) P(m)`` exactly."""
    lhs = project(C, m * f)
    rhs = project(C, m) * f.eval_at_zero()
    return lhs.equal_at(rhs, C.trunc_order)


def idempotence_check(C, m):
    once = project(C, m)
    return project(C, once).equal_at(once, C.trunc_order)


def kernel_check(C, m):
    """``P(m) == 0`` exactly when every entry of m lies in the maximal ideal."""
    in_ideal = not any(m.constant_vector())
    return project(C, m).is_zero() == in_ideal


@dataclass(frozen=True)
class FlatFrame:
    """r flat sections whose constant terms form an invertible matrix.

    ``constant_matrix[i][k]`` is the i-th entry of ``sections[k]`` at 0.
    """

    connection: object
    sections: tuple
    constant_matrix: list = field(compare=False)

    @classmethod
    def from_sections(cls, C, sections):
        sections = tuple(sections)
        const = [[s[i].eval_at_zero() for s in sections] for i in range(C.rank)]
        return cls(C, sections, const)

    def validate(self):
        C = self.connection
        if len(self.sections) != C.rank:
            raise InconsistencyError(f"{len(self.sections)} sections for rank {C.rank}")
        for k, b in enumerate(self.sections):
            if b.precision != C.trunc_order:
                raise InconsistencyError(f"section {k} has precision {b.precision}")
            for i in range(1, C.n_vars + 1):
                if not apply_D(C, i, b).is_zero():
                    raise InconsistencyError(f"section {k} is not flat: D_{i} b_{k} != 0")
        if linalg.rank(self.constant_matrix) != C.rank:
            raise InconsistencyError("constant-term matrix is singular")
        return self

    def matrix(self):
        return SeriesMatrix.from_columns(self.sections)

    def __eq__(self, other):
        if not isinstance(other, FlatFrame):
            return NotImplemented
        return len(self.sections) == len(other.sections) and all(
            a == b for a, b in zip(self.sections, other.sections)
        )


def flat_basis(C):
    """Project the standard basis; the constant-term matrix is the identity."""
    sections = [project(C, C.basis_vector(k)) for k in range(C.rank)]
    return FlatFrame.from_sections(C, sections).validate()


def trivialize(C):
    """Matrix G whose columns are the flat basis: ``d_i G + A_i G = 0``, ``G(0) = I``."""
    return flat_basis(C).matrix()


def nakayama_expand(F, m):
    """Coefficients ``g`` with ``m = sum_k g_k b_k`` to full precision.

    Solved one homogeneous degree at a time against the constant-term
    matrix of the frame.
    """
    C = F.connection
    C._check_vector(m)
    if m.precision != C.trunc_order:
        raise PrecisionError("nakayama_expand needs a full-precision vector")
    n, d, r = C.n_vars, C.trunc_order, C.rank
    inv = linalg.inverse(F.constant_matrix)
    frame = F.matrix()
    coeffs = [{} for _ in range(r)]
    residual = m
    for s in range(d + 1):
        parts = [e.homogeneous_part(s).terms for e in residual.entries]
        monos = set().union(*parts)
        if not monos:
            continue
        delta = [{} for _ in range(r)]
        for idx in monos:
            rhs = [p.get(idx, ZERO) for p in parts]
            for k, c in enumerate(linalg.matvec(inv, rhs)):
                if c:
                    delta[k][idx] = c
                    coeffs[k][idx] = c
        dvec = ModuleVector(TruncatedSeries._raw(n, d, d, t) for t in delta)
        residual = residual - frame.matvec(dvec)
    return [TruncatedSeries._raw(n, d, d, t) for t in coeffs]


def combine(vectors, coeffs):
    """``sum_k coeffs[k] * vectors[k]`` with series coefficients."""
    total = None
    for g, b in zip(coeffs, vectors):
        term = b * g
        total = term if total is None else total + term
    return total


def recombine(F, coeffs):
    return combine(F.sections, coeffs)


@dataclass(frozen=True)
class IndependenceCertificate:
    """Witness that ``sum_k f_k m_k`` is nonzero.

    Applying ``D^(J)`` for ``J = multi_index`` and then the projector leaves
    the constant combination ``sum_k witness_values[k] * m_k(0)``, recorded
    as ``witness_vector``; ``nonzero_position`` is 1-based.
    """

    level: int
    multi_index: tuple
    witness_values: tuple
    nonzero_position: int
    witness_vector: tuple = ()


def independence_certificate(C, flats, coeffs):
    flats = list(flats)
    coeffs = list(coeffs)
    if not flats or len(flats) != len(coeffs):
        raise ValueError("need matching, non-empty lists of flat vectors and coefficients")
    d = C.trunc_order
    for k, mk in enumerate(flats):
        C._check_vector(mk)
        if mk.precision != d:
            raise PrecisionError(f"flat vector {k + 1} is not at full precision")
        if not is_flat(C, mk):
            raise ValueError(f"vector {k + 1} is not flat")
    constants = [mk.constant_vector() for mk in flats]
    if linalg.rank(constants) != len(flats):
        raise ValueError("flat vectors are not linearly independent over the rationals")
    if all(f.is_zero() for f in coeffs):
        raise ValueError("nothing to certify: every coefficient is zero")

    J = min((idx for f in coeffs for idx in f.terms), key=graded_lex_key)

    combo = combine(flats, coeffs)
    derived = apply_DJ(C, J, combo)
    witness = _project(C, derived).constant_vector()

    values = linalg.solve_columns(constants, witness)
    if values is None:
        raise InconsistencyError("projected witness is not a combination of the flat vectors")
    expected = [f.coefficient(J) for f in coeffs]
    if list(values) != expected:
        raise InconsistencyError(
            f"witness values {values} disagree with divided derivatives {expected} at J={J}"
        )
    position = next(k for k, v in enumerate(values) if v) + 1
    return IndependenceCertificate(
        level=C.n_vars,
        multi_index=J,
        witness_values=tuple(values),
        nonzero_position=position,
        witness_vector=tuple(witness),
    )
