"""Independent ground truth for flat sections.

Two pieces, neither of which touches the Cartier sum:

* :func:`solve_flat` integrates ``d_i m = -A_i m`` one homogeneous degree at
  a time from a prescribed constant term.
* :func:`generate_problem` draws a random invertible gauge ``G`` with
  ``G(0) = I`` and builds ``A_i = -(d_i G) G^-1``, so that ``G`` itself is
  the flat frame with identity constant term.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from ._rational import ONE, ZERO
from .cartier import FlatFrame, InconsistencyError
from .connection import Connection, ModuleVector, SeriesMatrix, matrix_from_rationals
from .series import TruncatedSeries, multi_indices

__all__ = [
    "CorpusProblem",
    "solve_flat",
    "solve_flat_section",
    "gauge_connection",
    "random_gauge",
    "generate_problem",
    "matrix_inverse",
    "random_series",
    "random_vector",
]


def solve_flat_section(C, initial):
    """Flat vector with constant term ``initial`` (list of rationals)."""
    n, d, r = C.n_vars, C.trunc_order, C.rank
    zero_idx = (0,) * n
    terms = [{zero_idx: v} if v else {} for v in initial]
    for s in range(d):
        current = ModuleVector(TruncatedSeries._raw(n, d, s, t) for t in terms)
        # rhs[i] = degree-s part of -A_i m, which must equal d_i of the degree-(s+1) part
        rhs = []
        for i in range(n):
            am = C.coeffs[i].matvec(current, precision=s)
            rhs.append([{k: -v for k, v in e.terms.items() if sum(k) == s} for e in am.entries])
        for alpha in multi_indices(n, s + 1, min_degree=s + 1):
            for row in range(r):
                value = None
                for i in range(n):
                    if not alpha[i]:
                        continue
                    beta = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
                    candidate = rhs[i][row].get(beta, ZERO) / alpha[i]
                    if value is None:
                        value = candidate
                    elif candidate != value:
                        raise InconsistencyError(
                            f"recursion disagrees at x^{alpha}, row {row}: "
                            f"{value} vs {candidate} (curvature leak)"
                        )
                if value:
                    terms[row][alpha] = value
    return ModuleVector(TruncatedSeries._raw(n, d, d, t) for t in terms)


def solve_flat(C):
    """Flat frame with identity constant term, by degree-by-degree recursion."""
    sections = []
    for k in range(C.rank):
        initial = [ZERO] * C.rank
        initial[k] = ONE
        sections.append(solve_flat_section(C, initial))
    return FlatFrame.from_sections(C, sections).validate()


def matrix_inverse(G):
    """Inverse of a series matrix with invertible constant term.

    Writes ``G = G0 (I + N)`` with ``N(0) = 0`` and sums the geometric series
    ``(I + N)^-1 = sum_s (-N)^s`` up to the truncation order.
    """
    n, d, r = G.n_vars, G.trunc_order, G.rows
    g0_inv = linalg.inverse(G.eval_at_zero())
    g0_inv_m = matrix_from_rationals(g0_inv, n, d)
    ident = SeriesMatrix.identity(r, n, d)
    N = (g0_inv_m @ G) - ident
    if any(x for row in N.eval_at_zero() for x in row):
        raise InconsistencyError("constant term of G0^-1 G is not the identity")
    power = ident
    total = ident
    minus_n = -N
    for _ in range(d):
        power = power @ minus_n
        total = total + power
    return total @ g0_inv_m


def gauge_connection(G, check=True):
    """Connection ``A_i = -(d_i G) G^-1`` making the columns of ``G`` flat.

    The entries of ``G`` are read as polynomials (exact past the truncation
    order), which is what lets ``d_i G`` keep full precision.
    """
    n, d = G.n_vars, G.trunc_order
    lifted = G.map(lambda e: TruncatedSeries._raw(n, d + 1, d + 1, e.terms))
    inv = matrix_inverse(G)
    coeffs = []
    for i in range(1, n + 1):
        dG = lifted.partial(i).map(lambda e: e.with_order(d))
        coeffs.append(-(dG @ inv))
    return Connection(coeffs, check=check)


def random_gauge(n, r, d, rng, coefficient_bound=5):
    """``I + N`` with N random of degree ``1..d``; rationals bounded by ``coefficient_bound``."""
    B = coefficient_bound
    monos = multi_indices(n, d, min_degree=1)
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            terms = {}
            for idx in monos:
                num = rng.randint(-B, B)
                if num:
                    terms[idx] = Fraction(num, rng.randint(1, B))
            if i == j:
                terms[(0,) * n] = 1
            row.append(TruncatedSeries(n, d, terms))
        rows.append(row)
    return SeriesMatrix(rows)


@dataclass(frozen=True)
class CorpusProblem:
    connection: Connection
    known_frame: SeriesMatrix
    seed: int

    @property
    def shape(self):
        C = self.connection
        return C.n_vars, C.rank, C.trunc_order


def generate_problem(n, r, d, seed, coefficient_bound=5):
    """Deterministic random gauge problem; same arguments give the same problem."""
    if n < 1 or r < 1 or d < 1:
        raise ValueError("n, r and d must be positive")
    rng = random.Random(f"katzflat:{n}:{r}:{d}:{seed}:{coefficient_bound}")
    G = random_gauge(n, r, d, rng, coefficient_bound)
    return CorpusProblem(gauge_connection(G, check=True), G, seed)


def random_series(n, d, rng, coefficient_bound=5, density=1.0, min_degree=0):
    """Random series of full precision; each monomial present with probability ``density``."""
    B = coefficient_bound
    terms = {}
    for idx in multi_indices(n, d, min_degree=min_degree):
        if rng.random() < density:
            num = rng.randint(-B, B)
            if num:
                terms[idx] = Fraction(num, rng.randint(1, B))
    return TruncatedSeries(n, d, terms)


def random_vector(C, rng, coefficient_bound=5, density=1.0, min_degree=0):
    return ModuleVector(
        random_series(C.n_vars, C.trunc_order, rng, coefficient_bound, density, min_degree)
        for _ in range(C.rank)
    )
