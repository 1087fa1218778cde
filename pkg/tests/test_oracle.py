import pytest

from katzflat import Connection, curvature, flat_basis
from katzflat.cartier import is_flat
from katzflat.connection import ModuleVector
from katzflat.oracle import gauge_connection, generate_problem, matrix_inverse, solve_flat

from conftest import connection, mat, vec


def test_solve_flat_trivial():
    F = solve_flat(Connection.trivial(2, 2, 3))
    assert F.sections == tuple(ModuleVector.basis(k, 2, 2, 3) for k in range(2))


def test_solve_flat_exponential():
    C = connection([[["1"]]], n=1, d=2)
    assert solve_flat(C).sections[0] == vec(["1 - x1 + 1/2*x1^2"], d=2)


def test_solve_flat_nilpotent(nilpotent):
    F = solve_flat(nilpotent)
    assert F.sections[0] == vec(["1", "0"], d=4)
    assert F.sections[1] == vec(["-x1", "1"], d=4)


def test_solve_flat_detects_curvature_leak():
    # skip the constructor check to reach the recursion with bad data
    C = connection([[["x2"]], [["0"]]], n=2, d=3, check=False)
    from katzflat.cartier import InconsistencyError

    with pytest.raises(InconsistencyError):
        solve_flat(C)


def test_generate_zero_gauge_gives_zero_connection():
    G = mat([["1", "0"], ["0", "1"]], n=2)
    C = gauge_connection(G)
    assert all(a.is_zero() for a in C.coeffs)


def test_gauge_by_hand():
    C = gauge_connection(mat([["1 + x1"]], d=2))
    assert C.matrix(1) == mat([["-1 + x1 - x1^2"]], d=2)


def test_generate_is_deterministic():
    a = generate_problem(2, 2, 4, seed=3)
    b = generate_problem(2, 2, 4, seed=3)
    c = generate_problem(2, 2, 4, seed=4)
    assert a.known_frame == b.known_frame
    assert all(x == y for x, y in zip(a.connection.coeffs, b.connection.coeffs))
    assert a.known_frame != c.known_frame


def test_matrix_inverse():
    G = mat([["2 + x1", "x1^2"], ["1", "1 - x1"]], d=4)
    ident = mat([["1", "0"], ["0", "1"]], d=4)
    inv = matrix_inverse(G)
    assert G @ inv == ident
    assert inv @ G == ident


@pytest.mark.parametrize("shape", [(1, 2, 6), (2, 2, 5), (3, 2, 3)])
@pytest.mark.parametrize("seed", range(3))
def test_corpus_invariants(shape, seed):
    prob = generate_problem(*shape, seed)
    C, G = prob.connection, prob.known_frame
    n, r, d = shape
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            assert curvature(C.coeffs, i, j).is_zero()
    assert G.eval_at_zero() == [[int(i == j) for j in range(r)] for i in range(r)]
    for col in G.columns():
        assert is_flat(C, col)
    oracle = solve_flat(C)
    assert [s for s in oracle.sections] == G.columns()
    assert oracle == flat_basis(C)
