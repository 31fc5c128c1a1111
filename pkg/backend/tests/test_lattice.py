"""
Unit tests for the integer lattice toolkit
"""
import numpy as np
import pytest

from app.exceptions import LatticeError
from app.services.lattice import (
    LatticeBasis,
    columns_of,
    complete_to_unimodular,
    hermite_normal_form,
    int_matrix,
    integer_inverse,
    invariant_factors,
    is_saturated,
    kernel_lattice,
    lattice_rank,
    minor,
    primitive,
    saturate,
    smith_normal_form,
)
from app.utils.exact import integer_determinant


def det(M) -> int:
    return integer_determinant(np.asarray(M, dtype=object).tolist())


def random_vectors(rng, n, k, bound=4):
    return [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(k)]


class TestPrimitive:
    @pytest.mark.parametrize(
        "v, expected",
        [((2, 4), (1, 2)), ((0, 0, 3), (0, 0, 1)), ((-2, 2), (-1, 1))],
    )
    def test_primitive(self, v, expected):
        assert primitive(v) == expected

    def test_zero_vector_rejected(self):
        with pytest.raises(LatticeError, match="zero vector has no primitive direction"):
            primitive((0, 0))


class TestHermite:
    def test_identity(self):
        H, U = hermite_normal_form(int_matrix([(1, 0), (0, 1)], 2))
        assert (H == int_matrix([(1, 0), (0, 1)], 2)).all()
        assert (U == int_matrix([(1, 0), (0, 1)], 2)).all()

    def test_single_column_already_reduced(self):
        M = int_matrix([(2, 4)], 2)
        H, U = hermite_normal_form(M)
        assert columns_of(H) == [(2, 4)]
        assert U.tolist() == [[1]]

    def test_lower_triangular_with_positive_pivots(self):
        # rows [[1, 1], [0, 2]]
        M = np.array([[1, 1], [0, 2]], dtype=object)
        H, U = hermite_normal_form(M)
        assert (M @ U == H).all()
        assert abs(det(U)) == 1
        assert H[0, 1] == 0
        assert H[0, 0] > 0 and H[1, 1] > 0
        assert 0 <= H[1, 0] < H[1, 1]

    def test_random_postcondition(self, rng):
        for _ in range(60):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            M = np.array(
                [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)],
                dtype=object,
            )
            H, U = hermite_normal_form(M)
            assert (M @ U == H).all()
            assert abs(det(U)) == 1
            # pivot rows strictly increase, zero columns come last
            pivots = [
                next((i for i in range(rows) if H[i, j] != 0), None) for j in range(cols)
            ]
            nonzero = [p for p in pivots if p is not None]
            assert pivots[: len(nonzero)] == nonzero
            assert nonzero == sorted(set(nonzero))
            for j, p in enumerate(nonzero):
                assert H[p, j] > 0
                assert all(0 <= H[p, c] < H[p, j] for c in range(j))


class TestSmith:
    def test_diag_2_3(self):
        M = np.array([[2, 0], [0, 3]], dtype=object)
        S, U, V = smith_normal_form(M)
        assert S.tolist() == [[1, 0], [0, 6]]
        assert (U @ M @ V == S).all()

    def test_identity(self):
        M = np.array([[1, 0], [0, 1]], dtype=object)
        S, _, _ = smith_normal_form(M)
        assert S.tolist() == [[1, 0], [0, 1]]

    def test_column_of_ones(self):
        S, _, _ = smith_normal_form(int_matrix([(1, 1)], 2))
        assert S.tolist() == [[1], [0]]

    def test_random_divisibility_chain(self, rng):
        for _ in range(60):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            M = np.array(
                [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)],
                dtype=object,
            )
            S, U, V = smith_normal_form(M)
            assert (U @ M @ V == S).all()
            assert abs(det(U)) == 1 and abs(det(V)) == 1
            diagonal = [S[i, i] for i in range(min(rows, cols))]
            for i in range(rows):
                for j in range(cols):
                    if i != j:
                        assert S[i, j] == 0
            nonzero = [d for d in diagonal if d != 0]
            assert all(d > 0 for d in nonzero)
            for a, b in zip(nonzero, nonzero[1:]):
                assert b % a == 0

    def test_invariant_factors(self):
        assert invariant_factors(int_matrix([(2, 0), (0, 4)], 2)) == [2, 4]


class TestSaturate:
    def test_single_generator(self):
        assert saturate([(2, 0)], 2).vectors == ((1, 0),)
        assert saturate([(2, 2)], 2).vectors == ((1, 1),)

    def test_index_two_sublattice(self):
        basis = saturate([(1, 1), (1, -1)], 2)
        assert basis.rank == 2
        assert is_saturated(basis)
        assert abs(det(basis.matrix)) == 1

    def test_zero_span(self):
        assert saturate([(0, 0, 0)], 3) == LatticeBasis(3, ())

    def test_idempotent(self, rng):
        for _ in range(40):
            n = rng.randint(1, 4)
            dirs = random_vectors(rng, n, rng.randint(1, 3))
            once = saturate(dirs, n)
            twice = saturate(once.vectors, n)
            assert once == twice

    def test_not_saturated(self):
        assert not is_saturated(LatticeBasis(2, ((2, 0),)))
        assert not is_saturated(LatticeBasis(2, ((1, 1), (1, -1))))


class TestCompletion:
    def test_example_completion(self):
        D = complete_to_unimodular(LatticeBasis(2, ((1, 1),)))
        assert columns_of(D)[0] == (1, 1)
        assert abs(det(D)) == 1

    def test_empty_and_full(self):
        assert complete_to_unimodular(LatticeBasis(2, ())).tolist() == [[1, 0], [0, 1]]
        D = complete_to_unimodular(LatticeBasis(2, ((1, 0), (0, 1))))
        assert D.tolist() == [[1, 0], [0, 1]]

    def test_not_saturated_rejected(self):
        with pytest.raises(LatticeError, match="basis not saturated; completion impossible"):
            complete_to_unimodular(LatticeBasis(2, ((2, 0),)))

    @pytest.mark.slow
    def test_unimodularity_suite(self, rng):
        for _ in range(500):
            n = rng.randint(1, 4)
            basis = saturate(random_vectors(rng, n, rng.randint(1, n)), n)
            assert is_saturated(basis)
            D = complete_to_unimodular(basis)
            assert abs(det(D)) == 1
            assert columns_of(D)[: basis.rank] == list(basis.vectors)

    def test_integer_inverse(self):
        D = complete_to_unimodular(LatticeBasis(3, ((1, 2, 3),)))
        Dinv = integer_inverse(D)
        assert (D @ Dinv == np.eye(3, dtype=int).astype(object)).all()

    def test_integer_inverse_rejects_non_unimodular(self):
        with pytest.raises(LatticeError):
            integer_inverse(np.array([[2, 0], [0, 1]], dtype=object))


class TestKernel:
    def test_examples(self):
        assert kernel_lattice(int_matrix([(1, 1)], 2)).vectors == ((1, -1),)
        assert kernel_lattice(int_matrix([(1, 2)], 2)).vectors == ((2, -1),)
        assert kernel_lattice(int_matrix([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)).vectors == ()

    def test_random_rank_nullity(self, rng):
        for _ in range(60):
            n = rng.randint(1, 4)
            M = int_matrix(random_vectors(rng, n, rng.randint(1, 3)), n)
            K = kernel_lattice(M)
            for xi in K.vectors:
                assert all(x == 0 for x in M.T @ np.array(xi, dtype=object))
                assert next(x for x in xi if x != 0) > 0
            assert K.rank + lattice_rank(M) == n
            assert is_saturated(K)


def test_minor_uses_one_based_rows():
    columns = [(1, 2, 3), (0, 1, 5)]
    assert minor(columns, (1, 2)) == 1
    assert minor(columns, (2, 3)) == 2 * 5 - 3 * 1
    with pytest.raises(LatticeError):
        minor(columns, (1,))
