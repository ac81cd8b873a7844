import sys
import os

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.gf2 import GF2Matrix, Subquotient, Subspace, image, kernel, preimage, rank, solve
from EquiWeight.utils import ContainmentError, DimensionError

M = GF2Matrix([[1, 1, 0], [0, 1, 1]])

class test_GF2Matrix():
   def test_entries_are_read_mod_2(self):
      assert GF2Matrix([[3, 2], [5, -1]]) == GF2Matrix([[1, 0], [1, 1]])

   def test_product_and_sum(self):
      identity = GF2Matrix.identity(3)
      assert M @ identity == M
      assert (M + M).is_zero()
      assert (M @ M.T) == GF2Matrix([[0, 1], [1, 0]])

   def test_vector_product(self):
      assert np.array_equal(M @ np.array([1, 1, 1]), np.array([0, 0]))

   def test_packed_product_matches_dense(self):
      rng = np.random.default_rng(7)
      for rows, inner, cols in ((1, 1, 1), (3, 9, 17), (12, 8, 8), (20, 33, 5), (4, 0, 3), (0, 5, 2)):
         A = rng.integers(0, 2, size=(rows, inner))
         B = rng.integers(0, 2, size=(inner, cols))
         dense = (A @ B) % 2
         assert np.array_equal((GF2Matrix(A) @ GF2Matrix(B)).to_array(), dense)
         assert np.array_equal(GF2Matrix(A) @ B, dense)
         if cols:
            assert np.array_equal(GF2Matrix(A) @ B[:, 0], dense[:, 0])

   def test_shape_mismatch(self):
      with pytest.raises(DimensionError):
         M @ M
      with pytest.raises(DimensionError):
         M + GF2Matrix.identity(2)

   def test_rank(self):
      assert rank(M) == 2
      assert rank(GF2Matrix([[1, 1], [1, 1]])) == 1
      assert rank(GF2Matrix.zeros(0, 4)) == 0

   def test_block(self):
      B = GF2Matrix.block([[GF2Matrix.identity(1), GF2Matrix.zeros(1, 2)], [GF2Matrix.zeros(2, 1), M @ M.T]])
      assert B.shape == (3, 3)
      assert B.entry(0, 0) == 1

class test_LinearAlgebra():
   def test_kernel(self):
      K = kernel(M)
      assert K.dim == 1
      assert K.contains([1, 1, 1])

   def test_kernel_of_empty_matrix_is_full(self):
      assert kernel(GF2Matrix.zeros(0, 3)).is_full()

   def test_image(self):
      assert image(M).is_full()
      assert image(GF2Matrix([[1, 1], [1, 1]])).dim == 1

   def test_solve(self):
      x = solve(M, [1, 0])
      assert x is not None
      assert np.array_equal(M @ x, np.array([1, 0]))

   def test_solve_inconsistent(self):
      assert solve(GF2Matrix([[1, 1], [1, 1]]), [1, 0]) is None

   def test_preimage(self):
      W = Subspace(2, [[1, 0]])
      P = preimage(M, W)
      assert P.dim == 2
      for v in P.vectors:
         assert W.contains(M @ v)

   def test_rank_nullity(self):
      rng = np.random.default_rng(7)
      for _ in range(20):
         A = GF2Matrix(rng.integers(0, 2, size=(4, 6)))
         assert rank(A) + kernel(A).dim == 6
         assert image(A).dim == rank(A)

class test_Subspace():
   def test_canonical_form(self):
      S = Subspace(3, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
      T = Subspace(3, [[1, 0, 1], [1, 1, 0]])
      assert S.dim == 2
      assert S == T

   def test_sum_and_intersection(self):
      A = Subspace.coordinate(3, [0, 1])
      B = Subspace.coordinate(3, [1, 2])
      assert (A + B).is_full()
      common = A.intersection(B)
      assert common.dim == 1
      assert common.contains([0, 1, 0])

   def test_containment(self):
      A = Subspace.coordinate(3, [0, 1])
      assert A.contains_subspace(Subspace(3, [[1, 1, 0]]))
      assert not A.contains_subspace(Subspace.full(3))
      with pytest.raises(DimensionError):
         A.contains_subspace(Subspace.full(2))

   def test_coordinates(self):
      A = Subspace(3, [[1, 1, 0], [0, 0, 1]])
      vector = np.array([1, 1, 1])
      assert np.array_equal(A.combine(A.coordinates(vector)), vector)
      with pytest.raises(ContainmentError) as error:
         A.coordinates([1, 0, 0])
      assert error.value.witness is not None

   def test_image_under(self):
      assert Subspace.full(3).image_under(M).is_full()
      assert Subspace(3, [[1, 1, 1]]).image_under(M).is_zero()

class test_Subquotient():
   def test_dimension_and_projection(self):
      quotient = Subquotient(Subspace.full(3), Subspace(3, [[1, 1, 0]]))
      assert quotient.dim == 2
      assert not quotient.project([1, 1, 0]).any()
      assert np.array_equal(quotient.project([1, 0, 0]), quotient.project([0, 1, 0]))

   def test_lift_is_a_section(self):
      quotient = Subquotient(Subspace.full(3), Subspace(3, [[1, 1, 0]]))
      for classes in ([1, 0], [0, 1], [1, 1]):
         assert np.array_equal(quotient.project(quotient.lift(classes)), np.array(classes))

   def test_unpacking(self):
      dim, projection, section = Subquotient(Subspace.full(2), Subspace.zero(2))
      assert dim == 2
      assert projection == GF2Matrix.identity(2)
      assert section == GF2Matrix.identity(2)

   def test_denominator_outside_numerator(self):
      with pytest.raises(ContainmentError):
         Subquotient(Subspace.coordinate(3, [0]), Subspace.coordinate(3, [1]))
