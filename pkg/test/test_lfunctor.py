import sys
import os

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.complexes import ChainMap
from EquiWeight.corpus import CORPUS_DIR, load
from EquiWeight.gf2 import GF2Matrix
from EquiWeight.groups import bar_resolution, resolution_for
from EquiWeight.lfunctor import EquivariantHomology, L_filtration, L_map, WindowContract, build_L, equivariant_homology
from EquiWeight.utils import DimensionError, WindowError

def model(name):
   return load(os.path.join(CORPUS_DIR, f"{name}.json"))

class test_WindowContract():
   def test_default(self):
      contract = WindowContract.default_for(1)
      assert (contract.p_min, contract.r_max) == (-5, 4)
      assert contract.internal_p_min == -9
      assert contract.guaranteed_range == (-5, 0)

   def test_periodic_range(self):
      assert WindowContract(-2, 2).with_period(1).guaranteed_range == (None, 0)

   def test_invalid(self):
      with pytest.raises(DimensionError):
         WindowContract(1, 0)
      with pytest.raises(DimensionError):
         WindowContract(-1, -1)

   def test_window_error_suggests_p_min(self):
      with pytest.raises(WindowError) as error:
         WindowContract(-1, 1).require_total_degree(-5, 0)
      assert "--pmin" in str(error.value)
      assert error.value.suggested_p_min is not None

class test_BuildL():
   def test_point(self):
      V = model("point_z2")
      D = build_L(V.base, resolution_for(V.group, 4), -3)
      assert [D.dim(p, 0) for p in range(-3, 1)] == [1, 1, 1, 1]
      assert all(D.horizontal(p, 0).is_zero() for p in range(-2, 1))
      T = D.total_complex()
      assert [T.homology_dim(n) for n in range(-3, 1)] == [1, 1, 1, 1]

   def test_free_pair(self):
      V = model("free_point_pair")
      D = build_L(V.base, resolution_for(V.group, 4), -3)
      assert D.dim(-2, 0) == 2
      T = D.total_complex()
      assert [T.homology_dim(n) for n in (0, -1, -2)] == [1, 0, 0]

   def test_window_must_contain_column_zero(self):
      V = model("point_z2")
      with pytest.raises(DimensionError):
         build_L(V.base, resolution_for(V.group, 2), 1)

   def test_total_complex_names_cells(self):
      V = model("circle_reflection")
      T = build_L(V.base, resolution_for(V.group, 3), -2).total_complex()
      assert all("@(" in name for name in T.names[0])

   def test_identity_is_a_quasi_isomorphism(self):
      K = model("circle_free").base
      identity = ChainMap(K, K, {q: GF2Matrix.identity(K.dim(q)) for q in K.degrees()})
      assert L_map(identity, resolution_for(K.group, 3), -2).is_quasi_isomorphism()

   def test_filtration_is_exhaustive(self):
      V = model("circle_trivial")
      FC = L_filtration(V.complex, resolution_for(V.group, 3), -2)
      assert all(FC.F(FC.alpha_max, n).is_full() for n in FC.complex.degrees())
      assert all(FC.F(FC.alpha_min - 1, n).is_zero() for n in FC.complex.degrees())

class test_EquivariantHomology():
   def test_point_z2(self):
      homology = EquivariantHomology(model("point_z2"))
      assert homology.dims([1, 0, -1, -2]) == {1: 0, 0: 1, -1: 1, -2: 1}

   def test_periodicity_reaches_far_degrees(self):
      homology = EquivariantHomology(model("point_z2"))
      assert homology.contract.periodic == 1
      assert homology.dim(-20) == 1

   def test_free_action(self):
      assert [equivariant_homology(model("circle_free"), k) for k in (1, 0, -1)] == [1, 1, 0]

   def test_odd_order_needs_one_column(self):
      homology = EquivariantHomology(model("z3_circle_rotation"))
      assert homology.exact_everywhere
      assert homology.dim(-30) == 0

   def test_window_error(self):
      V = model("free_point_pair")
      homology = EquivariantHomology(V, WindowContract(-1, 1), bar_resolution(V.group, 3))
      with pytest.raises(WindowError):
         homology.dim(-5)
