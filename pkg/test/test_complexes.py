import sys
import os

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.complexes import (ChainComplex, ChainMap, GChainComplex, VarietyModel, canonical_filtration, homology,
                                  invariant_subcomplex, mapping_cone, restrict_to_cells)
from EquiWeight.corpus import CORPUS_DIR, load
from EquiWeight.gf2 import GF2Matrix
from EquiWeight.groups import FiniteGroup, GModule
from EquiWeight.utils import MissingCompanionError, ModelValidationError

def model(name):
   return load(os.path.join(CORPUS_DIR, f"{name}.json"))

class test_ChainComplex():
   def test_boundary_squared(self):
      with pytest.raises(ModelValidationError) as error:
         ChainComplex({0: 2, 1: 1, 2: 1}, {1: GF2Matrix([[1], [1]]), 2: GF2Matrix([[1]])})
      assert "degree 2" in str(error.value)

   def test_shape(self):
      with pytest.raises(ModelValidationError):
         ChainComplex({0: 2, 1: 1}, {1: GF2Matrix([[1, 1]])})

   def test_homology_of_the_sphere(self):
      K = model("sphere_reflection").base
      assert [K.homology_dim(q) for q in K.degrees()] == [1, 0, 1]
      assert K.euler_characteristic() == 2

   def test_empty_complex(self):
      K = ChainComplex({}, {})
      assert K.q_max < K.q_min
      assert list(K.degrees()) == []

class test_GChainComplex():
   def test_boundary_must_commute_with_the_action(self):
      G = FiniteGroup.cyclic(2)
      modules = {0: GModule.from_permutations(G, 2, {1: [1, 0]}), 1: GModule.trivial(G, 1)}
      with pytest.raises(ModelValidationError) as error:
         GChainComplex(G, modules, {1: GF2Matrix([[1], [0]])})
      assert "does not commute" in str(error.value)

   def test_homology_module(self):
      K = model("free_point_pair").base
      dim, module = homology(K, 0)
      assert dim == 2
      assert not module.is_trivial()

   def test_invariant_subcomplex(self):
      invariant = invariant_subcomplex(model("circle_reflection").base)
      assert [invariant.dim(q) for q in (1, 0)] == [1, 2]
      assert [invariant.homology_dim(q) for q in (1, 0)] == [1, 2]
      assert invariant.module(1).is_trivial()

class test_Filtrations():
   def test_canonical_filtration_of_the_circle(self):
      FK = canonical_filtration(model("circle_trivial").base)
      assert (FK.alpha_min, FK.alpha_max) == (-1, 0)
      assert FK.F(-1, 1).dim == 1
      assert FK.F(-1, 0).dim == 0
      assert FK.F(-2, 1).dim == 0
      assert FK.F(0, 0).is_full()

   def test_graded_pieces(self):
      FK = model("figure8_swap").complex
      dims = FK.graded_dims()
      assert dims[(-1, 1)] == 1
      assert dims[(0, 1)] == 3
      assert dims[(0, 0)] == 3
      assert dims[(-1, 0)] == 0
      graded, _ = FK.graded_complex(-1)
      assert graded.dim(1) == 1

   def test_invariant_part(self):
      invariant = model("circle_reflection").complex.invariant_part()
      assert invariant.base.dim(0) == 2
      assert invariant.base.dim(1) == 1
      assert invariant.base.homology_dim(1) == 1

   def test_restrict_to_cells(self):
      FK = model("circle_reflection").complex
      fixed = restrict_to_cells(FK, {0: [0, 1]})
      assert fixed.base.dim(0) == 2
      assert fixed.base.names[0] == ["v1", "v2"]
      with pytest.raises(ModelValidationError):
         restrict_to_cells(FK, {1: [0]})

class test_ChainMap():
   def test_identity_cone_is_acyclic(self):
      K = model("circle_free").base
      identity = ChainMap(K, K, {q: GF2Matrix.identity(K.dim(q)) for q in K.degrees()})
      assert identity.is_quasi_isomorphism()
      cone = mapping_cone(identity)
      assert isinstance(cone, GChainComplex)
      assert all(cone.homology_dim(n) == 0 for n in cone.degrees())

   def test_not_a_chain_map(self):
      K = model("circle_reflection").base
      with pytest.raises(ModelValidationError):
         ChainMap(K, K, {1: GF2Matrix.identity(2)})

class test_VarietyModel():
   def test_fixed_cells_must_be_fixed(self):
      V = model("free_point_pair")
      with pytest.raises(ModelValidationError) as error:
         VarietyModel("moved", V.complex, fixed_cells={0: [0]})
      assert "is moved by" in str(error.value)

   def test_fixed_companion_must_match(self):
      point = model("point_z2")
      circle = model("circle_trivial")
      with pytest.raises(ModelValidationError):
         VarietyModel("mismatch", point.complex, fixed_cells={0: [0]}, fixed_model=circle.complex)

   def test_fixed_subcomplex(self):
      V = model("sphere_reflection")
      fixed = V.fixed_subcomplex()
      assert [fixed.homology_dim(q) for q in fixed.degrees()] == [1, 1]
      _, derived = V.fixed_filtered()
      assert derived

   def test_supplied_fixed_model(self):
      _, derived = model("figure8_swap").fixed_filtered()
      assert not derived

   def test_missing_companions(self):
      V = model("figure8_swap_punctured")
      with pytest.raises(MissingCompanionError):
         V.invariant_filtered()
      assert V.dimension == 1
      assert V.is_z2()
