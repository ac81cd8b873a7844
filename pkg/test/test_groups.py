import sys
import os

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.groups import (FiniteGroup, GModule, bar_resolution, cyclic_resolution, group_cohomology, invariants,
                               product_resolution, resolution_for, semisimple_resolution)
from EquiWeight.utils import InsufficientDepthError, ModelValidationError, UnsupportedGroupError

class test_FiniteGroup():
   def test_cyclic(self):
      G = FiniteGroup.cyclic(4)
      assert G.names == ("1", "s", "s^2", "s^3")
      assert G.product(1, 3) == G.identity
      assert G.element("s^2") == 2
      assert G.generators == (1,)

   def test_unknown_element(self):
      with pytest.raises(ModelValidationError):
         FiniteGroup.cyclic(2).element("t")

   def test_klein_four(self):
      G = FiniteGroup.klein_four()
      assert G.cyclic_generator is None
      assert G.direct_factors() is not None
      assert len(G.generators) == 2
      assert G.is_abelian()

   def test_from_names(self):
      G = FiniteGroup.from_names(["e", "t"], [["e", "t"], ["t", "e"]])
      assert G == FiniteGroup.cyclic(2)
      with pytest.raises(ModelValidationError):
         FiniteGroup.from_names(["e", "t"], [["e", "t"], ["t", "x"]])

   def test_invalid_table(self):
      with pytest.raises(ModelValidationError):
         FiniteGroup([[0, 1], [0, 1]])
      with pytest.raises(ModelValidationError):
         FiniteGroup.cyclic(0)

class test_GModule():
   def test_swap_module(self):
      M = GModule.from_permutations(FiniteGroup.cyclic(2), 2, {1: [1, 0]})
      assert invariants(M).dim == 1
      assert invariants(M).contains([1, 1])
      assert M.norm().to_array().tolist() == [[1, 1], [1, 1]]
      assert not M.is_trivial()

   def test_trivial_module(self):
      M = GModule.trivial(FiniteGroup.cyclic(3), 2)
      assert M.is_trivial()
      assert invariants(M).is_full()

   def test_permutations_must_respect_the_group(self):
      with pytest.raises(ModelValidationError):
         GModule.from_permutations(FiniteGroup.cyclic(3), 3, {1: [1, 0, 2]})
      with pytest.raises(ModelValidationError):
         GModule.from_permutations(FiniteGroup.cyclic(2), 2, {1: [0, 0]})

class test_Resolution():
   def test_selection(self):
      assert resolution_for(FiniteGroup.cyclic(2), 3).kind == "cyclic"
      assert resolution_for(FiniteGroup.cyclic(3), 3).kind == "semisimple"
      assert resolution_for(FiniteGroup.klein_four(), 3).kind == "product"
      assert resolution_for(FiniteGroup.cyclic(2), 2, kind="bar").kind == "bar"
      with pytest.raises(NotImplementedError):
         resolution_for(FiniteGroup.cyclic(2), 2, kind="koszul")

   def test_cyclic_is_periodic(self):
      assert cyclic_resolution(2, 3).periodic == 1
      assert cyclic_resolution(4, 3).periodic == 2
      assert cyclic_resolution(2, 2).extend(6).depth == 6

   def test_semisimple_needs_odd_order(self):
      with pytest.raises(UnsupportedGroupError):
         semisimple_resolution(FiniteGroup.cyclic(2))

   def test_product_needs_a_splitting(self):
      G = FiniteGroup.cyclic(4)
      with pytest.raises(UnsupportedGroupError):
         product_resolution(G, 1, 3, 2)

class test_GroupCohomology():
   def test_z2_trivial_coefficients(self):
      G = FiniteGroup.cyclic(2)
      M = GModule.trivial(G, 1)
      R = resolution_for(G, 2)
      assert [group_cohomology(G, M, n, R).dim for n in range(-1, 6)] == [0, 1, 1, 1, 1, 1, 1]

   def test_bar_agrees_with_cyclic(self):
      G = FiniteGroup.cyclic(2)
      M = GModule.from_permutations(G, 2, {1: [1, 0]})
      T = GModule.trivial(G, 1)
      bar, cyclic = bar_resolution(G, 3), cyclic_resolution(2, 3)
      for module in (M, T):
         for n in range(3):
            assert group_cohomology(G, module, n, bar).dim == group_cohomology(G, module, n, cyclic).dim

   def test_free_module_is_acyclic(self):
      G = FiniteGroup.cyclic(2)
      M = GModule.regular(G)
      R = resolution_for(G, 4)
      assert [group_cohomology(G, M, n, R).dim for n in range(4)] == [1, 0, 0, 0]

   def test_odd_order(self):
      G = FiniteGroup.cyclic(3)
      M = GModule.trivial(G, 1)
      R = resolution_for(G, 1)
      assert [group_cohomology(G, M, n, R).dim for n in range(4)] == [1, 0, 0, 0]

   def test_klein_four(self):
      G = FiniteGroup.klein_four()
      M = GModule.trivial(G, 1)
      R = resolution_for(G, 5)
      assert [group_cohomology(G, M, n, R).dim for n in range(4)] == [1, 2, 3, 4]

   def test_bar_resolution_is_not_extended_silently(self):
      G = FiniteGroup.cyclic(2)
      with pytest.raises(InsufficientDepthError) as error:
         group_cohomology(G, GModule.trivial(G, 1), 3, bar_resolution(G, 2))
      assert error.value.required_depth == 4

   def test_cocycle_classes(self):
      G = FiniteGroup.cyclic(2)
      H = group_cohomology(G, GModule.trivial(G, 1), 1, resolution_for(G, 3))
      assert H.dim == 1
      assert np.array_equal(H.classify(H.representative([1])), np.array([1]))
