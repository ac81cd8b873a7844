import sys
import os

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.corpus import CORPUS_DIR, load
from EquiWeight.gf2 import rank
from EquiWeight.weights import (BkG, EquivariantWeights, InvariantReport, betaG_odd, equivariant_weight_ss,
                                fixed_point_formula, invariant_beta, lemma_formula_check, odd_order_check,
                                omega_filtration, qB, row_ss, thm416_check, top_row_check, virtual_betti,
                                weight_row, weight_rows, weight_ss)
from EquiWeight.utils import MissingCompanionError, UnsupportedGroupError, WindowError

def model(name):
   return load(os.path.join(CORPUS_DIR, f"{name}.json"))

class test_PlainWeights():
   def test_rows(self):
      FK = model("figure8_swap").complex
      assert weight_rows(FK) == [1, 0]
      row = weight_row(FK, 1)
      assert row.dim(0) == 1
      assert row.q_max == 0

   def test_weight_page(self):
      ss = weight_ss(model("figure8_swap").complex)
      assert ss.index == "weight"
      assert [ss.dim(2, p, q) for p, q in ((0, 1), (1, 0), (0, 0))] == [1, 1, 1]

   def test_virtual_betti(self):
      FK = model("figure8_swap").complex
      assert [virtual_betti(FK, q).value for q in (1, 0)] == [1, 0]
      assert virtual_betti(model("circle_trivial").complex, 1).value == 1

class test_EquivariantWeights():
   def test_weight_pages(self):
      weights = EquivariantWeights(model("figure8_swap"))
      ss = weights.weight_sequence()
      assert [ss.dim(2, p, 1) for p in (0, -1, -2, 1)] == [1, 1, 1, 0]
      assert [ss.dim(2, p, 0) for p in (1, 0, -1)] == [1, 2, 2]
      assert [ss.dim(3, p, 1) for p in (0, -1)] == [1, 0]
      target, matrix = ss.differential(2, 1, 0)
      assert target == (-1, 1)
      assert rank(matrix) == 1
      assert ss.convergence_page() == 3
      assert weights.bounds_check() == []

   def test_weight_differential_by_name(self):
      ss = equivariant_weight_ss(model("figure8_swap"))
      [loop] = ss.generators(2, 1, 0)
      assert loop in ("[e1+e2]@(0,1)", "[e3+e4]@(0,1)")
      assert ss.generators(2, -1, 1) == ["[e1+e2+e3+e4]@(-1,1)"]
      target, matrix = ss.differential(2, 1, 0)
      assert target == (-1, 1)
      assert matrix.to_array().tolist() == [[1]]

   def test_omega(self):
      V = model("figure8_swap")
      assert omega_filtration(V, 1) == {-2: 0, -1: 1, 0: 1}
      assert omega_filtration(V, 0) == {-2: 0, -1: 0, 0: 1}

   def test_row_invariants(self):
      V = model("figure8_swap")
      report = qB(V, 1, 0)
      assert report.value == 1
      assert report.representative_dependent
      assert report.comparable
      assert [BkG(V, k).value for k in (2, 1, 0, -1)] == [0, 1, 1, 1]
      assert qB(V, 0, 3).value == 0

   def test_row_outside_window(self):
      with pytest.raises(WindowError):
         qB(model("figure8_swap"), 1, -100)

   def test_module_level_entry_points(self):
      V = model("figure8_swap")
      ss = equivariant_weight_ss(V)
      assert ss.convergence_page() == 3
      assert ss.dim(2, 1, 0) == 1
      row = row_ss(V, 1)
      assert row.variant == "II"
      assert row.dims(2) == EquivariantWeights(V).row_sequence(1).dims(2)

   def test_row_variant(self):
      weights = EquivariantWeights(model("figure8_swap"))
      with pytest.raises(ValueError):
         weights.row_sequence(1, "III")
      assert weights.row_sequence(1, "I").variant == "I"
      assert weights.row_sequence(1) is weights.row_sequence(1, "II")

   def test_top_row(self):
      assert top_row_check(model("sphere_reflection"))
      assert top_row_check(model("figure8_swap"))

   def test_comparable(self):
      report = InvariantReport("qB", (1, 0), 1, "row_ss_II", representative_dependent=True)
      assert not report.comparable

class test_OddOrder():
   def test_beta(self):
      V = model("z3_circle_rotation")
      assert [betaG_odd(V, q).value for q in (1, 0)] == [1, 1]
      assert betaG_odd(model("z3_three_points"), 0).value == 1

   def test_collapse(self):
      assert odd_order_check(model("z3_circle_rotation")) == []
      assert odd_order_check(model("z3_three_points")) == []

   def test_even_order(self):
      with pytest.raises(UnsupportedGroupError):
         betaG_odd(model("point_z2"), 0)
      with pytest.raises(UnsupportedGroupError):
         odd_order_check(model("point_z2"))

class test_FixedPointFormulas():
   def test_invariant_beta(self):
      V = model("circle_reflection")
      assert [invariant_beta(V, q).value for q in (1, 0)] == [1, 2]
      assert invariant_beta(V, 1).route == "canonical_invariant_chains"

   def test_invariant_beta_needs_a_model(self):
      V = model("figure8_swap")
      with pytest.raises(MissingCompanionError):
         invariant_beta(V, 1)
      assert invariant_beta(V, 1, V.invariant_model).route == "supplied_invariant_weight"
      with pytest.raises(UnsupportedGroupError):
         invariant_beta(model("z3_circle_rotation"), 1)

   def test_compact_nonsingular_formula(self):
      for name in ("circle_reflection", "sphere_reflection", "point_z2"):
         V = model(name)
         for q in (1, 0, -1):
            assert thm416_check(V, q)[2]
            assert fixed_point_formula(V, q)[2]
      assert fixed_point_formula(model("circle_reflection"), 0) == (2, 2, True)
      with pytest.raises(MissingCompanionError):
         thm416_check(model("figure8_swap"), 0)

   def test_invariant_cycle_formula(self):
      for name in ("sphere_reflection", "figure8_swap", "free_point_pair", "sphere_antipodal", "circle_free", "swapped_circles"):
         V = model(name)
         for k in (1, 0, -1):
            assert lemma_formula_check(V, k)[2]
      with pytest.raises(UnsupportedGroupError):
         lemma_formula_check(model("z3_circle_rotation"), 0)
