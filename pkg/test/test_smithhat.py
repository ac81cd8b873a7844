import sys
import os
import json

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.corpus import CORPUS_DIR, NEGATIVE_DIR, corpus, load
from EquiWeight.smithhat import (B_prime, build_hatC, euler_identity, hat_E1_check, hat_euler_characteristic, hat_ss,
                                 nash_realization_report, page_two_collapse, quotient_comparison, smith_decompose,
                                 smith_exactness, smith_exactness_all, thm411_suite)
from EquiWeight.utils import (ContainmentError, MissingCompanionError, ModelValidationError, SmithViolationError,
                              UnsupportedGroupError)

def model(name):
   return load(os.path.join(CORPUS_DIR, f"{name}.json"))

def violating_pair():
   return load(os.path.join(NEGATIVE_DIR, "smith_violating_pair.json"))

MODELS = corpus()
MODEL_IDS = [os.path.splitext(os.path.basename(path))[0] for path in MODELS]

class test_SmithSequence():
   def test_exact(self):
      for name, alphas in (("circle_reflection", (-1, 0)), ("sphere_reflection", (-2, -1, 0)), ("circle_free", (-1, 0))):
         V = model(name)
         for alpha in alphas:
            report = smith_exactness(V, alpha)
            assert report, f"{name} at {alpha}: {report.reason}"
            assert report.failing_degree is None

   def test_all_degrees(self):
      V = model("circle_reflection")
      reports = smith_exactness_all(V)
      assert [report.alpha for report in reports] == [-2, -1, 0]
      assert all(reports)

   def test_violation(self):
      V = violating_pair()
      report = smith_exactness(V, -2)
      assert not report
      assert report.failing_degree == 0
      assert report.ranks[0] == (0, 1, 0)
      assert smith_exactness(V, -1)

   def test_needs_z2(self):
      with pytest.raises(UnsupportedGroupError):
         smith_exactness(model("z3_circle_rotation"), 0)

class test_SmithDecompose():
   def test_free_edges(self):
      restriction, c_prime = smith_decompose(model("circle_reflection"), [1, 1], 0, 1)
      assert not restriction.any()
      assert c_prime.sum() == 1

   def test_fixed_vertex(self):
      restriction, c_prime = smith_decompose(model("circle_reflection"), [1, 0], 0, 0)
      assert list(restriction) == [1, 0]
      assert not np.asarray(c_prime).any()

   def test_not_invariant(self):
      with pytest.raises(ContainmentError) as error:
         smith_decompose(model("circle_reflection"), [1, 0], 0, 1)
      assert list(error.value.witness) == [1, 0]

   def test_no_decomposition(self):
      with pytest.raises(SmithViolationError):
         smith_decompose(violating_pair(), [1, 1], -2, 0)

   def test_lift_from_next_level(self, tmp_path):
      document = {
         "schema_version": 1,
         "label": "two_free_pairs",
         "provenance": "DERIVED: two free orbits, one of them with its sum in weight -1",
         "group": {"cyclic": 2},
         "cells": {"0": ["a", "b", "c", "d"]},
         "action": {"s": {"a": "b", "b": "a", "c": "d", "d": "c"}},
         "filtration": {"alpha_min": -1, "alpha_max": 1, "levels": {"-1": [["a", "b"]], "0": [["a"], ["b"]]}},
         "fixed_cells": []
      }
      path = os.path.join(str(tmp_path), "two_free_pairs.json")
      with open(path, 'w', encoding='utf-8') as json_file:
         json.dump(document, json_file)
      restriction, c_prime = smith_decompose(load(path), [1, 1, 0, 0], -1, 0)
      assert not np.asarray(restriction).any()
      c_prime = [int(x) for x in c_prime]
      assert c_prime in ([1, 0, 0, 0], [0, 1, 0, 0])

class test_QuotientComparison():
   def test_free_actions(self):
      for name in ("circle_free", "sphere_antipodal"):
         V = model(name)
         report = quotient_comparison(V, V.quotient)
         assert report, report.failures

   def test_fixed_cells_are_rejected(self):
      V = model("circle_reflection")
      Q = model("circle_free").quotient
      with pytest.raises(ModelValidationError):
         quotient_comparison(V, Q, {0: [0, 0], 1: [0, 0]})

   def test_missing_map(self):
      V = model("circle_reflection")
      with pytest.raises(MissingCompanionError):
         quotient_comparison(V, V)

class test_HatDoubleComplex():
   def test_first_page(self):
      for name in ("circle_reflection", "point_z2", "figure8_swap"):
         V = model(name)
         for k in (1, 0, -1):
            report = hat_E1_check(V, k)
            assert report, report.failures

   def test_euler_characteristic(self):
      V = model("circle_reflection")
      HC = build_hatC(0, V.complex)
      chi = hat_euler_characteristic(HC)
      assert hat_ss(HC, "I").euler_characteristic(1) == chi
      assert hat_ss(HC, "II").euler_characteristic(1) == chi
      with pytest.raises(ValueError):
         hat_ss(HC, "III")

   @pytest.mark.parametrize("path", MODELS, ids=MODEL_IDS)
   def test_connecting_maps_do_not_depend_on_lifts(self, path):
      V = load(path)
      for k in (1, 0, -1):
         reference = build_hatC(k, V.complex)
         for seed in range(20):
            HC = build_hatC(k, V.complex, rng=np.random.default_rng(seed))
            assert HC.dims == reference.dims
            for p, q in reference.cells():
               assert np.array_equal(HC.horizontal(p, q).to_array(), reference.horizontal(p, q).to_array())
               assert np.array_equal(HC.vertical(p, q).to_array(), reference.vertical(p, q).to_array())

   def test_page_two_collapse(self):
      for name in ("point_z2", "circle_reflection", "figure8_swap"):
         V = model(name)
         for k in (1, 0, -1):
            assert page_two_collapse(build_hatC(k, V.complex))

   @pytest.mark.parametrize("path", MODELS, ids=MODEL_IDS)
   def test_euler_identity(self, path):
      V = load(path)
      for k in (1, 0, -1):
         chi_II, bkg, chi_I = euler_identity(V, k)
         assert chi_II == bkg == chi_I, f"k = {k}"

class test_BPrime():
   def test_values(self):
      V = model("circle_reflection")
      assert [B_prime(V, k).value for k in (2, 1, 0, -1)] == [0, 1, 2, 2]
      assert B_prime(V, 0).route == "invariant_chains_of_model"
      assert B_prime(model("figure8_swap"), 0).route == "invariant_companion"

   def test_missing_companion(self):
      with pytest.raises(MissingCompanionError):
         B_prime(model("figure8_swap_punctured"), 0)
      with pytest.raises(UnsupportedGroupError):
         B_prime(model("z3_circle_rotation"), 0)

   def test_known_cases(self):
      results = thm411_suite(model("circle_free"))
      assert "free_action" in [result.case for result in results]
      assert all(result.holds for result in results)
      results = thm411_suite(model("circle_reflection"))
      assert "curve" in [result.case for result in results]
      assert all(result.holds for result in results)

   def test_realization_report(self):
      rows = nash_realization_report(model("circle_reflection"))
      assert [row["q"] for row in rows] == [0, 1]
      assert all(row["invariant_beta"] is not None for row in rows)
