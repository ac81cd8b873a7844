import sys
import os
import json

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.corpus import (CORPUS_DIR, NEGATIVE_DIR, corpus, dump, load, negative_fixtures, resolve_model_path,
                               verify_corpus, verify_entry, verify_model)
from EquiWeight.utils import ModelValidationError

def write_model(directory, name, document):
   path = os.path.join(str(directory), name)
   with open(path, 'w', encoding='utf-8') as json_file:
      json.dump(document, json_file)
   return path

POINT = {
   "schema_version": 1,
   "label": "point",
   "provenance": "TRIVIAL: a point",
   "group": {"cyclic": 2},
   "cells": {"0": ["p"]},
   "filtration": {"canonical": True}
}

class test_Load():
   def test_every_model_loads(self):
      paths = corpus()
      assert len(paths) >= 15
      for path in paths:
         V = load(path)
         assert V.label == os.path.splitext(os.path.basename(path))[0]

   def test_schema_violation(self, tmp_path):
      document = dict(POINT)
      del document["cells"]
      with pytest.raises(ModelValidationError) as error:
         load(write_model(tmp_path, "nocells.json", document))
      assert "schema" in str(error.value)

   def test_provenance_tag(self, tmp_path):
      document = dict(POINT, provenance="GUESS: a point")
      with pytest.raises(ModelValidationError):
         load(write_model(tmp_path, "guess.json", document))

   def test_unknown_fixed_cell(self, tmp_path):
      document = dict(POINT, fixed_cells=["q"])
      with pytest.raises(ModelValidationError):
         load(write_model(tmp_path, "unknown.json", document))

   def test_not_json(self, tmp_path):
      path = os.path.join(str(tmp_path), "broken.json")
      with open(path, 'w', encoding='utf-8') as json_file:
         json_file.write("{")
      with pytest.raises(ModelValidationError):
         load(path)

   def test_resolve_packaged_model(self):
      assert resolve_model_path("point_z2") == os.path.join(CORPUS_DIR, "point_z2.json")
      with pytest.raises(ModelValidationError):
         resolve_model_path("no_such_model")

   def test_resolve_in_configured_corpus(self, tmp_path):
      path = write_model(tmp_path, "point_z2.json", POINT)
      assert resolve_model_path("point_z2", str(tmp_path)) == path
      assert resolve_model_path("circle_free", str(tmp_path)) == os.path.join(CORPUS_DIR, "circle_free.json")

class test_Dump():
   @pytest.mark.parametrize("name", ["figure8_swap", "sphere_antipodal", "klein_point", "z3_circle_rotation"])
   def test_dump_preserves_the_model(self, tmp_path, name):
      V = load(os.path.join(CORPUS_DIR, f"{name}.json"))
      path = os.path.join(str(tmp_path), f"{name}.json")
      dump(V, path)
      W = load(path)
      assert list(W.base.degrees()) == list(V.base.degrees())
      for q in V.base.degrees():
         assert list(W.base.names.get(q, [])) == list(V.base.names.get(q, []))
         assert np.array_equal(W.base.differential(q).to_array(), V.base.differential(q).to_array())
         for g in V.group.generators:
            assert np.array_equal(W.base.module(q).action[g].to_array(), V.base.module(q).action[g].to_array())
      assert (W.complex.alpha_min, W.complex.alpha_max) == (V.complex.alpha_min, V.complex.alpha_max)
      for alpha in range(V.complex.alpha_min, V.complex.alpha_max + 1):
         for q in V.base.degrees():
            assert W.complex.F(alpha, q) == V.complex.F(alpha, q), f"F_{alpha} C_{q}"
      assert W.fixed_cells == V.fixed_cells
      assert W.expected == V.expected

class test_Verify():
   def test_corpus_passes(self):
      results = verify_corpus()
      failing = [f"{result.model}: {result.name} expected {result.expected}, got {result.actual}"
                 for result in results if not result.passed]
      assert failing == []

   def test_negative_fixtures_are_rejected(self):
      paths = [path for path in negative_fixtures() if "bad_" in os.path.basename(path)]
      assert len(paths) == 3
      for path in paths:
         [result] = verify_model(path)
         assert result.actual == "rejected"

   def test_smith_violation_is_recorded(self):
      results = verify_model(os.path.join(NEGATIVE_DIR, "smith_violating_pair.json"))
      assert all(result.passed for result in results)
      assert {"exact": False, "failing_degree": 0} in [result.actual for result in results]

   def test_errors_become_values(self):
      V = load(os.path.join(CORPUS_DIR, "point_z2.json"))
      result = verify_entry(V, {"name": "odd order", "check": "beta_odd", "args": {"q": [0]},
                                "value": [1], "source": "TRIVIAL: none"})
      assert result.actual.startswith("error:")
      assert not result.passed

   def test_unknown_check(self):
      V = load(os.path.join(CORPUS_DIR, "point_z2.json"))
      with pytest.raises(ModelValidationError):
         verify_entry(V, {"name": "x", "check": "no_such_check", "value": 0, "source": "TRIVIAL: none"})
