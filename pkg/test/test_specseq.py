import sys
import os

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.complexes import ChainComplex, FilteredComplex
from EquiWeight.corpus import CORPUS_DIR, corpus, load
from EquiWeight.gf2 import GF2Matrix, Subspace, rank
from EquiWeight.groups import resolution_for
from EquiWeight.lfunctor import build_L
from EquiWeight.smithhat import build_hatC, hat_ss
from EquiWeight.specseq import (hochschild_serre, hochschild_serre_e2_check, reindex_weight, ss_double_I, ss_double_II,
                                ss_filtered)
from EquiWeight.utils import EquiWeightError, WindowError
from EquiWeight.weights import equivariant_weight_ss

def model(name):
   return load(os.path.join(CORPUS_DIR, f"{name}.json"))

MODELS = corpus()
MODEL_IDS = [os.path.splitext(os.path.basename(path))[0] for path in MODELS]

def limit_by_degree(ss):
   limit = {}
   for (p, q), d in ss.infinity_dims(certified_only=False).items():
      limit[p + q] = limit.get(p + q, 0) + d
   return limit

def interval():
   """
Interval v0 - e - v1 with both vertices in F_{-1} and the edge in F_0.
   """
   C = ChainComplex({0: 2, 1: 1}, {1: GF2Matrix([[1], [1]])}, {0: ["v0", "v1"], 1: ["e"]})
   return FilteredComplex(C, -1, 0, {(-1, 0): Subspace.full(2), (-1, 1): Subspace.zero(1)})

class test_FilteredSpectralSequence():
   def test_pages(self):
      ss = ss_filtered(interval())
      assert ss.first_page == 0
      assert ss.dim(1, 0, 1) == 1
      assert ss.dim(1, -1, 1) == 2
      assert ss.dim(2, 0, 1) == 0
      assert ss.dim(2, -1, 1) == 1
      assert ss.dim(2, 5, 5) == 0

   def test_differential(self):
      ss = ss_filtered(interval())
      target, matrix = ss.differential(1, 0, 1)
      assert target == (-1, 1)
      assert rank(matrix) == 1
      assert ss.differential(2, -1, 1)[0] is None

   def test_convergence(self):
      ss = ss_filtered(interval())
      assert ss.convergence_page() == 2
      assert ss.verify() == []
      assert ss.page(10) is ss.page(ss.last_page)
      with pytest.raises(EquiWeightError):
         ss.page(-1)

   def test_abutment(self):
      ss = ss_filtered(interval())
      assert ss.abutment.dims(0) == {-2: 0, -1: 1, 0: 1}
      assert ss.abutment.graded(0, -1) == 1
      assert ss.abutment.is_consistent()
      assert ss.infinity_dims()[(-1, 1)] == 1

   def test_records_and_generators(self):
      ss = ss_filtered(interval())
      records = ss.records(pages=[2], generators=True)
      [record] = [record for record in records if record["dim"]]
      assert (record["r"], record["p"], record["q"]) == (2, -1, 1)
      assert record["stabilized"]
      assert len(record["generators"]) == 1
      assert record["generators"][0] in ("v0", "v1")

   def test_uncertified_cells(self):
      ss = ss_filtered(interval(), certified=lambda r, p, q: p >= 0)
      assert (-1, 1) not in ss.dims(1)
      assert ss.dims(1, certified_only=False)[(-1, 1)] == 2
      with pytest.raises(WindowError):
         ss.dim(1, -1, 1)

   def test_weight_index(self):
      ss = ss_filtered(interval())
      weighted = reindex_weight(ss)
      assert weighted.index == "weight"
      assert weighted.first_page == 1
      assert weighted.dim(2, 1, 0) == ss.dim(1, 0, 1)
      back = weighted.relabel(lambda p, q: (-q, p + 2 * q), shift=-1)
      assert back.dims(2) == ss.dims(2)

class test_DoubleComplexSequences():
   def test_both_filtrations_abut_to_the_total_homology(self):
      V = model("circle_reflection")
      D = build_L(V.base, resolution_for(V.group, 4), -3)
      T = D.total_complex()
      for ss in (ss_double_I(D), ss_double_II(D)):
         limit = ss.infinity_dims()
         for n in T.degrees():
            assert sum(d for (p, q), d in limit.items() if p + q == n) == T.homology_dim(n)

class test_HochschildSerre():
   def test_antipodal_transgression(self):
      ss = hochschild_serre(model("sphere_antipodal"))
      target, matrix = ss.differential(3, 0, 0)
      assert target == (-3, 2)
      assert rank(matrix) == 1
      assert ss.convergence_page() == 4
      assert [ss.dim(4, p, 0) for p in (0, -1, -2)] == [0, 0, 0]
      assert [ss.dim(4, p, 2) for p in (0, -1, -2)] == [1, 1, 1]

   def test_transgression_hits_the_fundamental_class(self):
      ss = hochschild_serre(model("sphere_antipodal"))
      [point] = ss.generators(3, 0, 0)
      assert "[v+]@(0,0)" in point or "[v-]@(0,0)" in point
      assert ss.generators(3, -3, 2) == ["[D++D-]@(-3,2)"]
      target, matrix = ss.differential(3, 0, 0)
      assert target == (-3, 2)
      assert matrix.to_array().tolist() == [[1]]

   def test_second_page_is_group_cohomology(self):
      for name in ("sphere_antipodal", "sphere_reflection", "free_point_pair"):
         V = model(name)
         ss = hochschild_serre(V)
         assert hochschild_serre_e2_check(V, ss) == []
         assert ss.verify() == []

   def test_reflection_collapses(self):
      ss = hochschild_serre(model("sphere_reflection"))
      assert ss.convergence_page() <= 2
      assert ss.dim(2, -1, 2) == 1
      assert ss.dim(2, -1, 1) == 0

class test_CorpusSequences():
   @pytest.mark.parametrize("path", MODELS, ids=MODEL_IDS)
   def test_equivariant_weight_sequence(self, path):
      ss = equivariant_weight_ss(load(path))
      assert ss.verify() == []
      assert ss.abutment.is_consistent()
      limit = limit_by_degree(ss)
      for n in ss.complex.degrees():
         assert limit.get(n, 0) == ss.complex.homology_dim(n), f"total degree {n}"

   @pytest.mark.parametrize("path", MODELS, ids=MODEL_IDS)
   def test_hat_sequences(self, path):
      V = load(path)
      for k in (1, 0, -1):
         HC = build_hatC(k, V.complex)
         T = HC.total_complex()
         for variant in ("I", "II"):
            ss = hat_ss(HC, variant)
            assert ss.verify() == [], f"k = {k}, variant {variant}"
            limit = limit_by_degree(ss)
            for n in T.degrees():
               assert limit.get(n, 0) == T.homology_dim(n), f"k = {k}, variant {variant}, total degree {n}"
