import sys
import os
import json

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.corpus import NEGATIVE_DIR
from EquiWeight.equi_weight import EquiWeight, Report
from EquiWeight.utils import EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE

def run(argv):
   with pytest.raises(SystemExit) as exit_info:
      EquiWeight(argv + ["--quiet"])
   return exit_info.value.code

class test_Report():
   def test_render(self):
      report = Report("title", ["k", "dim"], [[0, 1], [-1, 2]], True, ["a note"])
      table = report.render()
      assert table.startswith("title\n")
      assert "note: a note" in table
      assert table.rstrip().endswith("PASS")
      assert report.render("csv") == "k, dim\n0, 1\n-1, 2\n"
      assert json.loads(report.render("json"))["rows"] == [{"k": 0, "dim": 1}, {"k": -1, "dim": 2}]

class test_Commands():
   def test_homology(self, capsys):
      assert run(["homology", "circle_reflection"]) == EXIT_PASS
      out = capsys.readouterr().out
      assert "H_q(circle_reflection)" in out
      assert out.rstrip().endswith("PASS")

   def test_equivariant_homology_json(self, capsys):
      assert run(["equivariant-homology", "point_z2", "--kmin", "-2", "--kmax", "1", "--json"]) == EXIT_PASS
      rows = json.loads(capsys.readouterr().out)["rows"]
      assert [row["dim"] for row in rows] == [0, 1, 1, 1]

   def test_group_cohomology(self, capsys):
      assert run(["group-cohomology", "point_z2", "--nmax", "3", "--csv"]) == EXIT_PASS
      assert capsys.readouterr().out == "n, dim\n0, 1\n1, 1\n2, 1\n3, 1\n"

   def test_spectral_sequence_records(self, capsys):
      assert run(["hochschild-serre", "sphere_antipodal", "--page", "4", "--json"]) == EXIT_PASS
      records = json.loads(capsys.readouterr().out)
      cells = {(record["p"], record["q"]): record["dim"] for record in records}
      assert cells[(0, 2)] == 1
      assert cells[(0, 0)] == 0

   def test_raw_index(self, capsys):
      assert run(["weight-ss", "figure8_swap", "--raw-index", "--page", "1", "--json"]) == EXIT_PASS
      records = json.loads(capsys.readouterr().out)
      assert all(record["r"] == 1 for record in records)

   def test_invariants(self, capsys):
      assert run(["invariants", "bkg", "figure8_swap", "--kmin", "-1", "--kmax", "2", "--json"]) == EXIT_PASS
      rows = json.loads(capsys.readouterr().out)["rows"]
      assert [row["value"] for row in rows] == [0, 1, 1, 1]

   def test_output_file(self, tmp_path, capsys):
      target = os.path.join(str(tmp_path), "report.txt")
      assert run(["homology", "point_z2", "--output", target]) == EXIT_PASS
      assert capsys.readouterr().out == ""
      with open(target, 'r', encoding='utf-8') as report_file:
         assert "H_q(point_z2)" in report_file.read()

   def test_verify_corpus(self, capsys):
      assert run(["verify-corpus"]) == EXIT_PASS
      assert "PASS" in capsys.readouterr().out

class test_ExitCodes():
   def test_failing_check(self, capsys):
      model = os.path.join(NEGATIVE_DIR, "smith_violating_pair.json")
      assert run(["smith-check", model, "--alpha", "-2"]) == EXIT_CHECK_FAILED
      assert "FAIL" in capsys.readouterr().out
      assert run(["smith-check", model, "--alpha", "-1"]) == EXIT_PASS

   def test_invalid_model(self):
      assert run(["homology", os.path.join(NEGATIVE_DIR, "bad_boundary.json")]) == EXIT_USAGE
      assert run(["homology", "no_such_model"]) == EXIT_USAGE

   def test_library_errors(self):
      assert run(["invariants", "qb", "figure8_swap"]) == EXIT_USAGE
      assert run(["invariants", "beta-odd", "point_z2"]) == EXIT_USAGE
      assert run(["quotient-check", "circle_reflection"]) == EXIT_USAGE

   def test_usage(self):
      assert run([]) == EXIT_USAGE
      assert run(["homology"]) == EXIT_USAGE
