import sys
import os
import json

import pytest
from jsonschema import ValidationError, validate

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../"))
from EquiWeight.equi_weight import DEFAULT_CONFIG, process_configuration, window_for
from EquiWeight.lfunctor import WindowContract
from EquiWeight.utils import CONFIG_SCHEMA, EXIT_USAGE

def write_config(directory, document):
   path = os.path.join(str(directory), "config.json")
   with open(path, 'w', encoding='utf-8') as json_file:
      json.dump(document, json_file)
   return path

class Args():
   pmin = None
   rmax = None

class Model():
   dimension = 1

class test_Configuration():
   def test_default_config_is_valid(self):
      config = process_configuration(DEFAULT_CONFIG)
      assert config["window"] == {"p_min_offset": 4, "r_max_offset": 3}

   def test_schema(self):
      validate({"output": "csv", "corpus": "models"}, CONFIG_SCHEMA)
      with pytest.raises(ValidationError):
         validate({"output": "xml"}, CONFIG_SCHEMA)
      with pytest.raises(ValidationError):
         validate({"window": {"p_min_offset": -1}}, CONFIG_SCHEMA)
      with pytest.raises(ValidationError):
         validate({"jira": {}}, CONFIG_SCHEMA)

   def test_environment_variables(self, tmp_path, monkeypatch):
      monkeypatch.setenv("EQUIWEIGHT_CORPUS", "/data/models")
      config = process_configuration(write_config(tmp_path, {"corpus": "${EQUIWEIGHT_CORPUS}/curves"}))
      assert config["corpus"] == "/data/models/curves"

   def test_invalid_config_exits(self, tmp_path):
      with pytest.raises(SystemExit) as exit_info:
         process_configuration(write_config(tmp_path, {"output": "xml"}))
      assert exit_info.value.code == EXIT_USAGE
      with pytest.raises(SystemExit) as exit_info:
         process_configuration(os.path.join(str(tmp_path), "missing.json"))
      assert exit_info.value.code == EXIT_USAGE

   def test_window_offsets(self):
      contract = window_for(Model(), Args(), {"window": {"p_min_offset": 2, "r_max_offset": 1}})
      assert contract == WindowContract(-3, 2)
      args = Args()
      args.pmin = -10
      assert window_for(Model(), args, {}).p_min == -10
