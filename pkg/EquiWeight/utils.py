CONFIG_SCHEMA = {
   "type": "object",
   "properties": {
      "window": {
         "type": "object",
         "properties": {
            "p_min_offset": {"type": "integer", "minimum": 0},
            "r_max_offset": {"type": "integer", "minimum": 0}
         },
         "additionalProperties": False
      },
      "corpus": {"type": "string"},
      "output": {
         "type": "string",
         "enum": ["table", "json", "csv"]
      },
      "logfile": {"type": "string"}
   },
   "additionalProperties": False
}

MODEL_SCHEMA = {
   "type": "object",
   "properties": {
      "schema_version": {"type": "integer", "enum": [1]},
      "label": {"type": "string"},
      "provenance": {"type": "string"},
      "derivation": {"type": "string"},
      "group": {"$ref": "#/$defs/group"},
      "cells": {"$ref": "#/$defs/cells"},
      "boundary": {"$ref": "#/$defs/boundary"},
      "action": {"$ref": "#/$defs/action"},
      "filtration": {"$ref": "#/$defs/filtration"},
      "fixed_cells": {"$ref": "#/$defs/array_of_string"},
      "flags": {
         "type": "object",
         "properties": {
            "compact": {"type": "boolean"},
            "compact_nonsingular": {"type": "boolean"},
            "nash_faithful": {"type": "boolean"},
            "invariant_faithful": {"type": "boolean"}
         },
         "additionalProperties": False
      },
      "companions": {
         "type": "object",
         "properties": {
            "invariant": {"$ref": "#/$defs/companion"},
            "fixed": {"$ref": "#/$defs/companion"},
            "quotient": {
               "type": "object",
               "properties": {
                  "model": {"$ref": "#/$defs/complex_model"},
                  "ref": {"type": "string"},
                  "map": {
                     "type": "object",
                     "additionalProperties": {"type": "string"}
                  }
               },
               "required": ["map"],
               "additionalProperties": False
            }
         },
         "additionalProperties": False
      },
      "additivity": {
         "type": "array",
         "items": {
            "type": "object",
            "properties": {
               "invariant": {"type": "string", "enum": ["bkg", "beta_odd"]},
               "closed": {"type": "string"},
               "open": {"type": "string"},
               "indices": {"type": "array", "items": {"type": "integer"}},
               "source": {"$ref": "#/$defs/source_tag"}
            },
            "required": ["invariant", "closed", "open", "indices", "source"],
            "additionalProperties": False
         }
      },
      "expected": {
         "type": "array",
         "items": {"$ref": "#/$defs/expected"}
      },
      "expect_failure": {
         "type": "object",
         "properties": {
            "stage": {"type": "string", "enum": ["load"]},
            "match": {"type": "string"},
            "source": {"$ref": "#/$defs/source_tag"}
         },
         "required": ["stage", "match", "source"],
         "additionalProperties": False
      }
   },
   "required": ["schema_version", "label", "group", "cells"],
   "additionalProperties": False,
   "$defs": {
      "array_of_string": {
         "type": "array",
         "items": {"type": "string"}
      },
      "source_tag": {
         "type": "string",
         "pattern": "^(PAPER|TRIVIAL|DERIVED)\\b"
      },
      "group": {
         "oneOf": [
            {
               "type": "object",
               "properties": {
                  "cyclic": {"type": "integer", "minimum": 1}
               },
               "required": ["cyclic"],
               "additionalProperties": False
            },
            {
               "type": "object",
               "properties": {
                  "elements": {"$ref": "#/$defs/array_of_string"},
                  "table": {
                     "type": "array",
                     "items": {"$ref": "#/$defs/array_of_string"}
                  }
               },
               "required": ["elements", "table"],
               "additionalProperties": False
            }
         ]
      },
      "cells": {
         "type": "object",
         "propertyNames": {"pattern": "^-?[0-9]+$"},
         "additionalProperties": {"$ref": "#/$defs/array_of_string"}
      },
      "boundary": {
         "type": "object",
         "additionalProperties": {"$ref": "#/$defs/array_of_string"}
      },
      "action": {
         "type": "object",
         "additionalProperties": {
            "type": "object",
            "additionalProperties": {"type": "string"}
         }
      },
      "filtration": {
         "oneOf": [
            {
               "type": "object",
               "properties": {
                  "canonical": {"type": "boolean", "enum": [True]}
               },
               "required": ["canonical"],
               "additionalProperties": False
            },
            {
               "type": "object",
               "properties": {
                  "alpha_min": {"type": "integer"},
                  "alpha_max": {"type": "integer"},
                  "levels": {
                     "type": "object",
                     "propertyNames": {"pattern": "^-?[0-9]+$"},
                     "additionalProperties": {
                        "type": "array",
                        "items": {"$ref": "#/$defs/array_of_string"}
                     }
                  }
               },
               "required": ["alpha_min", "alpha_max", "levels"],
               "additionalProperties": False
            }
         ]
      },
      "complex_model": {
         "type": "object",
         "properties": {
            "label": {"type": "string"},
            "group": {"$ref": "#/$defs/group"},
            "cells": {"$ref": "#/$defs/cells"},
            "boundary": {"$ref": "#/$defs/boundary"},
            "action": {"$ref": "#/$defs/action"},
            "filtration": {"$ref": "#/$defs/filtration"}
         },
         "required": ["cells"],
         "additionalProperties": False
      },
      "companion": {
         "oneOf": [
            {"$ref": "#/$defs/complex_model"},
            {
               "type": "object",
               "properties": {"ref": {"type": "string"}},
               "required": ["ref"],
               "additionalProperties": False
            }
         ]
      },
      "expected": {
         "type": "object",
         "properties": {
            "name": {"type": "string"},
            "check": {"type": "string"},
            "args": {"type": "object"},
            "value": {},
            "source": {"$ref": "#/$defs/source_tag"}
         },
         "required": ["name", "check", "value", "source"],
         "additionalProperties": False
      }
   }
}

# window defaults: p_min = -(dim + P_MIN_OFFSET), r_max = dim + R_MAX_OFFSET
P_MIN_OFFSET = 4
R_MAX_OFFSET = 3

PROVENANCE_TAGS = ("PAPER", "TRIVIAL", "DERIVED")

REGEX_DEGREE_KEY = r"^-?\d+$"

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

class EquiWeightError(ValueError):
   """
Base class of all errors raised by the EquiWeight library.
   """
   pass

class DimensionError(EquiWeightError):
   """
Shape mismatch between matrices, vectors or subspaces.
   """
   pass

class ContainmentError(EquiWeightError):
   """
A subspace expected to be contained in another one is not.

**Arguments:**

*  ``msg``

   / *Condition*: required / *Type*: str /

   Error message.

*  ``witness``

   / *Condition*: optional / *Type*: numpy.ndarray / *Default*: None /

   A vector of the smaller space which is missing in the larger one.
   """
   def __init__(self, msg, witness=None):
      super().__init__(msg)
      self.witness = witness

class InsufficientDepthError(EquiWeightError):
   """
A projective resolution is shorter than the requested computation needs.
   """
   def __init__(self, msg, required_depth=None):
      super().__init__(msg)
      self.required_depth = required_depth

class WindowError(EquiWeightError):
   """
A value was requested outside the certified column window.
   """
   def __init__(self, msg, suggested_p_min=None):
      if suggested_p_min is not None:
         msg = f"{msg} Rerun with --pmin {suggested_p_min} or lower."
      super().__init__(msg)
      self.suggested_p_min = suggested_p_min

class ModelValidationError(EquiWeightError):
   """
An input object violates one of its construction invariants.
   """
   pass

class SmithViolationError(EquiWeightError):
   """
An invariant chain has no Smith decomposition in the given filtration degree.
   """
   def __init__(self, msg, witness=None):
      super().__init__(msg)
      self.witness = witness

class MissingCompanionError(EquiWeightError):
   """
The model lacks a companion complex or flag the operation depends on.
   """
   pass

class UnsupportedGroupError(EquiWeightError):
   """
The operation is only defined for a restricted class of groups.
   """
   pass
