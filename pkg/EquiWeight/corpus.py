"""
Model files: loading, validation and serialization of ``VarietyModel`` objects,
and verification of the expected values recorded in them.
"""
import json
import os
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from jsonschema import ValidationError, validate

from .complexes import FilteredGComplex, GChainComplex, VarietyModel, canonical_filtration
from .gf2 import GF2Matrix, Subspace, rank
from .groups import FiniteGroup, GModule
from .lfunctor import EquivariantHomology
from .logger import Logger
from .smithhat import (B_prime, build_hatC, euler_identity, hat_E1_check, page_two_collapse, quotient_comparison,
                       smith_exactness, thm411_suite)
from .specseq import hochschild_serre
from .utils import (MODEL_SCHEMA, PROVENANCE_TAGS, REGEX_DEGREE_KEY, EquiWeightError, ModelValidationError)
from .weights import (BkG, betaG_odd, equivariant_weight_ss, invariant_beta, lemma_formula_check, odd_order_check,
                      omega_filtration, qB, thm416_check, top_row_check, virtual_betti, weight_ss)

CORPUS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")
NEGATIVE_DIR = os.path.join(CORPUS_DIR, "negative")

# reading

def _read_document(path: str) -> dict:
   if not os.path.isfile(path):
      raise ModelValidationError(f"model file '{path}' does not exist")
   with open(path, 'r', encoding='utf-8') as json_file:
      try:
         document = json.load(json_file)
      except json.JSONDecodeError as reason:
         raise ModelValidationError(f"'{path}' is not valid JSON: {reason}")
   try:
      validate(document, MODEL_SCHEMA)
   except ValidationError as reason:
      where = "/".join(str(part) for part in reason.absolute_path)
      raise ModelValidationError(f"'{path}' does not match the model schema at '{where}': {reason.message}")
   return document

def _group(spec: Optional[dict], default: Optional[FiniteGroup] = None) -> FiniteGroup:
   if spec is None:
      return default if default is not None else FiniteGroup.trivial()
   if "cyclic" in spec:
      return FiniteGroup.cyclic(spec["cyclic"])
   return FiniteGroup.from_names(spec["elements"], spec["table"])

def _cells(spec: Dict[str, List[str]]) -> Dict[int, List[str]]:
   cells = {}
   seen = set()
   for key, labels in spec.items():
      if not re.match(REGEX_DEGREE_KEY, key):
         raise ModelValidationError(f"cell degree '{key}' is not an integer")
      for label in labels:
         if label in seen:
            raise ModelValidationError(f"cell '{label}' is declared twice")
         seen.add(label)
      cells[int(key)] = list(labels)
   return cells

def _locate(cells: Dict[int, List[str]]) -> Dict[str, tuple]:
   return {label: (q, i) for q, labels in cells.items() for i, label in enumerate(labels)}

def _boundaries(cells: Dict[int, List[str]], spec: Dict[str, List[str]]) -> Dict[int, GF2Matrix]:
   where = _locate(cells)
   matrices = {q: np.zeros((len(cells.get(q - 1, [])), len(labels)), dtype=np.uint8) for q, labels in cells.items()}
   for cell, faces in spec.items():
      if cell not in where:
         raise ModelValidationError(f"boundary given for unknown cell '{cell}'")
      q, j = where[cell]
      for face in faces:
         if face not in where:
            raise ModelValidationError(f"boundary of '{cell}' uses unknown cell '{face}'")
         face_q, i = where[face]
         if face_q != q - 1:
            raise ModelValidationError(f"boundary of '{cell}' (degree {q}) contains '{face}' of degree {face_q}")
         matrices[q][i, j] ^= 1
   return {q: GF2Matrix(matrix) for q, matrix in matrices.items() if matrix.size}

def _modules(group: FiniteGroup, cells: Dict[int, List[str]], spec: Optional[Dict[str, Dict[str, str]]]) -> Dict[int, GModule]:
   if not spec:
      return {q: GModule.trivial(group, len(labels)) for q, labels in cells.items()}
   where = _locate(cells)
   permutations = {q: {} for q in cells}
   for element, mapping in spec.items():
      try:
         g = group.element(element)
      except EquiWeightError:
         raise ModelValidationError(f"action given for unknown group element '{element}'")
      for q in cells:
         permutations[q][g] = list(range(len(cells[q])))
      for source, target in mapping.items():
         if source not in where or target not in where:
            raise ModelValidationError(f"action of '{element}' maps unknown cell '{source if source not in where else target}'")
         (q, i), (target_q, j) = where[source], where[target]
         if q != target_q:
            raise ModelValidationError(f"action of '{element}' moves '{source}' to another degree")
         permutations[q][g][i] = j
   return {q: GModule.from_permutations(group, len(cells[q]), permutations[q]) for q in cells}

def _span(labels_list: Sequence[Sequence[str]], cells: Dict[int, List[str]]) -> Dict[int, List[np.ndarray]]:
   where = _locate(cells)
   vectors: Dict[int, List[np.ndarray]] = {}
   for labels in labels_list:
      degrees = set()
      for label in labels:
         if label not in where:
            raise ModelValidationError(f"filtration generator uses unknown cell '{label}'")
         degrees.add(where[label][0])
      if len(degrees) != 1:
         raise ModelValidationError(f"filtration generator {'+'.join(labels)} mixes degrees")
      q = degrees.pop()
      vector = np.zeros(len(cells[q]), dtype=np.uint8)
      for label in labels:
         vector[where[label][1]] ^= 1
      vectors.setdefault(q, []).append(vector)
   return vectors

def _filtration(K: GChainComplex, cells: Dict[int, List[str]], spec: Optional[dict]) -> FilteredGComplex:
   if spec is None:
      return FilteredGComplex(K, 0, 0, {})
   if spec.get("canonical"):
      return canonical_filtration(K)
   alpha_min, alpha_max = spec["alpha_min"], spec["alpha_max"]
   for key in spec["levels"]:
      alpha = int(key)
      if not alpha_min <= alpha < alpha_max:
         raise ModelValidationError(f"filtration level {alpha} outside [{alpha_min}, {alpha_max})")
   filt = {}
   collected: Dict[int, List[np.ndarray]] = {}
   for alpha in range(alpha_min, alpha_max):
      for q, vectors in _span(spec["levels"].get(str(alpha), []), cells).items():
         collected.setdefault(q, []).extend(vectors)
      for q in K.degrees():
         rows = collected.get(q, [])
         filt[(alpha, q)] = Subspace(K.dim(q), np.array(rows, dtype=np.uint8)) if rows else Subspace.zero(K.dim(q))
   return FilteredGComplex(K, alpha_min, alpha_max, filt)

def _complex(spec: dict, group: FiniteGroup) -> FilteredGComplex:
   group = _group(spec.get("group"), group)
   cells = _cells(spec["cells"])
   modules = _modules(group, cells, spec.get("action"))
   names = {q: labels for q, labels in cells.items()}
   K = GChainComplex(group, modules, _boundaries(cells, spec.get("boundary", {})), names)
   return _filtration(K, cells, spec.get("filtration"))

def _companion(spec: Optional[dict], group: FiniteGroup, base_dir: str) -> Optional[FilteredGComplex]:
   if spec is None:
      return None
   if "ref" in spec:
      spec = _read_document(os.path.join(base_dir, spec["ref"]))
      spec = {key: spec[key] for key in ("cells", "boundary", "filtration") if key in spec}
   return _complex(spec, group)

def _indices(K: GChainComplex, labels: Sequence[str], what: str) -> Dict[int, List[int]]:
   where = {label: (q, i) for q in K.degrees() for i, label in enumerate(K.names.get(q, []))}
   result: Dict[int, List[int]] = {}
   for label in labels:
      if label not in where:
         raise ModelValidationError(f"{what} cell '{label}' is not a cell of the model")
      q, i = where[label]
      result.setdefault(q, []).append(i)
   return result

def load(path: str) -> VarietyModel:
   """
Load and validate a model file.

**Arguments:**

*  ``path``

   / *Condition*: required / *Type*: str /

   Path to the model JSON file.

**Returns:**

* ``model``

  / *Type*: VarietyModel /

**Raises:**

*  ``ModelValidationError``

   If the file is not valid JSON, violates the schema or describes an invalid
   filtered G-complex (the message names the violated condition).
   """
   document = _read_document(path)
   base_dir = os.path.dirname(os.path.abspath(path))
   provenance = document.get("provenance", "")
   if provenance and provenance.split(":")[0].split()[0] not in PROVENANCE_TAGS:
      raise ModelValidationError(f"provenance of '{path}' must start with one of {', '.join(PROVENANCE_TAGS)}")
   FK = _complex(document, None)
   group = FK.group
   fixed_cells = None
   if "fixed_cells" in document:
      fixed_cells = _indices(FK.base, document["fixed_cells"], "fixed")
   companions = document.get("companions", {})
   quotient, quotient_map = None, None
   if "quotient" in companions:
      spec = companions["quotient"]
      if "ref" in spec:
         quotient = load(os.path.join(base_dir, spec["ref"]))
      elif "model" in spec:
         quotient = VarietyModel(spec["model"].get("label", f"{document['label']}/G"),
                                 _complex(spec["model"], FiniteGroup.trivial()))
      else:
         raise ModelValidationError(f"quotient companion of '{path}' needs a model or a ref")
      quotient_map = _quotient_map(FK.base, quotient.base, spec["map"])
   model = VarietyModel(document["label"], FK,
                        fixed_cells=fixed_cells,
                        flags=dict(document.get("flags", {})),
                        invariant_model=_companion(companions.get("invariant"), group, base_dir),
                        fixed_model=_companion(companions.get("fixed"), group, base_dir),
                        quotient=quotient,
                        quotient_map=quotient_map,
                        provenance=provenance,
                        derivation=document.get("derivation", ""),
                        expected=list(document.get("expected", [])),
                        additivity=list(document.get("additivity", [])),
                        source_path=os.path.abspath(path))
   return model

def _quotient_map(K: GChainComplex, Q: GChainComplex, spec: Dict[str, str]) -> Dict[int, List[int]]:
   targets = {label: i for q in Q.degrees() for i, label in enumerate(Q.names.get(q, []))}
   result = {}
   for q in K.degrees():
      images = []
      for label in K.names.get(q, []):
         if label not in spec:
            raise ModelValidationError(f"quotient map misses cell '{label}'")
         if spec[label] not in targets:
            raise ModelValidationError(f"quotient map sends '{label}' to unknown cell '{spec[label]}'")
         images.append(targets[spec[label]])
      result[q] = images
   return result

# writing

def _serialize_complex(FK: FilteredGComplex, with_group: bool = True) -> dict:
   K = FK.base
   G = K.group
   document = {}
   if with_group:
      document["group"] = {"elements": list(G.names),
                           "table": [[G.names[G.product(g, h)] for h in range(G.order)] for g in range(G.order)]}
   document["cells"] = {str(q): list(K.names[q]) for q in K.degrees() if K.dim(q)}
   boundary = {}
   for q in K.degrees():
      matrix = K.differential(q)
      for j, label in enumerate(K.names.get(q, [])):
         faces = [K.names[q - 1][i] for i in np.flatnonzero(matrix.column(j))] if matrix.rows else []
         if faces:
            boundary[label] = faces
   if boundary:
      document["boundary"] = boundary
   action = {}
   for g in G.generators:
      mapping = {}
      for q in K.degrees():
         matrix = K.module(q).action[g]
         for j, label in enumerate(K.names.get(q, [])):
            i = int(np.flatnonzero(matrix.column(j))[0])
            if i != j:
               mapping[label] = K.names[q][i]
      if mapping:
         action[G.names[g]] = mapping
   if action:
      document["action"] = action
   levels = {}
   for alpha in range(FK.alpha_min, FK.alpha_max):
      generators = []
      for q in K.degrees():
         for row in FK.F(alpha, q).vectors:
            generators.append([K.names[q][i] for i in np.flatnonzero(row)])
      if generators:
         levels[str(alpha)] = generators
   document["filtration"] = {"alpha_min": FK.alpha_min, "alpha_max": FK.alpha_max, "levels": levels}
   return document

def serialize(V: VarietyModel) -> dict:
   """
Model file document of ``V`` with an explicit filtration and action.

Loading the result gives a model equal to ``V`` up to the presentation of the
filtration generators.
   """
   document = {"schema_version": 1, "label": V.label}
   if V.provenance:
      document["provenance"] = V.provenance
   if V.derivation:
      document["derivation"] = V.derivation
   document.update(_serialize_complex(V.complex))
   if V.fixed_cells is not None:
      document["fixed_cells"] = [V.base.names[q][i] for q in sorted(V.fixed_cells) for i in V.fixed_cells[q]]
   if V.flags:
      document["flags"] = dict(V.flags)
   companions = {}
   if V.invariant_model is not None:
      companions["invariant"] = _serialize_complex(V.invariant_model, with_group=False)
      companions["invariant"].pop("action", None)
   if V.fixed_model is not None:
      companions["fixed"] = _serialize_complex(V.fixed_model, with_group=False)
      companions["fixed"].pop("action", None)
   if V.quotient is not None and V.quotient_map is not None:
      Q = V.quotient.base
      mapping = {V.base.names[q][i]: Q.names[q][target]
                 for q, targets in V.quotient_map.items() for i, target in enumerate(targets)}
      model = _serialize_complex(V.quotient.complex)
      model["label"] = V.quotient.label
      companions["quotient"] = {"model": model, "map": mapping}
   if companions:
      document["companions"] = companions
   if V.additivity:
      document["additivity"] = list(V.additivity)
   if V.expected:
      document["expected"] = list(V.expected)
   return document

def dump(V: VarietyModel, path: str):
   with open(path, 'w', encoding='utf-8') as json_file:
      json.dump(serialize(V), json_file, indent=3)

# corpus

def resolve_model_path(path: str, directory: Optional[str] = None) -> str:
   """
``path`` itself if it exists, otherwise the file of the same name in ``directory``
or in the packaged corpus, with or without the ``.json`` suffix.
   """
   if os.path.isfile(path):
      return path
   for folder in (directory, CORPUS_DIR):
      if not folder:
         continue
      candidate = os.path.join(folder, os.path.basename(path))
      for name in (candidate, candidate + ".json"):
         if os.path.isfile(name):
            return name
   raise ModelValidationError(f"model file '{path}' is neither a file nor part of the packaged corpus")

def corpus(directory: Optional[str] = None) -> List[str]:
   directory = directory or CORPUS_DIR
   return sorted(os.path.join(directory, name) for name in os.listdir(directory) if name.endswith(".json"))

def negative_fixtures(directory: Optional[str] = None) -> List[str]:
   directory = directory or NEGATIVE_DIR
   if not os.path.isdir(directory):
      return []
   return corpus(directory)

# verification

@dataclass
class VerificationResult:
   model: str
   name: str
   check: str
   expected: Any
   actual: Any
   source: str

   @property
   def passed(self) -> bool:
      return _normalize(self.expected) == _normalize(self.actual)

def _normalize(value):
   if isinstance(value, dict):
      return {str(key): _normalize(item) for key, item in value.items()}
   if isinstance(value, (list, tuple)):
      return [_normalize(item) for item in value]
   if isinstance(value, np.integer):
      return int(value)
   return value

def _listed(args: dict, key: str) -> List[int]:
   value = args.get(key, [])
   return list(value) if isinstance(value, list) else [value]

def _page_cells(ss, args: dict) -> List[int]:
   return [ss.dim(args["r"], p, q) for p, q in args["cells"]]

def _differential(ss, args: dict) -> dict:
   p, q = args["cell"]
   target, matrix = ss.differential(args["r"], p, q)
   return {"target": list(target) if target is not None else None,
           "rank": rank(matrix) if matrix.rows and matrix.cols else 0}

def _equivariant_dims(V: VarietyModel, degrees: List[int]) -> List[int]:
   homology = EquivariantHomology(V)
   return [homology.dim(k) for k in degrees]

def _sequence(V: VarietyModel, args: dict):
   kind = args.get("sequence", "hs")
   if kind == "hs":
      return hochschild_serre(V)
   if kind == "weight":
      return equivariant_weight_ss(V)
   if kind == "weight_plain":
      return weight_ss(V.complex)
   raise ModelValidationError(f"unknown spectral sequence '{kind}'")

CHECKS: Dict[str, Callable[[VarietyModel, dict], Any]] = {
   "homology": lambda V, a: [V.base.homology_dim(q) for q in _listed(a, "q")],
   "equivariant_homology": lambda V, a: _equivariant_dims(V, _listed(a, "k")),
   "weight_page": lambda V, a: _page_cells(equivariant_weight_ss(V), a),
   "weight_page_plain": lambda V, a: _page_cells(weight_ss(V.complex), a),
   "hs_page": lambda V, a: _page_cells(hochschild_serre(V), a),
   "omega": lambda V, a: omega_filtration(V, a["k"]),
   "bkg": lambda V, a: [BkG(V, k).value for k in _listed(a, "k")],
   "qb": lambda V, a: [qB(V, a["q"], i).value for i in _listed(a, "i")],
   "b_prime": lambda V, a: [B_prime(V, k).value for k in _listed(a, "k")],
   "beta": lambda V, a: [virtual_betti(V.complex, q).value for q in _listed(a, "q")],
   "beta_odd": lambda V, a: [betaG_odd(V, q).value for q in _listed(a, "q")],
   "invariant_beta": lambda V, a: [invariant_beta(V, q).value for q in _listed(a, "q")],
   "smith_exact": lambda V, a: _smith(V, a),
   "thm416": lambda V, a: all(thm416_check(V, q)[2] for q in _listed(a, "q")),
   "thm411": lambda V, a: all(result.holds for result in thm411_suite(V)),
   "invariant_cycle_formula": lambda V, a: all(lemma_formula_check(V, k)[2] for k in _listed(a, "k")),
   "hat_e1": lambda V, a: all(bool(hat_E1_check(V, k)) for k in _listed(a, "k")),
   "hat_collapse": lambda V, a: all(page_two_collapse(build_hatC(k, V.complex)) for k in _listed(a, "k")),
   "euler_identity": lambda V, a: all(len(set(euler_identity(V, k))) == 1 for k in _listed(a, "k")),
   "differential": lambda V, a: _differential(_sequence(V, a), a),
   "convergence": lambda V, a: _sequence(V, a).convergence_page(),
   "quotient": lambda V, a: bool(quotient_comparison(V, V.quotient)),
   "top_row": lambda V, a: top_row_check(V),
   "odd_order": lambda V, a: not odd_order_check(V),
}

def _smith(V: VarietyModel, args: dict):
   report = smith_exactness(V, args["alpha"])
   if report.exact:
      return True
   return {"exact": False, "failing_degree": report.failing_degree}

def verify_entry(V: VarietyModel, entry: dict) -> VerificationResult:
   """
Evaluate one expected value of a model.

Computation errors are reported as the actual value ``"error: ..."`` so that
one broken entry does not stop a corpus run.
   """
   check = entry["check"]
   if check not in CHECKS:
      raise ModelValidationError(f"unknown check '{check}' in '{V.label}'")
   try:
      actual = CHECKS[check](V, entry.get("args", {}))
   except EquiWeightError as reason:
      actual = f"error: {reason}"
   return VerificationResult(V.label, entry["name"], check, entry["value"], actual, entry["source"])

def _additivity(V: VarietyModel, entry: dict) -> VerificationResult:
   base_dir = os.path.dirname(V.source_path) if V.source_path else CORPUS_DIR
   closed = load(os.path.join(base_dir, entry["closed"]))
   open_part = load(os.path.join(base_dir, entry["open"]))
   value = {"bkg": lambda M, k: BkG(M, k).value, "beta_odd": lambda M, q: betaG_odd(M, q).value}[entry["invariant"]]
   actual = [value(V, i) - value(closed, i) - value(open_part, i) for i in entry["indices"]]
   return VerificationResult(V.label, f"additivity {entry['invariant']} {entry['closed']} + {entry['open']}",
                             "additivity", [0] * len(entry["indices"]), actual, entry["source"])

def verify_model(path: str) -> List[VerificationResult]:
   """
Load a model file and evaluate its expected values and additivity triples.

Files with an ``expect_failure`` block pass when loading fails with a message
containing the documented text.
   """
   with open(path, 'r', encoding='utf-8') as json_file:
      raw = json.load(json_file)
   label = raw.get("label", os.path.basename(path))
   if "expect_failure" in raw:
      failure = raw["expect_failure"]
      try:
         load(path)
         actual = "loaded"
      except EquiWeightError as reason:
         actual = "rejected" if failure["match"] in str(reason) else f"rejected: {reason}"
      return [VerificationResult(label, "rejected on load", "load", "rejected", actual, failure["source"])]
   V = load(path)
   Logger.log(f"Verify '{V.label}' ({len(V.expected)} expected values)", indent=2)
   results = [verify_entry(V, entry) for entry in V.expected]
   results.extend(_additivity(V, entry) for entry in V.additivity)
   return results

def verify_corpus(directory: Optional[str] = None, include_negative: bool = True) -> List[VerificationResult]:
   results = []
   for path in corpus(directory):
      results.extend(verify_model(path))
   if include_negative:
      negative = os.path.join(directory, "negative") if directory else None
      for path in negative_fixtures(negative):
         results.extend(verify_model(path))
   return results
