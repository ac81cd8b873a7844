"""
Bounded chain complexes over GF(2), with and without a group action, their
filtrations, chain maps and mapping cones, and the variety model that bundles
a filtered G-complex with its companion data.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import GF2Matrix, Subspace, Subquotient, image, kernel, rank
from .groups import FiniteGroup, GModule, invariants, quotient_module
from .utils import DimensionError, MissingCompanionError, ModelValidationError

def chain_name(labels: Sequence[str], vector: np.ndarray) -> str:
   """
Name of a chain as the ``+``-joined labels of its support, ``0`` for the zero chain.
   """
   support = np.flatnonzero(vector)
   if support.size == 0:
      return "0"
   return "+".join(labels[i] for i in support)

class ChainComplex:
   """
Bounded chain complex of GF(2)-vector spaces.

**Arguments:**

*  ``dims``

   / *Condition*: required / *Type*: dict /

   Dimension per degree; degrees not listed are zero.

*  ``differentials``

   / *Condition*: required / *Type*: dict /

   ``d_n : C_n -> C_{n-1}`` per degree; missing entries are zero maps.

*  ``names``

   / *Condition*: optional / *Type*: dict / *Default*: None /

   Basis labels per degree.

**Raises:**

*  ``ModelValidationError``

   If a differential has the wrong shape or ``d d != 0`` (naming the degree).
   """
   def __init__(self, dims: Dict[int, int], differentials: Dict[int, GF2Matrix],
                names: Optional[Dict[int, Sequence[str]]] = None, check: bool = True):
      self.dims = {int(n): int(d) for n, d in dims.items()}
      nonzero = [n for n, d in self.dims.items() if d > 0]
      self.q_min = min(nonzero) if nonzero else 0
      self.q_max = max(nonzero) if nonzero else -1
      self.differentials = dict(differentials)
      self.names = {n: list(names[n]) for n in names} if names else {}
      for n in range(self.q_min, self.q_max + 1):
         if n not in self.names:
            self.names[n] = [f"c{n}_{i}" for i in range(self.dim(n))]
      if check:
         self._validate()

   def _validate(self):
      for n, matrix in self.differentials.items():
         if matrix.shape != (self.dim(n - 1), self.dim(n)):
            raise ModelValidationError(f"differential in degree {n} has shape {matrix.shape}, expected {(self.dim(n - 1), self.dim(n))}")
      for n in range(self.q_min + 1, self.q_max + 1):
         if not (self.differential(n - 1) @ self.differential(n)).is_zero():
            raise ModelValidationError(f"boundary squared is not zero in degree {n}")

   def dim(self, n: int) -> int:
      return self.dims.get(n, 0)

   def degrees(self) -> range:
      return range(self.q_min, self.q_max + 1)

   def differential(self, n: int) -> GF2Matrix:
      matrix = self.differentials.get(n)
      if matrix is None:
         return GF2Matrix.zeros(self.dim(n - 1), self.dim(n))
      return matrix

   def cycles(self, n: int) -> Subspace:
      return kernel(self.differential(n))

   def boundaries(self, n: int) -> Subspace:
      return image(self.differential(n + 1))

   def homology_dim(self, n: int) -> int:
      return self.dim(n) - rank(self.differential(n)) - rank(self.differential(n + 1))

   def homology_quotient(self, n: int) -> Subquotient:
      return Subquotient(self.cycles(n), self.boundaries(n))

   def euler_characteristic(self) -> int:
      return sum((-1) ** (n % 2) * self.homology_dim(n) for n in self.degrees())

   def label(self, n: int, vector: np.ndarray) -> str:
      return chain_name(self.names.get(n, []), vector)

   def __repr__(self) -> str:
      return f"{type(self).__name__}(degrees=[{self.q_min}, {self.q_max}], dims={[self.dim(n) for n in self.degrees()]})"

class GChainComplex(ChainComplex):
   """
Bounded chain complex of G-modules with an equivariant differential.

**Arguments:**

*  ``group``

   / *Condition*: required / *Type*: FiniteGroup /

*  ``modules``

   / *Condition*: required / *Type*: dict /

   ``GModule`` per degree.

*  ``boundaries``

   / *Condition*: required / *Type*: dict /

   ``d_q : C_q -> C_{q-1}`` per degree.

*  ``names``

   / *Condition*: optional / *Type*: dict / *Default*: None /

   Cell labels per degree.

**Raises:**

*  ``ModelValidationError``

   If ``d d != 0`` or the differential does not commute with the action.
   """
   def __init__(self, group: FiniteGroup, modules: Dict[int, GModule], boundaries: Dict[int, GF2Matrix],
                names: Optional[Dict[int, Sequence[str]]] = None, check: bool = True):
      self.group = group
      self.modules = dict(modules)
      for q, module in self.modules.items():
         if module.group != group:
            raise ModelValidationError(f"module in degree {q} belongs to another group")
      super().__init__({q: m.dim for q, m in self.modules.items()}, boundaries, names, check)
      if check:
         self._validate_equivariance()

   def _validate_equivariance(self):
      for q in range(self.q_min, self.q_max + 2):
         boundary = self.differential(q)
         if boundary.rows == 0 or boundary.cols == 0:
            continue
         for g in self.group.generators:
            if self.module(q - 1).action[g] @ boundary != boundary @ self.module(q).action[g]:
               raise ModelValidationError(f"boundary in degree {q} does not commute with the action of '{self.group.names[g]}'")

   @classmethod
   def from_plain(cls, group: FiniteGroup, complex: ChainComplex) -> "GChainComplex":
      """
The complex with trivial action of ``group``.
      """
      modules = {n: GModule.trivial(group, complex.dim(n)) for n in complex.degrees()}
      return cls(group, modules, dict(complex.differentials), complex.names, check=False)

   def module(self, q: int) -> GModule:
      module = self.modules.get(q)
      if module is None:
         return GModule.trivial(self.group, 0)
      return module

   def __repr__(self) -> str:
      return f"GChainComplex(order={self.group.order}, degrees=[{self.q_min}, {self.q_max}], dims={[self.dim(q) for q in self.degrees()]})"

def homology(K: GChainComplex, q: int) -> Tuple[int, GModule]:
   """
Homology ``H_q(K)`` with its induced action.

**Returns:**

* ``(dim, module)``

  / *Type*: tuple /

  Dimension and the G-module structure; zero outside the degree range.
   """
   module, _ = quotient_module(K.module(q), K.cycles(q), K.boundaries(q))
   return module.dim, module

def subquotient_complex(K: GChainComplex, Z: Dict[int, Subspace], B: Dict[int, Subspace],
                        action: bool = True) -> Tuple[GChainComplex, Dict[int, Subquotient]]:
   """
Complex ``Z/B`` for G-stable subcomplexes ``B`` inside ``Z``, in canonical quotient coordinates.

Degrees missing in ``Z`` are zero; missing in ``B`` are zero. Basis vectors are
named by the support of their canonical representatives.
   """
   quotients, modules, names = {}, {}, {}
   for q in K.degrees():
      numerator = Z.get(q, Subspace.zero(K.dim(q)))
      denominator = B.get(q, Subspace.zero(K.dim(q)))
      if action:
         module, quotient = quotient_module(K.module(q), numerator, denominator)
      else:
         quotient = Subquotient(numerator, denominator)
         module = GModule.trivial(K.group, quotient.dim)
      quotients[q], modules[q] = quotient, module
      names[q] = [K.label(q, rep) for rep in quotient.representatives]
   boundaries = {}
   for q in K.degrees():
      if q - 1 not in quotients or quotients[q].dim == 0 or quotients[q - 1].dim == 0:
         continue
      images = (K.differential(q) @ quotients[q].representatives.T).T
      boundaries[q] = GF2Matrix(quotients[q - 1].project(images).T)
   return GChainComplex(K.group, modules, boundaries, names), quotients

def invariant_subcomplex(K: GChainComplex) -> GChainComplex:
   """
Invariant chains ``C_q^G`` with the restricted differential and trivial action.
   """
   complex, _ = subquotient_complex(K, {q: invariants(K.module(q)) for q in K.degrees()}, {}, action=False)
   return complex

class FilteredComplex:
   """
Bounded increasing filtration of a chain complex by subcomplexes.

``F(alpha, n)`` is zero below ``alpha_min`` and everything from ``alpha_max`` on.

**Raises:**

*  ``ModelValidationError``

   If the filtration is not monotone, not exhaustive or not preserved by the
   differential.
   """
   def __init__(self, complex: ChainComplex, alpha_min: int, alpha_max: int,
                filt: Dict[Tuple[int, int], Subspace], check: bool = True):
      if alpha_min > alpha_max:
         raise ModelValidationError(f"filtration bounds [{alpha_min}, {alpha_max}] are empty")
      self.complex = complex
      self.alpha_min = alpha_min
      self.alpha_max = alpha_max
      self.filt = dict(filt)
      if check:
         self._validate()

   def _validate(self):
      C = self.complex
      for n in C.degrees():
         if not self.F(self.alpha_max, n).is_full():
            raise ModelValidationError(f"filtration is not exhaustive in degree {n}: F_{self.alpha_max} misses cells")
         for alpha in range(self.alpha_min, self.alpha_max + 1):
            level = self.F(alpha, n)
            if level.ambient_dim != C.dim(n):
               raise ModelValidationError(f"F_{alpha} in degree {n} lives in dimension {level.ambient_dim}, expected {C.dim(n)}")
            if not level.contains_subspace(self.F(alpha - 1, n)):
               raise ModelValidationError(f"filtration is not monotone: F_{alpha - 1} is not inside F_{alpha} in degree {n}")
            if not self.F(alpha, n - 1).contains_subspace(level.image_under(C.differential(n))):
               raise ModelValidationError(f"boundary does not preserve F_{alpha} in degree {n}")

   def F(self, alpha: int, n: int) -> Subspace:
      if alpha < self.alpha_min:
         return Subspace.zero(self.complex.dim(n))
      if alpha >= self.alpha_max:
         return Subspace.full(self.complex.dim(n))
      level = self.filt.get((alpha, n))
      return level if level is not None else Subspace.zero(self.complex.dim(n))

   def graded(self, alpha: int, n: int) -> Subquotient:
      return Subquotient(self.F(alpha, n), self.F(alpha - 1, n))

   def graded_dims(self) -> Dict[Tuple[int, int], int]:
      return {(alpha, n): self.F(alpha, n).dim - self.F(alpha - 1, n).dim
              for alpha in range(self.alpha_min, self.alpha_max + 1) for n in self.complex.degrees()}

   def __repr__(self) -> str:
      return f"{type(self).__name__}(alpha=[{self.alpha_min}, {self.alpha_max}], {self.complex!r})"

class FilteredGComplex(FilteredComplex):
   """
Filtered G-complex: the filtration is by G-stable subcomplexes.

**Raises:**

*  ``ModelValidationError``

   In addition to the ``FilteredComplex`` checks, if some ``F_alpha`` is not G-stable.
   """
   def __init__(self, base: GChainComplex, alpha_min: int, alpha_max: int,
                filt: Dict[Tuple[int, int], Subspace], check: bool = True):
      super().__init__(base, alpha_min, alpha_max, filt, check)
      if check:
         for (alpha, q), level in self.filt.items():
            if not base.module(q).is_stable(level):
               raise ModelValidationError(f"filtration is not equivariant: F_{alpha} in degree {q} is not G-stable")

   @property
   def base(self) -> GChainComplex:
      return self.complex

   @property
   def group(self) -> FiniteGroup:
      return self.complex.group

   def graded_complex(self, alpha: int) -> Tuple[GChainComplex, Dict[int, Subquotient]]:
      """
``F_alpha / F_{alpha-1}`` as a G-complex in quotient coordinates.
      """
      K = self.base
      return subquotient_complex(K, {q: self.F(alpha, q) for q in K.degrees()},
                                 {q: self.F(alpha - 1, q) for q in K.degrees()})

   def invariant_part(self) -> "FilteredGComplex":
      """
``(F_alpha C)^G`` inside the invariant subcomplex, in its coordinates.
      """
      K = self.base
      fixed = {q: invariants(K.module(q)) for q in K.degrees()}
      inv = invariant_subcomplex(K)
      filt = {}
      for alpha in range(self.alpha_min, self.alpha_max):
         for q in K.degrees():
            common = self.F(alpha, q).intersection(fixed[q])
            filt[(alpha, q)] = Subspace(fixed[q].dim, fixed[q].coordinates(common.vectors)) if common.dim else Subspace.zero(fixed[q].dim)
      return FilteredGComplex(inv, self.alpha_min, self.alpha_max, filt)

   def quotient_by(self, alpha: int, lower: int) -> Tuple[GChainComplex, Dict[int, Subquotient]]:
      """
``F_alpha / F_lower`` as a G-complex.
      """
      K = self.base
      return subquotient_complex(K, {q: self.F(alpha, q) for q in K.degrees()},
                                 {q: self.F(lower, q) for q in K.degrees()})

def canonical_filtration(K: GChainComplex) -> FilteredGComplex:
   """
Canonical filtration: ``F_p C_q`` is ``C_q`` for ``q > -p``, ``ker d_q`` for
``q = -p`` and zero for ``q < -p``.
   """
   if K.q_max < K.q_min:
      return FilteredGComplex(K, 0, 0, {})
   alpha_min, alpha_max = -K.q_max, -K.q_min
   filt = {}
   for p in range(alpha_min, alpha_max):
      for q in K.degrees():
         if q > -p:
            filt[(p, q)] = Subspace.full(K.dim(q))
         elif q == -p:
            filt[(p, q)] = K.cycles(q)
         else:
            filt[(p, q)] = Subspace.zero(K.dim(q))
   return FilteredGComplex(K, alpha_min, alpha_max, filt)

def restrict_to_cells(FK: FilteredGComplex, cells: Dict[int, Sequence[int]]) -> FilteredGComplex:
   """
Subcomplex spanned by the given cells, filtered by ``F_alpha`` intersected with it.

**Raises:**

*  ``ModelValidationError``

   If the cells do not span a subcomplex.
   """
   K = FK.base
   spans = {q: Subspace.coordinate(K.dim(q), sorted(cells.get(q, []))) for q in K.degrees()}
   for q in K.degrees():
      if not spans.get(q - 1, Subspace.zero(K.dim(q - 1))).contains_subspace(spans[q].image_under(K.differential(q))):
         raise ModelValidationError(f"cells in degree {q} do not span a subcomplex")
   sub, _ = subquotient_complex(K, spans, {})
   filt = {}
   for alpha in range(FK.alpha_min, FK.alpha_max):
      for q in K.degrees():
         common = FK.F(alpha, q).intersection(spans[q])
         filt[(alpha, q)] = Subspace(spans[q].dim, spans[q].coordinates(common.vectors)) if common.dim else Subspace.zero(spans[q].dim)
   return FilteredGComplex(sub, FK.alpha_min, FK.alpha_max, filt)

class ChainMap:
   """
Degree-preserving chain map between (G-)complexes.

**Raises:**

*  ``ModelValidationError``

   If ``d f != f d`` or, between G-complexes, ``f`` is not equivariant; the
   message names the degree and a witness basis vector.
   """
   def __init__(self, source: ChainComplex, target: ChainComplex, maps: Dict[int, GF2Matrix], check: bool = True):
      self.source = source
      self.target = target
      self.maps = dict(maps)
      if check:
         self._validate()

   def map(self, n: int) -> GF2Matrix:
      matrix = self.maps.get(n)
      return matrix if matrix is not None else GF2Matrix.zeros(self.target.dim(n), self.source.dim(n))

   def _validate(self):
      low = min(self.source.q_min, self.target.q_min)
      high = max(self.source.q_max, self.target.q_max)
      for n in range(low, high + 1):
         f = self.map(n)
         if f.shape != (self.target.dim(n), self.source.dim(n)):
            raise ModelValidationError(f"chain map in degree {n} has shape {f.shape}")
         difference = (self.target.differential(n) @ f) + (self.map(n - 1) @ self.source.differential(n))
         if not difference.is_zero():
            witness = int(np.flatnonzero(difference.to_array().any(axis=0))[0])
            raise ModelValidationError(f"not a chain map in degree {n}: fails on basis vector {self.source.names.get(n, [])[witness:witness + 1]}")
         if isinstance(self.source, GChainComplex) and isinstance(self.target, GChainComplex):
            for g in self.source.group.generators:
               difference = (self.target.module(n).action[g] @ f) + (f @ self.source.module(n).action[g])
               if not difference.is_zero():
                  witness = int(np.flatnonzero(difference.to_array().any(axis=0))[0])
                  raise ModelValidationError(f"chain map is not equivariant in degree {n} for '{self.source.group.names[g]}', witness {self.source.names.get(n, [])[witness:witness + 1]}")

   def is_quasi_isomorphism(self) -> bool:
      low = min(self.source.q_min, self.target.q_min)
      high = max(self.source.q_max, self.target.q_max)
      for n in range(low, high + 1):
         if self.source.homology_dim(n) != self.target.homology_dim(n):
            return False
         cycles = self.source.cycles(n)
         if cycles.dim == 0:
            continue
         images = self.map(n) @ cycles.vectors.T
         boundaries = self.target.boundaries(n)
         if (Subspace(self.target.dim(n), images.T) + boundaries).dim - boundaries.dim != self.target.homology_dim(n):
            return False
      return True

def mapping_cone(f: ChainMap) -> ChainComplex:
   """
Mapping cone ``cone_n = M_n + K_{n-1}`` of ``f : K -> M`` with ``d(m, k) = (dm + f k, dk)``.

Returns a ``GChainComplex`` when both ends carry an action.
   """
   K, M = f.source, f.target
   if K.q_max < K.q_min:
      low, high = M.q_min, M.q_max
   elif M.q_max < M.q_min:
      low, high = K.q_min + 1, K.q_max + 1
   else:
      low, high = min(M.q_min, K.q_min + 1), max(M.q_max, K.q_max + 1)
   dims = {n: M.dim(n) + K.dim(n - 1) for n in range(low, high + 1)}
   differentials = {}
   for n in range(low, high + 1):
      upper = np.hstack([M.differential(n).to_array(), f.map(n - 1).to_array()])
      lower = np.hstack([np.zeros((K.dim(n - 2), M.dim(n)), dtype=np.uint8), K.differential(n - 1).to_array()])
      differentials[n] = GF2Matrix(np.vstack([upper, lower]))
   names = {n: list(M.names.get(n, [])) + [f"cone({label})" for label in K.names.get(n - 1, [])]
            for n in range(low, high + 1)}
   if isinstance(K, GChainComplex) and isinstance(M, GChainComplex):
      modules = {}
      for n in range(low, high + 1):
         action = []
         for g in range(K.group.order):
            upper = np.hstack([M.module(n).action[g].to_array(), np.zeros((M.dim(n), K.dim(n - 1)), dtype=np.uint8)])
            lower = np.hstack([np.zeros((K.dim(n - 1), M.dim(n)), dtype=np.uint8), K.module(n - 1).action[g].to_array()])
            action.append(GF2Matrix(np.vstack([upper, lower])))
         modules[n] = GModule(K.group, action, check=False)
      return GChainComplex(K.group, modules, differentials, names)
   return ChainComplex(dims, differentials, names)

@dataclass
class VarietyModel:
   """
Finite filtered G-complex model of a real algebraic G-variety plus companion data.

``fixed_cells`` maps a degree to the indices of the cells spanning the
fixed-point subcomplex. Companion complexes carry the trivial action;
``fixed_model`` cells are labelled like the fixed cells of ``complex``.
   """
   label: str
   complex: FilteredGComplex
   fixed_cells: Optional[Dict[int, List[int]]] = None
   flags: Dict[str, bool] = field(default_factory=dict)
   invariant_model: Optional[FilteredGComplex] = None
   fixed_model: Optional[FilteredGComplex] = None
   quotient: Optional["VarietyModel"] = None
   quotient_map: Optional[Dict[int, List[int]]] = None
   provenance: str = ""
   derivation: str = ""
   expected: List[dict] = field(default_factory=list)
   additivity: List[dict] = field(default_factory=list)
   source_path: Optional[str] = None

   def __post_init__(self):
      K = self.base
      if self.fixed_cells is not None:
         for q, cells in self.fixed_cells.items():
            for i in cells:
               if not 0 <= i < K.dim(q):
                  raise ModelValidationError(f"fixed cell index {i} outside degree {q}")
               for g in self.group.generators:
                  if K.module(q).action[g].entry(i, i) != 1:
                     raise ModelValidationError(f"fixed cell '{K.names[q][i]}' is moved by '{self.group.names[g]}'")
         self.fixed_subcomplex()
      for name, companion in (("invariant", self.invariant_model), ("fixed", self.fixed_model)):
         if companion is None:
            continue
         if not all(companion.base.module(q).is_trivial() for q in companion.base.degrees()):
            raise ModelValidationError(f"{name} companion complex must carry the trivial action")
      if self.fixed_model is not None:
         if self.fixed_cells is None:
            raise ModelValidationError("a fixed-point companion needs fixed_cells")
         for q in self.fixed_model.base.degrees():
            expected = sorted(K.names[q][i] for i in self.fixed_cells.get(q, []))
            if sorted(self.fixed_model.base.names[q]) != expected:
               raise ModelValidationError(f"fixed companion cells in degree {q} differ from the fixed cells")

   @property
   def base(self) -> GChainComplex:
      return self.complex.base

   @property
   def group(self) -> FiniteGroup:
      return self.complex.base.group

   @property
   def dimension(self) -> int:
      return max(self.base.q_max, 0)

   def flag(self, name: str) -> bool:
      return bool(self.flags.get(name, False))

   def is_z2(self) -> bool:
      return self.group.order == 2

   def fixed_subcomplex(self) -> GChainComplex:
      """
Subcomplex spanned by the fixed cells (the fixed-point set).

**Raises:**

*  ``MissingCompanionError``

   If the model does not declare fixed cells.
      """
      if self.fixed_cells is None:
         raise MissingCompanionError(f"model '{self.label}' declares no fixed cells")
      return restrict_to_cells(self.complex, self.fixed_cells).base

   def fixed_filtered(self) -> Tuple[FilteredGComplex, bool]:
      """
Filtered model of the fixed-point set, and whether it was derived.

The supplied companion is used when present; otherwise ``F_alpha`` is
intersected with the span of the fixed cells.
      """
      if self.fixed_model is not None:
         return self.fixed_model, False
      if self.fixed_cells is None:
         raise MissingCompanionError(f"model '{self.label}' has neither a fixed-point companion nor fixed cells")
      return restrict_to_cells(self.complex, self.fixed_cells), True

   def fixed_embedding(self, fixed: FilteredGComplex, q: int) -> GF2Matrix:
      """
Inclusion of the fixed-point model into ``C_q`` by cell label.
      """
      K = self.base
      index = {label: i for i, label in enumerate(K.names.get(q, []))}
      matrix = np.zeros((K.dim(q), fixed.base.dim(q)), dtype=np.uint8)
      for j, label in enumerate(fixed.base.names.get(q, [])):
         for part in label.split("+"):
            if part not in index:
               raise ModelValidationError(f"fixed-point cell '{part}' is not a cell of '{self.label}'")
            matrix[index[part], j] ^= 1
      return GF2Matrix(matrix) if matrix.size else GF2Matrix.zeros(*matrix.shape)

   def invariant_filtered(self) -> Tuple[FilteredGComplex, bool]:
      """
Filtered invariant chains ``(F_alpha C)^G``, and whether they were derived.

**Raises:**

*  ``MissingCompanionError``

   If no companion is supplied and the model is not flagged such that the
   invariant chains of the model itself are faithful.
      """
      if self.invariant_model is not None:
         return self.invariant_model, False
      if self.flag("invariant_faithful") or self.flag("compact_nonsingular"):
         return self.complex.invariant_part(), True
      raise MissingCompanionError(f"model '{self.label}' has no invariant companion and is not flagged invariant_faithful")
