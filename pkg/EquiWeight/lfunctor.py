"""
The functor L: double complexes ``Hom_G(F_{-p}, C_q)``, their total complexes,
the filtration induced by a filtered G-complex and equivariant homology.

The double complex is unbounded to the left. It is computed on a column
window ``[p_min - r_max, 0]`` described by a ``WindowContract``; only values
which do not depend on the cut are reported.
"""
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import ChainComplex, ChainMap, FilteredComplex, FilteredGComplex, GChainComplex, VarietyModel, chain_name
from .gf2 import GF2Matrix, Subspace
from .groups import GModule, Resolution, resolution_for
from .logger import Logger
from .utils import (DimensionError, InsufficientDepthError, ModelValidationError, WindowError,
                    P_MIN_OFFSET, R_MAX_OFFSET)

Cell = Tuple[int, int]

class DoubleComplex:
   """
Bounded grid of GF(2)-spaces ``D_{p,q}`` with commuting differentials.

**Arguments:**

*  ``p_range``, ``q_range``

   / *Condition*: required / *Type*: tuple /

   Inclusive column and row bounds.

*  ``dims``

   / *Condition*: required / *Type*: dict /

   Dimension per cell ``(p, q)``; missing cells are zero.

*  ``d_horiz``

   / *Condition*: required / *Type*: dict /

   ``D_{p,q} -> D_{p-1,q}`` keyed by the source cell.

*  ``d_vert``

   / *Condition*: required / *Type*: dict /

   ``D_{p,q} -> D_{p,q-1}`` keyed by the source cell.

*  ``names``

   / *Condition*: optional / *Type*: dict / *Default*: None /

   Basis labels per cell.

*  ``embeddings``

   / *Condition*: optional / *Type*: dict / *Default*: None /

   Per cell a ``(Subspace, labels)`` pair: the cell is the given subspace of a
   labelled ambient space. Used to name chains by ambient cells.

**Raises:**

*  ``ModelValidationError``

   If a map has the wrong shape, a differential does not square to zero or a
   square does not commute.
   """
   def __init__(self, p_range: Tuple[int, int], q_range: Tuple[int, int], dims: Dict[Cell, int],
                d_horiz: Dict[Cell, GF2Matrix], d_vert: Dict[Cell, GF2Matrix],
                names: Optional[Dict[Cell, Sequence[str]]] = None,
                embeddings: Optional[Dict[Cell, Tuple[Subspace, Sequence[str]]]] = None,
                check: bool = True):
      self.p_min, self.p_max = p_range
      self.q_min, self.q_max = q_range
      self.dims = {cell: d for cell, d in dims.items() if d > 0}
      self.d_horiz = dict(d_horiz)
      self.d_vert = dict(d_vert)
      self.names = dict(names) if names else {}
      self.embeddings = dict(embeddings) if embeddings else {}
      if check:
         self._validate()

   def dim(self, p: int, q: int) -> int:
      return self.dims.get((p, q), 0)

   def cells(self) -> List[Cell]:
      return [(p, q) for p in range(self.p_min, self.p_max + 1) for q in range(self.q_min, self.q_max + 1)]

   def horizontal(self, p: int, q: int) -> GF2Matrix:
      if p - 1 < self.p_min:
         return GF2Matrix.zeros(0, self.dim(p, q))
      matrix = self.d_horiz.get((p, q))
      return matrix if matrix is not None else GF2Matrix.zeros(self.dim(p - 1, q), self.dim(p, q))

   def vertical(self, p: int, q: int) -> GF2Matrix:
      if q - 1 < self.q_min:
         return GF2Matrix.zeros(0, self.dim(p, q))
      matrix = self.d_vert.get((p, q))
      return matrix if matrix is not None else GF2Matrix.zeros(self.dim(p, q - 1), self.dim(p, q))

   def _validate(self):
      for (p, q), matrix in self.d_horiz.items():
         if matrix.shape != (self.dim(p - 1, q), self.dim(p, q)):
            raise ModelValidationError(f"horizontal map at ({p},{q}) has shape {matrix.shape}")
      for (p, q), matrix in self.d_vert.items():
         if matrix.shape != (self.dim(p, q - 1), self.dim(p, q)):
            raise ModelValidationError(f"vertical map at ({p},{q}) has shape {matrix.shape}")
      for p, q in self.cells():
         if self.dim(p, q) == 0:
            continue
         if p - 2 >= self.p_min and not (self.horizontal(p - 1, q) @ self.horizontal(p, q)).is_zero():
            raise ModelValidationError(f"horizontal differential squared is not zero at ({p},{q})")
         if q - 2 >= self.q_min and not (self.vertical(p, q - 1) @ self.vertical(p, q)).is_zero():
            raise ModelValidationError(f"vertical differential squared is not zero at ({p},{q})")
         if p - 1 >= self.p_min and q - 1 >= self.q_min:
            if self.horizontal(p, q - 1) @ self.vertical(p, q) != self.vertical(p - 1, q) @ self.horizontal(p, q):
               raise ModelValidationError(f"square at ({p},{q}) does not commute")

   def transpose(self) -> "DoubleComplex":
      """
The double complex with the roles of ``p`` and ``q`` exchanged.
      """
      swap = lambda cells: {(q, p): value for (p, q), value in cells.items()}
      return DoubleComplex((self.q_min, self.q_max), (self.p_min, self.p_max), swap(self.dims),
                           swap(self.d_vert), swap(self.d_horiz), swap(self.names), swap(self.embeddings),
                           check=False)

   def describe(self, p: int, q: int, coordinates: np.ndarray) -> str:
      """
Name of an element of ``D_{p,q}`` given in cell coordinates.
      """
      if (p, q) in self.embeddings:
         space, labels = self.embeddings[(p, q)]
         return chain_name(labels, space.combine(coordinates))
      labels = self.names.get((p, q)) or [f"x{i}" for i in range(self.dim(p, q))]
      return chain_name(labels, coordinates)

   def total_complex(self) -> "TotalComplex":
      return TotalComplex(self)

   def column_filtration(self) -> FilteredComplex:
      """
``F_s Tot_n = sum of D_{p, n-p}`` over ``p <= s``.
      """
      return self.total_complex().filtration_by(lambda p, q: p, self.p_min, self.p_max)

   def row_filtration(self) -> FilteredComplex:
      """
``F_s Tot_n = sum of D_{n-q, q}`` over ``q <= s``.
      """
      return self.total_complex().filtration_by(lambda p, q: q, self.q_min, self.q_max)

   def __repr__(self) -> str:
      return f"DoubleComplex(p=[{self.p_min}, {self.p_max}], q=[{self.q_min}, {self.q_max}], cells={len(self.dims)})"

class TotalComplex(ChainComplex):
   """
Total complex of a ``DoubleComplex``; keeps the ``(p, q)`` provenance of every summand.

``summands[n]`` lists ``(p, q, offset, dim)`` in increasing ``p``.
   """
   def __init__(self, double: DoubleComplex):
      self.double = double
      self.summands: Dict[int, List[Tuple[int, int, int, int]]] = {}
      for p, q in double.cells():
         d = double.dim(p, q)
         if d == 0:
            continue
         block = self.summands.setdefault(p + q, [])
         offset = sum(entry[3] for entry in block)
         block.append((p, q, offset, d))
      dims = {n: sum(entry[3] for entry in block) for n, block in self.summands.items()}
      differentials = {}
      for n in dims:
         if n - 1 not in dims:
            continue
         matrix = np.zeros((dims[n - 1], dims[n]), dtype=np.uint8)
         for p, q, offset, d in self.summands[n]:
            for target, component in (((p - 1, q), double.horizontal(p, q)), ((p, q - 1), double.vertical(p, q))):
               placed = self.offset(n - 1, *target)
               if placed is None or component.rows == 0:
                  continue
               matrix[placed:placed + component.rows, offset:offset + d] ^= component.to_array()
         differentials[n] = GF2Matrix(matrix)
      names = {n: [f"{label}@({p},{q})" for p, q, _, d in self.summands[n]
                   for label in (double.names.get((p, q)) or [f"x{i}" for i in range(d)])]
               for n in dims}
      super().__init__(dims, differentials, names, check=False)

   def offset(self, n: int, p: int, q: int) -> Optional[int]:
      for cell_p, cell_q, offset, _ in self.summands.get(n, []):
         if (cell_p, cell_q) == (p, q):
            return offset
      return None

   def component(self, n: int, vector: np.ndarray, p: int, q: int) -> np.ndarray:
      offset = self.offset(n, p, q)
      if offset is None:
         return np.zeros(0, dtype=np.uint8)
      return vector[offset:offset + self.double.dim(p, q)]

   def components(self, n: int, vector: np.ndarray) -> Dict[Cell, str]:
      """
Non-zero components of a total chain, named by cell.
      """
      named = {}
      for p, q, offset, d in self.summands.get(n, []):
         part = vector[offset:offset + d]
         if part.any():
            named[(p, q)] = self.double.describe(p, q, part)
      return named

   def label(self, n: int, vector: np.ndarray) -> str:
      named = self.components(n, vector)
      if not named:
         return "0"
      return "; ".join(f"[{chain}]@({p},{q})" for (p, q), chain in named.items())

   def embed(self, n: int, p: int, q: int, vectors: np.ndarray) -> np.ndarray:
      """
Rows of ``D_{p,q}`` coordinates placed into ``Tot_n``.
      """
      vectors = np.atleast_2d(vectors)
      result = np.zeros((vectors.shape[0], self.dim(n)), dtype=np.uint8)
      offset = self.offset(n, p, q)
      if offset is not None and vectors.shape[1]:
         result[:, offset:offset + vectors.shape[1]] = vectors
      return result

   def filtration_by(self, index, low: int, high: int) -> FilteredComplex:
      filt = {}
      for s in range(low, high):
         for n in self.degrees():
            cells = [(p, q) for p, q, _, _ in self.summands.get(n, []) if index(p, q) <= s]
            coordinates = [i for p, q in cells for i in range(self.offset(n, p, q), self.offset(n, p, q) + self.double.dim(p, q))]
            filt[(s, n)] = Subspace.coordinate(self.dim(n), coordinates)
      return FilteredComplex(self, low, high, filt, check=False)

def block_diagonal(matrix: GF2Matrix, copies: int) -> GF2Matrix:
   if copies == 0:
      return GF2Matrix.zeros(0, 0)
   return GF2Matrix(np.kron(np.eye(copies, dtype=np.uint8), matrix.to_array()))

def _blocks(space: Subspace, copies: int) -> Subspace:
   """
``space^copies`` inside ``ambient^copies``.
   """
   n = space.ambient_dim
   if copies == 0 or space.dim == 0:
      return Subspace.zero(n * copies)
   rows = np.zeros((copies * space.dim, copies * n), dtype=np.uint8)
   for k in range(copies):
      rows[k * space.dim:(k + 1) * space.dim, k * n:(k + 1) * n] = space.vectors
   return Subspace(copies * n, rows)

def _hom_space(R: Resolution, i: int, M: GModule) -> Subspace:
   cochains = M.dim if (R.trivial_base and i == 0) else R.ranks[i] * M.dim
   return Subspace(cochains, R.hom_basis(i, M)) if cochains else Subspace.zero(0)

def cochain_copies(R: Resolution, i: int) -> int:
   return 1 if (R.trivial_base and i == 0) else R.ranks[i]

def _in_coordinates(space: Subspace, vectors: np.ndarray) -> np.ndarray:
   if space.dim == 0 or vectors.shape[0] == 0:
      return np.zeros((vectors.shape[0], space.dim), dtype=np.uint8)
   return space.coordinates(vectors)

def _matrix(columns: np.ndarray, rows: int) -> GF2Matrix:
   """
Matrix whose columns are the given rows of coordinates.
   """
   if columns.shape[0] == 0:
      return GF2Matrix.zeros(rows, 0)
   return GF2Matrix(columns.T)

def prepare_resolution(R: Resolution, p_min: int) -> Resolution:
   """
Extend ``R`` to the depth ``-p_min + 1`` needed by columns down to ``p_min``.

**Raises:**

*  ``InsufficientDepthError``

   If the resolution is too short and cannot be extended.
   """
   needed = -p_min + 1
   if R.depth >= needed:
      return R
   return R.extend(needed)

def build_L(K: GChainComplex, R: Resolution, p_min: int) -> DoubleComplex:
   """
Double complex ``Hom_G(F_{-p}, C_q)`` on the columns ``[p_min, 0]``.

An equivariant map ``F_i -> C_q`` is stored by its values on the free
generators of ``F_i``, i.e. as an element of ``C_q^{r_i}``.

**Arguments:**

*  ``K``

   / *Condition*: required / *Type*: GChainComplex /

*  ``R``

   / *Condition*: required / *Type*: Resolution /

   Resolution of the trivial module; extended if it is shorter than ``-p_min + 1``.

*  ``p_min``

   / *Condition*: required / *Type*: int /

**Returns:**

* ``double``

  / *Type*: DoubleComplex /

**Raises:**

*  ``InsufficientDepthError``

   If ``R`` is too short and cannot be extended.
   """
   if p_min > 0:
      raise DimensionError(f"column window must contain p = 0, got p_min = {p_min}")
   if R.group != K.group:
      raise ModelValidationError("resolution and complex belong to different groups")
   R = prepare_resolution(R, p_min)
   spaces, labels = {}, {}
   for p in range(p_min, 1):
      copies = cochain_copies(R, -p)
      for q in K.degrees():
         spaces[(p, q)] = _hom_space(R, -p, K.module(q))
         names = K.names.get(q, [])
         labels[(p, q)] = list(names) if copies == 1 else [f"{name}#{k}" for k in range(copies) for name in names]
   dims = {cell: space.dim for cell, space in spaces.items()}
   d_horiz, d_vert = {}, {}
   for (p, q), space in spaces.items():
      if space.dim == 0:
         continue
      if p - 1 >= p_min and dims.get((p - 1, q), 0):
         delta = R.coboundary(-p, K.module(q))
         images = (delta @ space.vectors.T).T
         d_horiz[(p, q)] = _matrix(_in_coordinates(spaces[(p - 1, q)], images), dims[(p - 1, q)])
      if dims.get((p, q - 1), 0):
         boundary = block_diagonal(K.differential(q), cochain_copies(R, -p))
         images = (boundary @ space.vectors.T).T
         d_vert[(p, q)] = _matrix(_in_coordinates(spaces[(p, q - 1)], images), dims[(p, q - 1)])
   names = {cell: [chain_name(labels[cell], row) for row in spaces[cell].vectors] for cell in spaces}
   embeddings = {cell: (spaces[cell], labels[cell]) for cell in spaces}
   q_range = (K.q_min, K.q_max) if K.q_max >= K.q_min else (0, 0)
   return DoubleComplex((p_min, 0), q_range, dims, d_horiz, d_vert, names, embeddings)

def total_complex(D: DoubleComplex) -> TotalComplex:
   return D.total_complex()

def L_map(f: ChainMap, R: Resolution, p_min: int) -> ChainMap:
   """
``Tot L(f)`` for an equivariant chain map ``f``, applied blockwise.
   """
   source, target = f.source, f.target
   R = prepare_resolution(R, p_min)
   D, E = build_L(source, R, p_min), build_L(target, R, p_min)
   S, T = D.total_complex(), E.total_complex()
   maps = {}
   for n in S.degrees():
      matrix = np.zeros((T.dim(n), S.dim(n)), dtype=np.uint8)
      for p, q, offset, d in S.summands[n]:
         placed = T.offset(n, p, q)
         if placed is None:
            continue
         space, _ = D.embeddings[(p, q)]
         images = (block_diagonal(f.map(q), cochain_copies(R, -p)) @ space.vectors.T).T
         block = _in_coordinates(E.embeddings[(p, q)][0], images)
         matrix[placed:placed + block.shape[1], offset:offset + d] = block.T
      maps[n] = GF2Matrix(matrix)
   return ChainMap(S, T, maps)

def L_filtration(FK: FilteredGComplex, R: Resolution, p_min: int) -> FilteredComplex:
   """
Filtration ``J_alpha Tot L(K) = Tot L(F_alpha K)`` of the total complex.

``Hom_G(F_i, F_alpha C_q)`` is the part of ``Hom_G(F_i, C_q)`` with every
block in ``F_alpha C_q``.

**Returns:**

* ``filtered``

  / *Type*: FilteredComplex /

  Its ``complex`` is the ``TotalComplex`` of ``build_L(FK.base, R, p_min)``.
   """
   R = prepare_resolution(R, p_min)
   D = build_L(FK.base, R, p_min)
   T = D.total_complex()
   filt = {}
   for alpha in range(FK.alpha_min, FK.alpha_max):
      for n in T.degrees():
         rows = []
         for p, q, _, _ in T.summands[n]:
            space, _ = D.embeddings[(p, q)]
            level = space.intersection(_blocks(FK.F(alpha, q), cochain_copies(R, -p)))
            if level.dim:
               rows.append(T.embed(n, p, q, space.coordinates(level.vectors)))
         filt[(alpha, n)] = Subspace(T.dim(n), np.vstack(rows)) if rows else Subspace.zero(T.dim(n))
   return FilteredComplex(T, FK.alpha_min, FK.alpha_max, filt, check=False)

@dataclass(frozen=True)
class WindowContract:
   """
Column window of a truncated L computation.

Columns are computed on ``[p_min - r_max, 0]``; pages up to ``r_max`` and
total degrees at or above ``total_degree_floor`` are exact on ``[p_min, 0]``.
``periodic`` is set once column periodicity of the double complex was
checked, which extends the certificate to all ``p <= 0``.
   """
   p_min: int
   r_max: int
   periodic: Optional[int] = None

   def __post_init__(self):
      if self.p_min > 0:
         raise DimensionError(f"p_min must be <= 0, got {self.p_min}")
      if self.r_max < 0:
         raise DimensionError(f"r_max must be >= 0, got {self.r_max}")

   @classmethod
   def default_for(cls, dimension: int, p_min_offset: int = P_MIN_OFFSET,
                   r_max_offset: int = R_MAX_OFFSET) -> "WindowContract":
      return cls(-(dimension + p_min_offset), dimension + r_max_offset)

   @property
   def internal_p_min(self) -> int:
      return self.p_min - self.r_max

   @property
   def guaranteed_range(self) -> Tuple[Optional[int], int]:
      if self.periodic:
         return (None, 0)
      return (self.internal_p_min + self.r_max, 0)

   def with_period(self, period: Optional[int]) -> "WindowContract":
      return replace(self, periodic=period)

   def certifies_cell(self, p: int, r: int, q_span: int) -> bool:
      """
Cell ``(p, q)`` of page ``r`` of the column filtration does not see the cut.

Pages stop changing after ``q_span + 2``, hence ``r`` is capped there.
      """
      return p - self.internal_p_min >= min(r, q_span + 2)

   def total_degree_floor(self, q_max: int) -> int:
      return self.internal_p_min + q_max + 1

   def require_total_degree(self, n: int, q_max: int):
      """
**Raises:**

*  ``WindowError``

   If ``Tot_n`` homology depends on the cut, with the ``p_min`` that would certify it.
      """
      if n < self.total_degree_floor(q_max):
         raise WindowError(f"total degree {n} is outside the certified window (p_min = {self.p_min}, r_max = {self.r_max}).",
                           suggested_p_min=n - q_max - 1 + self.r_max)

def detect_periodicity(D: DoubleComplex, period: Optional[int]) -> bool:
   """
Whether columns ``p <= 0`` repeat with ``period`` throughout the window.
   """
   if not period:
      return False
   for p in range(D.p_min + period, 1):
      for q in range(D.q_min, D.q_max + 1):
         if D.dim(p, q) != D.dim(p - period, q):
            return False
         if D.vertical(p, q) != D.vertical(p - period, q):
            return False
         if p - period - 1 >= D.p_min and D.horizontal(p, q) != D.horizontal(p - period, q):
            return False
   return True

def single_column(R: Resolution) -> bool:
   return all(rank == 0 for rank in R.ranks[1:])

class EquivariantHomology:
   """
Equivariant homology ``H_n(X; G) = H_n(Tot L(C))`` of a model inside a window.

The truncated total complex is built once and reused for every degree.

**Arguments:**

*  ``V``

   / *Condition*: required / *Type*: VarietyModel /

*  ``contract``

   / *Condition*: optional / *Type*: WindowContract / *Default*: None /

   Defaults to ``WindowContract.default_for(V.dimension)``.

*  ``R``

   / *Condition*: optional / *Type*: Resolution / *Default*: None /

   Defaults to ``resolution_for(V.group, ...)``.
   """
   def __init__(self, V: VarietyModel, contract: Optional[WindowContract] = None,
                R: Optional[Resolution] = None):
      self.model = V
      self.contract = contract or WindowContract.default_for(V.dimension)
      internal = self.contract.internal_p_min
      self.resolution = prepare_resolution(R or resolution_for(V.group, -internal + 1), internal)
      self.double = build_L(V.base, self.resolution, internal)
      self.total = self.double.total_complex()
      self.exact_everywhere = single_column(self.resolution)
      if detect_periodicity(self.double, self.resolution.periodic) and not self.exact_everywhere:
         self.contract = self.contract.with_period(self.resolution.periodic)
      Logger.log(f"L window for '{V.label}': columns [{internal}, 0], resolution {self.resolution.kind}", indent=2)

   def dim(self, n: int) -> int:
      """
``dim H_n(X; G)``.

**Raises:**

*  ``WindowError``

   If ``n`` is not certified by the window and cannot be reached by periodicity.
      """
      K = self.model.base
      if K.q_max < K.q_min or n > K.q_max:
         return 0
      if self.exact_everywhere or n >= self.contract.total_degree_floor(K.q_max):
         return self.total.homology_dim(n)
      period = self.contract.periodic
      if period:
         shifted = n
         while shifted < self.contract.total_degree_floor(K.q_max):
            shifted += period
         if shifted <= K.q_min - 1 and n <= K.q_min - 1:
            return self.total.homology_dim(shifted)
      self.contract.require_total_degree(n, K.q_max)
      return self.total.homology_dim(n)

   def dims(self, degrees: Iterable[int]) -> Dict[int, int]:
      return {n: self.dim(n) for n in degrees}

def equivariant_homology(V: VarietyModel, n: int, contract: Optional[WindowContract] = None,
                         R: Optional[Resolution] = None) -> int:
   """
``dim H_n(X; G)`` for a single degree, see ``EquivariantHomology``.
   """
   return EquivariantHomology(V, contract, R).dim(n)
