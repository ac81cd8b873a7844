"""
Linear algebra over the two-element field.

Matrices are stored bit-packed per row (``numpy.packbits`` with little bit
order); elimination XORs whole packed rows. Subspaces are kept as the reduced
row echelon form of a spanning set, which makes their representation unique:
two generating sets of the same subspace give bit-identical ``Subspace``
values. Every derived basis in the package (pages, cohomology classes, Smith
layers) inherits its ordering from this canonical form.
"""
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .utils import ContainmentError, DimensionError

def _as_bits(entries) -> np.ndarray:
   array = np.asarray(entries)
   if array.dtype == np.bool_:
      array = array.astype(np.uint8)
   else:
      array = np.mod(array.astype(np.int64), 2).astype(np.uint8)
   return array

def _pack(dense: np.ndarray) -> np.ndarray:
   return np.packbits(dense, axis=1, bitorder="little")

def _unpack(packed: np.ndarray, ncols: int) -> np.ndarray:
   if packed.shape[0] == 0 or ncols == 0:
      return np.zeros((packed.shape[0], ncols), dtype=np.uint8)
   return np.unpackbits(packed, axis=1, count=ncols, bitorder="little")

def _xor_selected(selector: np.ndarray, packed: np.ndarray) -> np.ndarray:
   """
Row i of the result is the XOR of the packed rows j with ``selector[i, j] = 1``.
   """
   result = np.zeros((selector.shape[0], packed.shape[1]), dtype=np.uint8)
   for j in np.flatnonzero(selector.any(axis=0)):
      result[selector[:, j].astype(bool)] ^= packed[j]
   return result

def _row_reduce(packed: np.ndarray, ncols: int) -> Tuple[np.ndarray, List[int]]:
   """
Fully reduce packed rows. Returns the non-zero rows of the reduced row echelon
form (still packed) and the pivot column of each of them.
   """
   packed = packed.copy()
   nrows = packed.shape[0]
   pivots = []
   row = 0
   for col in range(ncols):
      if row >= nrows:
         break
      byte, bit = col >> 3, col & 7
      hits = np.flatnonzero((packed[row:, byte] >> bit) & 1)
      if hits.size == 0:
         continue
      pivot = row + int(hits[0])
      if pivot != row:
         packed[[row, pivot]] = packed[[pivot, row]]
      mask = ((packed[:, byte] >> bit) & 1).astype(bool)
      mask[row] = False
      packed[mask] ^= packed[row]
      pivots.append(col)
      row += 1
   return packed[:row], pivots

def rref_rows(dense: np.ndarray) -> Tuple[np.ndarray, List[int]]:
   """
Reduced row echelon form of a dense 0/1 array (zero rows dropped) and its pivots.
   """
   dense = _as_bits(dense)
   if dense.ndim != 2:
      raise DimensionError(f"expected a 2-dimensional array, got shape {dense.shape}")
   reduced, pivots = _row_reduce(_pack(dense), dense.shape[1])
   return _unpack(reduced, dense.shape[1]), pivots

class GF2Matrix:
   """
Immutable matrix over GF(2) with bit-packed rows.

**Arguments:**

*  ``entries``

   / *Condition*: required / *Type*: array-like /

   Two-dimensional array of integers, read modulo 2.
   """
   __slots__ = ("rows", "cols", "bits")

   def __init__(self, entries):
      dense = _as_bits(entries)
      if dense.ndim != 2:
         raise DimensionError(f"GF2Matrix needs a 2-dimensional array, got shape {dense.shape}")
      self.rows, self.cols = int(dense.shape[0]), int(dense.shape[1])
      self.bits = _pack(dense)
      self.bits.setflags(write=False)

   @classmethod
   def _from_bits(cls, bits: np.ndarray, rows: int, cols: int) -> "GF2Matrix":
      matrix = cls.__new__(cls)
      matrix.rows, matrix.cols = rows, cols
      matrix.bits = bits
      matrix.bits.setflags(write=False)
      return matrix

   @classmethod
   def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
      return cls(np.zeros((rows, cols), dtype=np.uint8))

   @classmethod
   def identity(cls, n: int) -> "GF2Matrix":
      return cls(np.eye(n, dtype=np.uint8))

   @classmethod
   def from_columns(cls, columns: Sequence[np.ndarray], rows: int) -> "GF2Matrix":
      if len(columns) == 0:
         return cls.zeros(rows, 0)
      return cls(np.stack([_as_bits(c) for c in columns], axis=1))

   @classmethod
   def block(cls, grid: Sequence[Sequence["GF2Matrix"]]) -> "GF2Matrix":
      """
Assemble a block matrix from a rectangular grid of matrices.
      """
      if len(grid) == 0:
         return cls.zeros(0, 0)
      rows = [np.hstack([m.to_array() for m in line]) if len(line) else np.zeros((0, 0), dtype=np.uint8)
              for line in grid]
      return cls(np.vstack(rows))

   @property
   def shape(self) -> Tuple[int, int]:
      return (self.rows, self.cols)

   @property
   def T(self) -> "GF2Matrix":
      return GF2Matrix(self.to_array().T)

   def to_array(self) -> np.ndarray:
      return _unpack(self.bits, self.cols)

   def entry(self, i: int, j: int) -> int:
      if not (0 <= i < self.rows and 0 <= j < self.cols):
         raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
      return int((self.bits[i, j >> 3] >> (j & 7)) & 1)

   def column(self, j: int) -> np.ndarray:
      return self.to_array()[:, j].copy()

   def is_zero(self) -> bool:
      return not self.bits.any()

   def __matmul__(self, other: Union["GF2Matrix", np.ndarray]):
      if isinstance(other, GF2Matrix):
         if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
         if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return GF2Matrix.zeros(self.rows, other.cols)
         return GF2Matrix._from_bits(_xor_selected(self.to_array(), other.bits), self.rows, other.cols)
      vector = _as_bits(other)
      if vector.shape[0] != self.cols:
         raise DimensionError(f"cannot apply {self.rows}x{self.cols} matrix to vector of length {vector.shape[0]}")
      if self.cols == 0:
         return np.zeros((self.rows,) + vector.shape[1:], dtype=np.uint8)
      columns = vector.reshape(self.cols, int(np.prod(vector.shape[1:], dtype=np.int64)))
      product = _unpack(_xor_selected(self.to_array(), _pack(columns)), columns.shape[1])
      return product.reshape((self.rows,) + vector.shape[1:])

   def __add__(self, other: "GF2Matrix") -> "GF2Matrix":
      if self.shape != other.shape:
         raise DimensionError(f"cannot add {self.shape} and {other.shape}")
      return GF2Matrix(self.to_array() ^ other.to_array())

   def __eq__(self, other) -> bool:
      if not isinstance(other, GF2Matrix):
         return NotImplemented
      return self.shape == other.shape and np.array_equal(self.bits, other.bits)

   def __hash__(self) -> int:
      return hash((self.rows, self.cols, self.bits.tobytes()))

   def __repr__(self) -> str:
      return f"GF2Matrix({self.rows}x{self.cols}, rank={rank(self)})"

class Subspace:
   """
Subspace of GF(2)^n in canonical form.

The basis is the reduced row echelon form of any spanning set, with pivots
ascending. ``basis`` exposes it as the columns of an ``n x dim`` matrix.

**Arguments:**

*  ``ambient_dim``

   / *Condition*: required / *Type*: int /

   Dimension n of the ambient space.

*  ``vectors``

   / *Condition*: optional / *Type*: array-like / *Default*: None /

   Spanning vectors given as rows of a ``k x n`` array.
   """
   __slots__ = ("ambient_dim", "_rows", "pivots")

   def __init__(self, ambient_dim: int, vectors=None):
      self.ambient_dim = int(ambient_dim)
      if vectors is None:
         rows, pivots = np.zeros((0, self.ambient_dim), dtype=np.uint8), []
      else:
         dense = _as_bits(vectors)
         if dense.ndim == 1:
            dense = dense.reshape(1, -1)
         if dense.shape[0] == 0:
            dense = np.zeros((0, self.ambient_dim), dtype=np.uint8)
         if dense.shape[1] != self.ambient_dim:
            raise DimensionError(f"vectors of length {dense.shape[1]} in ambient dimension {self.ambient_dim}")
         rows, pivots = rref_rows(dense)
      rows.setflags(write=False)
      self._rows = rows
      self.pivots = tuple(pivots)

   @classmethod
   def zero(cls, n: int) -> "Subspace":
      return cls(n)

   @classmethod
   def full(cls, n: int) -> "Subspace":
      return cls(n, np.eye(n, dtype=np.uint8))

   @classmethod
   def coordinate(cls, n: int, indices: Sequence[int]) -> "Subspace":
      """
Span of the unit vectors at ``indices``.
      """
      vectors = np.zeros((len(indices), n), dtype=np.uint8)
      vectors[np.arange(len(indices)), list(indices)] = 1
      return cls(n, vectors)

   @property
   def dim(self) -> int:
      return len(self.pivots)

   @property
   def vectors(self) -> np.ndarray:
      return self._rows

   @property
   def basis(self) -> GF2Matrix:
      return GF2Matrix(self._rows.T) if self.dim else GF2Matrix.zeros(self.ambient_dim, 0)

   def is_zero(self) -> bool:
      return self.dim == 0

   def is_full(self) -> bool:
      return self.dim == self.ambient_dim

   def _check_length(self, vector: np.ndarray):
      if vector.shape[-1] != self.ambient_dim:
         raise DimensionError(f"vector of length {vector.shape[-1]} in ambient dimension {self.ambient_dim}")

   def reduce(self, vectors) -> np.ndarray:
      """
Reduce vectors (rows) modulo the subspace; the result is zero on every pivot.
      """
      residual = _as_bits(vectors).copy()
      single = residual.ndim == 1
      if single:
         residual = residual.reshape(1, -1)
      self._check_length(residual)
      for row, pivot in zip(self._rows, self.pivots):
         mask = residual[:, pivot] == 1
         residual[mask] ^= row
      return residual[0] if single else residual

   def contains(self, vector) -> bool:
      return not self.reduce(vector).any()

   def contains_subspace(self, other: "Subspace") -> bool:
      if other.ambient_dim != self.ambient_dim:
         raise DimensionError(f"ambient dimensions {other.ambient_dim} and {self.ambient_dim} differ")
      return other.dim == 0 or not self.reduce(other.vectors).any()

   def coordinates(self, vector) -> np.ndarray:
      """
Coordinates of ``vector`` in the canonical basis.

**Raises:**

*  ``ContainmentError``

   If the vector is not in the subspace.
      """
      vector = _as_bits(vector)
      self._check_length(vector)
      if not self.contains(vector):
         raise ContainmentError("vector is not contained in the subspace", witness=vector)
      return vector[..., list(self.pivots)].copy()

   def combine(self, coordinates) -> np.ndarray:
      """
Vector(s) with the given coordinates in the canonical basis.
      """
      coordinates = _as_bits(coordinates)
      if self.dim == 0:
         return np.zeros(coordinates.shape[:-1] + (self.ambient_dim,), dtype=np.uint8)
      return np.mod(coordinates.astype(np.int64) @ self._rows.astype(np.int64), 2).astype(np.uint8)

   def __add__(self, other: "Subspace") -> "Subspace":
      if other.ambient_dim != self.ambient_dim:
         raise DimensionError(f"ambient dimensions {other.ambient_dim} and {self.ambient_dim} differ")
      if other.dim == 0:
         return self
      if self.dim == 0:
         return other
      return Subspace(self.ambient_dim, np.vstack([self._rows, other.vectors]))

   def intersection(self, other: "Subspace") -> "Subspace":
      if other.ambient_dim != self.ambient_dim:
         raise DimensionError(f"ambient dimensions {other.ambient_dim} and {self.ambient_dim} differ")
      if self.dim == 0 or other.dim == 0:
         return Subspace(self.ambient_dim)
      if other.is_full():
         return self
      coefficients = preimage(GF2Matrix(self._rows.T), other)
      return Subspace(self.ambient_dim, self.combine(coefficients.vectors))

   def image_under(self, matrix: GF2Matrix) -> "Subspace":
      if matrix.cols != self.ambient_dim:
         raise DimensionError(f"{matrix.rows}x{matrix.cols} matrix applied to subspace of GF(2)^{self.ambient_dim}")
      if self.dim == 0:
         return Subspace(matrix.rows)
      return Subspace(matrix.rows, (matrix @ self._rows.T).T)

   def random_element(self, rng: np.random.Generator) -> np.ndarray:
      return self.combine(rng.integers(0, 2, size=self.dim))

   def __eq__(self, other) -> bool:
      if not isinstance(other, Subspace):
         return NotImplemented
      return (self.ambient_dim == other.ambient_dim and self.pivots == other.pivots
              and np.array_equal(self._rows, other._rows))

   def __hash__(self) -> int:
      return hash((self.ambient_dim, self.pivots, self._rows.tobytes()))

   def __repr__(self) -> str:
      return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

class Subquotient:
   """
Quotient Z/B of two subspaces with B contained in Z.

Quotient coordinates are the Z-coordinates that are not pivots of B written
in Z-coordinates. The canonical representative of a class is the unique
element of the class whose B-pivot coordinates vanish.

**Arguments:**

*  ``Z``

   / *Condition*: required / *Type*: Subspace /

*  ``B``

   / *Condition*: required / *Type*: Subspace /

**Raises:**

*  ``ContainmentError``

   If B is not contained in Z, with a witness vector of B.
   """
   def __init__(self, Z: Subspace, B: Subspace):
      if Z.ambient_dim != B.ambient_dim:
         raise DimensionError(f"ambient dimensions {Z.ambient_dim} and {B.ambient_dim} differ")
      residual = Z.reduce(B.vectors) if B.dim else np.zeros((0, Z.ambient_dim), dtype=np.uint8)
      bad = np.flatnonzero(residual.any(axis=1)) if B.dim else []
      if len(bad):
         raise ContainmentError("subquotient denominator is not contained in the numerator",
                                witness=B.vectors[bad[0]].copy())
      self.Z = Z
      self.B = B
      b_in_z = B.vectors[:, list(Z.pivots)] if B.dim else np.zeros((0, Z.dim), dtype=np.uint8)
      self._b_rows, b_pivots = rref_rows(b_in_z) if B.dim else (np.zeros((0, Z.dim), dtype=np.uint8), [])
      self._b_pivots = tuple(b_pivots)
      self.positions = tuple(j for j in range(Z.dim) if j not in set(b_pivots))
      self.dim = len(self.positions)
      reduced = self._reduce_z(np.eye(Z.dim, dtype=np.uint8))
      self.projection = GF2Matrix(reduced[:, list(self.positions)].T) if Z.dim else GF2Matrix.zeros(self.dim, 0)
      section = np.zeros((Z.dim, self.dim), dtype=np.uint8)
      section[list(self.positions), np.arange(self.dim)] = 1
      self.section = GF2Matrix(section)
      self.representatives = Z.combine(section.T) if self.dim else np.zeros((0, Z.ambient_dim), dtype=np.uint8)
      self.representatives.setflags(write=False)

   def _reduce_z(self, coordinates: np.ndarray) -> np.ndarray:
      residual = coordinates.copy()
      for row, pivot in zip(self._b_rows, self._b_pivots):
         mask = residual[:, pivot] == 1
         residual[mask] ^= row
      return residual

   def project(self, vectors) -> np.ndarray:
      """
Quotient coordinates of ambient vector(s) lying in Z.

**Raises:**

*  ``ContainmentError``

   If a vector is not in Z.
      """
      vectors = _as_bits(vectors)
      single = vectors.ndim == 1
      if single:
         vectors = vectors.reshape(1, -1)
      coordinates = self.Z.coordinates(vectors)
      classes = self._reduce_z(coordinates)[:, list(self.positions)]
      return classes[0] if single else classes

   def lift(self, classes) -> np.ndarray:
      """
Canonical representative(s) in the ambient space of quotient coordinates.
      """
      classes = _as_bits(classes)
      if self.dim == 0:
         return np.zeros(classes.shape[:-1] + (self.Z.ambient_dim,), dtype=np.uint8)
      return np.mod(classes.astype(np.int64) @ self.representatives.astype(np.int64), 2).astype(np.uint8)

   def __iter__(self):
      return iter((self.dim, self.projection, self.section))

   def __repr__(self) -> str:
      return f"Subquotient(dim={self.dim}, numerator={self.Z.dim}, denominator={self.B.dim})"

def rank(M: GF2Matrix) -> int:
   """
Rank of a matrix over GF(2).
   """
   if M.rows == 0 or M.cols == 0:
      return 0
   _, pivots = _row_reduce(M.bits, M.cols)
   return len(pivots)

def kernel(M: GF2Matrix) -> Subspace:
   """
Null space ``{v : Mv = 0}`` in canonical form.
   """
   n = M.cols
   if M.rows == 0 or n == 0:
      return Subspace.full(n)
   reduced, pivots = rref_rows(M.to_array())
   free = [j for j in range(n) if j not in set(pivots)]
   if not free:
      return Subspace.zero(n)
   vectors = np.zeros((len(free), n), dtype=np.uint8)
   vectors[np.arange(len(free)), free] = 1
   if pivots:
      vectors[:, pivots] = reduced[:, free].T
   return Subspace(n, vectors)

def image(M: GF2Matrix) -> Subspace:
   """
Column span of a matrix in canonical form.
   """
   if M.cols == 0:
      return Subspace.zero(M.rows)
   return Subspace(M.rows, M.to_array().T)

def subquotient(Z: Subspace, B: Subspace) -> Subquotient:
   """
Quotient of Z by B.

**Returns:**

* ``quotient``

  / *Type*: Subquotient /

  Unpacks as ``(dim, projection, section)``; ``projection`` maps
  Z-coordinates to quotient coordinates, ``section`` maps quotient
  coordinates to the Z-coordinates of the canonical representatives.

**Raises:**

*  ``ContainmentError``

   If B is not contained in Z.
   """
   return Subquotient(Z, B)

def preimage(M: GF2Matrix, W: Subspace) -> Subspace:
   """
Preimage ``{v : Mv in W}``.

**Raises:**

*  ``DimensionError``

   If ``W`` does not live in the target of ``M``.
   """
   if W.ambient_dim != M.rows:
      raise DimensionError(f"subspace of GF(2)^{W.ambient_dim} is not in the target of a {M.rows}x{M.cols} matrix")
   if W.is_full() or M.cols == 0:
      return Subspace.full(M.cols)
   residual = W.reduce(M.to_array().T)
   return kernel(GF2Matrix(residual.T))

def solve(M: GF2Matrix, b) -> Optional[np.ndarray]:
   """
One solution of ``Mx = b`` (free variables set to zero), or None.
   """
   b = _as_bits(b)
   if b.shape[0] != M.rows:
      raise DimensionError(f"right-hand side of length {b.shape[0]} for a {M.rows}x{M.cols} matrix")
   if M.rows == 0:
      return np.zeros(M.cols, dtype=np.uint8)
   augmented = np.hstack([M.to_array(), b.reshape(-1, 1)])
   reduced, pivots = rref_rows(augmented)
   if pivots and pivots[-1] == M.cols:
      return None
   solution = np.zeros(M.cols, dtype=np.uint8)
   for i, pivot in enumerate(pivots):
      solution[pivot] = reduced[i, M.cols]
   return solution

def unit_vector(n: int, index: int) -> np.ndarray:
   vector = np.zeros(n, dtype=np.uint8)
   vector[index] = 1
   return vector
