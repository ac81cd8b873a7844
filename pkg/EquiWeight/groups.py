"""
Finite groups, GF(2)-modules with a group action, projective resolutions of
the trivial module and group cohomology.
"""
import itertools
from collections import deque
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import GF2Matrix, Subspace, Subquotient, kernel, rank
from .utils import (
   InsufficientDepthError,
   ModelValidationError,
   UnsupportedGroupError
)

class FiniteGroup:
   """
Finite group given by its multiplication table.

**Arguments:**

*  ``mult``

   / *Condition*: required / *Type*: array-like /

   ``order x order`` table, ``mult[g][h]`` is the index of ``g*h``.

*  ``names``

   / *Condition*: optional / *Type*: list / *Default*: None /

   Element names used by model files and reports.

*  ``cyclic_generator``

   / *Condition*: optional / *Type*: int / *Default*: None /

   Index of an element whose powers enumerate the group. Detected
   automatically when not given.

**Raises:**

*  ``ModelValidationError``

   If the table does not define a group (full table scan).
   """
   def __init__(self, mult, names: Optional[Sequence[str]] = None, cyclic_generator: Optional[int] = None):
      table = np.asarray(mult, dtype=np.int64)
      if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
         raise ModelValidationError(f"group table must be a non-empty square table, got shape {table.shape}")
      n = table.shape[0]
      if table.min() < 0 or table.max() >= n:
         raise ModelValidationError("group table refers to elements outside the group")
      elements = np.arange(n)
      for g in range(n):
         if not np.array_equal(np.sort(table[g]), elements):
            raise ModelValidationError(f"group table row of element {g} is not a permutation (no inverses)")
         if not np.array_equal(np.sort(table[:, g]), elements):
            raise ModelValidationError(f"group table column of element {g} is not a permutation (no inverses)")
      identities = [e for e in range(n)
                    if np.array_equal(table[e], elements) and np.array_equal(table[:, e], elements)]
      if not identities:
         raise ModelValidationError("group table has no identity element")
      left = table[table[:, :, None], elements[None, None, :]]
      right = table[elements[:, None, None], table[None, :, :]]
      if not np.array_equal(left, right):
         a, b, c = (int(x[0]) for x in np.nonzero(left != right))
         raise ModelValidationError(f"group table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")
      table.setflags(write=False)
      self.mult = table
      self.order = n
      self.identity = identities[0]
      self.names = tuple(names) if names is not None else tuple(str(g) for g in range(n))
      if len(self.names) != n or len(set(self.names)) != n:
         raise ModelValidationError("group element names must be distinct and one per element")
      self._inverse = tuple(int(np.flatnonzero(table[g] == self.identity)[0]) for g in range(n))
      if cyclic_generator is not None:
         if len(self.powers(cyclic_generator)) != n:
            raise ModelValidationError(f"element '{self.names[cyclic_generator]}' does not generate the group")
         self.cyclic_generator = cyclic_generator
      else:
         full = [g for g in range(n) if len(self.powers(g)) == n]
         self.cyclic_generator = full[0] if full else None
      self.generators = self._greedy_generators()

   @classmethod
   def cyclic(cls, d: int) -> "FiniteGroup":
      if d < 1:
         raise ModelValidationError(f"cyclic group of order {d} is not defined")
      table = (np.arange(d)[:, None] + np.arange(d)[None, :]) % d
      names = ["1", "s"] + [f"s^{i}" for i in range(2, d)]
      return cls(table, names[:d], cyclic_generator=1 if d > 1 else 0)

   @classmethod
   def trivial(cls) -> "FiniteGroup":
      return cls.cyclic(1)

   @classmethod
   def klein_four(cls) -> "FiniteGroup":
      table = np.arange(4)[:, None] ^ np.arange(4)[None, :]
      return cls(table, ["1", "a", "b", "ab"])

   @classmethod
   def from_names(cls, elements: Sequence[str], table: Sequence[Sequence[str]]) -> "FiniteGroup":
      """
Build a group from a multiplication table written with element names.
      """
      index = {name: i for i, name in enumerate(elements)}
      try:
         mult = [[index[name] for name in row] for row in table]
      except KeyError as reason:
         raise ModelValidationError(f"group table uses unknown element {reason}")
      return cls(mult, elements)

   def product(self, g: int, h: int) -> int:
      return int(self.mult[g, h])

   def inverse(self, g: int) -> int:
      return self._inverse[g]

   def powers(self, g: int) -> List[int]:
      """
Distinct powers ``1, g, g^2, ...`` in order.
      """
      result = [self.identity]
      current = g
      while current != self.identity:
         result.append(current)
         current = self.product(current, g)
      return result

   def element_order(self, g: int) -> int:
      return len(self.powers(g))

   def element(self, name: str) -> int:
      try:
         return self.names.index(name)
      except ValueError:
         raise ModelValidationError(f"unknown group element '{name}'")

   def subgroup(self, generators: Sequence[int]) -> List[int]:
      """
Elements of the subgroup generated by ``generators``, sorted.
      """
      seen = {self.identity}
      queue = deque([self.identity])
      while queue:
         g = queue.popleft()
         for s in generators:
            h = self.product(s, g)
            if h not in seen:
               seen.add(h)
               queue.append(h)
      return sorted(seen)

   def _greedy_generators(self) -> Tuple[int, ...]:
      if self.cyclic_generator is not None and self.order > 1:
         return (self.cyclic_generator,)
      generators = []
      covered = {self.identity}
      for g in range(self.order):
         if g not in covered:
            generators.append(g)
            covered = set(self.subgroup(generators))
      return tuple(generators)

   def is_abelian(self) -> bool:
      return np.array_equal(self.mult, self.mult.T)

   def direct_factors(self) -> Optional[Tuple[int, int]]:
      """
Two commuting elements a, b with trivially intersecting cyclic subgroups
whose orders multiply to the group order, i.e. G = <a> x <b>.
      """
      for a in range(self.order):
         for b in range(a + 1, self.order):
            powers_a, powers_b = set(self.powers(a)), set(self.powers(b))
            if len(powers_a) < 2 or len(powers_b) < 2:
               continue
            if self.product(a, b) != self.product(b, a):
               continue
            if powers_a & powers_b == {self.identity} and len(powers_a) * len(powers_b) == self.order:
               return a, b
      return None

   def __eq__(self, other) -> bool:
      if not isinstance(other, FiniteGroup):
         return NotImplemented
      return self.order == other.order and np.array_equal(self.mult, other.mult)

   def __hash__(self) -> int:
      return hash((self.order, self.mult.tobytes()))

   def __repr__(self) -> str:
      return f"FiniteGroup(order={self.order}, elements={list(self.names)})"

def permutation_matrix(perm: Sequence[int]) -> GF2Matrix:
   n = len(perm)
   matrix = np.zeros((n, n), dtype=np.uint8)
   if n:
      matrix[list(perm), np.arange(n)] = 1
   return GF2Matrix(matrix) if n else GF2Matrix.zeros(0, 0)

class GModule:
   """
Finite-dimensional GF(2)-vector space with a linear left action of a finite group.

**Arguments:**

*  ``group``

   / *Condition*: required / *Type*: FiniteGroup /

*  ``action``

   / *Condition*: required / *Type*: list of GF2Matrix /

   One ``dim x dim`` matrix per group element, indexed like the group table.

**Raises:**

*  ``ModelValidationError``

   If the matrices do not define a homomorphism into invertible matrices.
   """
   def __init__(self, group: FiniteGroup, action: Sequence[GF2Matrix], check: bool = True):
      self.group = group
      self.action = tuple(action)
      if len(self.action) != group.order:
         raise ModelValidationError(f"module action has {len(self.action)} matrices for a group of order {group.order}")
      self.dim = self.action[0].rows
      if check:
         self._validate()

   def _validate(self):
      identity = GF2Matrix.identity(self.dim)
      for g, matrix in enumerate(self.action):
         if matrix.shape != (self.dim, self.dim):
            raise ModelValidationError(f"action matrix of '{self.group.names[g]}' has shape {matrix.shape}, expected {(self.dim, self.dim)}")
      if self.action[self.group.identity] != identity:
         raise ModelValidationError("identity element does not act as the identity matrix")
      for g in range(self.group.order):
         for h in range(self.group.order):
            if self.action[g] @ self.action[h] != self.action[self.group.product(g, h)]:
               raise ModelValidationError(f"action is not a homomorphism at ('{self.group.names[g]}', '{self.group.names[h]}')")

   @classmethod
   def trivial(cls, group: FiniteGroup, dim: int) -> "GModule":
      identity = GF2Matrix.identity(dim)
      return cls(group, [identity] * group.order, check=False)

   @classmethod
   def regular(cls, group: FiniteGroup) -> "GModule":
      return cls(group, [permutation_matrix(group.mult[g]) for g in range(group.order)])

   @classmethod
   def from_permutations(cls, group: FiniteGroup, dim: int, generators: Dict[int, Sequence[int]]) -> "GModule":
      """
Permutation module from cell permutations of some group elements.

The permutations are extended to the whole group by composition; ``perm[i]``
is the image of basis vector ``i``.

**Raises:**

*  ``ModelValidationError``

   If the given elements do not generate the group or the permutations are
   inconsistent with the group law.
      """
      known = {group.identity: tuple(range(dim))}
      queue = deque([group.identity])
      for g, perm in generators.items():
         if sorted(perm) != list(range(dim)):
            raise ModelValidationError(f"action of '{group.names[g]}' is not a permutation of the {dim} cells")
      while queue:
         g = queue.popleft()
         for s, perm_s in generators.items():
            composite = tuple(perm_s[i] for i in known[g])
            sg = group.product(s, g)
            if sg in known:
               if known[sg] != composite:
                  raise ModelValidationError(f"cell action is not a homomorphism at element '{group.names[sg]}'")
            else:
               known[sg] = composite
               queue.append(sg)
      if len(known) != group.order:
         raise ModelValidationError("acting elements do not generate the group")
      return cls(group, [permutation_matrix(known[g]) for g in range(group.order)])

   def matrix(self, g: int) -> GF2Matrix:
      return self.action[g]

   def norm(self) -> GF2Matrix:
      """
Norm map: the sum of all action matrices.
      """
      total = np.zeros((self.dim, self.dim), dtype=np.uint8)
      for matrix in self.action:
         total ^= matrix.to_array()
      return GF2Matrix(total)

   def is_trivial(self) -> bool:
      identity = GF2Matrix.identity(self.dim)
      return all(matrix == identity for matrix in self.action)

   def is_stable(self, subspace: Subspace) -> bool:
      return all(subspace.contains_subspace(subspace.image_under(self.action[g])) for g in self.group.generators)

   def __repr__(self) -> str:
      return f"GModule(dim={self.dim}, group order={self.group.order})"

def invariants(M: GModule) -> Subspace:
   """
Fixed vectors ``M^G``: the kernel of ``action(s) + 1`` over the group generators.
   """
   if M.dim == 0 or not M.group.generators:
      return Subspace.full(M.dim)
   identity = np.eye(M.dim, dtype=np.uint8)
   stacked = np.vstack([M.action[s].to_array() ^ identity for s in M.group.generators])
   return kernel(GF2Matrix(stacked))

def quotient_module(M: GModule, Z: Subspace, B: Subspace) -> Tuple[GModule, Subquotient]:
   """
Module structure on the subquotient Z/B of two G-stable subspaces.

**Raises:**

*  ``ModelValidationError``

   If Z or B is not G-stable.
   """
   if not M.is_stable(Z) or not M.is_stable(B):
      raise ModelValidationError("subquotient of a module by subspaces that are not G-stable")
   quotient = Subquotient(Z, B)
   action = []
   for g in range(M.group.order):
      if quotient.dim == 0:
         action.append(GF2Matrix.zeros(0, 0))
         continue
      images = (M.action[g] @ quotient.representatives.T).T
      action.append(GF2Matrix(quotient.project(images).T))
   return GModule(M.group, action, check=False), quotient

GroupRingElement = frozenset

class Resolution:
   """
Projective resolution ``F_*`` of the trivial module over GF(2)[G].

Free modules ``F_i = GF(2)[G]^{r_i}``. The differential is stored by its
group-ring coefficients: ``coefficients[i][k][j]`` is the support of the
element ``A_kj`` with ``Delta_i(e_j) = sum_k A_kj e_k``. A semisimple
resolution (odd order) has the trivial module itself as ``F_0``.

**Arguments:**

*  ``group``

   / *Condition*: required / *Type*: FiniteGroup /

*  ``kind``

   / *Condition*: required / *Type*: str /

   One of ``cyclic``, ``bar``, ``product``, ``semisimple``.

*  ``ranks``

   / *Condition*: required / *Type*: tuple /

   Ranks ``r_0 .. r_depth``.

*  ``coefficients``

   / *Condition*: required / *Type*: dict /

   Group-ring coefficient tables for ``Delta_1 .. Delta_depth``.

*  ``periodic``

   / *Condition*: optional / *Type*: int / *Default*: None /

   Period in degrees if the resolution repeats.

*  ``builder``

   / *Condition*: optional / *Type*: callable / *Default*: None /

   ``builder(depth)`` returns the same resolution to a larger depth.
   """
   def __init__(self, group: FiniteGroup, kind: str, ranks: Sequence[int],
                coefficients: Dict[int, Tuple[Tuple[GroupRingElement, ...], ...]],
                periodic: Optional[int] = None, builder: Optional[Callable[[int], "Resolution"]] = None,
                trivial_base: bool = False, check: bool = True):
      self.group = group
      self.kind = kind
      self.ranks = tuple(ranks)
      self.coefficients = coefficients
      self.periodic = periodic
      self.trivial_base = trivial_base
      self._builder = builder
      self._maps: Dict[int, GF2Matrix] = {}
      if check:
         self.check()

   @property
   def depth(self) -> int:
      return len(self.ranks) - 1

   def free_dim(self, i: int) -> int:
      if self.trivial_base and i == 0:
         return 1
      return self.ranks[i] * self.group.order

   def map(self, i: int) -> GF2Matrix:
      """
``Delta_i : F_i -> F_{i-1}`` on the group-algebra coordinates ``(k, g)``.
      """
      if not 1 <= i <= self.depth:
         raise InsufficientDepthError(f"resolution of depth {self.depth} has no map Delta_{i}", required_depth=i)
      if i not in self._maps:
         order = self.group.order
         matrix = np.zeros((self.free_dim(i - 1), self.free_dim(i)), dtype=np.uint8)
         if not (self.trivial_base and i == 1):
            for k, line in enumerate(self.coefficients[i]):
               for j, support in enumerate(line):
                  for a in support:
                     for h in range(order):
                        matrix[k * order + self.group.product(h, a), j * order + h] ^= 1
         self._maps[i] = GF2Matrix(matrix) if matrix.size else GF2Matrix.zeros(*matrix.shape)
      return self._maps[i]

   def check(self):
      """
Verify ``Delta_i Delta_{i+1} = 0``, exactness up to ``depth - 1`` and the augmentation.

**Raises:**

*  ``ModelValidationError``

   Naming the first failing degree.
      """
      if self.depth < 1:
         raise ModelValidationError("a resolution needs depth at least 1")
      first = self.map(1)
      if self.free_dim(0) - rank(first) != 1:
         raise ModelValidationError("resolution does not resolve the trivial module: coker Delta_1 is not one-dimensional")
      if not self.trivial_base and first.rows and first.cols and (first.to_array().sum(axis=0) % 2).any():
         raise ModelValidationError("augmentation does not vanish on the image of Delta_1")
      for i in range(1, self.depth):
         lower, upper = self.map(i), self.map(i + 1)
         if upper.cols and lower.rows and not (lower @ upper).is_zero():
            raise ModelValidationError(f"Delta_{i} Delta_{i + 1} != 0")
         if rank(lower) + rank(upper) != self.free_dim(i):
            raise ModelValidationError(f"resolution is not exact in degree {i}")

   def extend(self, depth: int) -> "Resolution":
      if depth <= self.depth:
         return self
      if self._builder is None:
         raise InsufficientDepthError(f"{self.kind} resolution of depth {self.depth} cannot be extended to depth {depth}",
                                      required_depth=depth)
      return self._builder(depth)

   def hom_basis(self, i: int, M: GModule) -> np.ndarray:
      """
Basis (rows) of ``Hom_G(F_i, M)`` inside ``M^{r_i}`` (evaluation at the free generators).
      """
      if self.trivial_base and i == 0:
         return invariants(M).vectors
      return np.eye(self.ranks[i] * M.dim, dtype=np.uint8)

   def coboundary(self, i: int, M: GModule) -> GF2Matrix:
      """
Precomposition with ``Delta_{i+1}``: ``M^{r_i} -> M^{r_{i+1}}``.

Block ``(j, k)`` is ``sum_{a in A_kj} action(a)``.
      """
      if i + 1 > self.depth:
         raise InsufficientDepthError(f"degree {i} cochains need a resolution of depth {i + 1}, have {self.depth}",
                                      required_depth=i + 1)
      source, target = self.ranks[i], self.ranks[i + 1]
      m = M.dim
      matrix = np.zeros((target * m, source * m), dtype=np.uint8)
      if not (self.trivial_base and i == 0):
         arrays = [M.action[g].to_array() for g in range(self.group.order)]
         for k, line in enumerate(self.coefficients[i + 1]):
            for j, support in enumerate(line):
               for a in support:
                  matrix[j * m:(j + 1) * m, k * m:(k + 1) * m] ^= arrays[a]
      return GF2Matrix(matrix) if matrix.size else GF2Matrix.zeros(*matrix.shape)

   def __repr__(self) -> str:
      return f"Resolution(kind={self.kind}, depth={self.depth}, ranks={list(self.ranks)})"

def _one_plus(group: FiniteGroup, g: int) -> GroupRingElement:
   return frozenset({group.identity}) ^ frozenset({g})

def cyclic_resolution(d: int, depth: int, group: Optional[FiniteGroup] = None) -> Resolution:
   """
Periodic resolution of a cyclic group: ``Delta`` alternates ``1 + s`` (odd
degrees) and the norm ``N`` (even degrees).

**Arguments:**

*  ``d``

   / *Condition*: required / *Type*: int /

   Group order.

*  ``depth``

   / *Condition*: required / *Type*: int /

*  ``group``

   / *Condition*: optional / *Type*: FiniteGroup / *Default*: None /

   A cyclic group of order ``d``; ``FiniteGroup.cyclic(d)`` if not given.

**Returns:**

* ``resolution``

  / *Type*: Resolution /

  Period 1 for ``d = 2`` (``1 + s = N``), period 2 otherwise.
   """
   if d < 1:
      raise ModelValidationError(f"cyclic resolution needs d >= 1, got {d}")
   if depth < 1:
      raise ModelValidationError(f"resolution depth must be at least 1, got {depth}")
   group = group or FiniteGroup.cyclic(d)
   if group.order != d or group.cyclic_generator is None:
      raise UnsupportedGroupError(f"group of order {group.order} is not cyclic of order {d}")
   generator = group.cyclic_generator
   odd = _one_plus(group, generator)
   even = frozenset(range(group.order))
   coefficients = {i: ((odd if i % 2 else even,),) for i in range(1, depth + 1)}
   return Resolution(group, "cyclic", [1] * (depth + 1), coefficients,
                     periodic=1 if d == 2 else 2,
                     builder=partial(cyclic_resolution, d, group=group))

def bar_resolution(G: FiniteGroup, depth: int) -> Resolution:
   """
Unnormalized bar resolution, rank ``|G|^i`` in degree ``i``.

``d[g1|...|gn] = g1[g2|...|gn] + sum_i [..|g_i g_{i+1}|..] + [g1|...|g_{n-1}]``.
   """
   if depth < 1:
      raise ModelValidationError(f"resolution depth must be at least 1, got {depth}")
   n = G.order
   coefficients = {}
   for degree in range(1, depth + 1):
      table = [[set() for _ in range(n ** degree)] for _ in range(n ** (degree - 1))]
      for column, cell in enumerate(itertools.product(range(n), repeat=degree)):
         faces = [(cell[0], cell[1:])]
         for i in range(degree - 1):
            merged = cell[:i] + (G.product(cell[i], cell[i + 1]),) + cell[i + 2:]
            faces.append((G.identity, merged))
         faces.append((G.identity, cell[:-1]))
         for coefficient, face in faces:
            row = 0
            for g in face:
               row = row * n + g
            table[row][column] ^= {coefficient}
      coefficients[degree] = tuple(tuple(frozenset(entry) for entry in line) for line in table)
   return Resolution(G, "bar", [n ** i for i in range(depth + 1)], coefficients,
                     periodic=1 if n == 1 else None, builder=partial(bar_resolution, G))

def product_resolution(G: FiniteGroup, a: int, b: int, depth: int) -> Resolution:
   """
Tensor product of the cyclic resolutions of ``<a>`` and ``<b>`` for ``G = <a> x <b>``.

Degree ``n`` has basis ``e_(i, n-i)``, ``i = 0..n``, and
``d e_(i,j) = D^a_i e_(i-1,j) + D^b_j e_(i,j-1)``.
   """
   if depth < 1:
      raise ModelValidationError(f"resolution depth must be at least 1, got {depth}")
   powers_a, powers_b = G.powers(a), G.powers(b)
   if (G.product(a, b) != G.product(b, a) or set(powers_a) & set(powers_b) != {G.identity}
         or len(powers_a) * len(powers_b) != G.order):
      raise UnsupportedGroupError(f"'{G.names[a]}' and '{G.names[b]}' do not split the group as a direct product")

   def factor(powers, generator, i):
      return _one_plus(G, generator) if i % 2 else frozenset(powers)

   coefficients = {}
   for degree in range(1, depth + 1):
      table = [[frozenset() for _ in range(degree + 1)] for _ in range(degree)]
      for i in range(degree + 1):
         j = degree - i
         if i >= 1:
            table[i - 1][i] = table[i - 1][i] ^ factor(powers_a, a, i)
         if j >= 1:
            table[i][i] = table[i][i] ^ factor(powers_b, b, j)
      coefficients[degree] = tuple(tuple(line) for line in table)
   return Resolution(G, "product", list(range(1, depth + 2)), coefficients,
                     builder=partial(product_resolution, G, a, b))

def semisimple_resolution(G: FiniteGroup, depth: int = 1) -> Resolution:
   """
Resolution ``0 -> GF(2) -> GF(2)`` for odd order, where the trivial module is projective.

**Raises:**

*  ``UnsupportedGroupError``

   For groups of even order.
   """
   if G.order % 2 == 0:
      raise UnsupportedGroupError(f"group of even order {G.order} has no semisimple resolution over GF(2)")
   depth = max(depth, 1)
   coefficients = {1: ((),)}
   coefficients.update({i: () for i in range(2, depth + 1)})
   return Resolution(G, "semisimple", [1] + [0] * depth, coefficients, periodic=1,
                     builder=partial(semisimple_resolution, G), trivial_base=True)

def _split_product_resolution(G: FiniteGroup, depth: int) -> Resolution:
   factors = G.direct_factors()
   if factors is None:
      raise UnsupportedGroupError(f"group of order {G.order} is not a product of two cyclic groups")
   return product_resolution(G, factors[0], factors[1], depth)

def get_resolution_kinds() -> Dict[str, Callable[[FiniteGroup, int], Resolution]]:
   return {
      "semisimple": semisimple_resolution,
      "cyclic": lambda G, depth: cyclic_resolution(G.order, depth, group=G),
      "product": _split_product_resolution,
      "bar": bar_resolution,
   }

def resolution_for(G: FiniteGroup, depth: int, kind: Optional[str] = None) -> Resolution:
   """
Pick a resolution for ``G``: semisimple for odd order, then cyclic, then a
product of two cyclic factors, and the bar resolution otherwise.

**Raises:**

*  ``NotImplementedError``

   For an unknown ``kind``.
   """
   if kind is None:
      if G.order % 2 == 1:
         kind = "semisimple"
      elif G.cyclic_generator is not None:
         kind = "cyclic"
      elif G.direct_factors() is not None:
         kind = "product"
      else:
         kind = "bar"
   kinds = get_resolution_kinds()
   if kind not in kinds:
      raise NotImplementedError(f"not supported resolution '{kind}'")
   return kinds[kind](G, depth)

class Cohomology:
   """
``H^n(G, M)`` computed from a resolution, with explicit cocycles.

Cochains live in ``M^{r_n}``: block ``k`` is the value on the ``k``-th free
generator of ``F_n``.
   """
   def __init__(self, M: GModule, n: int, R: Resolution):
      self.module = M
      self.degree = n
      self.resolution = R
      if n < 0:
         self.ambient_dim = 0
         self.hom = Subspace.zero(0)
         self.cocycles = Subspace.zero(0)
         self.coboundaries = Subspace.zero(0)
      else:
         self.ambient_dim = R.ranks[n] * M.dim if not (R.trivial_base and n == 0) else M.dim
         self.hom = Subspace(self.ambient_dim, R.hom_basis(n, M))
         delta = R.coboundary(n, M)
         self.cocycles = self.hom.intersection(kernel(delta))
         if n == 0:
            self.coboundaries = Subspace.zero(self.ambient_dim)
         else:
            previous = Subspace(R.ranks[n - 1] * M.dim if not (R.trivial_base and n == 1) else M.dim,
                                R.hom_basis(n - 1, M))
            self.coboundaries = previous.image_under(R.coboundary(n - 1, M))
      self.quotient = Subquotient(self.cocycles, self.coboundaries)

   @property
   def dim(self) -> int:
      return self.quotient.dim

   @property
   def cocycle_basis(self) -> np.ndarray:
      return self.quotient.representatives

   @property
   def projection(self) -> GF2Matrix:
      return self.quotient.projection

   def classify(self, cochains) -> np.ndarray:
      return self.quotient.project(cochains)

   def representative(self, classes) -> np.ndarray:
      return self.quotient.lift(classes)

   def __repr__(self) -> str:
      return f"Cohomology(degree={self.degree}, dim={self.dim})"

def group_cohomology(G: FiniteGroup, M: GModule, n: int, R: Resolution) -> Cohomology:
   """
Group cohomology ``H^n(G, M)``.

**Arguments:**

*  ``G``

   / *Condition*: required / *Type*: FiniteGroup /

*  ``M``

   / *Condition*: required / *Type*: GModule /

*  ``n``

   / *Condition*: required / *Type*: int /

   Any integer; negative degrees give the zero group.

*  ``R``

   / *Condition*: required / *Type*: Resolution /

   Needs depth ``n + 1`` unless it is periodic.

**Returns:**

* ``cohomology``

  / *Type*: Cohomology /

  ``dim``, ``cocycle_basis`` and ``projection`` of the quotient.

**Raises:**

*  ``InsufficientDepthError``

   If ``R`` is too short and not periodic.
   """
   if M.group != G or R.group != G:
      raise UnsupportedGroupError("module, resolution and group must belong to the same group")
   if n >= R.depth:
      if R.periodic is None:
         raise InsufficientDepthError(f"H^{n} needs a resolution of depth {n + 1}; build a deeper resolution (have {R.depth})",
                                      required_depth=n + 1)
      R = R.extend(n + 1)
   return Cohomology(M, n, R)
