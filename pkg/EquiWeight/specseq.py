"""
Spectral sequences of filtered complexes over GF(2).

Pages are computed with explicit subquotients

   Z^r_p = F_p  intersected with  d^{-1}(F_{p-r})
   E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})

so every cell has canonical representatives and every differential is an
explicit matrix.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .complexes import ChainComplex, FilteredComplex, VarietyModel, homology
from .gf2 import GF2Matrix, Subquotient, Subspace, image, kernel, preimage, rank
from .groups import Resolution, group_cohomology, resolution_for
from .lfunctor import DoubleComplex, WindowContract, build_L, prepare_resolution
from .logger import Logger
from .utils import EquiWeightError, WindowError

Cell = Tuple[int, int]
Certifier = Callable[[Optional[int], int, int], bool]

@dataclass
class PageCell:
   """
One cell ``E^r_{p,q}``: a subquotient of the chains in total degree ``n``.
   """
   n: int
   quotient: Subquotient

   @property
   def dim(self) -> int:
      return self.quotient.dim

@dataclass
class SpectralSequencePage:
   """
Page ``E^r``.

``differentials`` maps a source cell to ``(target cell, matrix)``;
``stabilized`` and ``certified`` are per-cell flags.
   """
   r: int
   cells: Dict[Cell, PageCell]
   differentials: Dict[Cell, Tuple[Cell, GF2Matrix]] = field(default_factory=dict)
   stabilized: Dict[Cell, bool] = field(default_factory=dict)
   certified: Dict[Cell, bool] = field(default_factory=dict)

   def dims(self, certified_only: bool = True) -> Dict[Cell, int]:
      return {cell: entry.dim for cell, entry in self.cells.items()
              if not certified_only or self.certified.get(cell, True)}

   def euler_characteristic(self) -> int:
      return sum((-1) ** ((p + q) % 2) * d for (p, q), d in self.dims().items())

class AbutmentFiltration:
   """
Induced filtration ``Omega_p H_n`` on the homology of a filtered complex.

``omega[n][p]`` is ``dim Omega_p H_n``; it is monotone in ``p`` and reaches
``dim H_n`` at the top of the filtration.
   """
   def __init__(self, omega: Dict[int, Dict[int, int]], homology: Dict[int, int]):
      self.omega = omega
      self.homology = homology

   def dims(self, n: int) -> Dict[int, int]:
      return dict(self.omega.get(n, {}))

   def graded(self, n: int, p: int) -> int:
      levels = self.omega.get(n, {})
      return levels.get(p, 0) - levels.get(p - 1, 0)

   def is_consistent(self) -> bool:
      for n, levels in self.omega.items():
         values = [levels[p] for p in sorted(levels)]
         if any(a > b for a, b in zip(values, values[1:])):
            return False
         if values and values[-1] != self.homology.get(n, 0):
            return False
      return True

class SpectralSequence:
   """
Pages ``E^0 .. E^last``, the limit ``E^infinity`` and the abutment filtration.

**Arguments:**

*  ``complex``

   / *Condition*: required / *Type*: ChainComplex /

   The filtered chain complex; used to name representatives.

*  ``pages``

   / *Condition*: required / *Type*: dict /

*  ``infinity``

   / *Condition*: required / *Type*: SpectralSequencePage /

*  ``abutment``

   / *Condition*: required / *Type*: AbutmentFiltration /

*  ``index``

   / *Condition*: optional / *Type*: str / *Default*: 'raw' /

   Name of the cell coordinates, ``raw`` or ``weight``.
   """
   def __init__(self, complex: ChainComplex, pages: Dict[int, SpectralSequencePage],
                infinity: SpectralSequencePage, abutment: AbutmentFiltration, index: str = "raw"):
      self.complex = complex
      self.pages = pages
      self.infinity = infinity
      self.abutment = abutment
      self.index = index

   @property
   def first_page(self) -> int:
      return min(self.pages)

   @property
   def last_page(self) -> int:
      return max(self.pages)

   def page(self, r: int) -> SpectralSequencePage:
      if r not in self.pages:
         if r > self.last_page:
            return self.pages[self.last_page] if self._stable_after(self.last_page) else self._missing(r)
         return self._missing(r)
      return self.pages[r]

   def _missing(self, r: int):
      raise EquiWeightError(f"page {r} was not computed (pages {self.first_page}..{self.last_page})")

   def _stable_after(self, r: int) -> bool:
      return not any(not matrix.is_zero() for _, matrix in self.pages[r].differentials.values())

   def dims(self, r: int, certified_only: bool = True) -> Dict[Cell, int]:
      return self.page(r).dims(certified_only)

   def dim(self, r: int, p: int, q: int) -> int:
      """
``dim E^r_{p,q}``; zero outside the computed grid.

**Raises:**

*  ``WindowError``

   If the cell exists but is not certified by the window.
      """
      page = self.page(r)
      if (p, q) not in page.cells:
         return 0
      if not page.certified.get((p, q), True):
         raise WindowError(f"cell ({p},{q}) of page {r} is outside the certified window.")
      return page.cells[(p, q)].dim

   def differential(self, r: int, p: int, q: int) -> Tuple[Optional[Cell], GF2Matrix]:
      page = self.page(r)
      if (p, q) not in page.differentials:
         return None, GF2Matrix.zeros(0, page.cells[(p, q)].dim if (p, q) in page.cells else 0)
      return page.differentials[(p, q)]

   def generators(self, r: int, p: int, q: int) -> List[str]:
      """
Names of the canonical representatives of ``E^r_{p,q}``.
      """
      page = self.page(r)
      entry = page.cells.get((p, q))
      if entry is None:
         return []
      return [self.complex.label(entry.n, rep) for rep in entry.quotient.representatives]

   def representatives(self, r: int, p: int, q: int) -> np.ndarray:
      entry = self.page(r).cells.get((p, q))
      if entry is None:
         return np.zeros((0, 0), dtype=np.uint8)
      return entry.quotient.representatives

   def infinity_dims(self, certified_only: bool = True) -> Dict[Cell, int]:
      return self.infinity.dims(certified_only)

   def euler_characteristic(self, r: int) -> int:
      return self.page(r).euler_characteristic()

   def convergence_page(self) -> int:
      """
Least ``r`` from which on all differentials between certified cells vanish.
      """
      converged = self.last_page
      for r in sorted(self.pages, reverse=True):
         page = self.pages[r]
         nonzero = any(not matrix.is_zero() and page.certified.get(source, True) and page.certified.get(target, True)
                       for source, (target, matrix) in page.differentials.items())
         if nonzero:
            break
         converged = r
      return converged

   def verify(self) -> List[str]:
      """
Check ``d^r d^r = 0`` and that ``E^{r+1}`` is the homology of ``(E^r, d^r)``.

**Returns:**

* ``problems``

  / *Type*: list /

  Human readable failures; empty if everything holds.
      """
      problems = []
      for r in sorted(self.pages):
         page = self.pages[r]
         for source, (target, matrix) in page.differentials.items():
            if target in page.differentials:
               second_target, second = page.differentials[target]
               if not (second @ matrix).is_zero():
                  problems.append(f"d^{r} d^{r} != 0 at {source} -> {target} -> {second_target}")
         if r + 1 not in self.pages:
            continue
         incoming = {}
         for source, (target, matrix) in page.differentials.items():
            incoming[target] = incoming.get(target, 0) + rank(matrix)
         for cell, entry in page.cells.items():
            if not page.certified.get(cell, True):
               continue
            outgoing = rank(page.differentials[cell][1]) if cell in page.differentials else 0
            expected = entry.dim - outgoing - incoming.get(cell, 0)
            following = self.pages[r + 1].cells.get(cell)
            if (following.dim if following else 0) != expected:
               problems.append(f"E^{r + 1}{cell} has dim {following.dim if following else 0}, homology of E^{r} gives {expected}")
      return problems

   def records(self, pages: Optional[List[int]] = None, generators: bool = False) -> List[dict]:
      """
Dump cells as ``{r, p, q, dim, stabilized}`` records, certified cells only.
      """
      result = []
      for r in (pages if pages is not None else sorted(self.pages)):
         page = self.page(r)
         for (p, q), entry in sorted(page.cells.items()):
            if not page.certified.get((p, q), True):
               continue
            record = {"r": r, "p": p, "q": q, "dim": entry.dim, "stabilized": bool(page.stabilized.get((p, q), False))}
            if generators and entry.dim:
               record["generators"] = self.generators(r, p, q)
            result.append(record)
      return result

   def relabel(self, cell_map: Callable[[int, int], Cell], shift: int = 0, index: str = "raw") -> "SpectralSequence":
      """
Same spectral sequence with cells renamed by ``cell_map`` and pages shifted by ``shift``.
      """
      def move(page: SpectralSequencePage, r: int) -> SpectralSequencePage:
         return SpectralSequencePage(
            r,
            {cell_map(*cell): entry for cell, entry in page.cells.items()},
            {cell_map(*source): (cell_map(*target), matrix) for source, (target, matrix) in page.differentials.items()},
            {cell_map(*cell): flag for cell, flag in page.stabilized.items()},
            {cell_map(*cell): flag for cell, flag in page.certified.items()})
      pages = {r + shift: move(page, r + shift) for r, page in self.pages.items()}
      return SpectralSequence(self.complex, pages, move(self.infinity, self.infinity.r), self.abutment, index)

def ss_filtered(FC: FilteredComplex, r_max: Optional[int] = None, certified: Optional[Certifier] = None,
                bound: Optional[int] = None) -> SpectralSequence:
   """
Spectral sequence of a bounded filtered complex.

**Arguments:**

*  ``FC``

   / *Condition*: required / *Type*: FilteredComplex /

*  ``r_max``

   / *Condition*: optional / *Type*: int / *Default*: None /

   Last page requested; pages are computed at least until they stop changing.

*  ``certified``

   / *Condition*: optional / *Type*: callable / *Default*: None /

   ``certified(r, p, q)`` tells whether a cell is exact for a truncated
   complex (``r`` is None for the limit). Everything is certified if not given.

*  ``bound``

   / *Condition*: optional / *Type*: int / *Default*: None /

   A page from which on all differentials vanish for structural reasons;
   defaults to the filtration length plus one.

**Returns:**

* ``ss``

  / *Type*: SpectralSequence /

  Cells keyed ``(p, q)`` with ``p`` the filtration index and ``p + q`` the
  total degree; ``d^r`` goes ``(p, q) -> (p - r, q + r - 1)``.
   """
   C = FC.complex
   low, high = FC.alpha_min, FC.alpha_max
   if bound is None:
      bound = high - low + 1
   last = max(r_max if r_max is not None else 0, bound)
   certified = certified or (lambda r, p, q: True)
   degrees = list(C.degrees())
   Z: Dict[Tuple[int, int, int], Subspace] = {}

   def cycles(r: int, p: int, n: int) -> Subspace:
      key = (r, p, n)
      if key not in Z:
         level = FC.F(p, n)
         if r >= 0 and level.dim:
            level = level.intersection(preimage(C.differential(n), FC.F(p - r, n - 1)))
         Z[key] = level
      return Z[key]

   pages = {}
   for r in range(0, last + 1):
      page = SpectralSequencePage(r, {})
      for p in range(low, high + 1):
         for n in degrees:
            numerator = cycles(r, p, n)
            boundaries = cycles(r - 1, p + r - 1, n + 1).image_under(C.differential(n + 1)) if C.dim(n + 1) else Subspace.zero(C.dim(n))
            denominator = cycles(r - 1, p - 1, n) + boundaries
            page.cells[(p, n - p)] = PageCell(n, Subquotient(numerator, denominator))
            page.certified[(p, n - p)] = bool(certified(r, p, n - p))
      for (p, q), entry in page.cells.items():
         target = (p - r, q + r - 1)
         if entry.dim == 0 or target not in page.cells or page.cells[target].dim == 0:
            continue
         images = (C.differential(entry.n) @ entry.quotient.representatives.T).T
         page.differentials[(p, q)] = (target, GF2Matrix(page.cells[target].quotient.project(images).T))
      pages[r] = page

   infinity = SpectralSequencePage(None, {})
   omega, homology_dims = {}, {}
   for n in degrees:
      cyc, bnd = C.cycles(n), C.boundaries(n)
      homology_dims[n] = cyc.dim - bnd.dim
      omega[n] = {}
      for p in range(low - 1, high + 1):
         omega[n][p] = (FC.F(p, n).intersection(cyc) + bnd).dim - bnd.dim
      for p in range(low, high + 1):
         numerator = FC.F(p, n).intersection(cyc)
         denominator = FC.F(p - 1, n).intersection(cyc) + FC.F(p, n).intersection(bnd)
         infinity.cells[(p, n - p)] = PageCell(n, Subquotient(numerator, denominator))
         infinity.certified[(p, n - p)] = bool(certified(None, p, n - p))
   for r, page in pages.items():
      for cell, entry in page.cells.items():
         later = [pages[s].cells[cell].dim for s in range(r, last + 1)]
         page.stabilized[cell] = page.certified[cell] and all(d == infinity.cells[cell].dim for d in later)
   infinity.stabilized = dict(infinity.certified)
   return SpectralSequence(C, pages, infinity, AbutmentFiltration(omega, homology_dims))

def ss_double_I(D: DoubleComplex, r_max: Optional[int] = None, certified: Optional[Certifier] = None) -> SpectralSequence:
   """
Spectral sequence of the column filtration (first vertical, then horizontal homology).
   """
   return ss_filtered(D.column_filtration(), r_max, certified, bound=D.q_max - D.q_min + 2)

def ss_double_II(D: DoubleComplex, r_max: Optional[int] = None, certified: Optional[Certifier] = None) -> SpectralSequence:
   """
Spectral sequence of the row filtration (first horizontal, then vertical homology).

Cells are reported as ``(p, q)`` of ``D``; ``d^r`` goes ``(p, q) -> (p + r - 1, q - r)``.
   """
   swapped = None
   if certified is not None:
      swapped = lambda r, s, t: certified(r, t, s)
   raw = ss_filtered(D.row_filtration(), r_max, swapped, bound=D.p_max - D.p_min + 2)
   return raw.relabel(lambda s, t: (t, s))

def reindex_weight(ss: SpectralSequence) -> SpectralSequence:
   """
Weight indexing ``p' = 2p + q``, ``q' = -p``, ``r' = r + 1``.
   """
   return ss.relabel(lambda p, q: (2 * p + q, -p), shift=1, index="weight")

def column_certifier(contract: WindowContract, q_span: int) -> Certifier:
   """
Certificate for the column filtration of a truncated L double complex.
   """
   def certified(r: Optional[int], p: int, q: int) -> bool:
      pages = q_span + 2 if r is None else r
      return p >= contract.p_min and contract.certifies_cell(p, pages, q_span)
   return certified

def row_certifier(contract: WindowContract) -> Certifier:
   """
Certificate for the row filtration of a truncated L double complex.
   """
   def certified(r: Optional[int], p: int, q: int) -> bool:
      pages = contract.r_max if r is None else r
      return p >= contract.p_min and p - contract.internal_p_min >= pages
   return certified

def hochschild_serre(V: VarietyModel, r_max: Optional[int] = None, contract: Optional[WindowContract] = None,
                     R: Optional[Resolution] = None) -> SpectralSequence:
   """
Hochschild-Serre spectral sequence ``E^2_{p,q} = H^{-p}(G, H_q(X)) => H_{p+q}(X; G)``.

It is the column spectral sequence of the L double complex, reported on the
columns ``[p_min, 0]`` of the window.
   """
   K = V.base
   contract = contract or WindowContract.default_for(V.dimension)
   internal = contract.internal_p_min
   R = prepare_resolution(R or resolution_for(V.group, -internal + 1), internal)
   D = build_L(K, R, internal)
   q_span = max(K.q_max - K.q_min, 0)
   Logger.log(f"Hochschild-Serre for '{V.label}': columns [{internal}, 0], pages up to {r_max or contract.r_max}", indent=2)
   ss = ss_double_I(D, r_max if r_max is not None else contract.r_max, column_certifier(contract, q_span))
   ss.resolution = R
   return ss

def hochschild_serre_e2_check(V: VarietyModel, ss: SpectralSequence, R: Optional[Resolution] = None) -> List[str]:
   """
Compare ``E^2_{p,q}`` with ``H^{-p}(G, H_q(X))`` from the homology modules.

**Returns:**

* ``problems``

  / *Type*: list /

  Mismatching cells; empty if all certified cells agree.
   """
   R = R or getattr(ss, "resolution", None)
   problems = []
   modules = {}
   for (p, q), d in ss.dims(2).items():
      if q not in modules:
         modules[q] = homology(V.base, q)[1]
      expected = group_cohomology(V.group, modules[q], -p, R).dim if p <= 0 else 0
      if expected != d:
         problems.append(f"E^2({p},{q}) = {d}, group cohomology gives {expected}")
   return problems
