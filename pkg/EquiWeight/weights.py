"""
Equivariant weight spectral sequence, row spectral sequences and the numerical
invariants built from them (``^qB_i``, ``B_k^G``, virtual Betti numbers and
their equivariant variants).
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .complexes import (FilteredComplex, FilteredGComplex, GChainComplex, VarietyModel, canonical_filtration,
                        homology, invariant_subcomplex)
from .gf2 import Subquotient
from .groups import Resolution, group_cohomology, invariants, resolution_for, semisimple_resolution
from .lfunctor import (EquivariantHomology, L_filtration, WindowContract, build_L, prepare_resolution,
                       single_column)
from .logger import Logger
from .specseq import (SpectralSequence, column_certifier, reindex_weight, row_certifier, ss_double_I,
                      ss_double_II, ss_filtered)
from .utils import MissingCompanionError, UnsupportedGroupError, WindowError

@dataclass(frozen=True)
class InvariantReport:
   """
One value of a numerical invariant and how it was obtained.

``comparable`` is False for representative-dependent values computed on a
model that is not flagged Nash-faithful.
   """
   kind: str
   index: Tuple[int, ...]
   value: int
   route: str
   certified_window: Tuple[Optional[int], int] = (None, 0)
   representative_dependent: bool = False
   nash_faithful: bool = False

   @property
   def comparable(self) -> bool:
      return not self.representative_dependent or self.nash_faithful

@dataclass
class RowSpectralSequence:
   """
Spectral sequence of ``Tot L(R_q)`` for the weight row ``R_q = gr_{-q} C`` shifted to start at degree 0.

Cells are ``(alpha, beta)``; variant ``I`` filters by columns, ``II`` by rows.
   """
   q: int
   variant: str
   sequence: SpectralSequence
   representative_dependent: bool
   nash_faithful: bool

   def dim(self, r: int, alpha: int, beta: int) -> int:
      return self.sequence.dim(r, alpha, beta)

   def dims(self, r: int) -> Dict[Tuple[int, int], int]:
      return self.sequence.dims(r)

def weight_row(FK: FilteredGComplex, q: int) -> GChainComplex:
   """
``(R_q)_beta = gr_{-q} C_{beta + q}`` with its action.
   """
   graded, _ = FK.graded_complex(-q)
   modules = {beta - q: graded.module(beta) for beta in graded.degrees()}
   boundaries = {beta - q: graded.differential(beta) for beta in graded.degrees() if graded.dim(beta - 1)}
   names = {beta - q: graded.names.get(beta, []) for beta in graded.degrees()}
   return GChainComplex(FK.group, modules, boundaries, names, check=False)

def weight_rows(FK: FilteredComplex) -> List[int]:
   """
Rows ``q`` with a non-zero graded piece ``gr_{-q}``, descending.
   """
   rows = []
   for alpha in range(FK.alpha_min, FK.alpha_max + 1):
      if any(FK.F(alpha, n).dim != FK.F(alpha - 1, n).dim for n in FK.complex.degrees()):
         rows.append(-alpha)
   return sorted(rows, reverse=True)

def weight_ss(FC: FilteredComplex, r_max: Optional[int] = None) -> SpectralSequence:
   """
Weight spectral sequence of a filtered complex without action, in weight indexing.
   """
   return reindex_weight(ss_filtered(FC, r_max))

def virtual_betti(FC: FilteredComplex, q: int) -> InvariantReport:
   """
``beta_q = sum_p (-1)^p dim E~^2_{p,q}`` of the weight spectral sequence.
   """
   if FC.complex.q_max < FC.complex.q_min:
      return InvariantReport("beta", (q,), 0, "weight_ss")
   page = weight_ss(FC).dims(2)
   value = sum((-1) ** (p % 2) * d for (p, row), d in page.items() if row == q)
   return InvariantReport("beta", (q,), value, "weight_ss")

class EquivariantWeights:
   """
Weight computations on one model with a fixed window and resolution.

Row spectral sequences and the equivariant weight spectral sequence are
cached, so ranges of invariants reuse the same double complexes.

**Arguments:**

*  ``V``

   / *Condition*: required / *Type*: VarietyModel /

*  ``contract``

   / *Condition*: optional / *Type*: WindowContract / *Default*: None /

*  ``R``

   / *Condition*: optional / *Type*: Resolution / *Default*: None /
   """
   def __init__(self, V: VarietyModel, contract: Optional[WindowContract] = None, R: Optional[Resolution] = None):
      self.model = V
      self.contract = contract or WindowContract.default_for(V.dimension)
      internal = self.contract.internal_p_min
      self.resolution = prepare_resolution(R or resolution_for(V.group, -internal + 1), internal)
      self._rows: Dict[Tuple[int, str], RowSpectralSequence] = {}
      self._weight: Optional[SpectralSequence] = None
      self._homology: Optional[EquivariantHomology] = None

   @property
   def homology(self) -> EquivariantHomology:
      if self._homology is None:
         self._homology = EquivariantHomology(self.model, self.contract, self.resolution)
      return self._homology

   def weight_sequence(self, r_max: Optional[int] = None) -> SpectralSequence:
      """
Equivariant weight spectral sequence ``^G E~``, weight-indexed.

Cells are certified when their total degree is exact for the truncated L.
      """
      if self._weight is not None and r_max is None:
         return self._weight
      V = self.model
      FC = L_filtration(V.complex, self.resolution, self.contract.internal_p_min)
      floor = self.contract.total_degree_floor(V.base.q_max)
      exact = single_column(self.resolution)
      certified = lambda r, alpha, q: exact or alpha + q >= floor
      Logger.log(f"equivariant weight spectral sequence of '{V.label}'", indent=2)
      ss = reindex_weight(ss_filtered(FC, r_max if r_max is not None else self.contract.r_max, certified))
      if r_max is None:
         self._weight = ss
      return ss

   def omega(self, k: int) -> Dict[int, int]:
      """
``dim Omega_alpha H_k(X; G)`` per ``alpha``.
      """
      if not single_column(self.resolution):
         self.contract.require_total_degree(k, self.model.base.q_max)
      return self.weight_sequence().abutment.dims(k)

   def row_sequence(self, q: int, variant: str = "II", r_max: Optional[int] = None) -> RowSpectralSequence:
      if variant not in ("I", "II"):
         raise ValueError(f"row spectral sequence variant must be 'I' or 'II', got '{variant}'")
      key = (q, variant)
      if key not in self._rows or r_max is not None:
         row = weight_row(self.model.complex, q)
         D = build_L(row, self.resolution, self.contract.internal_p_min)
         pages = r_max if r_max is not None else self.contract.r_max
         if variant == "I":
            ss = ss_double_I(D, pages, column_certifier(self.contract, max(row.q_max - row.q_min, 0)))
         else:
            ss = ss_double_II(D, pages, row_certifier(self.contract))
         result = RowSpectralSequence(q, variant, ss, variant == "II", self.model.flag("nash_faithful"))
         if r_max is not None:
            return result
         self._rows[key] = result
      return self._rows[key]

   def qB(self, q: int, i: int) -> InvariantReport:
      """
``^qB_i = sum_j (-1)^j dim ^q_II E^2_{i,j}``.

**Raises:**

*  ``WindowError``

   If column ``i`` lies left of the certified window.
      """
      if i > 0:
         value = 0
      else:
         if i < self.contract.p_min and not single_column(self.resolution):
            raise WindowError(f"^{q}B_{i} needs column {i}, left of the certified window [{self.contract.p_min}, 0].",
                              suggested_p_min=i)
         row = self.row_sequence(q, "II")
         value = sum((-1) ** (j % 2) * d for (alpha, j), d in row.dims(2).items() if alpha == i)
      return InvariantReport("qB", (q, i), value, "row_ss_II", self.contract.guaranteed_range,
                             representative_dependent=True, nash_faithful=self.model.flag("nash_faithful"))

   def BkG(self, k: int) -> InvariantReport:
      """
``B_k^G = sum over q + i = k`` of ``^qB_i``, over the rows carrying a non-zero graded piece.
      """
      value = sum(self.qB(q, k - q).value for q in weight_rows(self.model.complex) if q >= k)
      return InvariantReport("BkG", (k,), value, "row_ss_II", self.contract.guaranteed_range,
                             representative_dependent=True, nash_faithful=self.model.flag("nash_faithful"))

   def top_row_check(self) -> bool:
      """
``^G E~^2_{p,d} = H^{-p}(G, E~^2_{0,d})`` on the certified part of the top row.
      """
      V = self.model
      if V.base.q_max < V.base.q_min:
         return True
      d = V.base.q_max
      graded, _ = V.complex.graded_complex(-d)
      _, module = homology(graded, d)
      for (p, q), dim in self.weight_sequence().dims(2).items():
         if q != d:
            continue
         expected = group_cohomology(V.group, module, -p, self.resolution).dim if p <= 0 else 0
         if dim != expected:
            Logger.log_warning(f"top row of '{V.label}' differs at p = {p}: {dim} != {expected}")
            return False
      return True

   def bounds_check(self) -> List[str]:
      """
Cells of pages ``r >= 2`` outside ``0 <= q <= d``, ``p + q <= d``, and Omega outside ``[-d-1, 0]``.
      """
      d = self.model.dimension
      ss = self.weight_sequence()
      problems = []
      for r in sorted(ss.pages):
         if r < 2:
            continue
         for (p, q), dim in ss.dims(r).items():
            if dim and not (0 <= q <= d and p + q <= d):
               problems.append(f"^G E~^{r}({p},{q}) = {dim} outside the weight bounds")
      for n, levels in ss.abutment.omega.items():
         if levels.get(-d - 1, 0) != 0 or levels.get(0, 0) != ss.abutment.homology.get(n, 0):
            problems.append(f"Omega filtration of H_{n} is not bounded by [-{d + 1}, 0]")
      return problems

def equivariant_weight_ss(V: VarietyModel, r_max: Optional[int] = None, contract: Optional[WindowContract] = None,
                          R: Optional[Resolution] = None) -> SpectralSequence:
   """
Equivariant weight spectral sequence of ``V`` in weight indexing.

**Returns:**

* ``ss``

  / *Type*: SpectralSequence /

  Pages ``^G E~^{r}`` from ``r = 1``; ``ss.abutment`` is the Omega filtration.
   """
   return EquivariantWeights(V, contract, R).weight_sequence(r_max)

def top_row_check(V: VarietyModel, contract: Optional[WindowContract] = None) -> bool:
   return EquivariantWeights(V, contract).top_row_check()

def row_ss(V: VarietyModel, q: int, variant: str = "II", r_max: Optional[int] = None,
           contract: Optional[WindowContract] = None) -> RowSpectralSequence:
   return EquivariantWeights(V, contract).row_sequence(q, variant, r_max)

def qB(V: VarietyModel, q: int, i: int, contract: Optional[WindowContract] = None) -> InvariantReport:
   return EquivariantWeights(V, contract).qB(q, i)

def BkG(V: VarietyModel, k: int, contract: Optional[WindowContract] = None) -> InvariantReport:
   return EquivariantWeights(V, contract).BkG(k)

def omega_filtration(V: VarietyModel, k: int, contract: Optional[WindowContract] = None) -> Dict[int, int]:
   return EquivariantWeights(V, contract).omega(k)

def betaG_odd(V: VarietyModel, q: int, contract: Optional[WindowContract] = None) -> InvariantReport:
   """
``beta^G_q = sum_p (-1)^p dim ^G E~^2_{p,q}`` for groups of odd order.

**Raises:**

*  ``UnsupportedGroupError``

   For groups of even order.
   """
   if V.group.order % 2 == 0:
      raise UnsupportedGroupError(f"beta^G is only computed for odd order, '{V.label}' has a group of order {V.group.order}")
   ss = EquivariantWeights(V, contract, semisimple_resolution(V.group)).weight_sequence()
   value = sum((-1) ** (p % 2) * d for (p, row), d in ss.dims(2).items() if row == q)
   return InvariantReport("betaG_odd", (q,), value, "weight_ss_invariant_column")

def invariant_beta(V: VarietyModel, q: int, invariant_weight: Optional[FilteredComplex] = None) -> InvariantReport:
   """
``_G beta_q``: virtual Betti number of the invariant weight model.

On compact nonsingular models that model is the canonical filtration of the
invariant chains; any other model must be passed as ``invariant_weight``.

**Raises:**

*  ``UnsupportedGroupError``

   If the group is not of order 2.

*  ``MissingCompanionError``

   Without ``invariant_weight`` on a model not flagged compact nonsingular.
   """
   if not V.is_z2():
      raise UnsupportedGroupError(f"_G beta is defined for Z/2, '{V.label}' has a group of order {V.group.order}")
   route = "supplied_invariant_weight"
   if invariant_weight is None:
      if not V.flag("compact_nonsingular"):
         raise MissingCompanionError(f"model '{V.label}' is not compact nonsingular and no invariant weight model is given")
      invariant_weight = canonical_filtration(invariant_subcomplex(V.base))
      route = "canonical_invariant_chains"
   report = virtual_betti(invariant_weight, q)
   return InvariantReport("invariant_beta", (q,), report.value, route)

def _fixed_weight_model(V: VarietyModel) -> FilteredComplex:
   if V.fixed_model is not None:
      return V.fixed_model
   return canonical_filtration(V.fixed_subcomplex())

def thm416_check(V: VarietyModel, q: int, contract: Optional[WindowContract] = None) -> Tuple[int, int, bool]:
   """
``dim H_q(X; G) = _G beta_q + sum_{i >= q+1} beta_i(X^G)`` on compact nonsingular Z/2 models.

**Returns:**

* ``(lhs, rhs, equal)``

  / *Type*: tuple /

**Raises:**

*  ``MissingCompanionError``

   If the model is not flagged compact nonsingular or has no fixed-point data.
   """
   if not V.flag("compact_nonsingular"):
      raise MissingCompanionError(f"model '{V.label}' is not flagged compact_nonsingular")
   fixed = _fixed_weight_model(V)
   lhs = EquivariantHomology(V, contract).dim(q)
   rhs = invariant_beta(V, q).value
   rhs += sum(virtual_betti(fixed, i).value for i in range(q + 1, fixed.complex.q_max + 1))
   return lhs, rhs, lhs == rhs

def lemma_formula_check(V: VarietyModel, k: int, contract: Optional[WindowContract] = None) -> Tuple[int, int, bool]:
   """
``dim H_k(X; G) = dim (ker d_k)^G / d((C_{k+1})^G) + sum_{i >= k+1} dim H_i(X^G)`` for Z/2.
   """
   if not V.is_z2():
      raise UnsupportedGroupError(f"the fixed-point formula needs Z/2, '{V.label}' has a group of order {V.group.order}")
   K = V.base
   fixed = V.fixed_subcomplex()
   lhs = EquivariantHomology(V, contract).dim(k)
   invariant_cycles = K.cycles(k).intersection(invariants(K.module(k)))
   invariant_boundaries = invariants(K.module(k + 1)).image_under(K.differential(k + 1))
   rhs = invariant_cycles.dim - invariant_boundaries.dim
   rhs += sum(fixed.homology_dim(i) for i in range(k + 1, fixed.q_max + 1))
   return lhs, rhs, lhs == rhs

def fixed_point_formula(V: VarietyModel, q: int, contract: Optional[WindowContract] = None) -> Tuple[int, int, bool]:
   """
``dim H_q(X; G) = dim H_q(C^G) + sum_{i >= q+1} beta_i(X^G)`` on compact nonsingular Z/2 models.
   """
   if not V.is_z2() or not V.flag("compact_nonsingular"):
      raise MissingCompanionError(f"model '{V.label}' is not a compact nonsingular Z/2 model")
   fixed = V.fixed_subcomplex()
   lhs = EquivariantHomology(V, contract).dim(q)
   rhs = invariant_subcomplex(V.base).homology_dim(q)
   rhs += sum(fixed.homology_dim(i) for i in range(q + 1, fixed.q_max + 1))
   return lhs, rhs, lhs == rhs

def odd_order_check(V: VarietyModel) -> List[str]:
   """
For odd order: ``^G E~^2`` is the invariant part of ``E~^2`` cellwise and
``H_k(X; G) = (H_k X)^G``.

**Returns:**

* ``problems``

  / *Type*: list /
   """
   if V.group.order % 2 == 0:
      raise UnsupportedGroupError(f"odd-order check on a group of order {V.group.order}")
   FK = V.complex
   equivariant = EquivariantWeights(V, R=semisimple_resolution(V.group))
   page = equivariant.weight_sequence().dims(2)
   problems = []
   for alpha in range(FK.alpha_min, FK.alpha_max + 1):
      graded, _ = FK.graded_complex(alpha)
      for n in graded.degrees():
         _, module = homology(graded, n)
         cell = (n + alpha, -alpha)
         if page.get(cell, 0) != invariants(module).dim:
            problems.append(f"^G E~^2{cell} = {page.get(cell, 0)}, invariants of E~^2 give {invariants(module).dim}")
   for k in V.base.degrees():
      _, module = homology(V.base, k)
      if equivariant.homology.dim(k) != invariants(module).dim:
         problems.append(f"H_{k}(X; G) differs from the invariants of H_{k}(X)")
   return problems
