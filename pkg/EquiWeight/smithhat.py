"""
Smith exact sequences of Z/2 models, the quotient comparison for free actions
and the double complex ``^kC^`` of group cohomology of graded pieces together
with the closed-form invariants ``B'_k`` derived from it.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .complexes import FilteredGComplex, GChainComplex, VarietyModel
from .gf2 import GF2Matrix, Subspace, preimage, solve
from .groups import Cohomology, Resolution, group_cohomology, invariants, resolution_for
from .lfunctor import (DoubleComplex, EquivariantHomology, WindowContract, block_diagonal, cochain_copies,
                       prepare_resolution)
from .logger import Logger
from .specseq import SpectralSequence, ss_double_I, ss_double_II
from .utils import (ContainmentError, MissingCompanionError, ModelValidationError, SmithViolationError,
                    UnsupportedGroupError)
from .weights import BkG, InvariantReport, invariant_beta, virtual_betti

Cell = Tuple[int, int]

@dataclass
class CheckReport:
   """
Outcome of a structural check; truthy when it passed.
   """
   passed: bool
   failures: List[str] = field(default_factory=list)

   def __bool__(self) -> bool:
      return self.passed

# Smith exact sequence

@dataclass
class SmithLayer:
   """
``T^{alpha+1}_k`` and the fixed-point part ``N_alpha C_k(X^G)`` in every chain degree.
   """
   alpha: int
   T_next: Dict[int, Subspace]
   fixed_part: Dict[int, Subspace]

@dataclass
class SmithReport:
   """
Rank data of the Smith sequence of one filtration degree.

``ranks[k]`` is ``(left, middle, right)``; ``failing_degree`` is the first
degree where the sequence is not exact.
   """
   alpha: int
   exact: bool
   ranks: Dict[int, Tuple[int, int, int]]
   failing_degree: Optional[int] = None
   reason: str = ""

   def __bool__(self) -> bool:
      return self.exact

def _require_z2(V: VarietyModel, what: str):
   if not V.is_z2():
      raise UnsupportedGroupError(f"{what} needs Z/2, '{V.label}' has a group of order {V.group.order}")
   if V.fixed_cells is None:
      raise MissingCompanionError(f"{what} needs fixed cells, '{V.label}' declares none")

def _one_plus_sigma(V: VarietyModel, k: int) -> GF2Matrix:
   sigma = V.group.generators[0]
   return V.base.module(k).action[sigma] + GF2Matrix.identity(V.base.dim(k))

def smith_layer(V: VarietyModel, alpha: int) -> SmithLayer:
   """
``T^{alpha+1}_k = {c in N_{alpha+1} C_k : (1+sigma)c in N_alpha C_k}`` and the
fixed part of ``N_alpha C_k`` for every degree ``k``.
   """
   _require_z2(V, "the Smith sequence")
   FK = V.complex
   fixed, _ = V.fixed_filtered()
   T_next, fixed_part = {}, {}
   for k in V.base.degrees():
      T_next[k] = preimage(_one_plus_sigma(V, k), FK.F(alpha, k)).intersection(FK.F(alpha + 1, k))
      embedding = V.fixed_embedding(fixed, k)
      level = fixed.F(alpha, k)
      vectors = (embedding @ level.vectors.T).T if level.dim else np.zeros((0, V.base.dim(k)), dtype=np.uint8)
      fixed_part[k] = Subspace(V.base.dim(k), vectors)
   return SmithLayer(alpha, T_next, fixed_part)

def smith_exactness(V: VarietyModel, alpha: int) -> SmithReport:
   """
Exactness of ``0 -> N_a C(X^G) + (1+s)T^{a+1} -> N_a C -> (1+s)N_a C -> 0`` degree by degree.

**Arguments:**

*  ``V``

   / *Condition*: required / *Type*: VarietyModel /

   Z/2 model with fixed cells.

*  ``alpha``

   / *Condition*: required / *Type*: int /

   Filtration degree.

**Returns:**

* ``report``

  / *Type*: SmithReport /

  ``exact`` is False with the first failing degree; no exception is raised
  for a non-exact sequence.
   """
   layer = smith_layer(V, alpha)
   ranks = {}
   failing, reason = None, ""
   for k in V.base.degrees():
      one_plus = _one_plus_sigma(V, k)
      middle = V.complex.F(alpha, k)
      image_T = layer.T_next[k].image_under(one_plus)
      left = layer.fixed_part[k] + image_T
      right = middle.image_under(one_plus)
      ranks[k] = (left.dim, middle.dim, right.dim)
      if failing is not None:
         continue
      if layer.fixed_part[k].intersection(image_T).dim:
         failing, reason = k, "fixed part meets (1+sigma)T"
      elif not middle.contains_subspace(left):
         failing, reason = k, "left term is not inside N_alpha"
      elif middle.dim != left.dim + right.dim:
         failing, reason = k, f"dim middle {middle.dim} != {left.dim} + {right.dim}"
   return SmithReport(alpha, failing is None, ranks, failing, reason)

def smith_exactness_all(V: VarietyModel) -> List[SmithReport]:
   FK = V.complex
   return [smith_exactness(V, alpha) for alpha in range(FK.alpha_min - 1, FK.alpha_max + 1)]

def smith_decompose(V: VarietyModel, c, alpha: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
   """
Split an invariant chain as ``c = c|X^G + (1+sigma)c'`` with ``c'`` in ``N_{alpha+1} C_k``.

**Arguments:**

*  ``c``

   / *Condition*: required / *Type*: array-like /

   Invariant chain of ``N_alpha C_k`` in cell coordinates.

**Returns:**

* ``(restriction, c_prime)``

  / *Type*: tuple of numpy.ndarray /

**Raises:**

*  ``ContainmentError``

   If ``c`` is not an invariant chain of ``N_alpha C_k``.

*  ``SmithViolationError``

   If the restriction leaves ``N_alpha C_k(X^G)`` or no ``c'`` exists; ``witness`` is ``c``.
   """
   _require_z2(V, "the Smith decomposition")
   c = np.asarray(c, dtype=np.uint8) % 2
   one_plus = _one_plus_sigma(V, k)
   level = V.complex.F(alpha, k)
   if not level.contains(c) or (one_plus @ c).any():
      raise ContainmentError(f"chain {V.base.label(k, c)} is not an invariant chain of N_{alpha} C_{k}", witness=c)
   layer = smith_layer(V, alpha)
   restriction = np.zeros_like(c)
   cells = V.fixed_cells.get(k, [])
   restriction[cells] = c[cells]
   if not layer.fixed_part[k].contains(restriction):
      raise SmithViolationError(f"restriction of {V.base.label(k, c)} to the fixed cells leaves N_{alpha} C_{k}(X^G)",
                                witness=c)
   rest = c ^ restriction
   upper = V.complex.F(alpha + 1, k)
   if upper.dim == 0:
      solution = np.zeros(0, dtype=np.uint8) if not rest.any() else None
   else:
      solution = solve(one_plus @ upper.basis, rest)
   if solution is None:
      raise SmithViolationError(f"{V.base.label(k, c)} has no Smith decomposition in degree {alpha} of '{V.label}'",
                                witness=c)
   c_prime = upper.combine(solution)
   if not np.array_equal(restriction ^ (one_plus @ c_prime), c):
      raise SmithViolationError(f"Smith decomposition of {V.base.label(k, c)} does not add up", witness=c)
   return restriction, c_prime

# quotient comparison for free actions

def _orbit_selection(V: VarietyModel, q: int, quotient_map: List[int], target_dim: int) -> GF2Matrix:
   """
``S[pi(e), e] = 1`` for the first cell ``e`` of each orbit.
   """
   K = V.base
   selection = np.zeros((target_dim, K.dim(q)), dtype=np.uint8)
   seen = set()
   for e in range(K.dim(q)):
      orbit = {int(np.flatnonzero(K.module(q).action[g].column(e))[0]) for g in range(V.group.order)}
      if seen & orbit:
         continue
      seen |= orbit
      selection[quotient_map[e], e] = 1
   return GF2Matrix(selection) if selection.size else GF2Matrix.zeros(*selection.shape)

def quotient_comparison(V_free: VarietyModel, V_quot: VarietyModel,
                        quotient_map: Optional[Dict[int, List[int]]] = None) -> CheckReport:
   """
Checks that ``(N_alpha C_k)^G -> N_alpha C_k(X/G)`` is bijective for every ``(alpha, k)``.

The map sends an orbit sum to the quotient cell of the orbit. ``quotient_map``
gives, per degree, the quotient cell index of every cell; by default it is
taken from ``V_free``.

**Raises:**

*  ``ModelValidationError``

   If the action fixes a cell, the model is not flagged compact or the quotient
   map is inconsistent.
   """
   quotient_map = quotient_map if quotient_map is not None else V_free.quotient_map
   if quotient_map is None:
      raise MissingCompanionError(f"model '{V_free.label}' has no quotient map")
   if not V_free.flag("compact"):
      raise ModelValidationError(f"quotient comparison needs a compact model, '{V_free.label}' is not flagged compact")
   K, Q = V_free.base, V_quot.base
   G = V_free.group
   for q in K.degrees():
      for g in range(G.order):
         if g != G.identity and np.diag(K.module(q).action[g].to_array()).any():
            raise ModelValidationError(f"action of '{G.names[g]}' on '{V_free.label}' fixes a cell in degree {q}")
      if len(quotient_map.get(q, [])) != K.dim(q):
         raise ModelValidationError(f"quotient map of '{V_free.label}' does not cover degree {q}")
   selections = {q: _orbit_selection(V_free, q, quotient_map[q], Q.dim(q)) for q in K.degrees()}
   fixed = {q: invariants(K.module(q)) for q in K.degrees()}
   failures = []
   for q in K.degrees():
      if q - 1 not in selections or fixed[q].dim == 0:
         continue
      left = selections[q - 1] @ (K.differential(q) @ fixed[q].vectors.T)
      right = Q.differential(q) @ (selections[q] @ fixed[q].vectors.T)
      if not np.array_equal(left, right):
         failures.append(f"orbit map does not commute with the boundary in degree {q}")
   FK, FQ = V_free.complex, V_quot.complex
   low = min(FK.alpha_min, FQ.alpha_min) - 1
   high = max(FK.alpha_max, FQ.alpha_max)
   for alpha in range(low, high + 1):
      for q in K.degrees():
         source = FK.F(alpha, q).intersection(fixed[q])
         image = source.image_under(selections[q])
         if image.dim != source.dim:
            failures.append(f"(N_{alpha} C_{q})^G is not mapped injectively")
         elif image != FQ.F(alpha, q):
            failures.append(f"(N_{alpha} C_{q})^G has dimension {image.dim}, N_{alpha} C_{q}(X/G) has {FQ.F(alpha, q).dim}")
   return CheckReport(not failures, failures)

# double complex of group cohomology of graded pieces

def _blocks_of(vector: np.ndarray, copies: int, width: int) -> np.ndarray:
   return vector.reshape(copies, width) if copies and width else np.zeros((copies, width), dtype=np.uint8)

class HatDoubleComplex(DoubleComplex):
   """
``^kC^_{alpha,beta} = H^{-k-alpha}(G, F_alpha K_beta / F_{alpha-1} K_beta)``.

``d1`` (vertical, ``beta -> beta-1``) is induced by the boundary of ``K``;
``d0`` (horizontal, ``alpha -> alpha-1``) is the connecting homomorphism of
``0 -> F_{alpha-1} -> F_alpha -> gr_alpha -> 0`` followed by the projection
onto ``gr_{alpha-1}``.

**Arguments:**

*  ``k``

   / *Condition*: required / *Type*: int /

*  ``FK``

   / *Condition*: required / *Type*: FilteredGComplex /

*  ``R``

   / *Condition*: required / *Type*: Resolution /

   Extended as needed; raises ``InsufficientDepthError`` when it cannot be.

*  ``rng``

   / *Condition*: optional / *Type*: numpy.random.Generator / *Default*: None /

   When given, cocycle representatives and their lifts are perturbed by random
   coboundaries and random elements of ``F_{alpha-1}``.
   """
   def __init__(self, k: int, FK: FilteredGComplex, R: Resolution, rng: Optional[np.random.Generator] = None):
      self.k = k
      self.filtered = FK
      K = FK.base
      q_range = (K.q_min, K.q_max) if K.q_max >= K.q_min else (0, 0)
      top_degree = -k - FK.alpha_min
      if top_degree >= 0:
         R = prepare_resolution(R, -(top_degree + 1))
      self.resolution = R
      graded = {alpha: FK.graded_complex(alpha) for alpha in range(FK.alpha_min - 1, FK.alpha_max + 1)}
      self.cohomology: Dict[Cell, Cohomology] = {}
      dims, names = {}, {}
      for alpha in range(FK.alpha_min, FK.alpha_max + 1):
         grK = graded[alpha][0]
         for beta in K.degrees():
            H = self._entry(grK, alpha, beta)
            if H is None or H.dim == 0:
               continue
            self.cohomology[(alpha, beta)] = H
            dims[(alpha, beta)] = H.dim
            copies = cochain_copies(R, H.degree)
            names[(alpha, beta)] = ["|".join(grK.label(beta, block) for block in
                                             _blocks_of(rep, copies, grK.dim(beta)))
                                    for rep in H.cocycle_basis]
      d_vert, d_horiz = {}, {}
      for (alpha, beta), H in self.cohomology.items():
         grK = graded[alpha][0]
         target = self.cohomology.get((alpha, beta - 1))
         if target is not None:
            d_vert[(alpha, beta)] = self._induced(H, grK, beta, target, rng)
         target = self.cohomology.get((alpha - 1, beta))
         if target is not None:
            d_horiz[(alpha, beta)] = self._connecting(H, K, beta, graded[alpha][1][beta], graded[alpha - 1][1][beta], target, rng)
      super().__init__((FK.alpha_min, FK.alpha_max), q_range, dims, d_horiz, d_vert, names)
      Logger.log(f"^{k}C^ of {FK.base!r}: {len(self.dims)} nonzero entries", indent=2)

   def _entry(self, grK: GChainComplex, alpha: int, beta: int) -> Optional[Cohomology]:
      n = -self.k - alpha
      if n < 0 or grK.dim(beta) == 0:
         return None
      return group_cohomology(grK.group, grK.module(beta), n, self.resolution)

   def _representatives(self, H: Cohomology, rng: Optional[np.random.Generator]) -> np.ndarray:
      reps = np.array(H.cocycle_basis, dtype=np.uint8)
      if rng is not None and H.coboundaries.dim:
         for row in reps:
            row ^= H.coboundaries.random_element(rng)
      return reps

   def _induced(self, H: Cohomology, grK: GChainComplex, beta: int, target: Cohomology,
                rng: Optional[np.random.Generator]) -> GF2Matrix:
      boundary = block_diagonal(grK.differential(beta), cochain_copies(self.resolution, H.degree))
      images = (boundary @ self._representatives(H, rng).T).T
      return GF2Matrix(target.classify(images).T)

   def _connecting(self, H: Cohomology, K: GChainComplex, beta: int, upper, lower,
                   target: Cohomology, rng: Optional[np.random.Generator]) -> GF2Matrix:
      R = self.resolution
      n = H.degree
      copies, width = cochain_copies(R, n), upper.dim
      next_copies = cochain_copies(R, n + 1)
      coboundary = R.coboundary(n, K.module(beta))
      columns = []
      for rep in self._representatives(H, rng):
         lifted = upper.lift(_blocks_of(rep, copies, width))
         if rng is not None and lower.Z.dim:
            lifted = lifted ^ np.array([lower.Z.random_element(rng) for _ in range(copies)], dtype=np.uint8)
         pushed = coboundary @ lifted.reshape(-1)
         blocks = pushed.reshape(next_copies, K.dim(beta))
         projected = lower.project(blocks) if lower.dim else np.zeros((next_copies, 0), dtype=np.uint8)
         columns.append(target.classify(projected.reshape(-1)))
      return GF2Matrix(np.array(columns, dtype=np.uint8).T)

def build_hatC(k: int, FK: FilteredGComplex, R: Optional[Resolution] = None,
               rng: Optional[np.random.Generator] = None) -> HatDoubleComplex:
   """
The double complex ``^kC^`` of a filtered G-complex.
   """
   if R is None:
      R = resolution_for(FK.group, max(-k - FK.alpha_min + 2, 1))
   return HatDoubleComplex(k, FK, R, rng)

def hat_ss(HC: HatDoubleComplex, variant: str = "I", r_max: Optional[int] = None) -> SpectralSequence:
   """
Spectral sequences of ``^kC^``.

Variant ``I`` takes homology along ``d0`` first, variant ``II`` along ``d1``.
Both abut to the total complex, so their Euler characteristics agree.
   """
   if variant == "I":
      return ss_double_II(HC, r_max)
   if variant == "II":
      return ss_double_I(HC, r_max)
   raise ValueError(f"unknown variant '{variant}', expected I or II")

def hat_euler_characteristic(HC: HatDoubleComplex) -> int:
   return sum((-1) ** ((alpha + beta) % 2) * d for (alpha, beta), d in HC.dims.items())

def hat_E1_check(V: VarietyModel, k: int, R: Optional[Resolution] = None) -> CheckReport:
   """
Compares page 1 of ``^k_I E^`` with the closed form.

``N_a C_b(X^G) / N_{a-1} C_b(X^G)`` for ``-k-a >= 1``,
``(N_a C_b)^G / (N_{a-1} C_b)^G`` for ``-k-a = 0`` and zero otherwise.
   """
   _require_z2(V, "the page-one formula")
   FK = V.complex
   fixed, _ = V.fixed_filtered()
   page = hat_ss(build_hatC(k, FK, R), "I").dims(1, certified_only=False)
   fixed_modules = {beta: invariants(V.base.module(beta)) for beta in V.base.degrees()}
   failures = []
   for alpha in range(FK.alpha_min, FK.alpha_max + 1):
      n = -k - alpha
      for beta in V.base.degrees():
         if n >= 1:
            expected = fixed.F(alpha, beta).dim - fixed.F(alpha - 1, beta).dim if fixed.base.dim(beta) else 0
         elif n == 0:
            expected = (FK.F(alpha, beta).intersection(fixed_modules[beta]).dim
                        - FK.F(alpha - 1, beta).intersection(fixed_modules[beta]).dim)
         else:
            expected = 0
         found = page.get((alpha, beta), 0)
         if found != expected:
            failures.append(f"^{k}E^1 at ({alpha},{beta}) has dimension {found}, closed form gives {expected}")
   for failure in failures:
      Logger.log_warning(f"'{V.label}': {failure}")
   return CheckReport(not failures, failures)

def page_two_collapse(HC: HatDoubleComplex) -> bool:
   """
True if every differential of variant I from page 2 on vanishes.
   """
   ss = hat_ss(HC, "I")
   for r in range(2, ss.last_page + 1):
      if any(not matrix.is_zero() for _, matrix in ss.page(r).differentials.values()):
         return False
   return True

# closed-form invariants

def B_prime(V: VarietyModel, k: int) -> InvariantReport:
   """
``B'_k = (-1)^k chi(H((N_{-k} C)^G / (N_{-k-1} C)^G)) + sum_{q >= k+1} beta_q(X^G)``.

**Raises:**

*  ``UnsupportedGroupError``

   If the group is not of order 2.

*  ``MissingCompanionError``

   Without invariant chains or fixed-point data.
   """
   _require_z2(V, "B'")
   invariant, derived = V.invariant_filtered()
   fixed, _ = V.fixed_filtered()
   graded, _ = invariant.graded_complex(-k)
   value = (-1) ** (k % 2) * graded.euler_characteristic() if graded.q_max >= graded.q_min else 0
   if fixed.complex.q_max >= fixed.complex.q_min:
      value += sum(virtual_betti(fixed, q).value for q in range(k + 1, fixed.complex.q_max + 1))
   route = "invariant_chains_of_model" if derived else "invariant_companion"
   return InvariantReport("B_prime", (k,), value, route, representative_dependent=True,
                          nash_faithful=V.flag("nash_faithful"))

@dataclass
class CaseResult:
   case: str
   k: int
   lhs: int
   rhs: int

   @property
   def holds(self) -> bool:
      return self.lhs == self.rhs

def thm411_suite(V: VarietyModel, contract: Optional[WindowContract] = None) -> List[CaseResult]:
   """
Compares ``B'_k`` with the values it must take in the cases where it is known.

* ``k < 0``: the total virtual Betti number of ``X^G``, and ``dim H_k(X; G)``
  on compact nonsingular models;
* free action on a compact model: ``beta_k(X/G)``;
* ``k = dim X``: ``dim (N_{-d} C_d)^G``;
* ``dim X = 1`` compact nonsingular: ``dim H_0(X; G)``.

**Raises:**

*  ``MissingCompanionError``

   Without fixed cells or a fixed-point model.
   """
   _require_z2(V, "the B' comparison")
   fixed, _ = V.fixed_filtered()
   results = []
   d = V.dimension
   total_fixed = 0
   if fixed.complex.q_max >= fixed.complex.q_min:
      total_fixed = sum(virtual_betti(fixed, q).value for q in range(0, fixed.complex.q_max + 1))
   homology = EquivariantHomology(V, contract) if V.flag("compact_nonsingular") else None
   for k in (-2, -1):
      value = B_prime(V, k).value
      results.append(CaseResult("negative_degree", k, value, total_fixed))
      if homology is not None:
         results.append(CaseResult("negative_degree_homology", k, value, homology.dim(k)))
   free = not any(V.fixed_cells.get(q) for q in V.base.degrees())
   if free and V.flag("compact") and V.quotient is not None:
      quotient = V.quotient.complex
      for k in range(0, d + 1):
         results.append(CaseResult("free_action", k, B_prime(V, k).value, virtual_betti(quotient, k).value))
   fixed_top = V.complex.F(-d, d).intersection(invariants(V.base.module(d)))
   results.append(CaseResult("top_degree", d, B_prime(V, d).value, fixed_top.dim))
   if d == 1 and homology is not None:
      results.append(CaseResult("curve", 0, B_prime(V, 0).value, homology.dim(0)))
   for result in results:
      if not result.holds:
         Logger.log_warning(f"'{V.label}' {result.case} k={result.k}: B' = {result.lhs}, expected {result.rhs}")
   return results

def euler_identity(V: VarietyModel, k: int, contract: Optional[WindowContract] = None,
                   R: Optional[Resolution] = None) -> Tuple[int, int, int]:
   """
``(chi(^k_II E^1), B_k^G, chi(^k_I E^))`` computed from the same model.
   """
   HC = build_hatC(k, V.complex, R)
   chi_II = hat_ss(HC, "II").euler_characteristic(1)
   chi_I = hat_ss(HC, "I").euler_characteristic(1)
   return chi_II, BkG(V, k, contract).value, chi_I

def nash_realization_report(V: VarietyModel, degrees: Optional[List[int]] = None) -> List[dict]:
   """
``_G beta_q`` next to the candidate ``B'_q - sum_{i >= q+1} beta_i(X^G)``.

Only reported; agreement is not expected in general.
   """
   fixed, _ = V.fixed_filtered()
   degrees = degrees if degrees is not None else list(range(0, V.dimension + 1))
   rows = []
   for q in degrees:
      candidate = B_prime(V, q).value
      if fixed.complex.q_max >= fixed.complex.q_min:
         candidate -= sum(virtual_betti(fixed, i).value for i in range(q + 1, fixed.complex.q_max + 1))
      try:
         value = invariant_beta(V, q).value
      except MissingCompanionError:
         value = None
      rows.append({"q": q, "invariant_beta": value, "b_prime_candidate": candidate,
                   "agree": value == candidate if value is not None else None})
   return rows
