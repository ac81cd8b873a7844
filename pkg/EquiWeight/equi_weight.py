import json
import os
import re
import sys
from argparse import ArgumentParser
from dataclasses import dataclass, field
from typing import Any, List, Optional

from jsonschema import validate

from .version import VERSION, VERSION_DATE
from .complexes import VarietyModel, homology
from .corpus import CORPUS_DIR, load, resolve_model_path, verify_corpus
from .groups import GModule, group_cohomology, resolution_for
from .lfunctor import EquivariantHomology, WindowContract
from .logger import Logger
from .smithhat import (B_prime, build_hatC, hat_E1_check, hat_ss, page_two_collapse, quotient_comparison,
                       smith_exactness, smith_exactness_all, thm411_suite)
from .specseq import SpectralSequence, hochschild_serre
from .utils import (CONFIG_SCHEMA, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE, P_MIN_OFFSET, R_MAX_OFFSET,
                    EquiWeightError, ModelValidationError)
from .weights import (EquivariantWeights, betaG_odd, invariant_beta, thm416_check, virtual_betti, weight_ss)

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config", "equiweight_config.json")

INVARIANT_KINDS = ("bkg", "qb", "beta", "beta-odd", "invariant-beta", "b-prime")

@dataclass
class Report:
   """
Result of one command: a titled table plus an overall pass flag.
   """
   title: str
   columns: List[str]
   rows: List[List[Any]] = field(default_factory=list)
   passed: bool = True
   notes: List[str] = field(default_factory=list)
   records: Optional[List[dict]] = None

   def render(self, output: str = "table") -> str:
      """
Render the report.

**Arguments:**

*  ``output``

   / *Condition*: optional / *Type*: str / *Default*: 'table' /

   One of ``table``, ``json`` or ``csv``.

**Returns:**

* ``text``

  / *Type*: str /
      """
      if output == "json":
         if self.records is not None:
            return json.dumps(self.records, indent=3)
         return json.dumps({"title": self.title,
                            "passed": self.passed,
                            "rows": [dict(zip(self.columns, row)) for row in self.rows],
                            "notes": self.notes}, indent=3)
      if output == "csv":
         lines = [", ".join(self.columns) + "\n"]
         lines.extend(", ".join(_cell(value) for value in row) + "\n" for row in self.rows)
         return "".join(lines)
      widths = [len(name) for name in self.columns]
      for row in self.rows:
         widths = [max(width, len(_cell(value))) for width, value in zip(widths, row)]
      lines = [self.title, "  ".join(name.ljust(width) for name, width in zip(self.columns, widths)),
               "  ".join("-" * width for width in widths)]
      lines.extend("  ".join(_cell(value).ljust(width) for value, width in zip(row, widths)) for row in self.rows)
      lines.extend(f"note: {note}" for note in self.notes)
      lines.append("PASS" if self.passed else "FAIL")
      return "\n".join(lines) + "\n"

def _cell(value) -> str:
   if isinstance(value, bool):
      return "yes" if value else "no"
   if isinstance(value, (list, tuple)):
      return " ".join(str(item) for item in value)
   return str(value)

def write_output(filename, text):
   """
Write rendered output to ``filename``.
   """
   with open(filename, 'w', encoding='utf-8') as fh:
      fh.write(text)

def process_cli_argument(argv=None):
   """
Create and configure the ArgumentParser instance, then process command-line arguments.

**Arguments:**

*  ``argv``

   / *Condition*: optional / *Type*: list / *Default*: None /

   Argument list, ``sys.argv[1:]`` when not given.

**Returns:**

* ``args``

  / *Type*: Namespace /

  The parsed command-line arguments.
   """
   common = ArgumentParser(add_help=False)
   common.add_argument('--config', type=str, default=None,
                       help='path to configuration json file')
   common.add_argument('--pmin', type=int, default=None,
                       help='leftmost certified column of the L window')
   common.add_argument('--rmax', type=int, default=None,
                       help='last computed page')
   common.add_argument('--json', action="store_true",
                       help='if set, print the report as JSON')
   common.add_argument('--csv', action="store_true",
                       help='if set, print the report as CSV')
   common.add_argument('--output', type=str, default=None,
                       help='write the report to this file instead of stdout')
   common.add_argument('--logfile', type=str, default=None,
                       help='mirror log lines into this file')
   common.add_argument('--quiet', action="store_true",
                       help='if set, no progress lines are logged to the console')

   degrees = ArgumentParser(add_help=False)
   degrees.add_argument('--kmin', type=int, default=None, help='lowest degree')
   degrees.add_argument('--kmax', type=int, default=None, help='highest degree')

   pages = ArgumentParser(add_help=False)
   pages.add_argument('--page', type=int, default=None, help='dump only this page')
   pages.add_argument('--generators', action="store_true",
                      help='if set, list named generators of every cell')

   cli_parser = ArgumentParser(prog="equiweight",
                               description="EquiWeight computes equivariant homology, Hochschild-Serre and "+
                                           "equivariant weight spectral sequences of finite filtered G-complex "+
                                           "models over GF(2).")
   cli_parser.add_argument('-v', '--version', action='version',
                           version=f"v{VERSION} ({VERSION_DATE})",
                           help='version of EquiWeight')
   commands = cli_parser.add_subparsers(dest="command", required=True)

   def model_command(name, help_text, parents):
      parser = commands.add_parser(name, help=help_text, parents=[common] + parents)
      parser.add_argument('model', type=str, help='model JSON file (or name of a packaged corpus file)')
      return parser

   model_command("homology", "homology of the underlying complex", [degrees])
   parser = model_command("group-cohomology", "group cohomology with coefficients in H_q or GF(2)", [])
   parser.add_argument('--q', type=int, default=None, help='coefficients H_q(X); trivial GF(2) when omitted')
   parser.add_argument('--nmax', type=int, default=4, help='highest cohomological degree')
   model_command("equivariant-homology", "equivariant homology H_k(X; G)", [degrees])
   model_command("hochschild-serre", "Hochschild-Serre spectral sequence", [pages])
   for name, help_text in (("weight-ss", "weight spectral sequence of the model without action"),
                           ("equivariant-weight-ss", "equivariant weight spectral sequence")):
      parser = model_command(name, help_text, [pages])
      parser.add_argument('--raw-index', action="store_true",
                          help='if set, keep the filtration indexing instead of the weight indexing')
   model_command("omega-filtration", "equivariant weight filtration of H_k(X; G)", [degrees])
   parser = model_command("row-ss", "spectral sequence of one weight row", [pages])
   parser.add_argument('--q', type=int, required=True, help='weight row')
   parser.add_argument('--variant', choices=["I", "II"], default="II", help='column (I) or row (II) filtration')
   parser = commands.add_parser("invariants", help="numerical invariants", parents=[common, degrees])
   parser.add_argument('kind', choices=INVARIANT_KINDS, help='invariant to compute')
   parser.add_argument('model', type=str, help='model JSON file (or name of a packaged corpus file)')
   parser.add_argument('--q', type=int, default=None, help='weight row for qb')
   parser = model_command("smith-check", "exactness of the filtered Smith sequence", [])
   parser.add_argument('--alpha', type=int, default=None, help='check a single filtration level')
   model_command("quotient-check", "filtered comparison with the quotient model of a free action", [])
   parser = model_command("hatc", "double complex of group cohomology of the weight graded pieces", [pages])
   parser.add_argument('--k', type=int, required=True, help='total degree')
   parser.add_argument('--variant', choices=["I", "II"], default="I", help='spectral sequence variant')
   model_command("thm411", "comparison of B_k^G with the invariant-chain route", [])
   model_command("thm416", "equivariant homology from invariant and fixed-point Betti numbers", [degrees])
   parser = commands.add_parser("verify-corpus", help="check every expected value of a corpus",
                                parents=[common])
   parser.add_argument('directory', type=str, nargs='?', default=None, help='corpus directory')

   return cli_parser.parse_args(argv)

def process_configuration(path_file):
   """
Process the configuration JSON file.

**Arguments:**

*  ``path_file``

   / *Condition*: required / *Type*: str /

   The path to the configuration JSON file.

**Returns:**

* ``config``

  / *Type*: dict /

  The configuration dictionary with ``${ENV}`` references resolved.
   """
   # Function to resolve environment variables in a string
   def resolve_env_variables(value):
      if isinstance(value, str):
         # Match patterns like ${VAR_NAME}
         matches = re.findall(r"\$\{(.*?)\}", value)
         for match in matches:
            env_value = os.getenv(match, "")
            value = value.replace(f"${{{match}}}", env_value)
      return value

   # Recursively resolve environment variables in the JSON data
   def resolve(data):
      if isinstance(data, dict):
         return {key: resolve(value) for key, value in data.items()}
      elif isinstance(data, list):
         return [resolve(item) for item in data]
      else:
         return resolve_env_variables(data)

   if os.path.isfile(path_file):
      with open(path_file, 'r', encoding='utf-8') as json_file:
         try:
            config = json.load(json_file)
         except json.JSONDecodeError as e:
            Logger.log_error(f"Error decoding JSON file: {e}", fatal_error=True, exit_code=EXIT_USAGE)
      config = resolve(config)
      try:
         validate(config, CONFIG_SCHEMA)
      except Exception as reason:
         Logger.log_error(f"Invalid configuration json file. Reason: {reason}.", fatal_error=True, exit_code=EXIT_USAGE)
      return config
   else:
      Logger.log_error(f"Given configuration JSON is not existing: '{path_file}'.", fatal_error=True, exit_code=EXIT_USAGE)

def window_for(V: VarietyModel, args, config) -> WindowContract:
   """
Window of a command: configured offsets, overridden by ``--pmin`` and ``--rmax``.
   """
   window = config.get("window", {})
   default = WindowContract.default_for(V.dimension,
                                        window.get("p_min_offset", P_MIN_OFFSET),
                                        window.get("r_max_offset", R_MAX_OFFSET))
   p_min = args.pmin if args.pmin is not None else default.p_min
   r_max = args.rmax if args.rmax is not None else default.r_max
   return WindowContract(p_min, r_max)

def _degree_range(args, low: int, high: int) -> List[int]:
   kmax = args.kmax if args.kmax is not None else high
   kmin = args.kmin if args.kmin is not None else low
   return list(range(kmax, kmin - 1, -1))

def _raw_index(ss: SpectralSequence) -> SpectralSequence:
   return ss.relabel(lambda p, q: (-q, p + 2 * q), shift=-1, index="raw")

def _page_report(title: str, ss: SpectralSequence, args) -> Report:
   pages = [args.page] if args.page is not None else sorted(ss.pages)
   records = ss.records(pages, generators=args.generators)
   rows = [[record["r"], record["p"], record["q"], record["dim"], record["stabilized"],
            record.get("generators", [])] for record in records]
   notes = [f"converges at page {ss.convergence_page()}"]
   problems = ss.verify()
   notes.extend(problems)
   return Report(title, ["r", "p", "q", "dim", "stabilized", "generators"], rows, not problems, notes, records)

def cmd_homology(V, args, config):
   K = V.base
   rows = [[q, K.homology_dim(q)] for q in _degree_range(args, K.q_min, K.q_max)]
   return Report(f"H_q({V.label})", ["q", "dim"], rows)

def cmd_group_cohomology(V, args, config):
   G = V.group
   if args.q is None:
      module, label = GModule.trivial(G, 1), "GF(2)"
   else:
      _, module = homology(V.base, args.q)
      label = f"H_{args.q}"
   R = resolution_for(G, args.nmax + 1)
   rows = [[n, group_cohomology(G, module, n, R).dim] for n in range(args.nmax + 1)]
   return Report(f"H^n({G!r}, {label}) for '{V.label}'", ["n", "dim"], rows)

def cmd_equivariant_homology(V, args, config):
   contract = window_for(V, args, config)
   result = EquivariantHomology(V, contract)
   rows = [[k, result.dim(k)] for k in _degree_range(args, contract.p_min, V.base.q_max)]
   notes = [f"certified window p in [{contract.p_min}, 0]"]
   if result.contract.periodic:
      notes.append(f"columns periodic with period {result.contract.periodic}")
   return Report(f"H_k({V.label}; G)", ["k", "dim"], rows, True, notes)

def cmd_hochschild_serre(V, args, config):
   contract = window_for(V, args, config)
   return _page_report(f"Hochschild-Serre E^r_(p,q) of '{V.label}'", hochschild_serre(V, contract.r_max, contract), args)

def cmd_weight_ss(V, args, config):
   ss = weight_ss(V.complex, window_for(V, args, config).r_max)
   if args.raw_index:
      ss = _raw_index(ss)
   return _page_report(f"weight spectral sequence of '{V.label}' ({ss.index} indexing)", ss, args)

def cmd_equivariant_weight_ss(V, args, config):
   contract = window_for(V, args, config)
   ss = EquivariantWeights(V, contract).weight_sequence(contract.r_max)
   if args.raw_index:
      ss = _raw_index(ss)
   return _page_report(f"equivariant weight spectral sequence of '{V.label}' ({ss.index} indexing)", ss, args)

def cmd_omega_filtration(V, args, config):
   contract = window_for(V, args, config)
   weights = EquivariantWeights(V, contract)
   rows = []
   for k in _degree_range(args, contract.p_min, V.base.q_max):
      rows.extend([k, alpha, dim] for alpha, dim in sorted(weights.omega(k).items()))
   return Report(f"Omega_alpha H_k({V.label}; G)", ["k", "alpha", "dim"], rows)

def cmd_row_ss(V, args, config):
   contract = window_for(V, args, config)
   row = EquivariantWeights(V, contract).row_sequence(args.q, args.variant, contract.r_max)
   report = _page_report(f"row {args.q} spectral sequence of '{V.label}', variant {args.variant}", row.sequence, args)
   if row.representative_dependent and not row.nash_faithful:
      report.notes.append("variant II depends on the chosen model; the model is not flagged nash_faithful")
   return report

def cmd_invariants(V, args, config):
   contract = window_for(V, args, config)
   weights = EquivariantWeights(V, contract)
   kind = args.kind
   if kind == "qb":
      if args.q is None:
         raise ModelValidationError("invariants qb needs --q")
      reports = [weights.qB(args.q, i) for i in _degree_range(args, contract.p_min, 0)]
   elif kind == "bkg":
      reports = [weights.BkG(k) for k in _degree_range(args, contract.p_min, V.base.q_max)]
   elif kind == "beta":
      reports = [virtual_betti(V.complex, q) for q in _degree_range(args, 0, V.dimension)]
   elif kind == "beta-odd":
      reports = [betaG_odd(V, q, contract) for q in _degree_range(args, 0, V.dimension)]
   elif kind == "invariant-beta":
      reports = [invariant_beta(V, q) for q in _degree_range(args, 0, V.dimension)]
   else:
      reports = [B_prime(V, k) for k in _degree_range(args, contract.p_min, V.base.q_max)]
   rows = [[report.kind, report.index, report.value, report.route, report.comparable] for report in reports]
   notes = []
   if any(not report.comparable for report in reports):
      notes.append("values depend on the chosen model; the model is not flagged nash_faithful")
   return Report(f"{kind} of '{V.label}'", ["invariant", "index", "value", "route", "comparable"], rows, True, notes)

def cmd_smith_check(V, args, config):
   reports = [smith_exactness(V, args.alpha)] if args.alpha is not None else smith_exactness_all(V)
   rows = []
   for report in reports:
      for k, (left, middle, right) in sorted(report.ranks.items()):
         rows.append([report.alpha, k, left, middle, right, report.exact])
   notes = [f"alpha = {report.alpha}: fails in degree {report.failing_degree}: {report.reason}"
            for report in reports if not report.exact]
   return Report(f"Smith sequence of '{V.label}'", ["alpha", "k", "left", "middle", "right", "exact"], rows,
                 all(report.exact for report in reports), notes)

def cmd_quotient_check(V, args, config):
   if V.quotient is None:
      raise ModelValidationError(f"model '{V.label}' has no quotient companion")
   report = quotient_comparison(V, V.quotient)
   return Report(f"quotient comparison of '{V.label}' with '{V.quotient.label}'", ["check", "passed"],
                 [["filtered quotient", report.passed]], report.passed, list(report.failures))

def cmd_hatc(V, args, config):
   HC = build_hatC(args.k, V.complex)
   ss = hat_ss(HC, args.variant, window_for(V, args, config).r_max)
   report = _page_report(f"hat spectral sequence {args.variant} for k = {args.k} of '{V.label}'", ss, args)
   if V.is_z2():
      check = hat_E1_check(V, args.k)
      report.passed = report.passed and check.passed
      report.notes.extend(check.failures)
      if not page_two_collapse(HC):
         report.passed = False
         report.notes.append(f"variant I does not degenerate at page 2 for k = {args.k}")
   return report

def cmd_thm411(V, args, config):
   results = thm411_suite(V, window_for(V, args, config))
   rows = [[result.case, result.k, result.lhs, result.rhs, result.holds] for result in results]
   return Report(f"B_k^G comparisons of '{V.label}'", ["case", "k", "B_k^G", "comparison", "holds"], rows,
                 all(result.holds for result in results))

def cmd_thm416(V, args, config):
   contract = window_for(V, args, config)
   rows = []
   for q in _degree_range(args, 0, V.dimension):
      lhs, rhs, holds = thm416_check(V, q, contract)
      rows.append([q, lhs, rhs, holds])
   return Report(f"H_q(X; G) from invariant and fixed Betti numbers of '{V.label}'",
                 ["q", "H_q(X;G)", "formula", "holds"], rows, all(row[3] for row in rows))

def cmd_verify_corpus(args, config):
   directory = args.directory or config.get("corpus") or CORPUS_DIR
   Logger.log(f"Verify corpus '{directory}'")
   results = verify_corpus(directory)
   rows = [[result.model, result.name, result.source, result.expected, result.actual, result.passed] for result in results]
   failed = [result for result in results if not result.passed]
   notes = [f"{len(results) - len(failed)} of {len(results)} expected values reproduced"]
   return Report("corpus verification", ["model", "entry", "source", "expected", "actual", "passed"], rows,
                 not failed, notes)

COMMANDS = {
   "homology": cmd_homology,
   "group-cohomology": cmd_group_cohomology,
   "equivariant-homology": cmd_equivariant_homology,
   "hochschild-serre": cmd_hochschild_serre,
   "weight-ss": cmd_weight_ss,
   "equivariant-weight-ss": cmd_equivariant_weight_ss,
   "omega-filtration": cmd_omega_filtration,
   "row-ss": cmd_row_ss,
   "invariants": cmd_invariants,
   "smith-check": cmd_smith_check,
   "quotient-check": cmd_quotient_check,
   "hatc": cmd_hatc,
   "thm411": cmd_thm411,
   "thm416": cmd_thm416,
}

def run(args, config) -> Report:
   """
Run one parsed command and return its report.

**Raises:**

*  ``EquiWeightError``

   Any library error; the caller maps it to an exit code.
   """
   if args.command == "verify-corpus":
      return cmd_verify_corpus(args, config)
   V = load(resolve_model_path(args.model, config.get("corpus")))
   Logger.log(f"Loaded model '{V.label}' ({V.group.order} group elements, degrees [{V.base.q_min}, {V.base.q_max}])")
   return COMMANDS[args.command](V, args, config)

def EquiWeight(argv=None):
   """
Main function of the equiweight command line.

**Arguments:**

*  ``argv``

   / *Condition*: optional / *Type*: list / *Default*: None /

   Argument list, ``sys.argv[1:]`` when not given.

**Returns:**

(*no returns*)

Exits with 0 when every check of the report passes, 1 when a check fails and
2 on usage errors.
   """
   args = process_cli_argument(argv)
   Logger.config(output_console=not args.quiet, output_logfile=args.logfile)

   config = process_configuration(args.config or DEFAULT_CONFIG)
   if config.get("logfile") and not args.logfile:
      Logger.config(output_console=not args.quiet, output_logfile=config["logfile"])
   output = "json" if args.json else "csv" if args.csv else config.get("output", "table")

   try:
      report = run(args, config)
   except EquiWeightError as reason:
      Logger.log_error(str(reason), fatal_error=True, exit_code=EXIT_USAGE)

   text = report.render(output)
   if args.output:
      write_output(args.output, text)
      Logger.log(f"Report written to '{args.output}'")
   else:
      sys.stdout.write(text)
   raise SystemExit(EXIT_PASS if report.passed else EXIT_CHECK_FAILED)
