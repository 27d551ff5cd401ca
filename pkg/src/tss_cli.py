import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config import BUDGET_SECONDS, DEFAULT_JOBS, LOG_LEVEL
from modules.catalog import catalog_groups, group_from_shorthand, load_group_file
from modules.errors import BudgetExceededError, InputError, RefutationError, TssError
from modules.groups import FiniteGroup
from modules.permutation import parse_perm
from modules.reports import build_document, certificate_to_dict, class_report_to_dict, emit_document, render_human
from modules.search import enumerate_tss
from modules.symmetric_sets import CandidateSet, realized_permutations, unrealized_permutation
from modules.theorems import classify_max_tss, verify_bound, verify_hoelder, verify_product_rigidity

logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_REFUTATION = 4

DEFAULT_CLASSIFY = [3, 4, 5, 6]
DEFAULT_HOELDER = [(4, 3), (4, 4), (5, 4), (5, 5), (6, 5), (6, 6)]
DEFAULT_RIGIDITY = [4, 5]
DEFAULT_MAX_ORDER = 119


@dataclass
class RunConfig:
    command: str
    group: Optional[str] = None
    group_file: Optional[str] = None
    size: Optional[int] = None
    elements: List[str] = field(default_factory=list)
    up_to_conjugacy: bool = True
    selector: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    max_order: int = DEFAULT_MAX_ORDER
    budget: float = BUDGET_SECONDS
    jobs: int = DEFAULT_JOBS
    output_format: str = "json"
    out: Optional[str] = None
    timing: bool = False
    use_cache: bool = True

    def validate(self):
        if self.budget <= 0:
            raise InputError(f"Budget must be positive, got {self.budget}")
        if self.jobs < 1:
            raise InputError(f"--jobs must be at least 1, got {self.jobs}")
        if self.size is not None and self.size < 1:
            raise InputError(f"--size must be at least 1, got {self.size}")
        for name in ("n", "m", "max_order"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InputError(f"--{name.replace('_', '-')} must be at least 1, got {value}")

    def echo(self) -> Dict[str, Any]:
        """Settings that determine the result; jobs, output and timing are left out."""
        fields = {
            "verify": ("group", "group_file", "elements"),
            "search": ("group", "group_file", "size", "up_to_conjugacy", "budget"),
            "theorems": ("selector", "n", "m", "max_order", "group_file", "budget"),
        }[self.command]
        return {name: getattr(self, name) for name in fields}

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        config = cls(command=args.command)
        for name in vars(config):
            if name != "command" and hasattr(args, name):
                setattr(config, name, getattr(args, name))
        config.validate()
        return config


def resolve_group(config: RunConfig) -> FiniteGroup:
    if config.group_file:
        return load_group_file(config.group_file)
    if config.group:
        return group_from_shorthand(config.group)
    raise InputError("Either --group or --group-file is required")


# --- commands ---


def cmd_verify(config: RunConfig):
    group = resolve_group(config)
    if not config.elements:
        raise InputError("verify needs at least one element")
    perms = [parse_perm(text, group.degree) for text in config.elements]
    candidate = CandidateSet.from_perms(group, perms)
    image, certificate = realized_permutations(candidate)
    k = candidate.size
    result = {
        "group": group.label,
        "order": group.order,
        "candidate": candidate.notation(),
        "realized_group_order": certificate.realized_group_order,
    }
    sigma = unrealized_permutation(image, k)
    if sigma is None:
        result["totally_symmetric"] = True
        result["certificate"] = certificate_to_dict(certificate, candidate)
        result["certificate_valid"] = certificate.validate(candidate)
        return result, True, EXIT_PASS
    names = candidate.notation()
    result["totally_symmetric"] = False
    result["unrealized_permutation"] = [i + 1 for i in sigma]
    result["unrealized_mapping"] = [[names[i], names[j]] for i, j in enumerate(sigma) if i != j]
    return result, False, EXIT_NEGATIVE


def cmd_search(config: RunConfig):
    if config.size is None:
        raise InputError("search needs --size")
    group = resolve_group(config)
    report = enumerate_tss(group, config.size, config.up_to_conjugacy, config.budget, config.jobs)
    result = class_report_to_dict(report, group)
    if not report.complete:
        return result, False, EXIT_BUDGET
    return result, True, EXIT_PASS


def _theorem_runs(config: RunConfig):
    """(name, thunk) pairs for the selected theorem checks."""
    selector = config.selector
    runs = []
    if selector in ("classify", "all"):
        for n in [config.n] if config.n and selector == "classify" else DEFAULT_CLASSIFY:
            runs.append((f"classify-S{n}", lambda n=n: classify_max_tss(n, config.budget, config.jobs, config.use_cache)))
    if selector in ("hoelder", "all"):
        if selector == "hoelder" and bool(config.n) != bool(config.m):
            raise InputError("theorems hoelder needs both --n and --m, or neither")
        if selector == "hoelder" and config.n and config.m:
            pairs = [(config.n, config.m)]
        else:
            pairs = DEFAULT_HOELDER
        for n, m in pairs:
            runs.append((f"hoelder-S{n}-S{m}", lambda n=n, m=m: verify_hoelder(n, m, config.jobs, config.use_cache)))
    if selector in ("rigidity", "all"):
        for n in [config.n] if config.n and selector == "rigidity" else DEFAULT_RIGIDITY:
            runs.append((f"rigidity-C2xS{n}", lambda n=n: verify_product_rigidity(n, config.budget, config.jobs)))
    if selector in ("bound", "all"):

        def bound():
            groups = catalog_groups(config.max_order)
            if config.group_file:
                groups.append(load_group_file(config.group_file))
            return verify_bound(groups, config.budget, config.jobs)

        runs.append((f"bound-order-{config.max_order}", bound))
    return runs


def cmd_theorems(config: RunConfig):
    reports = {}
    code = EXIT_PASS
    for name, run in _theorem_runs(config):
        logger.info(f"Running {name}")
        try:
            reports[name] = run()
        except RefutationError as e:
            logger.warning(f"{name}: {e}")
            reports[name] = e.report
            code = max(code, EXIT_REFUTATION)
        except BudgetExceededError as e:
            logger.warning(f"{name}: {e}")
            reports[name] = {"success": False, "budget_exceeded": str(e), "partial": e.partial}
            code = max(code, EXIT_BUDGET)
    summary = {name: bool(r.get("success")) for name, r in reports.items()}
    return {"summary": summary, "reports": reports}, code == EXIT_PASS, code


COMMANDS = {"verify": cmd_verify, "search": cmd_search, "theorems": cmd_theorems}


# --- argument parsing ---


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--budget", type=float, default=BUDGET_SECONDS, help="wall-clock search budget in seconds")
    parser.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="worker processes")
    parser.add_argument("--format", dest="output_format", choices=("human", "json"), default="json")
    parser.add_argument("--out", default=None, help="write the document here instead of stdout")
    parser.add_argument("--timing", action="store_true", help="add wall time to the document")


def _add_group_source(parser: argparse.ArgumentParser):
    parser.add_argument("--group", help="S<n>, A<n>, C<n>, D<n>, Q8 or products such as C2xS4")
    parser.add_argument("--group-file", dest="group_file", help="degree line followed by one generator per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tss", description="Totally symmetric sets in finite groups")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="check that a set is totally symmetric")
    _add_group_source(verify)
    verify.add_argument("elements", nargs="+", help="group elements in cycle notation")
    _add_common(verify)

    search = sub.add_parser("search", help="enumerate totally symmetric sets of a given size")
    _add_group_source(search)
    search.add_argument("--size", type=int, required=True)
    search.add_argument("--up-to-conjugacy", dest="up_to_conjugacy", action=argparse.BooleanOptionalAction, default=True)
    _add_common(search)

    theorems = sub.add_parser("theorems", help="run the theorem checks")
    theorems.add_argument("selector", choices=("bound", "classify", "hoelder", "rigidity", "all"))
    theorems.add_argument("--n", type=int)
    theorems.add_argument("--m", type=int)
    theorems.add_argument("--max-order", dest="max_order", type=int, default=DEFAULT_MAX_ORDER)
    theorems.add_argument("--group-file", dest="group_file", help="extra group for the bound scan")
    theorems.add_argument("--no-cache", dest="use_cache", action="store_false", help="ignore the automorphism cache")
    _add_common(theorems)
    return parser


def write_output(document: Dict[str, Any], config: RunConfig):
    text = emit_document(document) if config.output_format == "json" else render_human(document)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Document written to {config.out}")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        config = RunConfig.from_args(args)
        result, success, code = COMMANDS[config.command](config)
    except InputError as e:
        logger.error(f"Input error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except TssError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    elapsed = time.monotonic() - started
    logger.info(f"{config.command} finished in {elapsed:.2f}s with exit code {code}")
    document = build_document(config.command, config.echo(), result, success)
    if config.timing:
        document["wall_seconds"] = round(elapsed, 3)
    write_output(document, config)
    return code


if __name__ == "__main__":
    sys.exit(main())
