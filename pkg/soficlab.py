"""
soficlab command-line interface

Commands:
  classify FILE                 full classification (conditions a-e)
  tmf FILE --mode MODE          TMF decision in one mode
  monoid FILE                   transition monoid, boundary families, counts
  oracle FILE --max-len N       brute-force oracles checked against fast modes
  measure check|support|decomp-identity --file M
  corpus gen|run                random corpora and batch classification

Exit codes:
  0  success
  1  malformed input or usage error
  2  resource cap exceeded (a partial report is still printed)
  3  internal theorem inconsistency (implementation fault)

Reports go to stdout (text, or JSON with --json); progress and diagnostics
go to stderr.
"""

import argparse
import dataclasses
import json
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Optional

import guardrails
from classification import (
    TMF_MODES,
    classify,
    describe_witness,
    is_non_wandering,
    is_tmf,
    nonwandering_oracle,
    patching_check,
    return_word,
)
from config import DEFAULT_LIMITS, Limits
from context_monoid import build_monoid, describe_monoid, monoid_stats
from corpus import CorpusSpec, corpus_files, run_corpus, write_corpus
from errors import (
    ResourceCapExceeded,
    SoficLabError,
    TheoremInconsistency,
)
from markov_measures import (
    RationalMarkovChain,
    load_measure,
    support_of,
    verify_decomposition_identity,
    verify_main_theorem,
)
from run_report import Report, input_digest, report_to_json, report_to_text, save_report, to_jsonable
from shift_core import Presentation, load_presentation, presentation_to_document, trim_essential
from utils import format_word

DEFAULT_ORACLE_LEN = 6


# --------------------------------------------------
# Helpers
# --------------------------------------------------

def _read(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()


def _window(text: str, size: int) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected {size} comma-separated integers, got {text!r}")
    if len(values) != size:
        raise argparse.ArgumentTypeError(f"expected {size} comma-separated integers, got {text!r}")
    return values


def _range(text: str) -> tuple[int, int]:
    lo, hi = _window(text, 2)
    return lo, hi


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _limits(args: argparse.Namespace) -> Limits:
    limits = DEFAULT_LIMITS
    if args.max_states is not None:
        limits = dataclasses.replace(limits, max_subset_states=args.max_states)
    if args.max_enumeration is not None:
        limits = dataclasses.replace(limits, max_enumeration=args.max_enumeration)
    if args.max_len is not None:
        limits = dataclasses.replace(limits, oracle_max_len=args.max_len)
    return limits


def _limits_config(limits: Limits) -> dict:
    return dataclasses.asdict(limits)


def _word(p: Presentation, w) -> Optional[str]:
    return None if w is None else format_word(w, p.alphabet)


# --------------------------------------------------
# Presentation commands
# --------------------------------------------------

def cmd_classify(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    data = _read(args.file)
    report.input_digest = input_digest(data)
    p = load_presentation(data, limits)
    result = classify(p, limits, verbose=args.verbose)

    report.verdicts.update({
        "sofic": dataclasses.asdict(result.sofic_stats),
        "tmf": result.tmf.is_tmf,
        "non_wandering": result.nonwandering.is_non_wandering,
        "periodic_points_dense": result.nonwandering.periodic_dense,
        "product_non_wandering": result.product_nonwandering.is_non_wandering,
        "irreducible": result.irreducibility.is_irreducible,
        "tmc": result.is_tmc,
        "conditions": result.conditions,
        "condition_basis": result.condition_basis,
        "consistent": result.consistent,
        "chain_support_verified": result.chain_support_verified,
        "components": [
            {
                "alphabet": list(c.alphabet),
                "period": c.period,
                "cyclic_classes": [list(k) for k in c.cyclic_classes],
                "primitivity_index": c.primitivity_index,
            }
            for c in result.components
        ],
    })
    if result.recoding:
        report.verdicts["recoding"] = {name: "".join(block) for name, block in result.recoding.items()}
    irr = result.irreducibility.witness
    report.witnesses.update({
        "tmf": describe_witness(p, result.tmf.witness),
        "non_wandering": _word(p, result.nonwandering.witness),
        "return_word": _word(p, result.nonwandering.return_word),
        "irreducibility": None if irr is None else [_word(p, irr[0]), _word(p, irr[1])],
        "tmc_difference": _word(p, result.tmc_difference),
    })
    return 0


def cmd_tmf(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    data = _read(args.file)
    report.input_digest = input_digest(data)
    p = load_presentation(data, limits)
    verdict = is_tmf(p, args.mode, step=args.step, max_len=args.max_len, limits=limits)
    report.config["mode"] = args.mode
    report.config["step"] = args.step
    report.verdicts.update({
        "tmf": verdict.is_tmf,
        "lengths_searched": verdict.lengths_searched,
    })
    if args.mode == "oracle":
        report.verdicts["exhaustive"] = verdict.exhaustive
        report.verdicts["search_length"] = verdict.search_length
    if args.step == 1:
        report.witnesses["tmf"] = describe_witness(p, verdict.witness)
    elif verdict.witness is not None:
        # symbols of the higher block presentation
        report.witnesses["tmf"] = {k: list(getattr(verdict.witness, k)) for k in ("w", "u", "x", "y")}
    return 0


def cmd_monoid(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    data = _read(args.file)
    report.input_digest = input_digest(data)
    p = load_presentation(data, limits)
    p = trim_essential(p)
    built = build_monoid(p, limits, verbose=args.verbose)
    report.verdicts["sofic"] = dataclasses.asdict(monoid_stats(p, built, limits))
    report.verdicts["monoid"] = describe_monoid(*built)
    return 0


def _tmf_agreement(fast, oracle, length: int) -> str:
    if fast.is_tmf:
        return "agree" if oracle.is_tmf else "disagree"
    w = fast.witness
    if len(w.x) + len(w.w) + len(w.y) <= length:
        return "agree" if not oracle.is_tmf else "disagree"
    return "agree" if not oracle.is_tmf else "beyond-search-length"


def cmd_oracle(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    """
    Oracle results are added to the report as they complete, so a resource
    cap still leaves a partial report behind.
    """
    data = _read(args.file)
    report.input_digest = input_digest(data)
    p = load_presentation(data, limits)
    p = trim_essential(p)
    length = limits.oracle_max_len or DEFAULT_ORACLE_LEN
    report.config["max_len"] = length

    built = build_monoid(p, limits)
    fast_tmf = is_tmf(p, "monoid", built=built, limits=limits)
    fast_nw = is_non_wandering(p, built, limits)
    report.verdicts["monoid_tmf"] = fast_tmf.is_tmf
    report.verdicts["monoid_non_wandering"] = fast_nw.is_non_wandering
    report.witnesses["monoid_tmf"] = describe_witness(p, fast_tmf.witness)
    report.witnesses["monoid_non_wandering"] = _word(p, fast_nw.witness)

    oracle_tmf = is_tmf(p, "oracle", max_len=length, built=built, limits=limits)
    tmf_agreement = _tmf_agreement(fast_tmf, oracle_tmf, length)
    report.verdicts["oracle_tmf"] = {
        "tmf": oracle_tmf.is_tmf,
        "exhaustive": oracle_tmf.exhaustive,
        "agreement": tmf_agreement,
    }
    report.witnesses["oracle_tmf"] = describe_witness(p, oracle_tmf.witness)

    u = nonwandering_oracle(p, length, limits)
    if u is None:
        if fast_nw.is_non_wandering:
            nw_agreement = "agree"
        else:
            nw_agreement = "disagree" if len(fast_nw.witness) <= length else "beyond-search-length"
    elif not fast_nw.is_non_wandering:
        nw_agreement = "agree"
    else:
        nw_agreement = "beyond-search-length" if return_word(p, u) is not None else "disagree"
    report.verdicts["oracle_non_wandering"] = {"non_wandering": u is None, "agreement": nw_agreement}
    report.witnesses["oracle_non_wandering"] = _word(p, u)

    patching = patching_check(p, length, limits)
    # a TMF witness x w y of length <= n makes patching at n fail
    w = fast_tmf.witness
    if fast_tmf.is_tmf:
        patch_agreement = "agree" if patching.holds else "disagree"
    elif len(w.x) + len(w.w) + len(w.y) <= length:
        patch_agreement = "disagree" if patching.holds else "agree"
    else:
        patch_agreement = "beyond-search-length" if patching.holds else "agree"
    report.verdicts["patching"] = {"holds": patching.holds, "n": patching.n, "agreement": patch_agreement}
    if patching.witness is not None:
        chosen, a, b, z = patching.witness
        report.witnesses["patching"] = {
            "interior": list(chosen), "a": _word(p, a), "b": _word(p, b), "spliced": _word(p, z),
        }

    disagreements = [
        name for name, value in (("tmf", tmf_agreement), ("non_wandering", nw_agreement), ("patching", patch_agreement))
        if value == "disagree"
    ]
    if disagreements:
        raise TheoremInconsistency(
            f"oracle disagrees with the monoid decision: {', '.join(disagreements)}",
            {"verdicts": report.verdicts, "witnesses": report.witnesses},
        )
    return 0


# --------------------------------------------------
# Measure commands
# --------------------------------------------------

def _load_measure(args: argparse.Namespace, report: Report):
    data = _read(args.file)
    report.input_digest = input_digest(data)
    return load_measure(data)


def _window_witness(m, verdict) -> Optional[dict]:
    w = verdict.witness
    if w is None:
        return None
    fmt = lambda word: None if word is None else format_word(word, m.alphabet)
    return {
        "n": w.n, "N": w.N, "M": w.M,
        "left": fmt(w.left), "block": fmt(w.block), "right": fmt(w.right),
        "lhs": w.lhs, "rhs": w.rhs,
    }


def cmd_measure_check(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    m = _load_measure(args, report)
    result = verify_main_theorem(m, args.mrf_window, args.markov_window, limits)
    report.config.update({"mrf_window": list(args.mrf_window), "markov_window": list(args.markov_window)})
    report.verdicts.update({
        "kind": "markov-chain" if isinstance(m, RationalMarkovChain) else "hidden-markov",
        "mrf": result.mrf.holds,
        "markov": result.markov.holds,
        "outcome": result.outcome,
        "markov_covers_mrf": result.markov_covers_mrf,
        "configurations_checked": {
            "mrf": result.mrf.configurations_checked,
            "markov": result.markov.configurations_checked,
        },
    })
    if result.note:
        report.verdicts["note"] = result.note
    report.witnesses["mrf"] = _window_witness(m, result.mrf)
    report.witnesses["markov"] = _window_witness(m, result.markov)
    return 0


def cmd_measure_support(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    m = _load_measure(args, report)
    support = support_of(m)
    report.verdicts["support"] = presentation_to_document(support)
    return 0


def cmd_measure_decomp(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    m = _load_measure(args, report)
    verdict = verify_decomposition_identity(m, args.r, args.L, args.i, exhaustive=args.exhaustive, limits=limits)
    report.config.update({"r": args.r, "L": args.L, "i": args.i, "exhaustive": args.exhaustive})
    report.verdicts.update({
        "holds": verdict.holds,
        "period": verdict.period,
        "primitivity_index": verdict.primitivity_index,
        "checked": verdict.checked,
        "blocks": [format_word(b, m.alphabet) for b in verdict.blocks_used],
    })
    if not verdict.holds:
        ctx, x0, lhs, rhs = verdict.witness
        raise TheoremInconsistency(
            "decomposition identity fails for a Markov chain",
            {"context": format_word(ctx, m.alphabet), "x0": x0, "lhs": lhs, "rhs": rhs},
        )
    return 0


# --------------------------------------------------
# Corpus commands
# --------------------------------------------------

def cmd_corpus_gen(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    spec = CorpusSpec(
        count=args.count,
        seed=args.seed if args.seed is not None else 1,
        min_states=args.states[0],
        max_states=args.states[1],
        min_alphabet=args.alphabet[0],
        max_alphabet=args.alphabet[1],
        density=Fraction(args.density),
    )
    paths = write_corpus(spec, args.out_dir, verbose=args.verbose)
    spec_doc = dict(dataclasses.asdict(spec), density=str(spec.density))
    report.input_digest = input_digest(json.dumps(spec_doc, sort_keys=True).encode())
    report.config["corpus"] = spec_doc
    report.verdicts["files"] = [os.path.basename(p) for p in paths]
    return 0


def cmd_corpus_run(args: argparse.Namespace, report: Report, limits: Limits) -> int:
    paths = corpus_files(args.directory)
    summary = run_corpus(paths, jobs=args.jobs, limits=limits, verbose=args.verbose)
    report.input_digest = input_digest("".join(item.input_digest for item in summary.items).encode())
    report.verdicts.update({
        "total": summary.total,
        "strata": summary.strata,
        "items": summary.items,
        "invariant_violations": summary.invariant_violations,
    })
    for item in summary.items:
        guardrails.record_event(
            "corpus-run", item.input_digest,
            {"ok": "green", "cap": "yellow", "malformed": "yellow", "inconsistent": "red"}[item.status],
            item.detail or item.file,
        )
    if summary.strata["inconsistent"] or summary.invariant_violations:
        raise TheoremInconsistency(
            "corpus contains theorem inconsistencies",
            {"violations": summary.invariant_violations, "inconsistent": summary.strata["inconsistent"]},
        )
    return 0


# --------------------------------------------------
# Command-Line Interface
# --------------------------------------------------

def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Usage:
        python soficlab.py <command> [options]
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit the JSON report instead of text")
    common.add_argument("--max-states", type=_positive_int, default=None, help="Cap on subset-construction states")
    common.add_argument("--max-enumeration", type=_positive_int, default=None, help="Cap on enumerated words")
    common.add_argument("--max-len", type=_positive_int, default=None, help="Word length for oracle searches")
    common.add_argument("--seed", type=int, default=None, help="Seed for corpus generation")
    common.add_argument("--ledger", default=None, help="SQLite consistency ledger (overrides SOFICLAB_LEDGER_DB)")
    common.add_argument("--timing", action="store_true", help="Include wall-clock timing in the report")
    common.add_argument("--out", default=None, help="Also save the JSON report to this path")
    common.add_argument("--verbose", "-v", action="store_true", help="Progress messages on stderr")

    parser = argparse.ArgumentParser(
        prog="soficlab",
        description="soficlab - decide TMF, non-wandering and TMC properties of sofic shifts",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
EXIT CODES:
  0 success, 1 malformed input, 2 resource cap (partial report), 3 theorem inconsistency

Examples:
  %(prog)s classify fixtures/goldenmean.json --json
  %(prog)s tmf fixtures/even.json --mode oracle --max-len 7
  %(prog)s oracle fixtures/xnot.json --max-len 8
  %(prog)s measure check --file fixtures/even_hmm.json --mrf-window 4,2,2 --markov-window 4,4
  %(prog)s corpus gen --out-dir data/corpus --count 100 --seed 1
  %(prog)s corpus run data/corpus --jobs 4
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="Full classification")
    p.add_argument("file")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("tmf", parents=[common], help="TMF decision in one mode")
    p.add_argument("file")
    p.add_argument("--mode", choices=TMF_MODES, default="monoid")
    p.add_argument("--step", type=_positive_int, default=1, help="Decide the k-step TMF property")
    p.set_defaults(handler=cmd_tmf)

    p = sub.add_parser("monoid", parents=[common], help="Transition monoid and context counts")
    p.add_argument("file")
    p.set_defaults(handler=cmd_monoid)

    p = sub.add_parser("oracle", parents=[common], help="Brute-force oracles against the fast decisions")
    p.add_argument("file")
    p.set_defaults(handler=cmd_oracle)

    measure = sub.add_parser("measure", help="Exact measure verification")
    msub = measure.add_subparsers(dest="measure_command", required=True)
    p = msub.add_parser("check", parents=[common], help="MRF / Markov window checks")
    p.add_argument("--file", required=True)
    p.add_argument("--mrf-window", type=lambda s: _window(s, 3), default=(2, 2, 2), help="n,N,M")
    p.add_argument("--markov-window", type=lambda s: _window(s, 2), default=(2, 2), help="n,N")
    p.set_defaults(handler=cmd_measure_check)
    p = msub.add_parser("support", parents=[common], help="Support presentation of a measure")
    p.add_argument("--file", required=True)
    p.set_defaults(handler=cmd_measure_support)
    p = msub.add_parser("decomp-identity", parents=[common], help="Exact check of the decomposition identity")
    p.add_argument("--file", required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--L", type=_positive_int, required=True)
    p.add_argument("--i", type=_positive_int, default=1)
    p.add_argument("--exhaustive", action="store_true", help="Check every conditioning word")
    p.set_defaults(handler=cmd_measure_decomp)

    corpus = sub.add_parser("corpus", help="Random corpora")
    csub = corpus.add_subparsers(dest="corpus_command", required=True)
    p = csub.add_parser("gen", parents=[common], help="Generate presentation files")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--states", type=_range, default=(1, 3), help="min,max states")
    p.add_argument("--alphabet", type=_range, default=(1, 2), help="min,max alphabet size")
    p.add_argument("--density", default="1/2", help="Edge probability as p/q")
    p.set_defaults(handler=cmd_corpus_gen)
    p = csub.add_parser("run", parents=[common], help="Classify every file of a corpus directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(handler=cmd_corpus_run)

    return parser.parse_args(argv)


def _command_name(args: argparse.Namespace) -> str:
    parts = [args.command]
    for extra in ("measure_command", "corpus_command"):
        if getattr(args, extra, None):
            parts.append(getattr(args, extra))
    return " ".join(parts)


def _emit(report: Report, args: argparse.Namespace) -> None:
    sys.stdout.write(report_to_json(report) if args.json else report_to_text(report))
    if args.out:
        save_report(report, args.out)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is reserved for resource caps
        return 1 if e.code else 0
    if args.ledger:
        guardrails.configure(args.ledger)
    guardrails.start_run()

    report = Report(command=_command_name(args), input_digest=None)
    handler: Callable[[argparse.Namespace, Report, Limits], int] = args.handler
    started = time.perf_counter()
    code = 1
    try:
        limits = _limits(args)
        report.config["limits"] = _limits_config(limits)
        code = handler(args, report, limits)
        if args.timing:
            report.timing = {"seconds": round(time.perf_counter() - started, 6)}
        _emit(report, args)
    except ResourceCapExceeded as e:
        code = 2
        report.status = "partial"
        report.errors.append(str(e))
        print(f"error: resource cap: {e}", file=sys.stderr)
        _emit(report, args)
    except TheoremInconsistency as e:
        code = 3
        print(f"error: theorem inconsistency: {e}", file=sys.stderr)
        print(json.dumps(to_jsonable(e.witnesses), indent=2, sort_keys=True, default=str), file=sys.stderr)
    except (SoficLabError, ValueError, ZeroDivisionError, OSError) as e:
        # malformed input, empty shifts, failed preconditions, unreadable files
        code = 1
        kind = type(e).__name__
        print(f"error: {kind}: {e}", file=sys.stderr)

    guardrails.record_event(
        report.command,
        report.input_digest,
        guardrails.status_for(code, report.verdicts.get("outcome") if code == 0 else None),
        report.errors[0] if report.errors else "",
    )
    guardrails.print_run_summary()
    guardrails.end_run()
    return code


if __name__ == "__main__":
    sys.exit(main())
