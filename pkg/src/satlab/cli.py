"""``satlab`` command line.

Exit status is 0 when every check in the run holds, 1 when one fails (the
failing check is named on stderr) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from satlab import __version__, kernels
from satlab.certificate import N_MAX_ALG, basis_independence_selftest, independence_certificate
from satlab.constructions import (
    PartitionSpec,
    cross_extremal,
    dictator_family,
    lift,
    partition_construction,
)
from satlab.cross import (
    ClaimViolation,
    check_saturated_bounds,
    check_theorem_cross,
    compute_G,
    cross_saturate,
    eq1_identity_check,
    is_cross_dependant,
    is_cross_saturated,
)
from satlab.disjoint import bkr_check, box, box_general, box_increasing, talagrand_check
from satlab.family import (
    FamilySequence,
    SetFamily,
    default_order,
    is_increasing,
    is_s_saturated,
    mask_of,
    random_order,
    saturate,
)
from satlab.fuzz import (
    random_cross_saturated,
    random_family,
    random_increasing_family,
    random_saturated,
    trial_rng,
)
from satlab.io import (
    FormatError,
    dumps_report,
    make_report,
    parse_family,
    parse_sequence,
    serialize_family,
    serialize_sequence,
)
from satlab.search import ResourceCapError, min_cross_search, min_saturated_search


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    checks: list[dict[str, Any]]
    result: dict[str, Any] = field(default_factory=dict)
    artifact: str | None = None  # family text written after the summary


def check(name: str, holds: bool, **detail: Any) -> dict[str, Any]:
    return {"name": name, "holds": bool(holds), **detail}


# ------------------------------------------------------------------ helpers

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{x.replace('_', '-')}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _input_family(args: argparse.Namespace) -> SetFamily | None:
    if args.input is None:
        return None
    f = parse_family(_read(args.input))
    if args.n is not None and args.n != f.n:
        raise UsageError(f"--n {args.n} disagrees with the file's n {f.n}")
    return f


def _input_sequence(args: argparse.Namespace) -> FamilySequence | None:
    if args.input is None:
        return None
    seq = parse_sequence(_read(args.input), args.s)
    if args.n is not None and args.n != seq.n:
        raise UsageError(f"--n {args.n} disagrees with the file's n {seq.n}")
    return seq


def _order(args: argparse.Namespace, n: int) -> list[int]:
    if args.order == "random":
        return random_order(n, trial_rng(args.seed, "order", 0))
    return default_order(n)


def _map_trials(args: argparse.Namespace, fn: Callable[[int], Any]) -> list[Any]:
    trials = range(args.trials)
    if args.threads <= 1:
        return [fn(t) for t in trials]
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        return list(pool.map(fn, trials))


def _aggregate(per_trial: Sequence[list[dict[str, Any]]]) -> list[dict[str, Any]]:
    """Fold per-trial checks into one check per name, keeping the first failure."""
    merged: dict[str, dict[str, Any]] = {}
    for t, checks in enumerate(per_trial):
        for c in checks:
            m = merged.setdefault(c["name"], {"name": c["name"], "holds": True, "trials": 0, "failures": 0})
            m["trials"] += 1
            if not c["holds"]:
                m["failures"] += 1
                if m["holds"]:
                    m["holds"] = False
                    m["first_failure"] = {"trial": t, **{k: v for k, v in c.items() if k not in ("name", "holds")}}
    return list(merged.values())


def _sets(f: SetFamily) -> list[list[int]]:
    return [list(s) for s in f.sets()]


# ------------------------------------------------------------------ family core

def cmd_check_saturated(args: argparse.Namespace) -> Outcome:
    _need(args, "s", "input")
    f = _input_family(args)
    rep = is_s_saturated(f, args.s)
    detail: dict[str, Any] = {"reason": rep.reason}
    if rep.witness is not None:
        detail["witness"] = [list(SetFamily.from_masks(f.n, [m]).sets()[0]) for m in rep.witness]
    if rep.addable is not None:
        detail["addable"] = list(SetFamily.from_masks(f.n, [rep.addable]).sets()[0])
    checks = [check("s_saturated", rep.saturated, **detail)]
    result: dict[str, Any] = {"size": f.size()}
    if rep.saturated:
        b = check_saturated_bounds(f, args.s, check=False)
        checks.append(check("lower_bound_1_minus_1_over_s", b.meets_thm, size=b.size))
        result["bounds"] = b.as_dict()
    return Outcome(checks, result)


def _saturate_checks(f: SetFamily, s: int) -> list[dict[str, Any]]:
    b = check_saturated_bounds(f, s, check=False)
    return [check("s_saturated", bool(is_s_saturated(f, s))),
            check("lower_bound_1_minus_1_over_s", b.meets_thm, size=f.size())]


def cmd_saturate(args: argparse.Namespace) -> Outcome:
    _need(args, "s")
    start = _input_family(args)
    if start is None and args.trials is not None:
        _need(args, "n")
        n, s = args.n, args.s
        runs = _map_trials(args, lambda t: random_saturated(n, s, trial_rng(args.seed, "saturate", t)))
        sizes = [f.size() for f in runs]
        checks = _aggregate([_saturate_checks(f, s) for f in runs])
        return Outcome(checks, {"trials": len(runs), "min_size": min(sizes, default=None),
                                "max_size": max(sizes, default=None)})
    if start is None:
        _need(args, "n")
        start = SetFamily.empty(args.n)
    f = saturate(start, args.s, _order(args, start.n))
    b = check_saturated_bounds(f, args.s, check=False)
    return Outcome(_saturate_checks(f, args.s), {"size": f.size(), "family": _sets(f), "bounds": b.as_dict()},
                   serialize_family(f))


# ------------------------------------------------------------------ disjoint occurrence

def _pair(args: argparse.Namespace) -> tuple[SetFamily, SetFamily]:
    _need(args, "input")
    seq = parse_sequence(_read(args.input))
    if seq.s != 2:
        raise UsageError(f"expected two families separated by '---', found {seq.s}")
    return seq[0], seq[1]


def cmd_box(args: argparse.Namespace) -> Outcome:
    a, b = _pair(args)
    both_up = is_increasing(a) and is_increasing(b)
    boxed = box_increasing(a, b) if both_up else box_general(a, b, threads=args.threads)
    checks = []
    if both_up:
        checks.append(check("box_paths_agree", box_general(a, b, threads=args.threads) == boxed))
    for rep in (talagrand_check(a, b, boxed), bkr_check(a, b, boxed)):
        checks.append(check(rep.name, rep.holds, lhs=rep.lhs, rhs=rep.rhs))
    return Outcome(checks, {"size": boxed.size(), "family": _sets(boxed), "increasing_inputs": both_up},
                   serialize_family(boxed))


def cmd_verify_inequality(args: argparse.Namespace) -> Outcome:
    fn = talagrand_check if args.which == "talagrand" else bkr_check
    if args.input is not None:
        a, b = _pair(args)
        rep = fn(a, b)
        return Outcome([check(rep.name, rep.holds, lhs=rep.lhs, rhs=rep.rhs)], rep.as_dict())
    _need(args, "n")
    n = args.n
    trials = 100 if args.trials is None else args.trials
    args.trials = trials
    kind = args.family_kind

    def one(t: int) -> list[dict[str, Any]]:
        rng = trial_rng(args.seed, f"pair/{kind}", t)
        gen = random_increasing_family if kind == "increasing" else random_family
        a, b = gen(n, rng), gen(n, rng)
        rep = fn(a, b, box(a, b))
        return [check(rep.name, rep.holds, lhs=rep.lhs, rhs=rep.rhs)]

    per = _map_trials(args, one)
    return Outcome(_aggregate(per), {"kind": kind, "trials": trials})


# ------------------------------------------------------------------ cross saturation

def _cross_checks(action: str, seq: FamilySequence) -> list[dict[str, Any]]:
    if action == "check":
        rep = is_cross_saturated(seq)
        detail: dict[str, Any] = {"reason": rep.reason}
        if rep.index is not None:
            detail["family"] = rep.index + 1
            detail["addable_mask"] = rep.addable
        return [check("cross_saturated", rep.holds, **detail)]
    if action == "eq1":
        return [check(f"dual_equals_box_of_others[{r.index + 1}]", r.holds, first_difference=r.first_difference)
                for r in eq1_identity_check(seq)]
    if action == "gfamilies":
        try:
            g = compute_G(seq)
        except ClaimViolation as exc:
            return [check("g_families", False, error=str(exc))]
        return [check("g_pairwise_disjoint", True),
                check("comp_size_le_g_size", all(c <= x.size() for c, x in zip(g.comp_sizes, g.families))),
                check("g_total_le_2^n", g.total <= 1 << seq.n, total=g.total)]
    if action == "bound":
        rep = check_theorem_cross(seq)
        return [check("sum_ge_(s-1)2^n", rep.holds, sum=rep.total, bound=rep.bound)]
    raise AssertionError(action)


def cmd_cross(args: argparse.Namespace) -> Outcome:
    action = args.action
    seq = _input_sequence(args)
    if seq is None:
        _need(args, "n", "s")
        n, s = args.n, args.s
        if args.trials is None:
            args.trials = 100

        def one(t: int) -> tuple[list[dict[str, Any]], int]:
            sq = random_cross_saturated(n, s, trial_rng(args.seed, "cross", t))
            return _cross_checks("check" if action == "saturate" else action, sq), sum(sq.sizes())

        per = _map_trials(args, one)
        sums = [x for _, x in per]
        return Outcome(_aggregate([c for c, _ in per]),
                       {"trials": args.trials, "min_sum": min(sums, default=None), "bound": (s - 1) << n})
    if action == "saturate":
        dep = is_cross_dependant(seq)
        if not dep:
            return Outcome([check("input_cross_dependant", False)])
        out = cross_saturate(seq, _order(args, seq.n))
        rep = is_cross_saturated(out)
        return Outcome([check("cross_saturated", rep.holds)],
                       {"sizes": out.sizes(), "families": [_sets(f) for f in out]},
                       serialize_sequence(out))
    if action != "check" and not is_cross_saturated(seq):
        return Outcome([check("cross_saturated", False)])
    return Outcome(_cross_checks(action, seq), {"sizes": seq.sizes()})


def _certificate_checks(seq: FamilySequence) -> tuple[list[dict[str, Any]], dict[str, Any]]:
    rep = independence_certificate(seq)
    checks = [
        check("cross_orthogonal", rep.cross_orthogonal),
        check("disjointness_reason", rep.disjointness_reason),
        check("block_ranks_full", rep.block_ranks == rep.block_sizes, block_ranks=rep.block_ranks),
        check("rank_equals_comp_total", rep.total_rank == sum(rep.comp_sizes), total_rank=rep.total_rank),
        check("bound_confirmed", rep.bound_confirmed),
    ]
    if rep.failures:
        checks[-1]["failures"] = rep.failures[:10]
    return checks, rep.as_dict()


def cmd_certificate(args: argparse.Namespace) -> Outcome:
    seq = _input_sequence(args)
    if seq is not None:
        if not is_cross_saturated(seq):
            return Outcome([check("cross_saturated", False)])
        checks, result = _certificate_checks(seq)
        checks.append(check("basis_selftest", basis_independence_selftest(seq.n), n=seq.n))
        return Outcome(checks, result)
    _need(args, "n", "s")
    n, s = args.n, args.s
    if n > N_MAX_ALG:
        raise UsageError(f"certificate is capped at n <= {N_MAX_ALG}")
    if args.trials is None:
        args.trials = 20
    per = _map_trials(args, lambda t: _certificate_checks(
        random_cross_saturated(n, s, trial_rng(args.seed, "cross", t)))[0])
    checks = _aggregate(per)
    checks.append(check("basis_selftest", basis_independence_selftest(n), n=n))
    return Outcome(checks, {"trials": args.trials})


# ------------------------------------------------------------------ constructions and search

def _parse_blocks(text: str) -> tuple[int, ...]:
    try:
        return tuple(mask_of(int(x) for x in part.split(",")) for part in text.split("/"))
    except ValueError:
        raise UsageError(f"--blocks expects e.g. '1,2/3,4', got {text!r}") from None


def cmd_construct(args: argparse.Namespace) -> Outcome:
    kind = args.kind
    try:
        if kind == "dictator":
            _need(args, "n")
            f = dictator_family(args.n, args.element)
            return Outcome([check("s_saturated", bool(is_s_saturated(f, 2)), s=2)],
                           {"size": f.size(), "family": _sets(f)}, serialize_family(f))
        if kind == "partition":
            _need(args, "n")
            if args.blocks is not None:
                blocks = _parse_blocks(args.blocks)
            else:
                _need(args, "s")
                if not 1 <= args.s - 1 <= args.n:
                    raise UsageError("partition needs 1 <= s - 1 <= n")
                blocks = tuple(1 << i for i in range(args.s - 2)) + (((1 << args.n) - 1) & ~((1 << (args.s - 2)) - 1),)
            choices = tuple(int(x) for x in args.choices.split(",")) if args.choices else None
            spec = PartitionSpec(args.n, blocks, choices)
            if args.s is not None and args.s != spec.s:
                raise UsageError(f"{len(blocks)} blocks give s={spec.s}, not {args.s}")
            f = partition_construction(spec)
            return Outcome([check("s_saturated", True, s=spec.s), check("size_equals_conjectured_value", True)],
                           {"s": spec.s, "size": f.size(), "family": _sets(f)}, serialize_family(f))
        if kind == "cross-extremal":
            _need(args, "s")
            f1 = _input_family(args)
            if f1 is None:
                _need(args, "n")
                f1 = SetFamily.empty(args.n)
            seq = cross_extremal(f1, args.s)
            return Outcome([check("cross_saturated", True), check("sum_equals_(s-1)2^n", True)],
                           {"sizes": seq.sizes(), "families": [_sets(f) for f in seq]}, serialize_sequence(seq))
        if kind == "lift":
            _need(args, "s", "input")
            f = _input_family(args)
            g = lift(f, args.s)
            return Outcome([check("lifted_saturated", True, s=args.s + 1), check("size_identity", True)],
                           {"n": g.n, "size": g.size(), "family": _sets(g)}, serialize_family(g))
    except AssertionError as exc:
        return Outcome([check(f"construct_{kind}", False, error=str(exc))])
    raise AssertionError(kind)


def cmd_search_min(args: argparse.Namespace) -> Outcome:
    _need(args, "n", "s")
    cert = min_saturated_search(args.n, args.s, args.mode or "antichain", threads=args.threads,
                                allow_long=args.allow_long)
    b = check_saturated_bounds(cert.witness, args.s, check=False)
    checks = [
        check("witness_saturated", bool(is_s_saturated(cert.witness, args.s))),
        check("lower_bound_1_minus_1_over_s", b.meets_thm, minimum_size=cert.minimum_size),
        check("at_least_half", cert.minimum_size * 2 >= 1 << args.n),
    ]
    if cert.non_increasing_saturated is not None:
        checks.append(check("saturated_families_increasing", cert.non_increasing_saturated == 0))
    result = cert.as_dict(include_witnesses=args.witnesses)
    result["conjectured_value"] = b.as_dict()["conj_bound"]
    result["meets_conjectured_value"] = b.meets_conj
    return Outcome(checks, result, serialize_family(cert.witness))


def cmd_search_min_cross(args: argparse.Namespace) -> Outcome:
    _need(args, "n", "s")
    rep = min_cross_search(args.n, args.s, allow_long=args.allow_long)
    checks = [check("witness_cross_saturated", bool(is_cross_saturated(rep.witness))),
              check("minimum_ge_(s-1)2^n", rep.minimum_sum >= (args.s - 1) << args.n)]
    return Outcome(checks, rep.as_dict(), serialize_sequence(rep.witness))


# ------------------------------------------------------------------ parser

def _default_threads() -> int:
    raw = os.environ.get("SATLAB_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _positive(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--n", type=int, help="ground set size")
    g.add_argument("--s", type=int, help="number of families / disjoint sets")
    g.add_argument("--input", metavar="FILE", help="family or sequence file ('-' for stdin)")
    g.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "text"), default="text")
    g.add_argument("--seed", type=_positive, default=0)
    g.add_argument("--threads", type=int, default=_default_threads(),
                   help="worker threads (default: $SATLAB_THREADS or 1)")
    g.add_argument("--mode", choices=("raw", "antichain"))
    g.add_argument("--order", choices=("default", "random"), default="default")
    g.add_argument("--trials", type=_positive, help="fuzz trials when no --input is given")
    g.add_argument("--timing", action="store_true", help="include elapsed_ms in the report")
    g.add_argument("--allow-long", action="store_true", help="lift the resource caps on searches")

    p = argparse.ArgumentParser(prog="satlab", description="Exact checks on s-saturated set families.")
    p.add_argument("--version", action="version", version=f"satlab {__version__} ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn)
        return sp

    add("check-saturated", cmd_check_saturated, "test a family for s-saturation")
    add("saturate", cmd_saturate, "greedily extend a family to an s-saturated one")
    add("box", cmd_box, "disjoint occurrence of two families")
    vi = add("verify-inequality", cmd_verify_inequality, "fuzz or check a correlation inequality")
    vi.add_argument("which", choices=("talagrand", "bkr"))
    vi.add_argument("--family-kind", choices=("increasing", "arbitrary"), default="increasing")
    cr = add("cross", cmd_cross, "cross-saturated sequences")
    cr.add_argument("action", choices=("check", "saturate", "eq1", "gfamilies", "bound"))
    add("certificate", cmd_certificate, "polynomial independence certificate")
    co = add("construct", cmd_construct, "build an extremal construction")
    co.add_argument("kind", choices=("dictator", "partition", "cross-extremal", "lift"))
    co.add_argument("--element", type=int, default=1, help="dictator element")
    co.add_argument("--blocks", help="partition blocks, e.g. '1,2/3,4'")
    co.add_argument("--choices", help="dictator element per block, e.g. '1,3'")
    sm = add("search-min", cmd_search_min, "exact minimum s-saturated family size")
    sm.add_argument("--witnesses", action="store_true", help="list every minimum witness")
    add("search-min-cross", cmd_search_min_cross, "exact minimum cross-saturated sum")
    return p


_ECHO = ("n", "s", "seed", "mode", "order", "trials", "input", "which", "action", "kind",
         "family_kind", "element", "blocks", "choices")


@dataclass
class RunResult:
    code: int
    text: str
    report: dict[str, Any] | None
    output: str | None = None


def run(argv: Sequence[str]) -> RunResult:
    """Execute one command without touching stdout or the filesystem.

    Thread count is deliberately absent from the report so that reports
    compare byte for byte across ``--threads`` values.
    """
    parser = build_parser()
    args = parser.parse_args(list(argv))
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    start = time.perf_counter()
    try:
        outcome = args.func(args)
    except (UsageError, FormatError, ResourceCapError, ValueError) as exc:
        print(f"satlab {args.command}: error: {exc}", file=sys.stderr)
        return RunResult(2, "", None)
    elapsed = int((time.perf_counter() - start) * 1000) if args.timing else None
    inputs = {k: getattr(args, k) for k in _ECHO if getattr(args, k, None) is not None}
    if inputs.get("order") == "default" and args.command not in ("saturate", "cross"):
        inputs.pop("order")
    result = dict(outcome.result)
    result.pop("elapsed_ms", None)
    report = make_report(args.command, inputs, outcome.checks, result, elapsed)
    if args.format == "json":
        text = dumps_report(report)
    else:
        lines = [f"# {args.command}: {'ok' if report['ok'] else 'FAILED'}"]
        for c in outcome.checks:
            extra = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("name", "holds"))
            lines.append(f"# {'PASS' if c['holds'] else 'FAIL'} {c['name']}" + (f" ({extra})" if extra else ""))
        for k in sorted(result):
            if k not in ("family", "families", "witness", "witnesses"):
                lines.append(f"# {k}: {result[k]}")
        if elapsed is not None:
            lines.append(f"# elapsed_ms: {elapsed}")
        text = "\n".join(lines) + "\n" + (outcome.artifact or "")
    return RunResult(0 if report["ok"] else 1, text, report, args.output)


def main(argv: Sequence[str] | None = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    if res.report is None:
        return res.code
    for c in res.report["checks"]:
        if not c["holds"]:
            print(f"satlab {res.report['command']}: check failed: {c['name']}", file=sys.stderr)
    if res.output:
        with open(res.output, "w", encoding="utf-8") as fh:
            fh.write(res.text)
    else:
        sys.stdout.write(res.text)
    return res.code
