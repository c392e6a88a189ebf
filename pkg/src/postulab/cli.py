"""The ``postulab`` command line: single checks, proof replay, flat limits and batch runs."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Any, Iterable, Sequence

from .algebra.field import DEFAULT_PRIME, PrimeField
from .algebra.groebner import ResourceLimitError
from .algebra.ideal import DEFAULT_MAX_SLICE
from .degeneration import verify_cone_limit
from .postulation import (DEFAULT_RETRIES, INCONCLUSIVE, REFUTED, STATEMENTS, VERIFIED, ConsistencyError,
                          actual_h0, parameters, verify_statement)
from .reduction import replay_proof
from .schemes.components import SchemeError
from .schemes.spec import SchemeSpec

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 2, 3, 64

VERDICT_HELP = """\
verdicts:
  verified      the computation over F_p attains the expected value; since h^0
                can only grow under specialisation this certifies the generic claim
  inconclusive  the expected value was missed on every seed of the retry budget;
                this is never evidence against the statement
  refuted       an exact violation: backends disagree, a residual/trace identity
                fails, or a count is impossible

exit codes: 0 verified, 2 refuted, 3 inconclusive, 64 usage error
"""

LINE_SPOTS = ((2, 1), (3, 2), (4, 3), (5, 3), (7, 4), (9, 5))
CONE_CASES = ((3, 3), (4, 3), (5, 3), (3, 4))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    retries: int = DEFAULT_RETRIES
    backend: str = "matrix"
    max_slice: int = DEFAULT_MAX_SLICE
    max_d: int | None = None
    workers: int = 1
    output: str | None = None

    def __post_init__(self):
        PrimeField(self.prime)
        if self.retries < 0:
            raise ValueError("retries must be non-negative")

    def echo(self) -> dict[str, Any]:
        """The fields that influence results (echoed into every report line)."""
        return {"prime": self.prime, "retries": self.retries, "backend": self.backend,
                "max_slice": self.max_slice}


# ---- work items and the cache ----

@dataclass(frozen=True)
class WorkItem:
    command: str
    params: tuple[tuple[str, Any], ...]
    prime: int
    seed: int
    retries: int = DEFAULT_RETRIES

    @property
    def key(self) -> str:
        return json.dumps([self.command, dict(self.params), self.prime, self.seed], sort_keys=True)



def item(command: str, prime: int, seed: int, retries: int = DEFAULT_RETRIES, **params) -> WorkItem:
    return WorkItem(command, tuple(sorted(params.items())), prime, seed, retries)


def execute(it: WorkItem) -> dict[str, Any]:
    """Run one work item and return its report record."""
    p = dict(it.params)
    base = {"command": it.command, "params": p}
    if it.command == "check":
        rep = verify_statement(p["kind"], p["d"], it.seed, it.prime, e=p.get("e"), m=p.get("m"),
                               s=p.get("s"), retries=it.retries, cross_check=p.get("cross_check", False))
        return {**base, **rep.to_dict()}
    if it.command == "prove":
        cert = replay_proof(p["d"], it.seed, it.prime, it.retries)
        nodes = cert.nodes()
        return {**base, "d": p["d"], "prime": it.prime, "seed": it.seed, "verdict": cert.verdict,
                "nodes": len(nodes), "count_checks": sum(len(n.counts) for n in nodes),
                "root_hash": cert.root.specialized_hash, "failures": cert.failures()}
    if it.command == "limit":
        rep = verify_cone_limit(p["s"], p["n"], it.prime)
        out = rep.to_dict()
        out.pop("seconds", None)
        return {**base, "d": p["s"], "seed": it.seed, **out}
    if it.command == "params":
        lo, hi = p["lo"], p["hi"]
        try:
            for d in range(lo, hi + 1):
                parameters(d)
            verdict = VERIFIED
        except ConsistencyError:
            verdict = REFUTED
        return {**base, "d": hi, "prime": it.prime, "seed": it.seed, "verdict": verdict}
    raise ValueError(f"unknown work item {it.command!r}")


class ResultCache:
    """Append-only JSON-lines log; a verified entry short-circuits recomputation."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self.entries: dict[str, list[dict]] = {}
        if self.path and self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self.entries.setdefault(rec["key"], []).append(rec)

    def verified(self, key: str) -> dict | None:
        for rec in self.entries.get(key, []):
            if rec["verdict"] == VERIFIED:
                return rec["record"]
        return None

    def append(self, key: str, record: dict, seconds: float) -> None:
        entry = {"key": key, "verdict": record["verdict"], "seconds": round(seconds, 3), "record": record}
        self.entries.setdefault(key, []).append(entry)
        if self.path:
            with self.path.open("a") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")


def _timed(it: WorkItem) -> tuple[dict, float]:
    t0 = time.perf_counter()
    rec = execute(it)
    return rec, time.perf_counter() - t0


def run_batch(items: Sequence[WorkItem], cache: ResultCache, force: bool = False, workers: int = 1,
              log=None) -> list[dict]:
    """Execute items (reusing cached verified results) and return records in deterministic order."""
    items = sorted(set(items), key=lambda it: it.key)
    todo, done = [], {}
    for it in items:
        hit = None if force else cache.verified(it.key)
        if hit is not None:
            done[it.key] = hit
        else:
            todo.append(it)
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_timed, todo))
    else:
        results = [_timed(it) for it in todo]
    for it, (rec, secs) in zip(todo, results):
        old = cache.verified(it.key)
        if old is not None and old["verdict"] != rec["verdict"] and log:
            log(f"cache audit mismatch for {it.key}: cached {old['verdict']}, now {rec['verdict']}")
        cache.append(it.key, rec, secs)
        done[it.key] = rec

    def order(it: WorkItem) -> tuple:
        rec = done[it.key]
        return (rec["command"], rec.get("d", -1), rec.get("seed", 0), it.key)

    return [done[it.key] for it in sorted(items, key=order)]


def overall(verdicts: Iterable[str]) -> str:
    vs = set(verdicts)
    return REFUTED if REFUTED in vs else INCONCLUSIVE if INCONCLUSIVE in vs else VERIFIED


def exit_code(verdict: str) -> int:
    return {VERIFIED: EXIT_OK, REFUTED: EXIT_REFUTED}.get(verdict, EXIT_INCONCLUSIVE)


def emit_report(records: Sequence[dict], out: str | Path | None, config: RunConfig,
                summary: str | Path | None = None) -> str:
    """Write JSON lines (one per record, already ordered) and return the summary table."""
    lines = [json.dumps({**r, "config": config.echo()}, sort_keys=True) for r in records]
    text = "".join(line + "\n" for line in lines)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    table = summary_table(records)
    if summary:
        Path(summary).write_text(table)
    return table


def summary_table(records: Sequence[dict]) -> str:
    rows: dict[str, dict[str, int]] = {}
    for r in records:
        name = r["command"] if r["command"] != "check" else f"check {r['params']['kind']}"
        row = rows.setdefault(name, {VERIFIED: 0, INCONCLUSIVE: 0, REFUTED: 0})
        row[r["verdict"]] += 1
    head = f"{'command':<16}{'verified':>10}{'inconclusive':>14}{'refuted':>9}\n"
    body = "".join(f"{k:<16}{v[VERIFIED]:>10}{v[INCONCLUSIVE]:>14}{v[REFUTED]:>9}\n" for k, v in sorted(rows.items()))
    return head + body


# ---- the suite ----

def dots_cases(max_m: int = 6, max_d: int = 10) -> list[tuple[int, int, int]]:
    """(m, d, s) with s at floor/ceil of (C(d+2,2) - C(m+1,2)) / 2."""
    out = []
    for m in range(max_m + 1):
        for d in range(max(m - 1, 0), max_d + 1):
            room = comb(d + 2, 2) - comb(m + 1, 2)
            for s in sorted({room // 2, -(-room // 2)}):
                if s >= 0:
                    out.append((m, d, s))
    return out


def suite_items(max_d: int, seeds: int, cfg: RunConfig) -> list[WorkItem]:
    p, r = cfg.prime, cfg.retries
    items = [item("params", p, 0, r, lo=3, hi=1000)]
    for kind in ("hd", "hprime", "hsecond"):
        for d in range(3, max_d + 1):
            items += [item("check", p, seed, r, kind=kind, d=d) for seed in range(seeds)]
    items += [item("check", p, 0, r, kind="lines", d=d, e=e) for e, d in LINE_SPOTS if d <= max_d]
    for s in range(1, 9):
        for d in range(1, min(8, max_d) + 1):
            items.append(item("check", p, 0, r, kind="ah", d=d, s=s))
    for m, d, s in dots_cases(6, min(10, max_d)):
        items += [item("check", p, seed, r, kind="dots", d=d, m=m, s=s) for seed in range(seeds)]
    items += [item("limit", p, 0, r, s=s, n=n) for s, n in CONE_CASES]
    items += [item("prove", p, 0, r, d=d) for d in range(3, max_d + 1)]
    return items


# ---- argument parsing ----

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field characteristic (default 32003)")
    common.add_argument("--seed", type=int, default=0, help="seed for generic data")
    common.add_argument("--retries", type=int, default=DEFAULT_RETRIES, help="fresh seeds tried after a miss")
    common.add_argument("--max-slice", type=int, default=DEFAULT_MAX_SLICE, help="cap on degree-slice dimension")

    ap = _Parser(prog="postulab", description="Postulation of generic lines: exact checks over F_p.",
                 epilog=VERDICT_HELP, formatter_class=argparse.RawDescriptionHelpFormatter, allow_abbrev=False)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("params", parents=[common], help="print r, q, m, s, t for degree d", allow_abbrev=False)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("h0", parents=[common], help="h^0(I_X(d)) of a scheme file", allow_abbrev=False)
    sp.add_argument("--scheme", required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--backend", choices=("matrix", "groebner"), default="matrix")

    sp = sub.add_parser("check", parents=[common], help="verify one statement instance", allow_abbrev=False,
                        epilog=VERDICT_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("kind", choices=STATEMENTS)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--e", type=int, help="number of lines (lines)")
    sp.add_argument("--m", type=int, help="multiplicity of the fat point (dots)")
    sp.add_argument("--s", type=int, help="number of 2-dots (dots) or double points (ah)")
    sp.add_argument("--cross-check", action="store_true", help="also run the Groebner backend")

    sp = sub.add_parser("prove", parents=[common], help="replay the reduction and emit a certificate",
                        allow_abbrev=False)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--out", help="certificate file (default stdout)")

    sp = sub.add_parser("limit", parents=[common], help="flat limits", allow_abbrev=False)
    sp.add_argument("which", choices=("cone",))
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--ambient", type=int, default=3, choices=(3, 4))

    sp = sub.add_parser("suite", parents=[common], help="the full acceptance battery", allow_abbrev=False,
                        epilog=VERDICT_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("--max-d", type=int, required=True)
    sp.add_argument("--seeds", type=int, default=3)
    sp.add_argument("--out", default="-", help="JSON-lines report (default stdout)")
    sp.add_argument("--summary", help="write the summary table here as well")
    sp.add_argument("--cache", help="append-only result cache")
    sp.add_argument("--force", action="store_true", help="recompute even cached verified results")
    sp.add_argument("--workers", type=int, default=1)
    return ap


def _config(args) -> RunConfig:
    try:
        return RunConfig(prime=args.prime, seed=args.seed, retries=args.retries,
                         backend=getattr(args, "backend", "matrix"), max_slice=args.max_slice,
                         max_d=getattr(args, "max_d", None), workers=getattr(args, "workers", 1),
                         output=getattr(args, "out", None))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_scheme(path: str) -> SchemeSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read scheme file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return SchemeSpec.from_dict(data)
    except SchemeError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _print_json(rec: dict, cfg: RunConfig) -> None:
    print(json.dumps({**rec, "config": cfg.echo()}, sort_keys=True))


def dispatch(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        return _run(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


def _run(args, cfg: RunConfig) -> int:
    cmd = args.command
    if cmd == "params":
        if args.d < 1:
            raise UsageError("--d must be at least 1")
        P = parameters(args.d)
        if args.json:
            print(json.dumps(P.as_dict(), sort_keys=True))
        else:
            print(f"r={P.r} q={P.q} m={P.m} s={P.s} t={P.t}")
        return EXIT_OK
    if cmd == "h0":
        spec = _load_scheme(args.scheme)
        if args.degree < 0:
            raise UsageError("--degree must be non-negative")
        print(actual_h0(spec, args.degree, backend=args.backend, max_dim=cfg.max_slice))
        return EXIT_OK
    if cmd == "check":
        params = {"kind": args.kind, "d": args.d}
        for key in ("e", "m", "s"):
            if getattr(args, key) is not None:
                params[key] = getattr(args, key)
        if args.cross_check:
            params["cross_check"] = True
        try:
            rec = execute(item("check", cfg.prime, cfg.seed, cfg.retries, **params))
        except (ValueError, SchemeError) as exc:
            raise UsageError(str(exc)) from None
        _print_json(rec, cfg)
        return exit_code(rec["verdict"])
    if cmd == "prove":
        if args.d < 3:
            raise UsageError("prove needs --d >= 3")
        cert = replay_proof(args.d, cfg.seed, cfg.prime, cfg.retries)
        text = cert.to_json(indent=1) + "\n"
        if args.out:
            Path(args.out).write_text(text)
            print(f"d={args.d} verdict={cert.verdict} nodes={len(cert.nodes())}")
        else:
            sys.stdout.write(text)
        for f in cert.failures():
            print(f"failed: {f}", file=sys.stderr)
        return exit_code(cert.verdict)
    if cmd == "limit":
        try:
            rec = execute(item("limit", cfg.prime, cfg.seed, cfg.retries, s=args.s, n=args.ambient))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _print_json(rec, cfg)
        return exit_code(rec["verdict"])
    if cmd == "suite":
        if args.max_d < 3 or args.seeds < 1 or args.workers < 1:
            raise UsageError("suite needs --max-d >= 3, --seeds >= 1 and --workers >= 1")
        cache = ResultCache(args.cache)
        log = lambda msg: print(msg, file=sys.stderr)  # noqa: E731
        records = run_batch(suite_items(args.max_d, args.seeds, cfg), cache, args.force, args.workers, log)
        table = emit_report(records, args.out, cfg, args.summary)
        print(table, file=sys.stderr if args.out in (None, "-") else sys.stdout, end="")
        return exit_code(overall(r["verdict"] for r in records))
    raise UsageError(f"unknown command {cmd!r}")  # pragma: no cover


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
