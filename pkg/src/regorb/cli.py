"""Command-line driver: job construction, config/cache plumbing, and
the six subcommands (dims, verdict, bounds, graph-cert, base-size,
verify-tables).

Exit codes: 0 ok; 1 expected-verdict mismatch (verify-tables); 2 usage;
3 budget exceeded; 4 file parse error.

Configuration precedence: built-in defaults, then the JSON config file
(path from REGORB_CONFIG, else ./regorb.json when present), then flags.
Config keys: max_vspace, max_orbit, seed, cache_path, threads.

The verdict cache is JSON-lines, append-only, keyed by the sha256 of
the canonical JobSpec encoding (timestamp excluded), so re-running a
cached job performs no computation and reprints the stored record.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__, boundlib, gfplin, graphcert, orbitengine, repkit, spechtmod, tables
from .gfplin import BudgetExceededError
from .repkit import ParseError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4

BASIS_NOTE = ("tabloid coordinates in lexicographic row-set order; "
              "D^mu coordinates via Gram pivot columns")


class UsageError(ValueError):
    """Inconsistent or incomplete job flags."""


# -------------------------------------------------------------------- config


DEFAULT_CONFIG = {
    "max_vspace": 1 << 28,
    "max_orbit": 200_000_000,
    "seed": gfplin.DEFAULT_SEED,
    "cache_path": None,
    "threads": 1,
}


def load_config() -> dict:
    cfg = dict(DEFAULT_CONFIG)
    path = os.environ.get("REGORB_CONFIG")
    if path is None and os.path.exists("regorb.json"):
        path = "regorb.json"
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file {path}: {exc}") from exc
        unknown = set(data) - set(DEFAULT_CONFIG)
        if unknown:
            raise ParseError(f"config file {path}: unknown keys {sorted(unknown)}")
        cfg.update(data)
    return cfg


def make_budget(cfg: dict, args: argparse.Namespace) -> orbitengine.CoverageBudget:
    jobs = args.jobs if getattr(args, "jobs", None) else cfg["threads"]
    return orbitengine.CoverageBudget(
        max_vspace=cfg["max_vspace"],
        max_orbit=cfg["max_orbit"],
        jobs=max(1, int(jobs)),
        huge=bool(getattr(args, "huge", False)),
    )


# ------------------------------------------------------------------ job spec


def parse_mu(text: str) -> tuple[int, ...]:
    try:
        mu = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--mu expects comma-separated integers, got {text!r}") from exc
    if not spechtmod.is_partition(mu):
        raise UsageError(f"--mu {text!r} is not a partition (weakly decreasing, positive)")
    return mu


def job_spec(args: argparse.Namespace, cfg: dict) -> dict:
    """Canonical JobSpec dict; the cache key hashes exactly this."""
    if args.n is None or args.p is None:
        raise UsageError("--n and --p are required")
    if not gfplin.is_prime(args.p):
        raise UsageError(f"--p must be prime, got {args.p}")
    a = args.scalars
    if a < 1 or (args.p - 1) % a:
        raise UsageError(f"--scalars {a} must divide p-1 = {args.p - 1}")
    module = args.module or "dmu"
    if module == "dmu":
        if args.mu is None:
            raise UsageError("--module dmu requires --mu")
        if sum(args.mu) != args.n:
            raise UsageError(f"--mu {args.mu} must sum to n = {args.n}")
        source: dict = {"kind": "dmu", "mu": list(args.mu)}
    elif module == "fdpm":
        source = {"kind": "fdpm"}
    elif module.startswith("ext:"):
        path = module[4:]
        try:
            with open(path, "rb") as fh:
                digest = hashlib.sha256(fh.read()).hexdigest()
        except OSError as exc:
            raise UsageError(f"cannot read module file {path}: {exc}") from exc
        source = {"kind": "external", "path": path, "sha256": digest}
    else:
        raise UsageError(f"--module must be dmu, fdpm, or ext:PATH, got {module!r}")
    group = args.group or ("ext" if source["kind"] == "external" else "sn")
    if group not in ("sn", "an", "ext"):
        raise UsageError(f"--group must be sn, an, or ext, got {group!r}")
    if group == "ext" and source["kind"] != "external":
        raise UsageError("--group ext requires --module ext:PATH")
    if source["kind"] == "external" and group != "ext":
        raise UsageError("external modules carry their own group; use --group ext")
    seed = args.seed if args.seed is not None else cfg["seed"]
    return {
        "n": args.n,
        "p": args.p,
        "module": source,
        "group": group,
        "sign": bool(args.sign),
        "scalars": a,
        "budgets": {
            "max_vspace": cfg["max_vspace"],
            "max_orbit": cfg["max_orbit"],
            "huge": bool(getattr(args, "huge", False)),
        },
        "seed": seed,
    }


def job_hash(spec: dict) -> str:
    blob = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def build_job_reps(spec: dict) -> list[repkit.Representation]:
    """Module pieces for a JobSpec, in the fixed pipeline order:
    build, sign twist, A_n restriction (with split), scalar adjoin."""
    n, p = spec["n"], spec["p"]
    source = spec["module"]
    if source["kind"] == "dmu":
        rep = spechtmod.build_dmu(n, p, tuple(source["mu"]))
    elif source["kind"] == "fdpm":
        rep = spechtmod.build_fdpm(n, p)
    else:
        rep = repkit.load_rep(source["path"])
    if spec["sign"]:
        rep = repkit.tensor_sign(rep)
    if spec["group"] == "an":
        pieces = list(repkit.an_pieces(rep, seed=spec["seed"]))
    else:
        pieces = [rep]
    if spec["scalars"] > 1:
        lam = tables.scalar_of_order(spec["scalars"], p)
        pieces = [repkit.scalar_extension(r, lam) for r in pieces]
    return pieces


# -------------------------------------------------------------------- cache


def cache_lookup(path: str | None, key: str) -> dict | None:
    if not path or not os.path.exists(path):
        return None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"cache {path}: bad line: {exc}") from exc
            if record.get("job_hash") == key:
                return record
    return None


def cache_append(path: str | None, record: dict) -> None:
    if not path:
        return
    with open(path, "a") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


# ------------------------------------------------------------------- output


def emit(payload: dict, as_json: bool, lines: list[str] | None = None) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines or []:
            print(line)


# -------------------------------------------------------------- subcommands


def cmd_dims(args: argparse.Namespace, cfg: dict) -> int:
    if args.n is None or args.p is None:
        raise UsageError("--n and --p are required")
    if not gfplin.is_prime(args.p):
        raise UsageError(f"--p must be prime, got {args.p}")
    n, p = args.n, args.p
    budget = make_budget(cfg, args)
    rows = []
    for mu in spechtmod.p_regular_partitions(n, p):
        if spechtmod.tabloid_count(mu) > budget.max_vspace:
            rows.append({"mu": list(mu), "skipped": "tabloid budget"})
            continue
        dim = spechtmod.dmu_dim(n, p, mu)
        assoc = spechtmod.associate_partition(n, p, mu)
        rows.append({
            "mu": list(mu),
            "dim": dim,
            "rn_class": spechtmod.rn_class(n, p, mu),
            "associate": list(assoc) if assoc is not None else None,
        })
    payload = {"n": n, "p": p, "rows": rows}
    lines = [f"p-regular partitions of {n} over F_{p}:"]
    for row in rows:
        mu = tuple(row["mu"])
        if "skipped" in row:
            lines.append(f"  {mu}: skipped ({row['skipped']})")
            continue
        assoc = tuple(row["associate"]) if row["associate"] else None
        lines.append(f"  {mu}: dim D = {row['dim']}, class {row['rn_class']}, "
                     f"associate {assoc if assoc else 'self'}")
    emit(payload, args.json, lines)
    return EXIT_OK


def _verdict_payload(v: orbitengine.Verdict) -> dict:
    out = v.to_dict()
    if isinstance(out.get("witness"), np.ndarray):
        out["witness"] = out["witness"].tolist()
    return out


def cmd_verdict(args: argparse.Namespace, cfg: dict) -> int:
    spec = job_spec(args, cfg)
    key = job_hash(spec)
    cache_path = args.cache or cfg["cache_path"]
    cached = cache_lookup(cache_path, key)
    if cached is not None:
        emit(cached, args.json, _verdict_lines(cached) + ["(cached)"])
        return EXIT_OK
    budget = make_budget(cfg, args)
    reps = build_job_reps(spec)
    verdicts = [orbitengine.verdict(r, budget, spec["seed"]) for r in reps]
    outcomes = {v.outcome for v in verdicts}
    record = {
        "job": spec,
        "job_hash": key,
        "outcome": outcomes.pop() if len(outcomes) == 1 else "Mixed",
        "pieces": [
            {"label": r.label, "dim": r.dim, "verdict": _verdict_payload(v)}
            for r, v in zip(reps, verdicts)
        ],
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "basis_note": BASIS_NOTE,
    }
    cache_append(cache_path, record)
    emit(record, args.json, _verdict_lines(record))
    return EXIT_OK


def _verdict_lines(record: dict) -> list[str]:
    spec = record["job"]
    head = (f"n={spec['n']} p={spec['p']} module={spec['module']['kind']} "
            f"group={spec['group']} scalars={spec['scalars']}"
            f"{' sign' if spec['sign'] else ''}: {record['outcome']}")
    lines = [head]
    for piece in record["pieces"]:
        v = piece["verdict"]
        cert = v.get("certificate", {})
        lines.append(f"  {piece['label']} (dim {piece['dim']}): {v['outcome']}"
                     f" [{cert.get('kind', '')}"
                     f"{', ' + cert['method'] if cert.get('method') else ''}]")
    return lines


def cmd_bounds(args: argparse.Namespace, cfg: dict) -> int:
    if args.n is None or args.p is None:
        raise UsageError("--n and --p are required")
    report = boundlib.bounds_report(args.n, args.p)
    payload = report.to_dict()
    lines = [f"bounds for n={args.n}, p={args.p}:"]
    for key, value in payload.items():
        if key in ("n", "p") or value is None:
            continue
        lines.append(f"  {key} = {value}")
    emit(payload, args.json, lines)
    return EXIT_OK


def cmd_graph_cert(args: argparse.Namespace, cfg: dict) -> int:
    if args.n is None or args.p is None:
        raise UsageError("--n and --p are required")
    shape = {"tworow": graphcert.TWO_ROW, "hook": graphcert.HOOK}[args.shape]
    try:
        s = graphcert.build_regular_candidate(args.n, shape, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = graphcert.certify_regular(s, shape)
    payload = {
        "n": args.n, "p": args.p, "shape": shape,
        "edges": {f"{i},{j}": w for (i, j), w in sorted(s.weights.items())},
        "report": asdict(report),
        "passed": report.passed,
    }
    lines = [f"graph certificate n={args.n} p={args.p} shape={shape}: "
             f"{'PASSED' if report.passed else 'FAILED'}"]
    for key, value in asdict(report).items():
        lines.append(f"  {key} = {value}")
    emit(payload, args.json, lines)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_base_size(args: argparse.Namespace, cfg: dict) -> int:
    spec = job_spec(args, cfg)
    budget = make_budget(cfg, args)
    reps = build_job_reps(spec)
    payload_pieces = []
    lines = []
    for rep in reps:
        t, vecs, certified = orbitengine.min_trivializing_tuple(
            rep, t_max=args.t_max)
        payload_pieces.append({
            "label": rep.label, "dim": rep.dim, "t": t,
            "affine_base_size": t + 1, "certified_minimal": certified,
            "tuple": [v.tolist() for v in vecs],
        })
        lines.append(f"{rep.label} (dim {rep.dim}): t = {t}, affine base size"
                     f" {t + 1}{'' if certified else ' (upper bound)'}")
    payload = {"job": spec, "pieces": payload_pieces}
    emit(payload, args.json, lines)
    return EXIT_OK


def cmd_verify_tables(args: argparse.Namespace, cfg: dict) -> int:
    budget = make_budget(cfg, args)
    seed = args.seed if args.seed is not None else cfg["seed"]
    ok, outcomes = tables.verify_tables(args.max_n, budget, seed,
                                        jobs=budget.jobs)
    payload = {
        "max_n": args.max_n,
        "tables_version": tables.TABLES_VERSION,
        "ok": ok,
        "results": [
            {"job": o.job.name(), "ok": o.ok, "skipped": o.skipped,
             "detail": o.detail, "note": o.job.note}
            for o in outcomes
        ],
    }
    lines = [o.line() for o in outcomes]
    ran = sum(1 for o in outcomes if not o.skipped)
    skipped = sum(1 for o in outcomes if o.skipped)
    lines.append(f"{'all verified' if ok else 'MISMATCHES PRESENT'}: "
                 f"{ran} cells run, {skipped} skipped (external data)")
    emit(payload, args.json, lines)
    return EXIT_OK if ok else EXIT_MISMATCH


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regorb",
        description="Regular orbits of S_n/A_n modules over F_p: "
                    "dimensions, verdicts, bounds, and certificates.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, module_flags=True):
        sp.add_argument("--n", type=int)
        sp.add_argument("--p", type=int)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--cache", default=None)
        sp.add_argument("--huge", action="store_true")
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--json", action="store_true")
        if module_flags:
            sp.add_argument("--mu", type=parse_mu, default=None)
            sp.add_argument("--module", default=None,
                            help="dmu | fdpm | ext:PATH")
            sp.add_argument("--group", default=None, help="sn | an | ext")
            sp.add_argument("--scalars", type=int, default=1,
                            help="order of the adjoined scalar subgroup")
            sp.add_argument("--sign", action="store_true")

    sp = sub.add_parser("dims", help="module dimensions for all p-regular partitions")
    common(sp, module_flags=False)
    sp.set_defaults(fn=cmd_dims)

    sp = sub.add_parser("verdict", help="regular-orbit verdict for one job")
    common(sp)
    sp.set_defaults(fn=cmd_verdict)

    sp = sub.add_parser("bounds", help="closed-form bound report")
    common(sp, module_flags=False)
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("graph-cert", help="graph-certified regular vector")
    common(sp, module_flags=False)
    sp.add_argument("--shape", choices=("tworow", "hook"), default="tworow")
    sp.set_defaults(fn=cmd_graph_cert)

    sp = sub.add_parser("base-size", help="minimal affine base size")
    common(sp)
    sp.add_argument("--t-max", type=int, default=8)
    sp.set_defaults(fn=cmd_base_size)

    sp = sub.add_parser("verify-tables", help="replay embedded expected results")
    common(sp, module_flags=False)
    sp.add_argument("--max-n", type=int, default=10)
    sp.set_defaults(fn=cmd_verify_tables)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config()
        return args.fn(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
