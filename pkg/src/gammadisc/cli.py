"""Command-line front end.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input (unreadable or
malformed instance, unknown option values).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import CONV_TOL, MAX_DOUBLINGS, compute_q, fundamental_operators, is_pure
from .dilation import canonical_extension
from .errors import GammaDiscError, ParseError, PureTuple
from .gamma import Kind, random_gamma_tuple
from .instance import dumps_instance, read_instance
from .lifting import lift_commutant
from .matrixkit import fro, opnorm
from .report import SCHEMA, VerificationReport
from .toeplitz import commutant, toeplitz_projection, toeplitz_space, toeplitz_space_p_only
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=None, help="global tolerance overriding suite defaults")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-doublings", type=int, default=MAX_DOUBLINGS)
    p.add_argument("--rank-tol", type=float, default=None)
    p.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
    p.add_argument("--out", type=Path, default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="gammadisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a seeded random instance")
    g.add_argument("-d", "--d", type=int, required=True)
    g.add_argument("-n", "--n", type=int, required=True)
    g.add_argument("--kind", required=True, choices=[k.value for k in Kind])

    v = sub.add_parser("verify", parents=[common], help="run verification suites on an instance")
    v.add_argument("path", type=Path)
    v.add_argument("--suites", default=",".join(SUITES), help=f"comma list from {','.join(SUITES)}")

    for name, text in [
        ("q", "asymptotic limit of P*^n P^n"),
        ("fo", "fundamental operators"),
        ("extend", "canonical unitary extension"),
        ("toeplitz", "Toeplitz space and projection"),
        ("lift", "lift a random commutant element"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("path", type=Path)

    r = sub.add_parser("report", parents=[common], help="one-line summary per instance in a directory")
    r.add_argument("dir", type=Path)
    r.add_argument("--jobs", type=int, default=1)
    return parser


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        text = json.dumps({"schema": SCHEMA, **doc}, indent=1)
    else:
        text = "\n".join(lines)
    if args.out is not None and args.command != "gen":
        args.out.write_text(text + "\n")
    else:
        print(text)


def cmd_gen(args) -> int:
    try:
        t = random_gamma_tuple(args.d, args.n, args.kind, args.seed)
    except (GammaDiscError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps_instance(t, seed=args.seed)
    if args.out is None:
        sys.stdout.write(text)
        print(t.digest(), file=sys.stderr)
    else:
        args.out.write_text(text)
        print(t.digest())
    return EXIT_OK


def cmd_verify(args) -> int:
    t = read_instance(args.path)
    which = [s.strip() for s in args.suites.split(",") if s.strip()]
    unknown = [s for s in which if s not in SUITES]
    if unknown:
        print(f"error: unknown suite(s) {', '.join(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    rep = run_suites(t, which, args.tol, args.seed)
    lines = [f"{c.status:7s} {c.name:40s} {c.residual:.3e}" for c in rep.checks]
    lines.append(f"{rep.status.upper()} {t.digest()}")
    _emit(args, {"command": "verify", **rep.to_dict()}, lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_q(args) -> int:
    t = read_instance(args.path)
    lim = compute_q(t, CONV_TOL, args.max_doublings)
    w = np.linalg.eigvalsh(lim.Q)
    rank = int(np.sum(w > (args.rank_tol or 1e-8) * max(w[-1], 1e-300)))
    doc = {
        "command": "q",
        "digest": t.digest(),
        "lambda_max": float(w[-1]),
        "rank": rank if w[-1] > 1e-8 else 0,
        "pure": bool(w[-1] <= 1e-8),
        "iterations": lim.iterations,
        "residual": lim.residual,
        "fixed_point_residual": lim.fixed_point_residual(t.P),
        "eigenvalues": [float(x) for x in w],
    }
    lines = [f"{k}: {v}" for k, v in doc.items() if k != "command"]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_fo(args) -> int:
    t = read_instance(args.path)
    fs = fundamental_operators(t, args.rank_tol or 1e-10)
    doc = {
        "command": "fo",
        "digest": t.digest(),
        "defect_rank": int(fs.basis.shape[1]),
        "norms": [opnorm(f) for f in fs.F],
        "residuals": list(fs.residuals),
    }
    lines = [f"defect rank {doc['defect_rank']}"]
    lines += [f"F_{i}: norm {nm:.6g} residual {r:.3e}" for i, (nm, r) in enumerate(zip(doc["norms"], fs.residuals), 1)]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_extend(args) -> int:
    t = read_instance(args.path)
    try:
        ext = canonical_extension(t, args.rank_tol)
    except PureTuple as exc:
        _emit(args, {"command": "extend", "digest": t.digest(), "rank": 0, "pure": True}, [f"pure: {exc}"])
        return EXIT_OK
    res = ext.residuals()
    spectrum = ext.joint_spectrum()
    doc = {
        "command": "extend",
        "digest": t.digest(),
        "rank": ext.r,
        "residuals": res,
        "boundary": ext.boundary_ok(),
        "joint_spectrum": [[[float(z.real), float(z.imag)] for z in row] for row in spectrum],
    }
    lines = [f"rank {ext.r}", *(f"{k}: {v:.3e}" for k, v in res.items()), f"boundary spectrum: {doc['boundary']}"]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_toeplitz(args) -> int:
    t = read_instance(args.path)
    ts = toeplitz_space(t)
    tp = toeplitz_space_p_only(t.P)
    phi = toeplitz_projection(t.P)
    doc = {
        "command": "toeplitz",
        "digest": t.digest(),
        "dim_toeplitz": ts.dim,
        "dim_toeplitz_p": tp.dim,
        "spectral_gap": phi.spectral_gap,
        "adjoint_closure_residual": ts.adjoint_closure_residual(),
    }
    if not is_pure(t):
        doc["dim_commutant"] = commutant(canonical_extension(t, args.rank_tol).members).dim
    lines = [f"{k}: {v}" for k, v in doc.items() if k != "command"]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_lift(args) -> int:
    t = read_instance(args.path)
    ext = canonical_extension(t, args.rank_tol)
    rng = np.random.default_rng(args.seed)
    x = commutant(t.members).random_element(rng)
    res = lift_commutant(ext, x, args.tol or 1e-8)
    doc = {
        "command": "lift",
        "digest": t.digest(),
        "norm_X": res.norm_X,
        "norm_Y": res.norm_Y,
        "intertwine_residual": res.intertwine_residual,
        "commutant_residual": res.commutant_residual,
    }
    lines = [f"{k}: {v}" for k, v in doc.items() if k != "command"]
    _emit(args, doc, lines)
    return EXIT_OK if res.norm_Y <= res.norm_X * (1 + 1e-9) + 1e-9 else EXIT_FAIL


COLUMNS = ("file", "d", "n", "rank_q", "dim_toeplitz", "dim_commutant", "status")


def summarize(path: Path, tol: float | None, seed: int = 0) -> dict:
    """One report row for an instance file; parse failures become ``parse-error`` rows."""
    row = dict.fromkeys(COLUMNS, "")
    row["file"] = path.name
    try:
        t = read_instance(path)
    except (ParseError, OSError, UnicodeDecodeError) as exc:
        row["status"] = "parse-error"
        row["error"] = str(exc)
        return row
    row.update(d=t.d, n=t.n)
    try:
        rep: VerificationReport = run_suites(t, SUITES, tol, seed)
        row["dim_toeplitz"] = toeplitz_space(t).dim
        if is_pure(t):
            row["rank_q"], row["dim_commutant"] = 0, 0
        else:
            ext = canonical_extension(t)
            row["rank_q"], row["dim_commutant"] = ext.r, commutant(ext.members).dim
        row["status"] = rep.status
    except GammaDiscError as exc:
        row["status"] = "fail"
        row["error"] = str(exc)
    return row


def cmd_report(args) -> int:
    if not args.dir.is_dir():
        print(f"error: {args.dir} is not a directory", file=sys.stderr)
        return EXIT_INPUT
    files = sorted(p for p in args.dir.iterdir() if p.is_file())
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(lambda p: summarize(p, args.tol, args.seed), files))
    counts = {s: sum(r["status"] == s for r in rows) for s in ("pass", "fail", "parse-error")}
    lines = ["\t".join(COLUMNS)] + ["\t".join(str(r[c]) for c in COLUMNS) for r in rows]
    lines.append(f"# total={len(rows)} pass={counts['pass']} fail={counts['fail']} parse_error={counts['parse-error']}")
    _emit(args, {"command": "report", "rows": rows, "counts": counts}, lines)
    if counts["parse-error"]:
        return EXIT_INPUT
    return EXIT_FAIL if counts["fail"] else EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "q": cmd_q,
    "fo": cmd_fo,
    "extend": cmd_extend,
    "toeplitz": cmd_toeplitz,
    "lift": cmd_lift,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GammaDiscError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
