"""Command-line interface.

Exit codes: 0 found/verified/holds, 1 none-exhausted/refuted, 2 inconclusive
(a resource cap stopped the run), 3 usage or parse errors. Every run prints a
manifest (with --json, machine-readable and byte-identical across reruns up
to timestamps). Output files are written via a temp file and a rename, so a
failed run never leaves a partial artifact. Any flag default can be
overridden by an environment variable MAGTILE_<FLAG-NAME>.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

from . import backend
from .balls import ErrorBall, MagnitudeSet, ball_enumerate, ball_size, tau, tau_identities
from .groups import enumerate_groups, parse_group_literal
from .intervals import Rounding
from .lattice import (
    IntegerLattice,
    emit_lattice,
    lattice_from_splitting,
    parse_lattice,
    quotient_splitting,
    verify_tiling_box,
)
from .screen import (
    nagell_solutions,
    screen_range,
    screen_small_m,
)
from .search import CheckpointMismatch, SearchOptions, search, search_all_groups
from .splitting import emit_certificate, parse_certificate, verify_complete, verify_full, verify_partial

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_default(flag: str, default, cast=str):
    raw = os.environ.get(f"MAGTILE_{flag.upper().replace('-', '_')}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        return default


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".magtile-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Run:
    """Collects the manifest and result halves of one CLI invocation."""

    def __init__(self, command: str, params: dict, json_mode: bool):
        self.command = command
        self.params = params
        self.json_mode = json_mode
        self.started = time.time()
        self.artifacts: list[str] = []
        self.lines: list[str] = []

    def say(self, text: str) -> None:
        self.lines.append(text)
        if not self.json_mode:
            print(text)

    def emit_file(self, path: str, text: str) -> None:
        _atomic_write(path, text)
        self.artifacts.append(path)

    def finish(self, status: str, result: dict, code: int) -> int:
        if self.json_mode:
            token = hashlib.sha256(
                json.dumps({"command": self.command, "params": self.params}, sort_keys=True).encode()
            ).hexdigest()[:16]
            doc = {
                "schema": SCHEMA,
                "manifest": {
                    "command": self.command,
                    "parameters": self.params,
                    "determinism_token": token,
                    "started": self.started,
                    "finished": time.time(),
                    "status": status,
                    "artifacts": self.artifacts,
                },
                "result": result,
            }
            print(json.dumps(doc, indent=2, sort_keys=True))
        return code


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def _ball_from_args(args) -> ErrorBall:
    if getattr(args, "ball", None):
        return ErrorBall.parse(args.ball)
    if getattr(args, "m", None):
        if not getattr(args, "n", None):
            raise ValueError("--m needs --n")
        return ErrorBall.family(args.m, args.n)
    raise ValueError("need --ball n,t,k+,k- or --m M --n N")


# -- subcommands ---------------------------------------------------------------


def cmd_ball(args) -> int:
    run = Run("ball", {"ball": args.ball, "m": args.m, "n": args.n, "enumerate": args.enumerate}, args.json)
    ball = _ball_from_args(args)
    size = ball_size(ball)
    run.say(f"B({ball}) has {size} vectors")
    result = {"ball": str(ball), "size": size}
    if args.enumerate:
        vectors = ball_enumerate(ball, cap=args.cap)
        result["vectors"] = [list(v) for v in vectors]
        for v in vectors:
            run.say(" ".join(map(str, v)))
    return run.finish("ok", result, EXIT_OK)


def cmd_tau(args) -> int:
    run = Run("tau", {"m": args.m, "x": args.x}, args.json)
    m = args.m
    if args.x is not None:
        value = tau(m, args.x)
        run.say(f"tau({m}, {args.x}) = {value}")
        return run.finish("ok", {"m": m, "x": args.x, "tau": value}, EXIT_OK)
    table = {x: tau(m, x) for x in range(-2 * (m - 1), 2 * m + 1)}
    hi, lo, odd = tau_identities(m)
    for x, v in table.items():
        run.say(f"tau({m}, {x:3d}) = {v}")
    run.say(f"identities: high-sum={hi} low-sum={lo} odd-sum={odd}")
    return run.finish(
        "ok",
        {"m": m, "table": {str(k): v for k, v in table.items()},
         "identities": {"high": hi, "low": lo, "odd": odd}},
        EXIT_OK,
    )


def cmd_groups(args) -> int:
    run = Run("groups", {"order": args.order}, args.json)
    gs = enumerate_groups(args.order)
    for g in gs:
        run.say(g.literal)
    return run.finish("ok", {"order": args.order, "groups": [g.literal for g in gs]}, EXIT_OK)


def cmd_nagell(args) -> int:
    run = Run("nagell", {"limit": args.limit}, args.json)
    sols = nagell_solutions(args.limit)
    for x, e in sols:
        run.say(f"2^{e} - 7 = {x}^2")
    return run.finish("ok", {"limit": args.limit, "solutions": [list(s) for s in sols]}, EXIT_OK)


def _search_options(args) -> SearchOptions:
    normalize = {"auto": None, "on": True, "off": False}[args.normalize]
    return SearchOptions(
        mode="all" if args.all else "first",
        threads=args.threads,
        cap_nodes=args.cap_nodes,
        normalize=normalize,
        structural_prunes=not args.no_prune,
        checkpoint=args.checkpoint,
        max_units=args.max_units,
        kernel=args.backend,
    )


def cmd_search(args) -> int:
    params = {
        "group": args.group, "ball": args.ball, "m": args.m, "n": args.n,
        "M": args.M, "t": args.t, "all": args.all, "cap_nodes": args.cap_nodes,
        "normalize": args.normalize, "no_prune": args.no_prune,
        "backend": args.backend or backend.kernel_backend(),
    }
    run = Run("search", params, args.json)
    options = _search_options(args)
    jobs = []  # (group, mags, t, n)
    if args.group:
        if not (args.M and args.n):
            raise ValueError("--group needs --M and --n (and --t, default 2)")
        group = parse_group_literal(args.group)
        jobs.append((group, MagnitudeSet.parse(args.M), args.t, args.n))
    else:
        ball = _ball_from_args(args)
        for g in enumerate_groups(ball_size(ball)):
            jobs.append((g, ball.magnitudes, ball.t, ball.n))

    results = []
    first_cert = None
    for group, mags, t, n in jobs:
        res = search(group, mags, t, n, options)
        results.append((group, res))
        status = res.status
        extra = f" [{res.prune_reason}]" if res.prune_reason else ""
        run.say(
            f"{group.literal}: {status}{extra} "
            f"(units {res.units_done}/{res.units_total}, nodes {res.nodes})"
        )
        for cert in res.certificates:
            if first_cert is None:
                first_cert = cert
            run.say(emit_certificate(cert).rstrip())
    if first_cert is not None and args.out:
        run.emit_file(args.out, emit_certificate(first_cert))

    statuses = [r.status for _, r in results]
    if any(s == "found" for s in statuses):
        code = EXIT_OK
        overall = "found"
    elif any(s == "inconclusive" for s in statuses):
        code = EXIT_INCONCLUSIVE
        overall = "inconclusive"
    else:
        code = EXIT_REFUTED
        overall = "none-exhausted"
    run.say(f"overall: {overall}")
    return run.finish(
        overall,
        {"overall": overall,
         "groups": [{"group": g.literal, **r.as_dict()} for g, r in results]},
        code,
    )


def cmd_verify(args) -> int:
    params = {"cert": args.cert, "lattice": args.lattice, "ball": args.ball, "box": args.box}
    run = Run("verify", params, args.json)
    if args.cert:
        with open(args.cert) as fh:
            cert = parse_certificate(fh.read())
        checked = verify_full(cert)
        partial = checked.status in ("partial", "full")
        complete = verify_complete(checked)
        run.say(f"partial={partial} complete={complete} status={checked.status}")
        ok = partial
        return run.finish(
            checked.status,
            {"status": checked.status, "partial": partial, "complete": complete,
             "group": cert.group.literal},
            EXIT_OK if ok else EXIT_REFUTED,
        )
    if not (args.lattice and args.ball):
        raise ValueError("need --cert or (--lattice and --ball)")
    with open(args.lattice) as fh:
        lat = parse_lattice(fh.read())
    ball = ErrorBall.parse(args.ball)
    size = ball_size(ball)
    if lat.determinant != size:
        run.say(f"determinant {lat.determinant} != ball size {size}: refuted")
        return run.finish(
            "refuted",
            {"status": "refuted", "determinant": lat.determinant, "ball_size": size},
            EXIT_REFUTED,
        )
    try:
        cert = quotient_splitting(lat, ball)
    except ValueError as exc:
        run.say(f"refuted: {exc}")
        return run.finish("refuted", {"status": "refuted", "detail": str(exc)}, EXIT_REFUTED)
    result = {
        "status": cert.status,
        "group": cert.group.literal,
        "determinant": lat.determinant,
        "ball_size": size,
    }
    if args.box:
        check = verify_tiling_box(ball, lat, args.box)
        result["box"] = {"status": check.status, "witness": check.witness,
                         "cover_count": check.cover_count}
        if check.status == "inconclusive":
            run.say("geometric check inconclusive (dimension cap)")
            return run.finish("inconclusive", result, EXIT_INCONCLUSIVE)
        if not check.ok:
            run.say(f"geometric check failed at {check.witness} (covered {check.cover_count}x)")
            return run.finish("refuted", result, EXIT_REFUTED)
    if cert.status == "full":
        run.say(f"verified: Z^{ball.n}/Lambda = {cert.group.literal}, full splitting")
        return run.finish("verified", result, EXIT_OK)
    run.say(f"refuted: quotient splitting has status {cert.status}")
    return run.finish("refuted", result, EXIT_REFUTED)


def cmd_bridge(args) -> int:
    params = {"cert": args.cert, "lattice": args.lattice, "ball": args.ball,
              "out_lattice": args.out_lattice, "out_cert": args.out_cert}
    run = Run("bridge", params, args.json)
    if args.cert:
        with open(args.cert) as fh:
            cert = parse_certificate(fh.read())
        lat = lattice_from_splitting(cert)
        text = emit_lattice(lat)
        run.say(text.rstrip())
        if args.out_lattice:
            run.emit_file(args.out_lattice, text)
        return run.finish(
            "ok",
            {"determinant": lat.determinant, "lattice": [list(r) for r in lat.generator]},
            EXIT_OK,
        )
    if not (args.lattice and args.ball):
        raise ValueError("need --cert or (--lattice and --ball)")
    with open(args.lattice) as fh:
        lat = parse_lattice(fh.read())
    ball = ErrorBall.parse(args.ball)
    cert = quotient_splitting(lat, ball)
    text = emit_certificate(cert)
    run.say(text.rstrip())
    if args.out_cert:
        run.emit_file(args.out_cert, text)
    code = EXIT_OK if cert.status == "full" else EXIT_REFUTED
    return run.finish(cert.status, {"status": cert.status, "certificate": text}, code)


def cmd_screen(args) -> int:
    params = {"m": args.m, "n_max": args.n_max, "threads": args.threads,
              "search_band": args.search_band, "cap_nodes": args.cap_nodes,
              "format": args.format}
    run = Run("screen", params, args.json)
    m_lo, m_hi = _parse_range(args.m)
    if m_lo < 2:
        raise ValueError("need m >= 2")
    rnd = Rounding()
    reports = []
    small = [m for m in range(m_lo, m_hi + 1) if m in (2, 3)]
    large = [m for m in range(m_lo, m_hi + 1) if m >= 4]
    for m in small:
        band_search = None
        if args.search_band:
            options = SearchOptions(
                mode="first", threads=args.threads, cap_nodes=args.cap_nodes
            )

            def band_search(n, _m=m, _o=options):
                pairs = search_all_groups(ErrorBall.family(_m, n), _o)
                statuses = [r.status for _, r in pairs]
                if any(s == "found" for s in statuses):
                    return {"status": "found"}
                if any(s == "inconclusive" for s in statuses):
                    return {"status": "inconclusive"}
                return {
                    "status": "none-exhausted",
                    "groups": len(pairs),
                    "nodes": sum(r.nodes for _, r in pairs),
                }

        reports.append(screen_small_m(m, n_max=args.n_max, rnd=rnd, band_search=band_search))
    if large:
        reports.extend(screen_range(min(large), max(large), rnd=rnd, threads=args.threads))
    reports.sort(key=lambda r: r.m)

    for rep in reports:
        surv = f" survivors={rep.survivors}" if rep.survivors else ""
        run.say(
            f"m={rep.m}: ceiling={rep.prop1_ceiling} max_survivor={rep.max_survivor} "
            f"bound={rep.theorem1_bound} ok={rep.ok}{surv}"
        )
    if small and not any(rep.survivors for rep in reports if rep.m in (2, 3)):
        for m in small:
            run.say(f"m={m}: no n >= 3 survives")

    payload = [rep.as_dict() for rep in reports]
    if args.out:
        if args.format == "csv":
            lines = ["m,prop1_ceiling,max_survivor,ok,survivors"]
            for rep in reports:
                lines.append(
                    f"{rep.m},{rep.prop1_ceiling},{rep.max_survivor},{rep.ok},"
                    f"\"{' '.join(map(str, rep.survivors))}\""
                )
            run.emit_file(args.out, "\n".join(lines) + "\n")
        else:
            run.emit_file(args.out, json.dumps({"schema": SCHEMA, "reports": payload}, indent=2))

    any_survivors = any(rep.survivors for rep in reports)
    if any_survivors:
        code, status = EXIT_INCONCLUSIVE, "survivors-remain"
    elif large and all(rep.ok for rep in reports if rep.m >= 4) and not small:
        code, status = EXIT_OK, "holds"
    elif not all(rep.ok for rep in reports):
        code, status = EXIT_REFUTED, "violated"
    elif small and not large:
        code, status = EXIT_REFUTED, "refuted-all"
    else:
        code, status = EXIT_OK, "holds"
    return run.finish(status, {"status": status, "reports": payload}, code)


def cmd_bench(args) -> int:
    run = Run("bench", {"ball": args.ball, "group": args.group}, args.json)
    from .benchmark import run_benchmark

    rows = run_benchmark(ball=args.ball, group=args.group, m_str=args.M, t=args.t, n=args.n)
    for row in rows:
        run.say(
            f"{row['backend']:>7}: {row['nodes']} nodes in {row['seconds']:.3f}s "
            f"({row['nodes_per_second']:.0f} nodes/s) status={row['status']}"
        )
    if len(rows) == 2 and rows[1]["seconds"] > 0:
        run.say(f"speedup: {rows[1]['seconds'] / max(rows[0]['seconds'], 1e-9):.1f}x")
    return run.finish("ok", {"rows": rows}, EXIT_OK)


# -- argument wiring -------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="magtile", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_json(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("ball", help="ball size and enumeration")
    sp.add_argument("--ball", help="n,t,k+,k-")
    sp.add_argument("--m", type=int, help="family shorthand: k+=m, k-=m-1, t=2")
    sp.add_argument("--n", type=int)
    sp.add_argument("--enumerate", action="store_true")
    sp.add_argument("--cap", type=int, default=10**6)
    add_json(sp)
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("tau", help="pair-sum counts over the magnitude set")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--x", type=int)
    add_json(sp)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("groups", help="Abelian groups of a given order")
    sp.add_argument("--order", type=int, required=True)
    add_json(sp)
    sp.set_defaults(func=cmd_groups)

    sp = sub.add_parser("search", help="exhaustive splitter-set search")
    sp.add_argument("--group", help="group literal, e.g. Z7 or Z4xZ2")
    sp.add_argument("--ball", help="n,t,k+,k-: try all groups of the ball's order")
    sp.add_argument("--m", type=int, help="family shorthand (with --n)")
    sp.add_argument("--M", help="magnitude set, e.g. -1..2")
    sp.add_argument("--t", type=int, default=2)
    sp.add_argument("--n", type=int)
    sp.add_argument("--all", action="store_true", help="collect every splitter set")
    sp.add_argument("--threads", type=int, default=_env_default("threads", 1, int))
    sp.add_argument("--cap-nodes", type=int, default=_env_default("cap-nodes", 0, int))
    sp.add_argument("--checkpoint", default=_env_default("checkpoint", None))
    sp.add_argument("--max-units", type=int, default=0,
                    help="stop after this many work units (checkpoint and exit)")
    sp.add_argument("--normalize", choices=["auto", "on", "off"], default="auto",
                    help="orbit-minimal first element (sound for exists/exhaust)")
    sp.add_argument("--no-prune", action="store_true", help="disable structural prunes")
    sp.add_argument("--backend", choices=["python", "cython"],
                    default=_env_default("backend", None))
    sp.add_argument("--out", help="write the first certificate here")
    add_json(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("verify", help="verify a certificate or lattice file")
    sp.add_argument("--cert")
    sp.add_argument("--lattice")
    sp.add_argument("--ball", help="n,t,k+,k- (with --lattice)")
    sp.add_argument("--box", type=int, help="also run the geometric check at this radius")
    add_json(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bridge", help="certificate <-> lattice conversion")
    sp.add_argument("--cert")
    sp.add_argument("--lattice")
    sp.add_argument("--ball")
    sp.add_argument("--out-lattice")
    sp.add_argument("--out-cert")
    add_json(sp)
    sp.set_defaults(func=cmd_bridge)

    sp = sub.add_parser("screen", help="non-existence screening")
    sp.add_argument("--m", required=True, help="single m or range lo..hi")
    sp.add_argument("--n-max", type=int, help="cap the scanned n for m in {2, 3}")
    sp.add_argument("--threads", type=int, default=_env_default("threads", 1, int))
    sp.add_argument("--search-band", action="store_true",
                    help="run the search bands for m in {2, 3}")
    sp.add_argument("--cap-nodes", type=int, default=_env_default("cap-nodes", 0, int))
    sp.add_argument("--out", help="report file")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    add_json(sp)
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("bench", help="compare the compiled and pure kernels")
    sp.add_argument("--ball", default="4,2,1,0")
    sp.add_argument("--group")
    sp.add_argument("--M")
    sp.add_argument("--t", type=int, default=2)
    sp.add_argument("--n", type=int)
    add_json(sp)
    sp.set_defaults(func=cmd_bench)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CheckpointMismatch as exc:
        print(f"checkpoint refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
