"""Batch experiment runner.

Every subcommand builds a JSON report (``"schema": 1``) and exits 0 when all
asserted properties hold, 1 when some property fails (the report lists each
violation with the invariant it breaks) and 2 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import families as fam
from . import mr_norm as mr
from . import namba, positional, rho, tsirelson
from ._rng import child
from .qvector import from_json as qvector_from_json
from .qvector import sup_norm

SCHEMA = 1


class ConfigError(ValueError):
    pass


def rational(q) -> dict:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = 12
        approx = Decimal(q.numerator) / Decimal(q.denominator)
    return {"exact": f"{q.numerator}/{q.denominator}", "decimal": f"{approx:.12g}"}


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    try:
        if "^" in text:
            base, exp = text.split("^")
            return Fraction(int(base)) ** int(exp)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational: {text!r}") from exc


def parse_points(text: str) -> tuple:
    """``3..9`` (inclusive) or ``0,2,5``."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..")
            pts = tuple(range(int(a), int(b) + 1))
        else:
            pts = tuple(sorted({int(p) for p in text.split(",") if p.strip()}))
    except ValueError as exc:
        raise ConfigError(f"not a point list: {text!r}") from exc
    if not pts or pts[0] < 0:
        raise ConfigError(f"point list {text!r} is empty or negative")
    return pts


def read_arg(text: str) -> str:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return fh.read()
    return text


def family(text: str):
    try:
        return fam.parse_family(text)
    except (fam.FamilyError, OSError, json.JSONDecodeError) as exc:
        raise ConfigError(str(exc)) from exc


def vector(text: str):
    try:
        return qvector_from_json(read_arg(text))
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad vector: {exc}") from exc


# -- subcommands -----------------------------------------------------------------


def cmd_rho_synthesize(args) -> dict:
    table = rho.synthesize_rho(args.N, args.M, rng=child(args.seed, "rho"))
    if table is None:
        return {"results": {"found": False},
                "violations": [f"rho: no valid table on {args.N} points with ≤ {args.M} colours"]}
    bad = rho.verify_rho(table)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table.to_json())
    rows = [{"a": a, "b": b, "value": v} for (a, b), v in sorted(table.values.items())]
    return {"results": {"found": True, "N": table.N, "range_size": table.range_size, "table": rows},
            "violations": [f"rho: {v.kind} at {v.where}" for v in bad]}


def cmd_coloring_audit(args) -> dict:
    ground = tuple(range(args.ground))
    rows, violations = [], []
    for i in range(args.stacks):
        stack = rho.build_stack(args.n, args.ground, rng=child(args.seed, f"stack-{i}"))
        t = positional.FiTable(stack)
        sample = positional.cn_sample(t, ground)
        bad = positional.good_coloring_audit(sample, positional.not_in_delta_position(args.n))
        prop = positional.proposition_check(t, ground) if args.ground <= 8 else []
        rows.append({"stack": i, "vertices": len(sample.vertices),
                     "colours": len(set(sample.colors.values())),
                     "max_equal_colour_k": positional.equal_color_delta_profile(sample),
                     "violations": len(bad), "proposition_failures": len(prop)})
        for e in bad:
            violations.append({"invariant": "positional: c_n good for G_n(B_n)", "stack": i,
                               "s": list(e.s), "t": list(e.t),
                               "color": positional.encode_token(e.color), "witness_k": e.witness_k})
        for p in prop:
            violations.append({"invariant": "positional: α = ᾱ", "stack": i, "case": list(map(str, p))})
    return {"results": {"rows": rows}, "violations": violations}


def cmd_mr_demo(args) -> dict:
    tol = parse_fraction(args.tol)
    if tol <= 0:
        raise ConfigError("tolerance must be positive")
    rows, violations = [], []
    for k in args.k:
        if args.instance:
            inst = mr.MRInstance.from_json(read_arg(args.instance))
        else:
            inst = mr.generate_instance(k, n=args.n, rng=child(args.seed, f"mr-{k}"))
        _, _, rep = mr.unconditionality_witness(inst, k=k, tol=tol)
        rows.append({"k": k, "x_upper": rational(rep.x_norm.hi), "y_lower": rational(rep.y_norm.lo),
                     "suppression_lower": rational(rep.suppression_lower),
                     "k_over_8": rational(Fraction(k, 8)), "functionals": len(rep.chain)})
        if rep.x_norm.hi > 4:
            violations.append(f"mr-norm: ‖x‖ ≤ 4 fails at k={k}")
        if rep.y_norm.lo < Fraction(k, 2):
            violations.append(f"mr-norm: ‖y‖ ≥ k/2 fails at k={k}")
        if rep.suppression_lower < Fraction(k, 8):
            violations.append(f"mr-norm: suppression constant ≥ k/8 fails at k={k}")
        for e in rep.chain:
            violations.extend(f"mr-norm: cancellation estimate at k={k}: {p}" for p in e.problems)
    return {"results": {"rows": rows}, "violations": violations}


def cmd_tnorm(args) -> dict:
    inst = tsirelson.TNormInstance(parse_fraction(args.theta), family(args.family))
    x = vector(args.x)
    v = tsirelson.t_norm(x, inst)
    viol = [] if v >= sup_norm(x) else ["tsirelson: ‖x‖ ≥ ‖x‖_∞"]
    return {"results": {"norm": rational(v)}, "violations": viol}


def cmd_bellenot(args) -> dict:
    theta = parse_fraction(args.theta)
    prof = tsirelson.bellenot_profile(theta, args.n, args.m)
    rows = [{"m": r.m, "norm": rational(r.norm),
             "p_hat": None if r.p_hat is None else f"{r.p_hat:.12g}"} for r in prof]
    viol = [f"tsirelson: norm of Σ u_i nondecreasing in m (m={b.m})"
            for a, b in zip(prof, prof[1:]) if b.norm < a.norm]
    p = tsirelson.bellenot_exponent(theta, args.n)
    return {"results": {"rows": rows, "limit_exponent": None if p is None else f"{p:.12g}"},
            "violations": viol}


def cmd_cb_rank(args) -> dict:
    f = family(args.family)
    ground = tuple(range(args.ground)) if args.ground is not None else None
    r = fam.cb_rank(f, ground)
    return {"results": {"family": fam.describe(f), "rank": str(r)}, "violations": []}


def cmd_namba(args) -> dict:
    f = family(args.family)
    try:
        winner, sigma = namba.solve(f, args.N, args.n)
    except namba.ArenaError as exc:
        raise ConfigError(str(exc)) from exc
    losses = namba.replay(sigma, f, args.N, args.n)
    res = {"winner": winner, "strategy_size": len(sigma.table), "losing_lines": len(losses),
           "strategy": [{"history": list(h), "move": mv} for h, mv in sorted(sigma.table.items())]}
    viol = [f"namba: strategy of {winner} loses the line {list(line)}" for line in losses[:20]]
    if args.n_max:
        sweep = [namba.Game(f, args.N, m).first_player_wins() for m in range(1, args.n_max + 1)
                 if args.N >= 2 * m - 1]
        res["alpha_sweep"] = [I_or_II(w) for w in sweep]
        res["alpha"] = namba.alpha(f, args.N, args.n_max)
    return {"results": res, "violations": viol}


def I_or_II(first_wins: bool) -> str:
    return namba.I if first_wins else namba.II


def cmd_projection_check(args) -> dict:
    inst = tsirelson.TNormInstance(parse_fraction(args.theta), family(args.family))
    x = vector(args.x)
    gamma = parse_points(args.gamma)
    try:
        lhs, rhs = tsirelson.projection_check(x, inst, gamma)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    viol = [] if lhs == rhs else ["tsirelson: norm over the family equals norm over its projection"]
    return {"results": {"lhs": rational(lhs), "rhs": rational(rhs)}, "violations": viol}


def cmd_ptak(args) -> dict:
    f = family(args.family)
    window = parse_points(args.window)
    eps = parse_fraction(args.eps) if args.eps else None
    w = fam.ptak_witness(f, window)
    viol = [f"families: Pták certificate: {p}" for p in fam.verify_ptak(w, f, window)]
    if eps is not None and w.bound > eps / 2:
        viol.append(f"families: Pták bound {w.bound} ≤ ε/2 = {eps / 2}")
    res = {"window": [window[0], window[-1]], "bound": rational(w.bound),
           "dual_value": rational(w.dual_value),
           "mu": {str(g): rational(v) for g, v in sorted(w.mu.items())}}
    return {"results": res, "violations": viol}


COMMANDS = {
    "rho-synthesize": cmd_rho_synthesize,
    "coloring-audit": cmd_coloring_audit,
    "mr-demo": cmd_mr_demo,
    "tnorm": cmd_tnorm,
    "bellenot": cmd_bellenot,
    "cb-rank": cmd_cb_rank,
    "namba": cmd_namba,
    "projection-check": cmd_projection_check,
    "ptak": cmd_ptak,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "table"), default="json")

    p = argparse.ArgumentParser(prog="finitary", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rho-synthesize", parents=[common])
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--M", type=int, required=True, help="largest colour budget")
    s.add_argument("--out")

    s = sub.add_parser("coloring-audit", parents=[common])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--ground", type=int, default=8)
    s.add_argument("--stacks", type=int, default=1)

    s = sub.add_parser("mr-demo", parents=[common])
    s.add_argument("--k", type=int, nargs="+", default=[2, 4, 8, 16])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--tol", default="2^-40")
    s.add_argument("--instance", help="instance JSON or @file")

    s = sub.add_parser("tnorm", parents=[common])
    s.add_argument("--theta", required=True)
    s.add_argument("--family", default="schreier")
    s.add_argument("--x", "--vector", dest="x", required=True, help='JSON like {"3": "1/2"} or @file')

    s = sub.add_parser("bellenot", parents=[common])
    s.add_argument("--theta", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)

    s = sub.add_parser("cb-rank", parents=[common])
    s.add_argument("family")
    s.add_argument("--ground", type=int)

    s = sub.add_parser("namba", parents=[common])
    s.add_argument("--family", required=True)
    s.add_argument("--N", "--arena", dest="N", type=int, required=True)
    s.add_argument("--n", "--rounds", dest="n", type=int, required=True)
    s.add_argument("--n-max", type=int, default=0, help="also sweep α up to this round count")

    s = sub.add_parser("projection-check", parents=[common])
    s.add_argument("--theta", required=True)
    s.add_argument("--family", default="schreier")
    s.add_argument("--gamma", required=True)
    s.add_argument("--x", "--vector", dest="x", required=True)

    s = sub.add_parser("ptak", parents=[common])
    s.add_argument("--family", default="schreier")
    s.add_argument("--window", required=True, help="a..b or a comma list")
    s.add_argument("--eps")
    return p


def _cell(v) -> str:
    if isinstance(v, dict) and "exact" in v:
        return v["exact"] if len(v["exact"]) <= 24 else v["decimal"]
    if isinstance(v, list) and len(v) > 12:
        return f"[{len(v)} entries]"
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False)
    return str(v)


def render_table(report: dict) -> str:
    lines = [f"{report['command']}  ok={report['ok']}"]
    res = report["results"]
    rows = res.get("rows") or res.get("table")
    for key, v in res.items():
        if key not in ("rows", "table"):
            lines.append(f"{key}: {_cell(v)}")
    if rows:
        cols = list(rows[0])
        cells = [[_cell(r[c]) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
        lines.extend("  ".join(x.rjust(w) for x, w in zip(row, widths)) for row in cells)
    for v in report["violations"]:
        lines.append(f"VIOLATION {_cell(v)}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("command", "format")}
    try:
        body = COMMANDS[args.command](args)
    except (ConfigError, mr.InstanceError, mr.LacunaryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except fam.FamilyError as exc:
        body = {"results": {}, "violations": [f"families: {exc}"]}
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"schema": SCHEMA, "command": args.command, "config": config,
              "ok": not body["violations"], **body}
    if args.format == "json":
        print(json.dumps(report, ensure_ascii=False, indent=1, default=str))
    else:
        print(render_table(report))
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
