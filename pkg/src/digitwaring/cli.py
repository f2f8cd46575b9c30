"""Command-line entry point.

Every subcommand prints a JSON manifest (config + results) on stdout and,
with --csv PATH, writes its table there. Exit codes: 0 success, 1 usage
error, 2 hypothesis violated or a verification failed, 3 budget exceeded.
Output carries no timestamps, so identical config and seed give identical
bytes.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__, additive, diophantine, expsums, growth, kernels, lemmas
from . import io as dio
from .config import budget_override
from .ellipsephic import (EllipsephicParams, min_basis_order, representation_counts,
                          verify_certificate)
from .errors import BudgetExceeded, HypothesisViolated, NotFound
from .rng import SplitMix64

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _ratio(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from exc


def _int_list(s: str) -> list[int]:
    s = s.strip()
    return [int(v) for v in s.split(",")] if s else []


def _params(a) -> EllipsephicParams:
    return EllipsephicParams(a.b, a.k, a.n, a.d1, a.d2)


def _add_params(p, n_default=4):
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=n_default)
    p.add_argument("--d1", type=int, default=1)
    p.add_argument("--d2", type=int, default=2)


# -- subcommands ---------------------------------------------------------------

def cmd_enumerate(a):
    p = _params(a)
    rc = representation_counts(a.t, p)
    rows = [[v, c] for v, c in rc.items()]
    return {"t": a.t, "support": rc.support_size, "total": rc.total,
            "sum_of_squares": rc.sum_of_squares()}, (["value", "count"], rows)


def cmd_expsum(a):
    p = _params(a)
    val = expsums.mu_hat(p, a.theta, prec=a.prec)
    return {"theta": a.theta, "re": val.real, "im": val.imag, "abs": abs(val),
            "prec": a.prec, "eps_num": expsums.eps_num(2**p.n)}, None


def cmd_scan(a):
    p = _params(a)
    recs = expsums.scan_large_values(p, a.grid, a.delta, a.Q)
    header = ["theta_num", "theta_den", "magnitude", "a", "q", "dist_num", "dist_den"]
    rows = [[r.row()[h] for h in header] for r in recs]
    return {"grid": a.grid, "delta": a.delta, "records": len(recs),
            "constants": expsums.PaperConstants.of(p).as_dict()}, (header, rows)


def cmd_moment(a):
    p = _params(a)
    ex = expsums.moment_2t_exact(p, a.t)
    qd = expsums.moment_2t_quadrature(p, a.t, a.panels)
    return {"t": a.t, "exact": ex, "exact_float": float(ex), "quadrature": qd.value,
            "quadrature_error": qd.error, "panels": qd.panels,
            "agree_1e-6": abs(float(ex) - qd.value) <= 1e-6}, None


def cmd_basis_order(a):
    p = _params(a)
    cert = min_basis_order(p, (a.lo, a.hi), a.s_max)
    ok = verify_certificate(p, cert)
    res = {"s": cert.s, "window": list(cert.window), "witness": cert.witness,
           "powers": len(cert.powers), "verified": ok}
    return res, None, (EXIT_OK if ok else EXIT_HYPOTHESIS)


def cmd_energy(a):
    A = a.set if a.set is not None else additive.hamming_ball(a.b, a.r, a.m)
    res = {"size": len(set(A)), "energy": additive.additive_energy(A)}
    if a.r is not None:
        rep = additive.energy_bound_check(A, a.b, a.r)
        res["bound_check"] = rep.to_json()
        return res, None, (EXIT_OK if rep.ok else EXIT_HYPOTHESIS)
    return res, None


def cmd_ball(a):
    vals = additive.hamming_ball(a.b, a.r, a.m)
    return {"b": a.b, "r": a.r, "m": a.m, "size": len(vals)}, (["value"], [[v] for v in vals])


def cmd_boxnorm(a):
    if a.values:
        raw = dio.read_json(a.values)
        arr = np.asarray(raw["re"], dtype=float) + 1j * np.asarray(raw.get("im", 0.0), dtype=float)
    else:
        gen = np.random.default_rng(a.seed)
        shape = tuple(a.shape)
        arr = gen.normal(size=shape) + 1j * gen.normal(size=shape)
    nb = additive.box_norm(additive.BoxFunction(arr))
    return {"shape": list(arr.shape), "norm": nb.value, "power": nb.power,
            "imag_residue": nb.imag, "error": nb.error}, None


def _cube_sets(a, rng):
    if a.sets:
        return [growth.CubeSet(a.n, frozenset(_int_list(s))) for s in a.sets]
    out = []
    for _ in range(a.r):
        mem = rng.subset(range(2**a.n)) or [rng.below(2**a.n)]
        out.append(growth.CubeSet(a.n, frozenset(mem)))
    return out


def cmd_density(a):
    if a.exhaustive:
        rep = growth.exhaustive_pair_check(a.n)
        return ({"pairs": rep.pairs, "violations": rep.violations, "min_margin": rep.min_margin},
                None, EXIT_OK if rep.ok else EXIT_HYPOTHESIS)
    sets = _cube_sets(a, SplitMix64(a.seed))
    rep = growth.cube_sumset_density_check(sets)
    return ({"n": a.n, "r": len(sets), "sets": [sorted(s.members) for s in sets],
             "sumset_size": rep.size, "log_bound": rep.log_bound, "margin": rep.margin, "ok": rep.ok},
            None, EXIT_OK if rep.ok else EXIT_HYPOTHESIS)


def cmd_realvar(a):
    res = growth.real_var_inequality_scan(a.r, a.step, a.refine)
    ok = res.minimum >= 1 - 1e-9
    return ({"r": a.r, "gamma": growth.gamma(a.r), "minimum": res.minimum,
             "argmin": list(res.argmin), "grid": res.grid, "ok": ok},
            None, EXIT_OK if ok else EXIT_HYPOTHESIS)


def cmd_expand(a):
    rng = SplitMix64(a.seed)
    cells = list(np.ndindex(*([2**a.m] * a.r)))
    A = [tuple(int(v) for v in c) for c in cells if rng.random() < a.density] or [cells[0]]
    shifts = a.shifts if a.shifts is not None else [0] * a.r
    ex = growth.product_expansion(a.d, a.r, a.m, A, shifts, a.cutoff)
    audit = growth.audit_expansion(ex, A)
    res = {"d": a.d, "r": a.r, "m": a.m, "A_size": len(A), "status": ex.status,
           "notes": ex.notes, "size": len(ex.reps), "max_depth": audit.max_depth,
           "depth_bound": ex.depth_bound(), "audit_ok": audit.ok}
    rows = [[v, len(ex.reps[v])] for v in ex.values]
    return res, (["value", "depth"], rows), (EXIT_OK if audit.ok else EXIT_HYPOTHESIS)


def cmd_dioph(a):
    hyp = diophantine.DigitalHypothesis(a.theta, a.b, a.M, a.n, a.r, a.eta)
    ov = {}
    if a.delta1 is not None:
        ov["delta1"] = a.delta1
    if a.delta2 is not None:
        ov["delta2"] = "auto" if a.delta2 == "auto" else Fraction(a.delta2)
    if a.min_fiber is not None:
        ov["min_fiber"] = a.min_fiber
    out = diophantine.digital_to_diophantine(hyp, ov)
    return out.to_json(), None


def cmd_verify_lemma(a):
    if a.list or not a.name:
        if not a.list:
            raise UsageError("verify-lemma: give a lemma name or --list")
        return {"lemmas": [{"name": n, "reference": lemmas.REGISTRY[n].reference,
                            "default_trials": lemmas.REGISTRY[n].default_trials}
                           for n in lemmas.names()]}, None
    if a.name not in lemmas.REGISTRY:
        raise UsageError(f"unknown lemma {a.name!r}; try --list")
    res = lemmas.run(a.name, a.trials, a.seed)
    return res, None, (EXIT_OK if res["ok"] else EXIT_HYPOTHESIS)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--csv", help="write the data table here")
    common.add_argument("--manifest", help="also write the JSON manifest here")
    common.add_argument("--budget-bits", type=lambda s: int(s, 0), default=None)

    top = _Parser(prog="digitwaring", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("enumerate", cmd_enumerate, "t-fold representation counts of k-th powers")
    _add_params(p)
    p.add_argument("--t", type=int, default=1)

    p = add("expsum", cmd_expsum, "evaluate mu_hat at one angle")
    _add_params(p)
    p.add_argument("--theta", type=_ratio, required=True)
    p.add_argument("--prec", type=int, default=None)

    p = add("scan", cmd_scan, "grid scan for large |mu_hat|")
    _add_params(p)
    p.add_argument("--grid", type=int, default=1 << 16)
    p.add_argument("--delta", type=_ratio, default=Fraction(9, 10))
    p.add_argument("--Q", type=int, default=None)

    p = add("moment", cmd_moment, "exact 2t-th moment and quadrature cross-check")
    _add_params(p, 1)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--panels", type=int, default=1 << 14)

    p = add("basis-order", cmd_basis_order, "least s covering a window, with certificate")
    _add_params(p, 1)
    p.add_argument("--lo", type=int, default=50)
    p.add_argument("--hi", type=int, default=2000)
    p.add_argument("--s-max", type=int, default=64)

    p = add("energy", cmd_energy, "additive energy and the Hamming-ball bound")
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--set", type=_int_list, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--m", type=int, default=4)

    p = add("ball", cmd_ball, "list a digital Hamming ball")
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--m", type=int, default=4)

    p = add("boxnorm", cmd_boxnorm, "Gowers box norm of a function on a product set")
    p.add_argument("--values", help='JSON file {"re": nested list, "im": nested list}')
    p.add_argument("--shape", type=int, nargs="+", default=[3, 3])

    p = add("density", cmd_density, "sumset density in {0,1}^n")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--sets", nargs="*", help="comma-separated bitmasks, one argument per set")
    p.add_argument("--exhaustive", action="store_true")

    p = add("realvar", cmd_realvar, "minimise the real-variable gamma inequality")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--refine", type=int, default=50)

    p = add("expand", cmd_expand, "run the product-expansion recursion and audit it")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--shifts", type=_int_list, default=None)
    p.add_argument("--cutoff", type=_ratio, default=None)

    p = add("dioph", cmd_dioph, "digit-to-diophantine pipeline")
    p.add_argument("--theta", type=_ratio, required=True)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--M", type=int, default=200)
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--eta", type=_ratio, default=None)
    p.add_argument("--delta1", type=_ratio, default=None)
    p.add_argument("--delta2", default=None, help='a rational or "auto" (|S|/L)')
    p.add_argument("--min-fiber", type=_ratio, default=None)

    p = add("verify-lemma", cmd_verify_lemma, "run a randomised verification suite")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--trials", type=int, default=None)
    return top


def _apply_config(parser, argv):
    """Splice --config values in right after the subcommand, so explicit
    flags (which come later and win in argparse) still override them."""
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            conf = dio.read_json(args.config)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        known = vars(args)
        unknown = [k for k in conf if k.replace("-", "_") not in known or k == "name"]
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        i = argv.index(args.command) + 1
        args = parser.parse_args(argv[:i] + _config_to_argv(conf) + argv[i:])
    return args


def _config_to_argv(conf: dict) -> list[str]:
    out = []
    for k, v in conf.items():
        flag = "--" + k.replace("_", "-")
        if isinstance(v, bool):
            if v:
                out.append(flag)
        elif isinstance(v, list):
            out.append(flag)
            out.extend(str(x) for x in v)
        elif v is not None:
            out.extend([flag, str(v)])
    return out


def _manifest(args, result) -> dict:
    conf = {k: v for k, v in vars(args).items() if k not in ("func", "config", "manifest", "csv")}
    return {"command": args.command, "version": __version__, "config": conf, "result": result}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = None
    try:
        args = _apply_config(parser, argv)
        if not getattr(args, "command", None):
            raise UsageError(parser.format_help())
        if args.threads:
            if kernels.HAS_NUMBA:
                import numba

                numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
        budget = {} if args.budget_bits is None else {"bitset_bits": args.budget_bits}
        with budget_override(**budget):
            out = args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolated as exc:
        print(dio.dumps({"error": "hypothesis-violated", "clause": exc.clause, "message": str(exc),
                         "trace": getattr(exc, "trace", None)}))
        return EXIT_HYPOTHESIS
    except (BudgetExceeded, NotFound) as exc:
        print(dio.dumps({"error": "budget-exceeded", "message": str(exc)}))
        return EXIT_BUDGET
    except (ValueError, KeyError) as exc:
        print(f"{getattr(args, 'command', 'digitwaring')}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    result, table = out[0], out[1]
    code = out[2] if len(out) > 2 else EXIT_OK
    manifest = _manifest(args, result)
    text = dio.dumps(manifest)
    print(text)
    if args.manifest:
        dio.write_text(args.manifest, text + "\n")
    if args.csv and table is not None:
        dio.write_csv(args.csv, *table)
    return code


if __name__ == "__main__":
    sys.exit(main())
