"""Command line: python -m hecke_ratios <command> ...

Exit status is 0 on success, 2 when an input fails validation and 3 when a
numerical budget is violated or a self-check finds a mismatch.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from .euler import euler_P1, euler_P2, prime_log_sum
from .field import FIELDS, QuadInt, check_field, field_params
from .gauss import root_number_check
from .hecke_l import fe_residual, l_value, l_value_series
from .moments import central_value_poly, fit_exponent, run_moment, sweep
from .primary import primary_normalize
from .report import DEFAULTS, RunConfig, build_config, emit_report, parse_config, request_for
from .selfcheck import gauss_rows, symbol_check
from .special import dedekind_zeta, dirichlet_l_rational, residue_rK, riemann_zeta
from .symbols import symbol

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


class CheckFailed(ArithmeticError):
    pass


def parse_elem(text: str, field: int | None = None) -> QuadInt:
    """``a+b*w@d``, or ``a,b`` together with --field."""
    if "@" in text:
        return QuadInt.parse(text)
    if field is None:
        raise ValueError(f"{text!r}: give a+b*w@d or pass --field")
    parts = text.split(",")
    if len(parts) == 1:
        parts.append("0")
    a, b = (int(p) for p in parts)
    return QuadInt.of(a, b, field)


def parse_complex(text: str) -> complex:
    """``re,im`` or ``re`` (also accepts Python complex literals)."""
    if "," in text:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    return complex(text.replace(" ", ""))


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _out(args, data: bytes) -> None:
    if getattr(args, "out", None):
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())


# -- commands -----------------------------------------------------------------------

def cmd_symbol(args) -> int:
    if args.a == "selftest":
        fields = args.fields or FIELDS
        bad = 0
        for d in fields:
            r = symbol_check(d, args.maxnorm)
            bad += not r.ok
            print(f"d={d} elements={r.elements} coprime_pairs={r.coprime_pairs} "
                  f"reciprocity_failures={r.reciprocity_failures} minus_one_failures={r.minus_one_failures} "
                  f"two_failures={r.two_failures} fast_pairs={r.fast_pairs} fast_failures={r.fast_failures}")
        if bad:
            raise CheckFailed(f"{bad} field(s) failed")
        return EXIT_OK
    if args.n is None:
        raise ValueError("symbol needs <a> <n>")
    n = parse_elem(args.n, args.field)
    a = parse_elem(args.a, n.d if args.field is None else args.field)
    print(symbol(a, n))
    return EXIT_OK


def cmd_primary(args) -> int:
    u, m = primary_normalize(parse_elem(args.elem, args.field))
    print(f"{m} unit={u}")
    return EXIT_OK


def cmd_gauss(args) -> int:
    rows = gauss_rows(args.field, args.maxnorm)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "closed_re", "closed_im", "brute_re", "brute_im", "abs_diff"])
    for r in rows:
        w.writerow([str(r.n), _fmt(r.closed.real), _fmt(r.closed.imag), _fmt(r.brute.real),
                    _fmt(r.brute.imag), _fmt(r.diff)])
    bad = sum(not r.ok for r in rows)
    if bad:
        print(f"{bad} of {len(rows)} closed forms disagree with brute force", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _lvalue_row(c: QuadInt, s: complex, eps: float) -> list[str]:
    lv = l_value(s, c, eps)
    return [str(c), _fmt(s.real), _fmt(s.imag), _fmt(lv.value.real), _fmt(lv.value.imag),
            _fmt(lv.abs_error_estimate), str(lv.terms_used)]


def cmd_lvalue(args) -> int:
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["c", "s_re", "s_im", "L_re", "L_im", "abs_error_estimate", "terms_used"])
    if args.batch:
        with open(args.batch, newline="") as fh:
            for row in csv.DictReader(fh):
                c = parse_elem(row["c"], args.field)
                s = complex(float(row["s_re"]), float(row.get("s_im") or 0.0))
                w.writerow(_lvalue_row(c, s, args.eps))
        return EXIT_OK
    if args.c is None:
        raise ValueError("lvalue needs --c or --batch")
    w.writerow(_lvalue_row(parse_elem(args.c, args.field), parse_complex(args.s), args.eps))
    return EXIT_OK


def cmd_products(args) -> int:
    d = check_field(args.field)
    w = parse_complex(args.w)
    res = []
    if args.z is not None:
        res.append((f"P({args.w}; {args.z})", euler_P2(w, parse_complex(args.z), d, args.rel_eps, full=True)))
    res.append((f"P({args.w})", euler_P1(w, d, args.rel_eps, full=True)))
    if args.r is not None:
        res.append((f"prime_log_sum({args.r})", prime_log_sum(parse_complex(args.r), d, args.rel_eps, full=True)))
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["quantity", "value_re", "value_im", "prime_bound", "tail_budget"])
    for name, r in res:
        out.writerow([name, _fmt(r.value.real), _fmt(r.value.imag), r.bound, _fmt(r.tail_budget)])
    return EXIT_OK


def _config_from(args) -> RunConfig:
    values: dict[str, str] = {}
    if args.config:
        with open(args.config) as fh:
            base = parse_config(fh.read())
        values = {k: _config_text(getattr(base, k)) for k in DEFAULTS}
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = str(v)
    return build_config(values)


def _config_text(v) -> str:
    if isinstance(v, tuple):
        return ",".join(_config_text(x) for x in v)
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else f"{v.real!r}{v.imag:+}j"
    return str(v)


def cmd_moment(args) -> int:
    cfg = _config_from(args)
    reps = [run_moment(request_for(cfg, d), cfg.workers) for d in cfg.fields]
    fmt = args.format or cfg.format
    _out(argparse.Namespace(out=cfg.out), emit_report(reps[0] if len(reps) == 1 else reps, fmt))
    return EXIT_OK


def sweep_reports(cfg) -> tuple[list, list]:
    reps, fitted = [], []
    for d in cfg.fields:
        rs = sweep(request_for(cfg, d), cfg.X_grid, cfg.workers)
        for k, r in enumerate(rs):
            pts = [(q.X, abs(q.residual)) for q in rs[:k + 1]]
            fitted.append(fit_exponent(pts) if k >= 2 else None)
        reps += rs
    return reps, fitted


def cmd_sweep(args) -> int:
    cfg = _config_from(args)
    reps, fitted = sweep_reports(cfg)
    fmt = args.format or "csv"
    _out(argparse.Namespace(out=cfg.out), emit_report(reps, fmt, fitted))
    return EXIT_OK


def cmd_selftest(args) -> int:
    """A fast tour of the exact identities and oracles."""
    results = []

    def check(name, ok, detail):
        results.append(ok)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")

    for d in (-1, -3, -7):
        r = symbol_check(d, 60, fast_maxnorm=40)
        check(f"symbols d={d}", r.ok, f"{r.coprime_pairs} coprime pairs")
    for d in FIELDS:
        g = root_number_check(QuadInt(1, 0, d))
        e = math.sqrt(field_params(d).norm_c_K)
        check(f"root number d={d}", abs(g - e) <= 1e-6 * e, f"g={g.real:.12g}{g.imag:+.3g}i")
    z = dedekind_zeta(2, -1)
    zz = riemann_zeta(2) * dirichlet_l_rational(2, -4)
    check("zeta_Q(i)(2)", abs(z - zz) <= 1e-10 * abs(zz), f"{z.real:.15g}")
    check("residue r_K(-1)", abs(residue_rK(-1) - math.pi / 4) <= 1e-6, f"{residue_rK(-1):.12g}")
    c = QuadInt(-1, -2, -1)
    fr = max(fe_residual(s, c) for s in (0.5, 0.6 + 0.7j, 2))
    check("functional equation c=-1-2w@-1", fr <= 1e-6, f"max residual {fr:.2e}")
    L2, S2 = l_value(2, c).value, l_value_series(2, c)
    check("L(2) theta vs series", abs(L2 - S2) <= 1e-8 * abs(S2), f"{L2.real:.15g}")
    p1, p2 = euler_P1(0.75, -1), euler_P2(0.75, 40, -1)
    check("P(w, 40) vs P(w)", abs(p1 - p2) <= 1e-8, f"{p1.real:.15g}")
    if not all(results):
        raise CheckFailed(f"{results.count(False)} self-check(s) failed")
    return EXIT_OK


def cmd_central(args) -> int:
    grid = [float(x) for x in args.X_grid.split(",")]
    fit = central_value_poly(args.field, grid, args.weight, convention=args.convention)
    print(f"q0={_fmt(fit.q0)} q1={_fmt(fit.q1)} fit_residual={_fmt(fit.fit_residual)} "
          f"pm_agreement={_fmt(fit.pm_agreement)}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override its keys")
    p.add_argument("--field", "--fields", dest="fields", help="field(s), comma separated")
    p.add_argument("--mode", choices=("first", "ratios", "logderiv"))
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--r")
    p.add_argument("--X")
    p.add_argument("--X-grid", dest="X_grid")
    p.add_argument("--weight")
    p.add_argument("--eps")
    p.add_argument("--rel-eps", dest="rel_eps")
    p.add_argument("--workers")
    p.add_argument("--convention")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hecke_ratios", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbol", help="(a/n), or 'symbol selftest --maxnorm N'")
    p.add_argument("a")
    p.add_argument("n", nargs="?")
    p.add_argument("--field", type=int)
    p.add_argument("--fields", type=lambda s: [int(x) for x in s.split(",")])
    p.add_argument("--maxnorm", type=int, default=300)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("primary", help="primary associate of an odd element")
    p.add_argument("action", choices=("normalize",))
    p.add_argument("elem")
    p.add_argument("--field", type=int)
    p.set_defaults(func=cmd_primary)

    p = sub.add_parser("gauss", help="closed-form Gauss sums against brute force (CSV)")
    p.add_argument("action", choices=("check",))
    p.add_argument("--field", type=int, required=True)
    p.add_argument("--maxnorm", type=int, default=1000)
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("lvalue", help="L(s, chi^(c_K c)) (CSV)")
    p.add_argument("--field", type=int)
    p.add_argument("--c")
    p.add_argument("--s", default="0.5,0")
    p.add_argument("--batch", help="CSV with columns c,s_re,s_im")
    p.add_argument("--eps", type=float, default=1e-9)
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("products", help="Euler products P(w,z), P(w) and the prime log-sum")
    p.add_argument("--field", type=int, required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--z")
    p.add_argument("--r")
    p.add_argument("--rel-eps", dest="rel_eps", type=float, default=1e-10)
    p.set_defaults(func=cmd_products)

    p = sub.add_parser("moment", help="one family average against its main terms")
    _add_run_flags(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("sweep", help="the same over an X grid (CSV by default)")
    _add_run_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("central", help="X (q0 + q1 log X) fit of the central first moment")
    p.add_argument("--field", type=int, default=-1)
    p.add_argument("--X-grid", dest="X_grid", default=DEFAULTS["X_grid"])
    p.add_argument("--weight", default="bump")
    p.add_argument("--convention", default="printed")
    p.set_defaults(func=cmd_central)

    p = sub.add_parser("selftest", help="quick tour of identities and oracles")
    p.set_defaults(func=cmd_selftest)
    return ap


def _protect_negatives(argv: list[str]) -> list[str]:
    # "-1-2*w@-1" or "-1,-2" would otherwise be read as option flags; a leading
    # space keeps argparse from treating them as options and parsers ignore it
    return [" " + a if len(a) > 1 and a[0] == "-" and (a[1].isdigit() or a[1] == ".") else a
            for a in argv]


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_protect_negatives(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CheckFailed, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
