"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 precision or expansion-order shortfall.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .exactnum import fmt_rational, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SHORT = 0, 1, 2, 3


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands -----------------------------------------------------------------

def cmd_cm_expand(a):
    from .freud import cm_expand

    e = cm_expand(a.nu, a.order)
    if a.format == "json":
        return _emit(_dumps(e.to_json()), a.out)
    lines = [f"c_{k} = {e.c(k)}" for k in range(-1, e.kmax + 1)]
    _emit("\n".join(lines) + "\n", a.out)


def cmd_z0(a):
    from .stringeq import string_equation, z0_coupling_series, z0_puiseux

    if a.coupling:
        ser = z0_coupling_series(string_equation(a.nu, a.coupling), a.order)
        rows = [fmt_rational(c) for c in ser.coeffs]
        if a.format == "json":
            return _emit(_dumps({"nu": a.nu, "coupling": a.coupling, "coeffs": rows}), a.out)
        return _emit("\n".join(f"{j}: {c}" for j, c in enumerate(rows)) + "\n", a.out)
    if a.nu in ("3v",):
        raise ValueError("z0 Puiseux expansion needs an even valence; use --coupling t")
    nu = int(a.nu)
    z = z0_puiseux(nu, a.order)
    if a.format == "json":
        return _emit(_dumps({"nu": nu, "order": z.order,
                             "coeffs": {str(e): c.to_json() for e, c in sorted(z.coeffs.items())}}),
                     a.out)
    _emit("\n".join(f"u^{e}: {c}" for e, c in sorted(z.coeffs.items())) + "\n", a.out)


def _coef(c) -> str:
    return "" if c == 1 else f"{c} "


def cmd_derive_zg(a):
    from .matching import derive_zg

    sol = derive_zg(a.nu, a.genus, reduced=a.reduced)
    d = sol.to_json()
    if a.format == "json":
        return _emit(_dumps(d), a.out)
    lines = [f"nu={sol.nu} g={sol.g}",
             f"beta = [{', '.join(d['beta'])}]",
             f"z_g = z0 (z0-1) P(z0) / ({sol.nu} - {_coef(sol.nu - 1)}z0)^{sol.den_exponent}"]
    if "Q" in d:
        lines.append(f"Q = [{', '.join(d['Q'])}]  (low to high)")
    _emit("\n".join(lines) + "\n", a.out)


def _count_table(a):
    from .genfun import e3_counts, e_counts, z_counts

    if a.family == "z":
        if a.nu == "2":
            return z_counts(a.genus, a.jmax)
        if a.nu == "3":
            from .matching import derive_zg
            from .genfun import GenFunExpr
            from .exactnum import QPoly

            if a.genus == 0:
                return z_counts(GenFunExpr(QPoly.x(), QPoly([1])), a.jmax, nu=3)
            return z_counts(derive_zg(3, a.genus), a.jmax)
        raise ValueError("z family: --nu 2 or 3")
    if a.nu == "2":
        return e_counts(a.genus, a.jmax)
    if a.nu == "3v":
        return e3_counts(a.genus, a.jmax)
    raise ValueError("e family: --nu 2 or 3v")


def cmd_counts(a):
    t = _count_table(a)
    t.g = a.genus
    if a.format == "json":
        return _emit(_dumps(t.to_json()), a.out)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertices", f"genus{a.genus}"])
    for j, c in t.rows:
        w.writerow([j, fmt_rational(c)])
    _emit(buf.getvalue(), a.out)


def cmd_qroots(a):
    from .freud import cm_expand, k_nu
    from .matching import derive_zg, interlaces, q_roots

    e = cm_expand(2, k_nu(2, a.genus))
    roots = {g: q_roots(derive_zg(2, g, expansion=e).Q()) for g in range(2, a.genus + 1)}
    inter = all(interlaces(roots[g - 1], roots[g]) for g in range(3, a.genus + 1))
    if a.format == "json":
        return _emit(_dumps({"roots": {f"Q{g - 1}": [repr(x) for x in r] for g, r in roots.items()},
                             "interlaced": inter}), a.out)
    lines = [f"Q_{g - 1}: " + ", ".join(f"{x:.15g}" for x in r) for g, r in roots.items()]
    lines.append(f"interlaced: {inter}")
    _emit("\n".join(lines) + "\n", a.out)


def cmd_orbit_check(a):
    import mpmath

    from .freud import cm_expand
    from .orbitnum import PrecisionConfig, PrecisionError, cm_compare, orbit

    try:
        cfg = PrecisionConfig(bits=a.precision)
    except ValueError as ex:
        raise PrecisionError(str(ex)) from None
    s = orbit(a.nu, mpmath.mpf(a.N), mpmath.mpf(a.r), a.nmax, cfg)
    e = cm_expand(a.nu, a.terms)
    ns = list(range(max(a.nmin, 1), a.nmax + 1, a.stride))
    rep = cm_compare(s, e, a.terms, ns)
    d = rep.to_json()
    d["rows"] = [dict(r, x_n=mpmath.nstr(s.at(r["n"]), 40)) for r in d["rows"]]
    d["method"] = s.method
    if a.format == "json":
        return _emit(_dumps(d), a.out)
    lines = [f"{r['n']:>5}  {r['x_n']}  err={r['abs_err']}" for r in d["rows"]]
    lines.append(f"slope {rep.slope:.4f} (expected {rep.expected:.4f})")
    _emit("\n".join(lines) + "\n", a.out)


def cmd_verify(a):
    from .verify import run

    gold = None
    if a.golden:
        with open(a.golden) as fh:
            gold = json.load(fh)
    rep = run(a.scope, gold)
    if a.format == "json":
        _emit(_dumps(rep.to_json()), a.out)
    else:
        lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}: {c.detail}" for c in rep.checks]
        _emit("\n".join(lines) + "\n", a.out)
    bad = rep.first_failure()
    if bad is not None:
        print(f"first failure: {bad.name}: {bad.detail}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def table_csv(grid: dict, rows) -> str:
    gens = sorted(grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertices"] + [f"genus{g}" for g in gens])
    for j in rows:
        w.writerow([j] + [fmt_rational(grid[g][j]) for g in gens])
    return buf.getvalue()


def parse_table_csv(text: str) -> dict:
    """Inverse of :func:`table_csv`: {g: {j: Fraction}}."""
    rd = list(csv.reader(io.StringIO(text)))
    gens = [int(h[len("genus"):]) for h in rd[0][1:]]
    out = {g: {} for g in gens}
    for row in rd[1:]:
        for g, v in zip(gens, row[1:]):
            out[g][int(row[0])] = parse_rational(v)
    return out


def cmd_export(a):
    from .verify import TABLES, table_grid

    grid = table_grid(a.table)
    rows = list(TABLES[a.table][2])
    if a.format == "csv":
        return _emit(table_csv(grid, rows), a.out)
    d = {"table": a.table,
         "genera": {str(g): {str(j): fmt_rational(grid[g][j]) for j in rows} for g in sorted(grid)}}
    _emit(_dumps(d), a.out)


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freudmaps", description="Map counts from the Freud orbit.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, fmt=("text", "json")):
        sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.add_argument("--out", help="write to a file instead of stdout")

    sp = sub.add_parser("cm-expand", help="center-manifold coefficients c_-1..c_order")
    sp.add_argument("--nu", type=int, default=2)
    sp.add_argument("--order", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=cmd_cm_expand)

    sp = sub.add_parser("z0", help="planar generating function as a series")
    sp.add_argument("--nu", default="2")
    sp.add_argument("--order", type=int, default=10)
    sp.add_argument("--coupling", choices=("r", "s", "t"),
                    help="Taylor series in a coupling instead of the Puiseux series in n")
    common(sp)
    sp.set_defaults(fn=cmd_z0)

    sp = sub.add_parser("derive-zg", help="solve for z_g as a rational function of z0")
    sp.add_argument("--nu", type=int, default=2)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--reduced", action="store_true", help="nu=2 reduced ansatz (order 5g-2)")
    common(sp)
    sp.set_defaults(fn=cmd_derive_zg)

    sp = sub.add_parser("counts", help="map counts by vertex number")
    sp.add_argument("--family", choices=("z", "e"), default="z")
    sp.add_argument("--nu", choices=("2", "3", "3v"), default="2")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--jmax", type=int, default=15)
    common(sp, ("csv", "json"))
    sp.set_defaults(fn=cmd_counts)

    sp = sub.add_parser("qroots", help="real roots of Q_1..Q_{genus-1} (nu=2)")
    sp.add_argument("--genus", type=int, default=7)
    common(sp)
    sp.set_defaults(fn=cmd_qroots)

    sp = sub.add_parser("orbit-check", help="compare true x_n with the truncated expansion")
    sp.add_argument("--nu", type=int, default=2)
    sp.add_argument("--N", type=float, default=1.0)
    sp.add_argument("--r", type=float, default=1.0)
    sp.add_argument("--nmin", type=int, default=50)
    sp.add_argument("--nmax", type=int, default=400)
    sp.add_argument("--stride", type=int, default=10)
    sp.add_argument("--precision", type=int, default=512, help="bits")
    sp.add_argument("--terms", type=int, default=3, help="truncate after c_terms")
    common(sp)
    sp.set_defaults(fn=cmd_orbit_check)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("scope", nargs="?", default="all",
                    choices=("all", "derivations", "counts", "numeric"))
    sp.add_argument("--golden", help="alternate golden-data JSON file")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("export", help="export a count table")
    sp.add_argument("--table", choices=("z", "e", "e3"), required=True)
    common(sp, ("csv", "json"))
    sp.set_defaults(fn=cmd_export)
    return p


def main(argv=None) -> int:
    from .freud import OrderShortfall
    from .orbitnum import PrecisionError

    args = build_parser().parse_args(argv)
    try:
        rc = args.fn(args)
    except (OrderShortfall, PrecisionError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_SHORT
    except (ValueError, KeyError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    return rc or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
