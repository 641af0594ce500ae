"""Command-line interface: ``dedekind-symbols <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from .catalog import CatalogError, get_group, load_catalog
from .classical import classical_reciprocity_defect, dede_s
from .congruence import h_gamma0, level_data, vassileva_S
from .equidist import frac_pairs, grid_discrepancy, h_statistic_pairs, sk_partial_sums, t_of_group
from .eta import EtaPairing, modsym
from .groups import parse_word
from .matrices import GMat
from .quadratic import format_rational
from .sweeps import GAMMA0_LAWS, WORD_LAWS, RunReport, SweepSpec, run_gamma0_sweep, run_sweep, word_model
from .symbols import MissingSeed, PairingUnavailable

__all__ = ["main", "run", "build_parser"]


def _fmt(x) -> str:
    return format_rational(x) if isinstance(x, (int, Fraction)) else str(x)


def _entry(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return _fmt(x)


def _levels(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("levels must be positive integers, e.g. 11 or 2-25 or 5,7,11")
    return out


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_report(report: RunReport, args, header: tuple[str, ...]) -> int:
    status = "PASS" if report.passed else "FAIL"
    print(
        f"{report.law}: {status} samples={report.samples} checks={report.checks} "
        f"failures={len(report.failures)} max|defect|={report.max_defect:.3e} "
        f"elapsed={report.elapsed:.2f}s"
    )
    for inputs, defect in report.failures[:10]:
        print(f"  failed {inputs}: defect {defect}")
    if args.csv:
        with _open_out(args.csv) as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for o in report.outcomes:
                row = [o.law, o.inputs, o.defect] + ([o.tag] if len(header) == 4 else [])
                w.writerow(row)
    if args.json:
        with _open_out(args.json) as fh:
            json.dump(report.to_dict(include_outcomes=True), fh, indent=2)
            fh.write("\n")
    return 0 if report.passed else 1


# -- subcommands -------------------------------------------------------------------


def cmd_classical(args) -> int:
    d, c = args.d, args.c
    if c == 0:
        print("c must be nonzero", file=sys.stderr)
        return 2
    print(f"s({d},{c}) = {_fmt(dede_s(d, c))}")
    if args.reciprocity:
        if d <= 0 or c <= 0:
            print("reciprocity needs d, c > 0", file=sys.stderr)
            return 2
        defect = classical_reciprocity_defect(c, d)
        print(f"s({c},{d}) = {_fmt(dede_s(c, d))}")
        print(f"reciprocity defect = {_fmt(defect)}")
        return 0 if defect == 0 else 1
    return 0


def cmd_gamma0(args) -> int:
    if args.action == "sum":
        print(f"H_{args.level}({args.d},{args.c}) = {_fmt(h_gamma0(args.d, args.c, args.level))}")
        return 0
    if args.action == "symbol":
        m = GMat(*args.matrix)
        print(f"S_{args.level}({' '.join(map(str, args.matrix))}) = {_fmt(vassileva_S(m, args.level))}")
        return 0
    levels = args.level_list or [args.level]
    report = run_gamma0_sweep(levels, args.law, args.samples, args.seed, args.max_c, args.jobs)
    return _emit_report(report, args, ("law", "inputs", "defect"))


def cmd_symbol(args) -> int:
    model = word_model(args.group, args.pairing, args.catalog_dir)
    el = model.element(parse_word(args.word))
    a, b, c, d = el.matrix.entries
    print(f"group {model.name}, word {el.label()}")
    print(f"matrix ({_entry(a)} {_entry(b)}; {_entry(c)} {_entry(d)})")
    rows = [("S", model.S), ("theta", model.theta), ("H", model.H), ("H*", model.Hstar)]
    for label, fn in rows:
        try:
            print(f"{label} = {fn(el)}")
        except (MissingSeed, PairingUnavailable) as exc:
            print(f"{label} = unavailable ({exc})")
    return 0


def cmd_verify(args) -> int:
    spec = SweepSpec(
        args.group, args.law, args.samples, args.seed, args.tolerance, args.max_len, args.pairing,
        args.catalog_dir,
    )
    report = run_sweep(spec, args.jobs)
    return _emit_report(report, args, ("law", "word", "defect", "tag"))


def cmd_modsym(args) -> int:
    ctx = get_group(args.group, args.catalog_dir)
    if ctx.cusp_form is None:
        print(f"{ctx.name} has no cusp form in the catalog", file=sys.stderr)
        return 2
    pairing = EtaPairing(ctx)
    m = word_model(args.group, "exact", args.catalog_dir).element(parse_word(args.word)).matrix
    val = modsym(m, pairing.product, T=args.truncation)
    print(f"<{args.word}, f> = {val.value.real:.15g} {val.value.imag:+.15g}i")
    print(f"error <= {val.error:.3e}")
    return 0


def cmd_calibrate(args) -> int:
    ctx = get_group(args.group, args.catalog_dir)
    pairing = EtaPairing(ctx)
    for name in ctx.modsym_basis:
        s = pairing.symbols[name]
        print(f"<{name}, f> = {s.value.real:.15g} {s.value.imag:+.15g}i (error {s.error:.1e})")
    print(f"V_f = {pairing.Vf:.12f} +- {pairing.Vf_error:.1e}")
    return 0


def _group_for_level(N: int, catalog_dir):
    for ctx in load_catalog(catalog_dir).values():
        if ctx.kind == "Gamma0" and ctx.param == N:
            return ctx
    return None


def cmd_equidist(args) -> int:
    N, G = args.level, args.grid
    if args.stat == "h":
        if args.t_prime is None:
            print("--stat h needs --t-prime", file=sys.stderr)
            return 2
        u, v = h_statistic_pairs(N, args.xmax, Fraction(args.t_prime))
        disc, _ = grid_discrepancy((u, v), G)
        t_label = f"t'={args.t_prime}"
    else:
        if args.t == "auto":
            ctx = _group_for_level(N, args.catalog_dir)
            if ctx is None:
                print(f"no catalog group for level {N}; pass --t explicitly", file=sys.stderr)
                return 2
            try:
                t = t_of_group(ctx)
            except MissingSeed as exc:
                print(f"{exc}; pass --t explicitly", file=sys.stderr)
                return 2
        else:
            t = int(args.t)
        tA = t * level_data(N).A
        u, v, iu, iv = frac_pairs(N, args.xmax, tA, G)
        disc, _ = grid_discrepancy((iu, iv), G)
        t_label = f"t={t}"
    print(f"level {N}, X = {args.xmax}, {t_label}, grid {G}: {len(u)} points, discrepancy {disc:.6f}")
    if args.csv:
        with _open_out(args.csv) as fh:
            w = csv.writer(fh)
            w.writerow(("u", "v"))
            for a, b in zip(u, v):
                w.writerow((repr(float(a)), repr(float(b))))
            w.writerow(("discrepancy", repr(disc)))
    return 0


def cmd_sk(args) -> int:
    print("c,re,im,abs,partial_re,partial_im")
    for c, s, running in sk_partial_sums(args.M, args.N2, args.level, args.cmax):
        print(f"{c},{s.real:.12g},{s.imag:.12g},{abs(s):.12g},{running.real:.12g},{running.imag:.12g}")
    return 0


def cmd_catalog(args) -> int:
    for ctx in load_catalog(args.catalog_dir).values():
        g, cusps, orders = ctx.signature
        kinds = ", ".join(f"{n}:{ctx.generator_kind(n)}" for n in ctx.generators)
        print(
            f"{ctx.name:10} A = {format_rational(ctx.A):6} genus {g} cusps {cusps} "
            f"elliptic {list(orders)}  [{kinds}]"
        )
    return 0


# -- parser ------------------------------------------------------------------------


def _add_report_flags(p, jobs: bool = True):
    p.add_argument("--csv", metavar="PATH", help="write per-check rows as CSV ('-' for stdout)")
    p.add_argument("--json", metavar="PATH", help="write the run report as JSON ('-' for stdout)")
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dedekind-symbols",
        description="Generalized Dedekind sums and modular Dedekind symbols for Fuchsian groups.",
    )
    parser.add_argument("--catalog-dir", default=None, help="directory of group YAML files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical", help="classical Dedekind sum s(d,c)")
    p.add_argument("d", type=int)
    p.add_argument("c", type=int)
    p.add_argument("--reciprocity", action="store_true", help="also check s(d,c) + s(c,d)")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("gamma0", help="closed forms for Gamma_0(N)")
    gsub = p.add_subparsers(dest="action", required=True)
    q = gsub.add_parser("sum", help="H_N(d,c)")
    q.add_argument("--level", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--c", type=int, required=True)
    q = gsub.add_parser("symbol", help="S_N of a matrix")
    q.add_argument("--level", type=int, required=True)
    q.add_argument("--matrix", type=int, nargs=4, required=True, metavar=("A", "B", "C", "D"))
    q = gsub.add_parser("verify", help="randomized law sweep over levels")
    q.add_argument("--law", choices=sorted(GAMMA0_LAWS), required=True)
    q.add_argument("--level", type=int, default=11)
    q.add_argument("--levels", dest="level_list", type=_levels, help="e.g. 2-25 or 5,7,11")
    q.add_argument("--samples", type=int, default=100, help="samples per level")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--max-c", type=int, default=200)
    _add_report_flags(q)
    p.set_defaults(func=cmd_gamma0)

    p = sub.add_parser("symbol", help="evaluate symbols of a catalog group")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("eval", help="S, theta, H, H* of a word")
    q.add_argument("--group", required=True)
    q.add_argument("--word", required=True, help="e.g. Q^2*R^-1*Pinf^3")
    q.add_argument("--pairing", choices=("exact", "eta"), default="exact")
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("verify", help="randomized law sweep on a catalog group")
    p.add_argument("--group", required=True)
    p.add_argument("--law", choices=sorted(WORD_LAWS), required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None, help="override the default tolerance")
    p.add_argument("--max-len", type=int, default=8, help="maximal random word length")
    p.add_argument("--pairing", choices=("exact", "eta"), default="exact")
    _add_report_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("modsym", help="numerical modular symbol <gamma, f>")
    p.add_argument("--group", default="gamma0_11")
    p.add_argument("--word", required=True)
    p.add_argument("--truncation", type=int, default=None, help="number of terms (default: tail-bound rule)")
    p.set_defaults(func=cmd_modsym)

    p = sub.add_parser("calibrate", help="calibrate the pairing constant V_f")
    p.add_argument("--group", default="gamma0_11")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("equidist", help="grid discrepancy of ({d/c}, {tA(a+d)/c})")
    p.add_argument("--level", type=int, default=11)
    p.add_argument("--xmax", type=int, default=1000)
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--t", default="auto", help="'auto' or an integer")
    p.add_argument("--stat", choices=("hstar", "h"), default="hstar", help="h: exploratory {t' H_N(d,c)}")
    p.add_argument("--t-prime", default=None, help="multiplier for --stat h (rational)")
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_equidist)

    p = sub.add_parser("sk", help="Selberg-Kloosterman sums per modulus")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N2", type=int, required=True)
    p.add_argument("--cmax", type=int, required=True)
    p.add_argument("--level", type=int, default=1, help="only moduli c divisible by this")
    p.set_defaults(func=cmd_sk)

    p = sub.add_parser("catalog", help="list catalog groups and constants")
    p.set_defaults(func=cmd_catalog)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CatalogError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # output consumer closed early (e.g. piped into head)
        sys.stderr.close()
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
