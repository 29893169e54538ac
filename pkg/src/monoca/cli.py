"""Command-line interface.

Exit status: 0 all properties hold, 1 usage or parse error, 2 property
violation (witness printed), 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, ca, congruence, formats, monoid
from .congruence import CapExceeded
from .formats import FormatError
from .monoid import FiniteMonoid, MonoidError
from .shift import WindowConfiguration, all_configurations

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _monoid(args):
    return formats.resolve_monoid(args.monoid)


def _finite(args) -> FiniteMonoid:
    M = _monoid(args)
    if not isinstance(M, FiniteMonoid):
        raise UsageError(f"{args.command} needs a finite monoid")
    return M


def _ca(args, M, attr="ca"):
    return formats.load_ca(_read(getattr(args, attr)), M)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _submonoid(M, text: str):
    if text == "p":
        if not isinstance(M, monoid.Bicyclic):
            raise UsageError("submonoid 'p' is only defined for the bicyclic monoid")
        return ca.SubmonoidContext.bicyclic_p()
    if not isinstance(M, FiniteMonoid):
        raise UsageError("finite submonoids need a finite ambient monoid")
    gens = [formats.parse_element(M, t) for t in text.replace(",", " ").split()]
    members = monoid.submonoid_closure(M, gens)
    return ca.SubmonoidContext.finite(M, members)


# ---------------------------------------------------------------- commands

def cmd_mono_info(args):
    M = _monoid(args)
    fields = [("monoid", formats.monoid_label(M))]
    if isinstance(M, FiniteMonoid):
        pred = monoid.monoid_predicates(M)
        fields += [("size", M.size), ("identity", M.identity),
                   ("commutative", pred.commutative),
                   ("left_cancellative", pred.left_cancellative),
                   ("right_cancellative", pred.right_cancellative),
                   ("is_group", pred.is_group)]
        for m in range(M.size):
            c = monoid.classify_element(M, m)
            fields.append((f"element {m}", " ".join(
                name for name, flag in [
                    ("left_cancellable", c.left_cancellable),
                    ("right_cancellable", c.right_cancellable),
                    ("left_invertible", c.left_invertible),
                    ("right_invertible", c.right_invertible),
                    ("invertible", c.invertible)] if flag) or "-"))
    pair = monoid.find_bicyclic_pair(M)
    fields.append(("bicyclic_pair", None if pair is None
                   else [formats.format_element(M, e) for e in pair]))
    return EXIT_OK, formats.dump_report("mono-info", fields)


def cmd_mono_congruences(args):
    M = _finite(args)
    if args.residual:
        chk = congruence.residually_P_check(M, args.residual, cap=args.cap)
        fields = [("monoid", formats.monoid_label(M)), ("property", chk.property),
                  ("holds", chk.holds), ("meet", list(chk.meet.class_of)),
                  ("witnesses", len(chk.witness_family))]
        wit = [(f"congruence {i}", formats.dump_congruence(g))
               for i, g in enumerate(chk.witness_family)]
        return EXIT_OK, formats.dump_report("residual", fields, wit)
    congs = congruence.enumerate_congruences(M, cap=args.cap)
    if args.format == "text":
        lines = [f"{len(congs)} congruences"]
        lines += [f"{i}: {g.num_classes} classes {g.classes()}" for i, g in enumerate(congs)]
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, "".join(formats.dump_congruence(g) for g in congs)


def cmd_ca_apply(args):
    M = _monoid(args)
    tau = _ca(args, M)
    x = formats.load_configuration(_read(args.config), M)
    if isinstance(x, WindowConfiguration):
        y = ca.apply_windowed(tau, x)
    else:
        y = ca.apply(tau, x)
    return EXIT_OK, formats.dump_configuration(y)


def cmd_ca_compose(args):
    M = _monoid(args)
    tau1 = _ca(args, M)
    tau2 = _ca(args, M, "ca2")
    c = ca.compose(tau1, tau2)
    if args.verify and isinstance(M, FiniteMonoid):
        for x in all_configurations(M, c.alphabet_size):
            if ca.apply(c, x) != ca.apply(tau1, ca.apply(tau2, x)):
                return EXIT_VIOLATION, formats.dump_configuration(x)
    return EXIT_OK, formats.dump_ca(c)


def cmd_ca_minimize(args):
    M = _monoid(args)
    return EXIT_OK, formats.dump_ca(ca.minimal_memory(_ca(args, M)))


def _status_report(tau, st):
    fields = [("injective", st.injective), ("surjective", st.surjective),
              ("bijective", st.bijective)]
    wit = []
    if st.collision:
        wit += [("collision-a", formats.dump_configuration(st.collision[0])),
                ("collision-b", formats.dump_configuration(st.collision[1]))]
    if st.garden_of_eden:
        wit.append(("garden-of-eden", formats.dump_configuration(st.garden_of_eden)))
    return formats.dump_report("ca-status", fields, wit)


def cmd_ca_status(args):
    M = _finite(args)
    tau = _ca(args, M)
    st = analysis.ca_status(tau, cap=args.cap)
    return EXIT_OK, _status_report(tau, st)


def cmd_ca_restrict(args):
    M = _monoid(args)
    ctx = _submonoid(M, args.submonoid)
    out = formats.dump_ca(ca.restrict(_ca(args, M), ctx))
    if args.monoid_out and isinstance(ctx.sub, FiniteMonoid):
        Path(args.monoid_out).write_text(formats.dump_monoid(ctx.sub), encoding="utf-8")
    return EXIT_OK, out


def cmd_ca_induce(args):
    M = _monoid(args)
    ctx = _submonoid(M, args.submonoid)
    sigma = formats.load_ca(_read(args.ca), ctx.sub)
    return EXIT_OK, formats.dump_ca(ca.induce(sigma, ctx))


def cmd_ca_quotient(args):
    M = _finite(args)
    g = formats.load_congruence(_read(args.congruence), M)
    if args.lift:
        Q, _ = congruence.quotient_monoid(M, g)
        sigma = formats.load_ca(_read(args.ca), Q)
        return EXIT_OK, formats.dump_ca(ca.lift_ca(sigma, g, M))
    out = formats.dump_ca(ca.quotient_ca(_ca(args, M), g))
    if args.monoid_out:
        Q, _ = congruence.quotient_monoid(M, g)
        Path(args.monoid_out).write_text(formats.dump_monoid(Q), encoding="utf-8")
    return EXIT_OK, out


def cmd_ca_left_inverse(args):
    M = _finite(args)
    tau = _ca(args, M)
    st = analysis.ca_status(tau, cap=args.cap)
    if not st.injective:
        return EXIT_VIOLATION, _status_report(tau, st)
    sigma = ca.left_inverse_ca(tau)
    if args.minimize:
        sigma = ca.minimal_memory(sigma)
    if args.verify:
        ident = ca.identity_ca(M, tau.alphabet_size)
        if not ca.same_map(ca.compose(sigma, tau), ident):
            return EXIT_VIOLATION, "left inverse replay failed\n"
        if ca.same_map(ca.compose(tau, sigma), ident) != st.surjective:
            return EXIT_VIOLATION, "right inverse replay disagrees with surjectivity\n"
    return EXIT_OK, formats.dump_ca(sigma)


def _memory_arg(M, text):
    if text == "all":
        return None
    return [formats.parse_element(M, t) for t in text.replace(",", " ").split()]


def cmd_sweep(args):
    M = _finite(args)
    if args.sample is not None and args.seed is None:
        raise UsageError("--sample requires --seed")
    start, stop = (args.range or (0, None))
    rep = analysis.surjunctivity_sweep(
        M, args.alphabet, _memory_arg(M, args.memory), rule_cap=args.cap,
        threads=args.threads, start=start, stop=stop, sample=args.sample, seed=args.seed)
    if args.format == "text":
        out = (f"{rep.monoid}: {rep.checked} of {rep.total_rules} rules, "
               f"{rep.injective} injective, {rep.surjective} surjective, "
               f"{len(rep.violations)} violations\n")
        print(f"elapsed {rep.elapsed:.3f}s", file=sys.stderr)
    else:
        out = formats.dump_sweep_report(rep)
    return (EXIT_OK if rep.ok else EXIT_VIOLATION), out


def cmd_demo_bicyclic(args):
    rep = analysis.bicyclic_nonsurjectivity_demo(args.alphabet, args.depth, cap=args.cap)
    inv = rep.inverse
    B = rep.tau.monoid
    fields = [("monoid", "bicyclic"), ("alphabet", rep.alphabet_size), ("depth", rep.depth),
              ("tau", "x -> x o L_p"), ("sigma", "x -> x o L_q"),
              ("window", len(inv.input_window)), ("surviving_window", len(inv.output_window)),
              ("left_inverse_checked", inv.checked), ("left_inverse_agreed", inv.agreed)]
    wit = []
    ic = rep.image_constraint
    if ic is None:
        fields.append(("image_constraint", None))
    else:
        fields += [("image_constraint", [formats.format_element(B, m) for m in ic.constrained]),
                   ("preimage_window", [formats.format_element(B, m) for m in ic.input_window]),
                   ("preimage_candidates", ic.candidates), ("preimage_rejected", ic.rejected)]
        wit.append(("no-preimage", formats.dump_configuration(ic.y)))
    fields.append(("verified", rep.ok))
    return (EXIT_OK if rep.ok else EXIT_VIOLATION), formats.dump_report("demo-bicyclic", fields, wit)


def cmd_demo_residual(args):
    M = _finite(args)
    if args.sample and args.seed is None:
        raise UsageError("--sample requires --seed")
    rep = analysis.residual_surjunctivity_pipeline(M, args.alphabet, sample=args.sample,
                                                   seed=args.seed)
    fields = [("monoid", rep.monoid), ("alphabet", rep.alphabet_size),
              ("congruences", rep.congruences), ("rules", rep.rules),
              ("injective_rules", rep.injective_rules), ("seed", rep.seed),
              ("inclusion_checks", rep.inclusion_checks),
              ("inclusion_failures", len(rep.inclusion_failures)),
              ("equality_checks", rep.equality_checks),
              ("equality_failures", len(rep.equality_failures)),
              ("periodic_union_matches", rep.periodic_union_matches), ("verified", rep.ok)]
    return (EXIT_OK if rep.ok else EXIT_VIOLATION), formats.dump_report("demo-residual", fields)


def cmd_demo_marked_limit(args):
    M = _finite(args)
    rep = analysis.marked_limit_demo(M, args.alphabet)
    fields = [("monoid", rep.monoid), ("alphabet", rep.alphabet_size),
              ("congruences", len(rep.congruences))]
    fields += [(f"congruence {i}", list(g.class_of)) for i, g in enumerate(rep.congruences)]
    fields += [(f"pair {r.first} {r.second}",
                f"pair_window {r.pair_window} inv_equal {str(r.inv_equal).lower()} "
                f"hb_window {' '.join(map(str, r.hb_window)) or '-'}") for r in rep.rows]
    fields += [("psi_injective", rep.psi_injective),
               ("correlation_holds", rep.correlation_holds)]
    if rep.alphabet_size < 2:
        fields.append(("note", "alphabet has one symbol: every Inv set is the single constant"))
    fields.append(("verified", rep.ok))
    return (EXIT_OK if rep.ok else EXIT_VIOLATION), formats.dump_report("demo-marked-limit", fields)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monoca", description="Cellular automata over monoids.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, monoid=True):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["text", "lines"], default="lines",
                       help="output style; 'lines' is the machine format (default)")
        p.add_argument("--output", "-o", help="write output here instead of stdout")
        if monoid:
            p.add_argument("--monoid", required=True,
                           help=f"monoid file or built-in name ({formats.BUILTIN_HELP})")
        return p

    add("mono-info", cmd_mono_info, "predicates and element classification")
    p = add("mono-congruences", cmd_mono_congruences, "enumerate congruences")
    p.add_argument("--cap", type=_positive, default=congruence.DEFAULT_ENUMERATION_CAP)
    p.add_argument("--residual", choices=congruence.RESIDUAL_PROPERTIES)

    p = add("ca-apply", cmd_ca_apply, "apply an automaton to a configuration")
    p.add_argument("--ca", required=True)
    p.add_argument("--config", required=True)

    p = add("ca-compose", cmd_ca_compose, "compose two automata (first after second)")
    p.add_argument("--ca", required=True)
    p.add_argument("--ca2", required=True)
    p.add_argument("--verify", action="store_true")

    p = add("ca-minimize", cmd_ca_minimize, "reduce to the minimal memory set")
    p.add_argument("--ca", required=True)

    p = add("ca-status", cmd_ca_status, "decide injectivity and surjectivity")
    p.add_argument("--ca", required=True)
    p.add_argument("--cap", type=_positive, default=analysis.DEFAULT_CONFIG_CAP)

    for name, func, text in [("ca-restrict", cmd_ca_restrict, "restrict to a submonoid"),
                             ("ca-induce", cmd_ca_induce, "induce from a submonoid")]:
        p = add(name, func, text)
        p.add_argument("--ca", required=True)
        p.add_argument("--submonoid", required=True,
                       help="generators of a finite submonoid, or 'p' for <p> in bicyclic")
        if name == "ca-restrict":
            p.add_argument("--monoid-out", help="also write the submonoid table here")

    p = add("ca-quotient", cmd_ca_quotient, "automaton induced on a quotient monoid")
    p.add_argument("--ca", required=True)
    p.add_argument("--congruence", required=True)
    p.add_argument("--lift", action="store_true", help="lift an automaton over M/g back to M")
    p.add_argument("--monoid-out", help="also write the quotient monoid table here")

    p = add("ca-left-inverse", cmd_ca_left_inverse, "left inverse of an injective automaton")
    p.add_argument("--ca", required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--cap", type=_positive, default=analysis.DEFAULT_CONFIG_CAP)

    p = add("sweep-surjunctive", cmd_sweep, "classify every rule on a memory set")
    p.add_argument("--alphabet", type=_positive, required=True)
    p.add_argument("--memory", default="all", help="'all' or element list")
    p.add_argument("--cap", type=_positive, default=analysis.DEFAULT_RULE_CAP)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--range", type=_nonneg, nargs=2, metavar=("START", "STOP"))
    p.add_argument("--sample", type=_positive)
    p.add_argument("--seed", type=int)

    p = add("demo-bicyclic", cmd_demo_bicyclic, "bicyclic non-surjunctivity certificates",
            monoid=False)
    p.add_argument("--alphabet", type=_positive, required=True)
    p.add_argument("--depth", type=_positive, required=True)
    p.add_argument("--cap", type=_positive, default=analysis.DEFAULT_WINDOW_CAP)

    p = add("demo-residual", cmd_demo_residual, "Inv(g) invariance pipeline")
    p.add_argument("--alphabet", type=_positive, required=True)
    p.add_argument("--sample", type=_positive)
    p.add_argument("--seed", type=int)

    p = add("demo-marked-limit", cmd_demo_marked_limit, "congruence windows vs Inv windows")
    p.add_argument("--alphabet", type=_positive, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, out = args.func(args)
    except CapExceeded as exc:
        print(f"monoca: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, FormatError, MonoidError, ca.CAError, ValueError) as exc:
        print(f"monoca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
