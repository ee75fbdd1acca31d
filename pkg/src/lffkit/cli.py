"""Command-line interface: ``lffkit <command> SPEC ...``.

Exit codes: 0 success, 1 negative verdict, 2 usage or parse error,
3 resource bound hit.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import __version__
from .engine import (
    bounded_bisim,
    check_solution,
    outputs_up_to,
    solve_flat_equation,
    step_word,
    enumerate_reachable,
)
from .errors import ConfigError, LffError, SearchBoundExceeded
from .nfa import Nfa, nfa_disjoint_union, nfa_equiv_hkc
from .poly import format_word
from .rps import Scheme, parse_term, render_tree, rps_unfold
from .specfile import (
    EqSystem,
    behavior_of,
    parse_spec,
    parse_state,
    parse_symbol_word,
    spec_kind,
    validate_spec,
)
from .stack import StackMachine, dpda_member, npda_member
from .wcfg import WeightedGrammar, coeff, hat_behavior, sharp_behavior, start_state

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class Output:

    def __init__(self, stream):
        self.stream = stream

    def line(self, text=""):
        self.stream.write(text + "\n")


def split_word(text, sep, alphabet):
    if sep:
        return tuple(p for p in text.split(sep) if p != "") if text else ()
    if any(len(a) > 1 for a in alphabet):
        raise ConfigError("the alphabet has multi-character letters; pass --sep")
    return tuple(text)


def show_word(w):
    return '""' if not w else "".join(w) if all(len(a) == 1 for a in w) else ",".join(w)


def _initial(args, m):
    if args.initial_stack is None:
        return None
    return parse_symbol_word(args.initial_stack, m.gamma)


def cmd_member(args, out):
    m = parse_spec(args.spec)
    if isinstance(m, Nfa):
        b = behavior_of(m)
        w = split_word(args.word, args.sep, m.alphabet)
        ok = b.output(step_word(b, parse_state(m, args.state), w))
    elif isinstance(m, StackMachine):
        diags = validate_spec(m)
        if diags:
            for d in diags:
                out.line(f"error: {d}")
            return EXIT_USAGE
        w = split_word(args.word, args.sep, m.alphabet)
        if m.deterministic:
            ok = dpda_member(m, w, initial=_initial(args, m))
        else:
            ok = npda_member(m, w, max_configs=args.max_configs, initial=_initial(args, m))
    else:
        raise ConfigError(f"member needs an nfa or stack machine, not a {spec_kind(m)} spec")
    out.line("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_NO


def cmd_coeff(args, out):
    g = parse_spec(args.spec)
    if not isinstance(g, WeightedGrammar):
        raise ConfigError(f"coeff needs a grammar, not a {spec_kind(g)} spec")
    w = split_word(args.word, args.sep, g.alphabet)
    out.line(g.semiring.format(coeff(g, w, args.mode)))
    return EXIT_OK


def cmd_equiv(args, out):
    a, b = parse_spec(args.spec_a), parse_spec(args.spec_b)
    if args.exact:
        if not (isinstance(a, Nfa) and isinstance(b, Nfa)):
            raise ConfigError("--exact is only available for nfa specs")
        sa, sb = parse_state(a, args.state_a), parse_state(b, args.state_b)
        if args.spec_a == args.spec_b:
            verdict = nfa_equiv_hkc(a, sa, sb)
        else:
            n, left, right = nfa_disjoint_union(a, b)
            verdict = nfa_equiv_hkc(n, {left(q) for q in sa}, {right(q) for q in sb})
    else:
        ba, bb = behavior_of(a, args.mode), behavior_of(b, args.mode)
        sa = parse_state(a, args.state_a, args.mode, _initial_for(args, a))
        sb = parse_state(b, args.state_b, args.mode, _initial_for(args, b))
        verdict = bounded_bisim(ba, sa, bb, sb, args.depth)
    if verdict.equivalent:
        out.line("equivalent (exact)" if verdict.exact else f"equivalent up to depth {args.depth}")
        return EXIT_OK
    out.line(f"distinguished by {show_word(verdict.witness)}")
    return EXIT_NO


def _initial_for(args, artifact):
    return _initial(args, artifact) if isinstance(artifact, StackMachine) else None


def cmd_enumerate(args, out):
    m = parse_spec(args.spec)
    b = behavior_of(m, args.mode)
    q0 = parse_state(m, args.start, args.mode, _initial_for(args, m))
    reach = enumerate_reachable(b, q0, args.max_states)
    for q in reach.states:
        out.line(b.show(q))
    out.line(f"{len(reach)} states, {'complete' if reach.complete else 'truncated'}")
    return EXIT_OK


def cmd_unfold(args, out):
    s = parse_spec(args.spec)
    if not isinstance(s, Scheme):
        raise ConfigError(f"unfold needs an rps spec, not a {spec_kind(s)} spec")
    tree = rps_unfold(s, parse_term(args.root), args.depth)
    out.line(render_tree(tree.root))
    return EXIT_OK


def cmd_solve(args, out):
    s = parse_spec(args.spec)
    if not isinstance(s, EqSystem):
        raise ConfigError(f"solve needs an eqsys spec, not a {spec_kind(s)} spec")
    imports, handles = None, {}
    if args.imports is not None:
        m = parse_spec(args.imports)
        imports = behavior_of(m, args.mode)
        handles = {
            h: parse_state(m, text, args.mode, _initial_for(args, m))
            for h, text in s.handles.items()
        }
    elif s.handles:
        raise ConfigError("the system declares handles; pass --imports")
    e = s.equation
    sol = solve_flat_equation(e, imports, handles)
    for x in e.variables():
        table = outputs_up_to(sol, ("var", x), args.depth)
        for w, v in table.items():
            out.line(f"{x}\t{format_word(w, '')}\t{sol.show_output(v)}")
    check = check_solution(e, sol, imports, handles, args.depth)
    for f in check.failures:
        out.line(f"violation: {f}")
    if check.ok:
        out.line(f"solution equation satisfied at {check.states} states")
        return EXIT_OK
    out.line(f"solution equation violated at {len(check.failures)} of {check.states} states")
    return EXIT_NO


def cmd_validate(args, out):
    s = parse_spec(args.spec)
    diags = validate_spec(s)
    for d in diags:
        out.line(d)
    out.line(f"{spec_kind(s)}: {'ok' if not diags else f'{len(diags)} problem(s)'}")
    return EXIT_OK if not diags else EXIT_NO


def cmd_laws(args, out):
    """Randomized spot check of the hat/sharp agreement on one grammar."""
    g = parse_spec(args.spec)
    if not isinstance(g, WeightedGrammar):
        raise ConfigError(f"laws needs a grammar, not a {spec_kind(g)} spec")
    rng = random.Random(args.seed)
    hat, sharp = hat_behavior(g), sharp_behavior(g)
    letters = sorted(g.alphabet)
    bad = 0
    for _ in range(args.cases):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, args.depth)))
        x = hat.output(step_word(hat, start_state(g, "hat"), w))
        y = sharp.output(step_word(sharp, start_state(g, "sharp"), w))
        if x != y:
            bad += 1
            out.line(f"mismatch on {show_word(w)}: hat {g.semiring.format(x)} sharp {g.semiring.format(y)}")
    out.line(f"{args.cases - bad}/{args.cases} random words agree")
    return EXIT_OK if not bad else EXIT_NO


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sep", default=None, help="letter separator for words (default: one letter per character)")
    common.add_argument("--seed", type=int, default=0, help="random seed for randomized commands")
    common.add_argument("--max-configs", type=int, default=100_000, help="configuration bound for nondeterministic stack machines")
    common.add_argument("--max-states", type=int, default=1000, help="state bound for enumerate")
    common.add_argument("--depth", type=int, default=6, help="depth bound (equiv, unfold, solve)")
    common.add_argument("--mode", choices=("hat", "sharp"), default="hat", help="grammar determinization")
    common.add_argument("--initial-stack", default=None, help="override the initial stack of a stack machine")
    common.add_argument("--exact", action="store_true", help="exact equivalence (nfa only)")
    common.add_argument("--echo", action="store_true", help="start the output with a '# command' line")

    parser = argparse.ArgumentParser(
        prog="lffkit", description="Determinize, run and compare finite machines with side effects."
    )
    parser.add_argument("--version", action="version", version=f"lffkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("member", parents=[common], help="membership of a word in a machine's language")
    p.add_argument("spec")
    p.add_argument("word")
    p.add_argument("--state", default=None, help="nfa start state (default: the file's start)")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("coeff", parents=[common], help="coefficient of a word in a grammar's series")
    p.add_argument("spec")
    p.add_argument("word")
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("equiv", parents=[common], help="compare two states")
    p.add_argument("spec_a")
    p.add_argument("state_a", help="state in spec_a, or - for its start")
    p.add_argument("spec_b")
    p.add_argument("state_b", help="state in spec_b, or - for its start")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("enumerate", parents=[common], help="list reachable determinized states")
    p.add_argument("spec")
    p.add_argument("start", nargs="?", default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("unfold", parents=[common], help="unfold a recursive program scheme")
    p.add_argument("spec")
    p.add_argument("root")
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("solve", parents=[common], help="solve a flat equation system")
    p.add_argument("spec")
    p.add_argument("--imports", default=None, help="machine or grammar spec the handles refer to")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", parents=[common], help="static checks of a spec file")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("laws", parents=[common], help="randomized hat/sharp agreement check")
    p.add_argument("spec")
    p.add_argument("--cases", type=int, default=200)
    p.set_defaults(func=cmd_laws)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    out = Output(stdout)
    if args.echo:
        out.line("# " + " ".join(argv if argv is not None else sys.argv[1:]))
    try:
        return args.func(args, out)
    except SearchBoundExceeded as exc:
        stderr.write(f"lffkit: resource bound hit: {exc}\n")
        return EXIT_BOUND
    except LffError as exc:
        stderr.write(f"lffkit: error: {exc}\n")
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
