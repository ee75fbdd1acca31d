"""Acceptance suite: one test, and one summary line, per criterion.

Run ``pytest tests/test_acceptance.py -v`` (the lines also appear in the
terminal summary) or ``python tests/test_acceptance.py``.
"""

import io
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from criteria import report  # noqa: E402
from oracles import (  # noqa: E402
    FIXTURES,
    all_words,
    anbn_ref,
    dyck_ref,
    even_palindrome_ref,
    fixture,
    flat_solution_value,
    nfa_path_accepts,
    poly_weight,
    random_coeff,
    random_grammar,
    random_moore,
    random_nfa,
    random_poly,
    rng_for,
)

from lffkit.cli import main  # noqa: E402
from lffkit.engine import (  # noqa: E402
    FlatEquation,
    Guarded,
    Imported,
    check_solution,
    outputs_up_to,
    run_word,
    solve_flat_equation,
)
from lffkit.moore import fuse, lifted_algebra, poly_algebra  # noqa: E402
from lffkit.nfa import nfa_determinize, nfa_disjoint_union, nfa_equiv_hkc  # noqa: E402
from lffkit.poly import PolyRing, poly_add, poly_mul, poly_scale  # noqa: E402
from lffkit.rps import CUT, parse_term, rps_unfold, truncate  # noqa: E402
from lffkit.semiring import BOOL, NAT  # noqa: E402
from lffkit.specfile import parse_spec, parse_state  # noqa: E402
from lffkit.stack import dpda_member, npda_member  # noqa: E402
from lffkit.wcfg import LazySharp, coeff, hat_behavior, hat_output, hat_step, sharp_behavior, start_state  # noqa: E402

GRAMMARS = sorted(p.name for p in FIXTURES.glob("*.grammar"))
SCHEMES = sorted(p.name for p in FIXTURES.glob("*.rps"))
NFAS = sorted(p.name for p in FIXTURES.glob("*.nfa"))


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out, io.StringIO())
    return code, out.getvalue()


def moore_setup(S):
    A = poly_algebra(PolyRing(S, ("x", "y")), ("a", "b"))
    return A, lifted_algebra(A), A.one.ring


# -- 1 ----------------------------------------------------------------------

LAWS = {
    "add associative": (3, lambda H, s, t, m, n, k: (H.add(H.add(m, n), k), H.add(m, H.add(n, k)))),
    "add commutative": (2, lambda H, s, t, m, n, k: (H.add(m, n), H.add(n, m))),
    "add unit": (1, lambda H, s, t, m, n, k: (H.add(m, H.zero), m)),
    "scale over add": (2, lambda H, s, t, m, n, k: (H.scale(s, H.add(m, n)), H.add(H.scale(s, m), H.scale(s, n)))),
    "scalar add": (1, lambda H, s, t, m, n, k: (H.scale(H.semiring.add(s, t), m), H.add(H.scale(s, m), H.scale(t, m)))),
    "scalar mul": (1, lambda H, s, t, m, n, k: (H.scale(H.semiring.mul(s, t), m), H.scale(s, H.scale(t, m)))),
    "scale one": (1, lambda H, s, t, m, n, k: (H.scale(H.semiring.one, m), m)),
    "scale zero": (1, lambda H, s, t, m, n, k: (H.scale(H.semiring.zero, m), H.zero)),
    "mul associative": (3, lambda H, s, t, m, n, k: (H.mul(H.mul(m, n), k), H.mul(m, H.mul(n, k)))),
    "mul left unit": (1, lambda H, s, t, m, n, k: (H.mul(H.one, m), m)),
    "mul right unit": (1, lambda H, s, t, m, n, k: (H.mul(m, H.one), m)),
    "left distributive": (3, lambda H, s, t, m, n, k: (H.mul(m, H.add(n, k)), H.add(H.mul(m, n), H.mul(m, k)))),
    "right distributive": (3, lambda H, s, t, m, n, k: (H.mul(H.add(m, n), k), H.add(H.mul(m, k), H.mul(n, k)))),
    "scale left factor": (2, lambda H, s, t, m, n, k: (H.mul(H.scale(s, m), n), H.scale(s, H.mul(m, n)))),
    "scale right factor": (2, lambda H, s, t, m, n, k: (H.mul(m, H.scale(s, n)), H.scale(s, H.mul(m, n)))),
    "left zero": (1, lambda H, s, t, m, n, k: (H.mul(H.zero, m), H.zero)),
    "right zero": (1, lambda H, s, t, m, n, k: (H.mul(m, H.zero), H.zero)),
}


def test_criterion_01_algebra_laws():
    cases = 500
    t0 = time.perf_counter()
    failures = []
    for S in (BOOL, NAT):
        A, H, ring = moore_setup(S)
        rng = rng_for(1)
        for name, (_, law) in LAWS.items():
            for _ in range(cases):
                m, n, k = (random_moore(rng, A, ring) for _ in range(3))
                s, t = random_coeff(rng, S), random_coeff(rng, S)
                lhs, rhs = law(H, s, t, m, n, k)
                if not H.eq(lhs, rhs):
                    failures.append(f"{S.name}: {name}")
                    break
    elapsed = time.perf_counter() - t0
    detail = f"{len(LAWS)} laws x {cases} cases x bool, nat"
    ok = report(1, "S-algebra laws on MooreElem over S<X+Sigma>", not failures, elapsed, 10,
                detail if not failures else "broken: " + ", ".join(failures))
    assert ok, failures


# -- 2 ----------------------------------------------------------------------


def test_criterion_02_fuse_is_a_morphism():
    cases = 500
    t0 = time.perf_counter()
    failures = set()
    for S in (BOOL, NAT):
        A, H, ring = moore_setup(S)
        rng = rng_for(2)
        for _ in range(cases):
            m, n = random_moore(rng, A, ring), random_moore(rng, A, ring)
            s = random_coeff(rng, S)
            tau = rng.choice(A.sigma)
            checks = {
                "zero": (fuse(H.zero, A), A.zero),
                "one": (fuse(H.one, A), A.one),
                "add": (fuse(H.add(m, n), A), poly_add(fuse(m, A), fuse(n, A))),
                "scale": (fuse(H.scale(s, m), A), poly_scale(s, fuse(m, A))),
                "mul": (fuse(H.mul(m, n), A), poly_mul(fuse(m, A), fuse(n, A))),
                "pointing": (fuse(H.point(tau), A), A.point(tau)),
            }
            failures |= {f"{S.name}: {k}" for k, (x, y) in checks.items() if x != y}
    elapsed = time.perf_counter() - t0
    ok = report(2, "fuse preserves zero/add/scale/one/mul/pointing", not failures, elapsed, 10,
                f"{cases} cases x bool, nat" if not failures else "broken: " + ", ".join(sorted(failures)))
    assert ok, failures


# -- 3 ----------------------------------------------------------------------


def test_criterion_03_hat_product_rule():
    cases = 200
    t0 = time.perf_counter()
    failures = []
    for name in GRAMMARS:
        g = parse_spec(fixture(name))
        S = g.semiring
        rng = rng_for(3)
        for _ in range(cases):
            v, w = random_poly(rng, g.ring, 3, 3), random_poly(rng, g.ring, 3, 3)
            vw = poly_mul(v, w)
            if hat_output(g, vw) != S.mul(hat_output(g, v), hat_output(g, w)):
                failures.append(f"{name}: output of {v} * {w}")
            for a in g.alphabet:
                want = poly_add(poly_mul(hat_step(g, v, a), w), poly_scale(hat_output(g, v), hat_step(g, w, a)))
                if hat_step(g, vw, a) != want:
                    failures.append(f"{name}: {a}-derivative of {v} * {w}")
    elapsed = time.perf_counter() - t0
    ok = report(3, "hat output and derivative product rule", not failures, elapsed, 10,
                f"{cases} random pairs x {len(GRAMMARS)} grammars" if not failures else failures[0])
    assert ok, failures[:5]


# -- 4 ----------------------------------------------------------------------


def test_criterion_04_hat_and_sharp_agree():
    t0 = time.perf_counter()
    rng = rng_for(4)
    grammars = [random_grammar(rng, alphabet=("a", "b")) for _ in range(50)]
    grammars.append(parse_spec(fixture("dyck.grammar")))
    mismatches = []
    words = 0
    for g in grammars:
        for w in all_words(g.alphabet, 6):
            words += 1
            hat, sharp = coeff(g, w, "hat"), coeff(g, w, "sharp")
            if hat != sharp or hat != poly_weight(g, g.start, w):
                mismatches.append((g, w))
    elapsed = time.perf_counter() - t0
    ok = report(4, "coeff agrees in hat and sharp mode", not mismatches, elapsed, 60,
                f"{len(grammars)} grammars, {words} (grammar, word) pairs of length <= 6, "
                "also equal to derivation counts")
    assert ok, mismatches[:3]


# -- 5 ----------------------------------------------------------------------


def test_criterion_05_fused_observation_is_equivalent():
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for name in GRAMMARS:
        g = parse_spec(fixture(name))
        lazy = LazySharp(g)
        b = sharp_behavior(g, lazy)
        rng = rng_for(5)
        for _ in range(100):
            path = [rng.choice(g.alphabet) for _ in range(rng.randint(0, 6))]
            p = lazy.coerce(start_state(g, "sharp"))
            for a in path:
                p = b.step(p, a)
            q = fuse(lazy.observe(p), lazy.A)
            checked += 1
            if outputs_up_to(b, p, 5) != outputs_up_to(b, q, 5):
                failures.append(f"{name}: state after {''.join(path)!r}")
    elapsed = time.perf_counter() - t0
    ok = report(5, "p and fuse(c(p)) agree on words <= 5", not failures, elapsed, 60,
                f"{checked} reachable sharp states over {len(GRAMMARS)} grammars")
    assert ok, failures[:3]


# -- 6 ----------------------------------------------------------------------


def test_criterion_06_stack_machines():
    t0 = time.perf_counter()
    failures = []
    counted = 0
    cases = [
        ("anbn.stack", dpda_member, anbn_ref, 12),
        ("dyck.stack", dpda_member, dyck_ref, 12),
        ("palindrome.stack-nd", npda_member, even_palindrome_ref, 10),
    ]
    for name, decide, ref, n in cases:
        m = parse_spec(fixture(name))
        for w in all_words(m.alphabet, n):
            counted += 1
            if decide(m, w) != ref(w):
                failures.append(f"{name}: {''.join(w)!r}")
    elapsed = time.perf_counter() - t0
    ok = report(6, "stack machines agree with reference deciders", not failures, elapsed, 120,
                f"{counted} words")
    assert ok, failures[:5]


# -- 7 ----------------------------------------------------------------------


def test_criterion_07_nfa_subset_and_hkc():
    t0 = time.perf_counter()
    failures = []
    rng = rng_for(7)
    for i in range(100):
        n = random_nfa(rng, 5)
        table = outputs_up_to(nfa_determinize(n), frozenset({n.start}), 8)
        if any(v != nfa_path_accepts(n, {n.start}, w) for w, v in table.items()):
            failures.append(f"subset construction, NFA #{i}")
    pairs = {"equivalent": 0, "different": 0}
    for i in range(100):
        n1, n2 = random_nfa(rng, 4, prefix="p"), random_nfa(rng, 4, prefix="q")
        if i % 4 == 0:
            n2 = n1  # make sure equivalent pairs are exercised too
        n, left, right = nfa_disjoint_union(n1, n2)
        verdict = nfa_equiv_hkc(n, {left(n1.start)}, {right(n2.start)})
        same = all(
            nfa_path_accepts(n1, {n1.start}, w) == nfa_path_accepts(n2, {n2.start}, w)
            for w in all_words(("a", "b"), 10)
        )
        pairs["equivalent" if same else "different"] += 1
        if verdict.equivalent != same or (verdict.equivalent and not verdict.exact):
            failures.append(f"HKC, pair #{i}")
    elapsed = time.perf_counter() - t0
    ok = report(7, "subset construction vs path search; HKC vs language tables", not failures, elapsed, 120,
                f"100 NFAs to length 8; 100 pairs to length 10 ({pairs['equivalent']} equivalent)")
    assert ok, failures[:5]


# -- 8 ----------------------------------------------------------------------


def test_criterion_08_enumerate_flags():
    t0 = time.perf_counter()
    flags = {}
    for name in NFAS:
        code, out = cli("enumerate", fixture(name))
        flags[name] = (code, out.splitlines()[-1])
    code, out = cli("enumerate", fixture("dyck.grammar"), "--max-states", "50")
    dyck = (code, out.splitlines()[-1])
    ok = all(code == 0 and line.endswith(", complete") for code, line in flags.values())
    ok = ok and dyck == (0, "50 states, truncated")
    elapsed = time.perf_counter() - t0
    summary = "; ".join(f"{k}: {v[1]}" for k, v in flags.items()) + f"; dyck.grammar: {dyck[1]}"
    ok = report(8, "enumerate completeness flags", ok, elapsed, 10, summary)
    assert ok, (flags, dyck)


# -- 9 ----------------------------------------------------------------------


def random_system(rng, handles):
    names = [f"v{i}" for i in range(rng.randint(2, 5))]
    eqs = {}
    for x in names:
        if handles and rng.random() < 0.3:
            eqs[x] = Imported(rng.choice(sorted(handles)))
        else:
            eqs[x] = Guarded(rng.random() < 0.5, {a: rng.choice(names) for a in "ab"})
    return FlatEquation(("a", "b"), "bool", eqs)


def test_criterion_09_flat_equations():
    t0 = time.perf_counter()
    failures = []
    explored = 0

    # the bundled system, importing from the counting grammar
    sysfile = parse_spec(fixture("solve-demo.eqsys"))
    g = parse_spec(fixture("count.grammar"))
    handles = {h: parse_state(g, text) for h, text in sysfile.handles.items()}
    imports = hat_behavior(g)
    e = sysfile.equation
    sol = solve_flat_equation(e, imports, handles)
    check = check_solution(e, sol, imports, handles, 6)
    explored += check.states
    failures += check.failures
    for x in e.variables():
        for w in all_words(e.alphabet, 6):
            want = flat_solution_value(e, x, w, lambda h, u: poly_weight(g, handles[h], u))
            if run_word(sol, ("var", x), w) != want:
                failures.append(f"solve-demo {x} on {''.join(w)!r}")

    # random systems importing NFA states
    rng = rng_for(9)
    for i in range(30):
        n = random_nfa(rng, 4)
        hs = {f"h{j}": frozenset({q}) for j, q in enumerate(n.states[:2])}
        e = random_system(rng, hs)
        b = nfa_determinize(n)
        sol = solve_flat_equation(e, b, hs)
        check = check_solution(e, sol, b, hs, 6)
        explored += check.states
        failures += [f"system #{i}: {f}" for f in check.failures]
        for x in e.variables():
            for w in all_words(e.alphabet, 6):
                want = flat_solution_value(e, x, w, lambda h, u: nfa_path_accepts(n, hs[h], u))
                if run_word(sol, ("var", x), w) != want:
                    failures.append(f"system #{i}: {x} on {''.join(w)!r}")
    elapsed = time.perf_counter() - t0
    ok = report(9, "flat equation solution identity and uniqueness", not failures, elapsed, 10,
                f"31 systems, {explored} explored states, words <= 6")
    assert ok, failures[:5]


# -- 10 ---------------------------------------------------------------------

ELIDED = "⋮"
# the solution tree as displayed, with the elided subtree marked
DISPLAYED = parse_term("+(z, +(×(⋆, z), +(×(⋆, ×(⋆, z)), ⋮)))")


def matches_display(tree, shown):
    """Node-for-node comparison; an elided subtree matches anything but a cut."""
    if shown.head == ELIDED:
        return tree != CUT
    return (
        tree.head == shown.head
        and len(tree.args) == len(shown.args)
        and all(matches_display(t, s) for t, s in zip(tree.args, shown.args))
    )


def roots_for(scheme):
    consts = [c for c, n in sorted(scheme.signature.givens.items()) if n == 0]
    leaf = consts[0] if consts else "z"
    return [parse_term(f"{f}({', '.join([leaf] * n)})") if n else parse_term(f)
            for f, n in sorted(scheme.signature.defined.items())]


def test_criterion_10_program_scheme_unfolding():
    t0 = time.perf_counter()
    s = parse_spec(fixture("phi.rps"))
    root = parse_term("phi(z)")
    t4 = rps_unfold(s, root, 4).root
    t5 = rps_unfold(s, root, 5).root
    figure = matches_display(t4, truncate(DISPLAYED, 4)) and matches_display(t5, DISPLAYED)
    incoherent = []
    for name in SCHEMES:
        sch = parse_spec(fixture(name))
        for r in roots_for(sch):
            prefixes = [rps_unfold(sch, r, d).root for d in range(7)]
            for hi in range(7):
                for lo in range(hi + 1):
                    if truncate(prefixes[hi], lo) != prefixes[lo]:
                        incoherent.append(f"{name} {r} {lo}/{hi}")
    elapsed = time.perf_counter() - t0
    ok = report(10, "rps unfolding: displayed tree and depth coherence", figure and not incoherent, elapsed, 5,
                f"figure {'matches' if figure else 'differs'}; coherence on {len(SCHEMES)} schemes, d <= 6")
    assert ok, (figure, incoherent[:5])


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
