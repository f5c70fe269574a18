"""End-to-end verifiers for the extension scenarios on N, Z\\{0}, gapped sets, primes and trees.

Every check is exact.  "Finite rank" is only ever reported as evidence: a rank
that stays constant over three consecutive radii.
"""

from __future__ import annotations

import itertools
import random
import time

from .freegroup import ALPHABET, Word
from .operators import (
    GenSymbol,
    OperatorExpr,
    WindowMatrix,
    annihilated_below,
    check_relation,
    independence_gram,
    integer_environment,
    quasi_reduced_words,
    rank,
    rank_profile,
    safe_core,
    tree_environment,
    truncate,
    word_operator,
    word_type,
)
from .reports import ExtensionReport
from .spaces import (
    AugmentedTree,
    GappedSet,
    Naturals,
    PositiveCone,
    Primes,
    PuncturedIntegers,
    build_window,
)
from .translations import (
    Compose,
    Shift,
    build_puncture_fix,
    conjugating_bijection,
    domain_in_window,
    is_subtranslation,
)

W = OperatorExpr.word
ONE = OperatorExpr.identity()


def _unit(window, row, col) -> WindowMatrix:
    return WindowMatrix(window, {(row, col): 1})


def _same(m1: WindowMatrix, m2: WindowMatrix) -> bool:
    return (m1 - m2).max_abs() == 0


def _pairs(points, limit, rng):
    pairs = list(itertools.product(points, repeat=2))
    if len(pairs) <= limit:
        return pairs
    return rng.sample(pairs, limit)


class _Timer:
    def __init__(self, report, key):
        self.report, self.key = report, key

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timing[self.key] = time.perf_counter() - self.t0


# --- N inside Z -----------------------------------------------------------------


def tau_power(i: int, j: int) -> OperatorExpr:
    """tau^i (tau*)^j."""
    return W(*(["t_1"] * i + ["t_1*"] * j))


def symbol_lift(n: int) -> OperatorExpr:
    return tau_power(n, 0) if n >= 0 else tau_power(0, -n)


def verify_toeplitz(R: int = 10, seed: int = 0) -> ExtensionReport:
    if R < 3:
        raise ValueError("verify_toeplitz needs R >= 3")
    rng = random.Random(seed)
    rep = ExtensionReport("toeplitz", {"radius": R}, seed)
    N = Naturals()
    env = integer_environment(N)
    w = build_window(N, R)
    t0 = time.perf_counter()

    dev1 = check_relation(W("t_1*", "t_1"), ONE, w, env)
    dev2 = check_relation(W("t_1*", "t_1") - W("t_1", "t_1*"), W("p_0"), w, env)
    rep.add("isometry", "toeplitz:isometry", dev1 == 0, deviation=dev1)
    rep.add("defect-projection", "toeplitz:defect-is-p0", dev2 == 0, deviation=dev2)

    # tau^n p_0 (tau*)^m is the matrix unit taking e_m to e_n
    bad = []
    pairs = _pairs(w.points, 150, rng)
    for n, m in pairs:
        e = tau_power(n, 0) * W("p_0") * tau_power(0, m)
        if not _same(truncate(e, w, env), _unit(w, n, m)):
            bad.append((n, m))
    rep.add("matrix-units", "toeplitz:compacts-from-p0", not bad, sampled=len(pairs), failures=bad)

    # tau^i tau*^j differs from the lift of its symbol by exactly the finite domain gap
    # with i = j = budget the safe core must still hold the budget exceptional points
    budget = min(4, (R + 1) // 3)
    radii = [R, R + 2, R + 4]
    rows = []
    ok = True
    for i in range(budget + 1):
        for j in range(budget + 1):
            diff_expr = tau_power(i, j) - symbol_lift(i - j)
            prof = rank_profile(diff_expr, env, radii)
            s = Compose(N, (Shift(N, i), Shift(N, -j)))
            sub, gap = is_subtranslation(s, Shift(N, i - j), safe_core(w, i + j))
            good = sub and prof.stabilized and all(r == len(gap) for _, r in prof.ranks)
            ok &= good
            rows.append({"i": i, "j": j, "ranks": prof.ranks, "domain_gap": sorted(gap)})
    rep.add("finite-rank-to-symbol", "toeplitz:word-minus-symbol-finite-rank", ok, cases=rows)

    # distinct symbols never agree up to finite rank: the rank keeps growing
    growth = []
    ok = True
    for i, j in [(0, 1), (1, 2), (0, 2), (2, 3)]:
        prof = rank_profile(symbol_lift(i) - symbol_lift(j), env, [R, 2 * R, 3 * R])
        vals = [r for _, r in prof.ranks]
        ok &= all(b > a for a, b in zip(vals, vals[1:]))
        growth.append({"i": i, "j": j, "ranks": prof.ranks})
    rep.add("symbol-separation", "toeplitz:distinct-powers-not-compact", ok, cases=growth)
    rep.timing["total"] = time.perf_counter() - t0
    return rep


# --- Z \ {0} ----------------------------------------------------------------------


def composition_domain_formula(shifts) -> set:
    """Points excluded from the domain of s_{i_1} ... s_{i_k} (rightmost acts first)."""
    out = {0}
    acc = 0
    for i in reversed(shifts):
        acc += i
        out.add(-acc)
    return out


def punctured_path(k: int) -> OperatorExpr:
    """A word in s_1, s_2 and their adjoints carrying e_1 to e_k without touching 0."""
    if k >= 1:
        return W(*(["s_1"] * (k - 1)))
    return W(*(["s_1*"] * (-k - 1) + ["s_2*"]))


def verify_punctured(R: int = 10, seed: int = 0, tuples: int = 100) -> ExtensionReport:
    if R < 5:
        raise ValueError("verify_punctured needs R >= 5")
    rng = random.Random(seed)
    rep = ExtensionReport("punctured", {"radius": R, "tuples": tuples}, seed)
    X = PuncturedIntegers()
    t = build_puncture_fix()
    env = integer_environment(X).bind("t", t)
    w = build_window(X, R)
    t0 = time.perf_counter()

    dev = check_relation(W("s_1", "s_1*"), ONE - W("p_1"), w, env)
    rep.add("range-defect", "punctured:s1-s1star-is-1-minus-p1", dev == 0, deviation=dev)

    bad = []
    pairs = _pairs(w.points, 120, rng)
    for i, j in pairs:
        e = W(f"s_{i - 1}") * W("p_1") * W(f"s_{j - 1}*")
        if not _same(truncate(e, w, env), _unit(w, i, j)):
            bad.append((i, j))
    rep.add("matrix-units", "punctured:units-from-p1", not bad, sampled=len(pairs), failures=bad)

    bad = []
    for _ in range(tuples):
        k = rng.randint(1, 4)
        shifts = [rng.randint(-3, 3) for _ in range(k)]
        comp = Compose(X, tuple(Shift(X, i) for i in shifts))
        predicted = composition_domain_formula(shifts)
        actual = {p for p in w.points if comp.apply(p) is not None}
        expected = {p for p in w.points if p not in predicted}
        sub, _ = is_subtranslation(comp, Shift(X, sum(shifts)), w)
        if actual != expected or not sub:
            bad.append(shifts)
    rep.add("composition-domain", "punctured:composite-domain-formula", not bad, tuples=tuples, failures=bad)

    rows = []
    ok = True
    for n in range(1, min(5, (R - 1) // 2) + 1):
        tn = W(*(["t"] * n))
        sn = W(f"s_{n}")
        core = safe_core(w, n + 1)
        diff = (truncate(tn, w, env) - truncate(sn, w, env)).restrict_columns(core.points)
        exceptional = sorted({c for (_, c) in diff.entries})
        r = rank(diff)
        good = exceptional == list(range(-n, 0)) and r == len(exceptional)
        ok &= good
        rows.append({"n": n, "rank": r, "exceptional": exceptional})
    rep.add("puncture-fix", "punctured:t-power-compact-perturbation", ok, cases=rows)
    total = all(t.apply(p) is not None for p in w.points)
    rep.add("puncture-fix-total", "punctured:t-is-bijection", total and t.apply(-1) == 1)

    phi = conjugating_bijection()
    bad = [k for k in range(-R, R + 1) if phi(t.apply(phi.inverse_apply(k))) != k + 1]
    bij = all(phi.inverse_apply(phi(j)) == j for j in w.points)
    rep.add("conjugation", "punctured:conjugate-of-t-is-shift", not bad and bij, failures=bad)

    bad = []
    p1 = ONE - W("s_1", "s_1*")
    for i, j in pairs[:60]:
        e = punctured_path(i) * p1 * punctured_path(j).star()
        if not _same(truncate(e, w, env), _unit(w, i, j)):
            bad.append((i, j))
    rep.add("three-generators", "punctured:s0-s1-s2-generate", not bad, sampled=min(60, len(pairs)), failures=bad)
    rep.timing["total"] = time.perf_counter() - t0
    return rep


# --- coarsely disconnected subsets --------------------------------------------------


def maximal_chains(points, n: int) -> list[list[int]]:
    """Maximal runs x, x+n, x+2n, ... inside the set, of length >= 2."""
    pts = set(points)
    out = []
    for x in sorted(pts):
        if x - n in pts or x + n not in pts:
            continue
        run = [x]
        while run[-1] + n in pts:
            run.append(run[-1] + n)
        out.append(run)
    return out


def rank_one_generator(points, n: int):
    """(x, y, m) with (t_n)^m the rank one map e_x -> e_y, when the longest chain is unique."""
    chains = maximal_chains(points, n)
    if not chains:
        return None
    longest = max(len(c) for c in chains)
    top = [c for c in chains if len(c) == longest]
    if len(top) != 1:
        return None
    c = top[0]
    return c[0], c[-1], len(c) - 1


def verify_gapped(space: GappedSet | None = None, bound: int = 10_000, max_n: int = 20, seed: int = 0) -> ExtensionReport:
    space = space or GappedSet.squares(bound)
    rng = random.Random(seed)
    rep = ExtensionReport("gapped", {"set": str(space), "bound": bound, "max_n": max_n}, seed)
    env = integer_environment(space)
    w = build_window(space, bound)
    pts = list(w.points)
    t0 = time.perf_counter()

    gaps = [b - a for a, b in zip(pts, pts[1:])]
    if not gaps or max(gaps) <= max_n or gaps[-1] <= max_n:
        rep.add("gaps", "gapped:gaps-eventually-large", None, largest_gap=max(gaps, default=0))
        rep.notes.append("window too small: gaps never exceed the sampled shifts")
        return rep
    # past this point every gap exceeds max_n, so no shift up to max_n is defined there
    cut = max((pts[k] for k, g in enumerate(gaps) if g <= max_n), default=pts[0])
    rep.add("gaps", "gapped:gaps-eventually-large", True, last_small_gap_at=cut)

    rows = []
    ok = True
    ptset = set(pts)
    for n in range(1, max_n + 1):
        rpt = domain_in_window(Shift(space, n), w)
        predicted = sorted(x for x in pts if x + n in ptset)
        prof = rank_profile(W(f"t_{n}"), env, [bound // 4, bound // 2, bound])
        good = rpt.domain == predicted and all(x <= cut for x in rpt.domain)
        good &= prof.stabilized and prof.ranks[-1][1] == len(predicted)
        ok &= good
        rows.append({"n": n, "domain": rpt.domain, "ranks": prof.ranks})
    rep.add("finite-domains", "gapped:t_n-has-finite-domain", ok, cases=rows)

    rows = []
    ok = True
    found = False
    for n in range(1, max_n + 1):
        gen = rank_one_generator(pts, n)
        if gen is None:
            continue
        found = True
        x, y, m = gen
        m_t = truncate(W(*([f"t_{n}"] * m)), w, env)
        good = _same(m_t, _unit(w, y, x))
        # any e_a -> e_b through the chain
        for a, b in _pairs(pts[:40], 12, rng):
            e = W(f"t_{b - y}") * W(*([f"t_{n}"] * m)) * W(f"t_{x - a}")
            good &= _same(truncate(e, w, env), _unit(w, b, a))
        ok &= good
        rows.append({"n": n, "x": x, "y": y, "m": m})
    rep.add("rank-one-units", "gapped:rank-one-and-matrix-units", ok if found else None, cases=rows)
    rep.timing["total"] = time.perf_counter() - t0
    return rep


# --- primes ---------------------------------------------------------------------------


def polignac_table(N: int, max_gap: int) -> list[dict]:
    P = Primes()
    w = build_window(P, N)
    rows = []
    for n in range(2, max_gap + 1, 2):
        rpt = domain_in_window(Shift(P, n), w)
        largest = (rpt.domain[-1], rpt.image[-1]) if rpt.domain else None
        rows.append({"n": n, "count": len(rpt.domain), "largest_pair": largest})
    return rows


def polignac_csv(rows) -> str:
    lines = ["n,count,largest_pair"]
    for r in rows:
        pair = "" if r["largest_pair"] is None else "{}-{}".format(*r["largest_pair"])
        lines.append(f"{r['n']},{r['count']},{pair}")
    return "\n".join(lines) + "\n"


def verify_primes(N: int = 10_000, max_gap: int = 20, seed: int = 0, samples: int = 20) -> ExtensionReport:
    if N < 10:
        raise ValueError("verify_primes needs N >= 10")
    rng = random.Random(seed)
    rep = ExtensionReport("primes", {"bound": N, "max_gap": max_gap}, seed)
    P = Primes()
    env = integer_environment(P)
    w = build_window(P, N)
    t0 = time.perf_counter()

    dom1 = domain_in_window(Shift(P, 1), w).domain
    proj = truncate(W("t_1*", "t_1"), w, env)
    rep.add(
        "even-prime-projection",
        "primes:t1star-t1-rank-one",
        dom1 == [2] and _same(proj, _unit(w, 2, 2)) and rank(proj) == 1,
        domain=dom1,
    )

    table = polignac_table(N, max_gap)
    rep.tables["polignac"] = table
    rep.add("gap-table", "primes:polignac-evidence", True, rows=len(table))

    bad = []
    p2 = W("t_1*", "t_1")
    pairs = _pairs(w.points[:200], samples, rng)
    for p, q in pairs:
        e = W(f"t_{q - 2}") * p2 * W(f"t_{p - 2}*")
        if not _same(truncate(e, w, env), _unit(w, q, p)):
            bad.append((p, q))
    rep.add("matrix-units", "primes:translations-act-transitively", not bad, sampled=len(pairs), failures=bad)
    rep.notes.append(
        "counts are finite-window evidence only; whether any t_n is non-compact "
        "cannot be decided from finite data"
    )
    rep.timing["total"] = time.perf_counter() - t0
    return rep


# --- positive cone and augmented tree ----------------------------------------------------


def _gens(rank_n):
    return [ALPHABET[g] for g in range(rank_n)]


def cuntz_relations(space, env, window, with_defect: bool) -> dict:
    """Deviation of every isometry / orthogonality / range-sum relation."""
    gens = _gens(space.rank)
    out = {}
    for x in gens:
        for y in gens:
            rhs = ONE if x == y else OperatorExpr()
            out[f"{x}*{y}"] = check_relation(W(x + "*", y), rhs, window, env)
    range_sum = sum((W(x, x + "*") for x in gens), OperatorExpr())
    rhs = ONE - W("p_e") if with_defect else ONE
    out["range-sum"] = check_relation(range_sum, rhs, window, env)
    return out


def _embed(m: WindowMatrix, window) -> WindowMatrix:
    return WindowMatrix(window, dict(m.entries))


def verify_cuntz(n: int = 2, R: int = 6, seed: int = 0, word_length: int = 2, extra_words: int = 20) -> ExtensionReport:
    if n < 2 or R < 3:
        raise ValueError("verify_cuntz needs rank >= 2 and R >= 3")
    rng = random.Random(seed)
    rep = ExtensionReport("cuntz", {"rank": n, "radius": R}, seed)
    X, Y = PositiveCone(n), AugmentedTree(n)
    envX, envY = tree_environment(X), tree_environment(Y)
    wX, wY = build_window(X, R), build_window(Y, R)
    gens = _gens(n)

    with _Timer(rep, "relations"):
        devX = cuntz_relations(X, envX, wX, with_defect=True)
        rep.add("cone-relations", "cuntz:cone-isometries-with-defect", all(v == 0 for v in devX.values()), deviations=devX)
        devY = cuntz_relations(Y, envY, wY, with_defect=False)
        rep.add("tree-relations", "cuntz:tree-is-cuntz", all(v == 0 for v in devY.values()), deviations=devY)
        if n >= 3:
            # the first two isometries alone satisfy the cone relations but not the range sum
            two = W(gens[0], gens[0] + "*") + W(gens[1], gens[1] + "*")
            d = check_relation(two, ONE, wY, envY)
            rep.add("two-of-n", "cuntz:E2-inside-On", d != 0 and all(devY[f"{x}*{y}"] == 0 for x in gens[:2] for y in gens[:2]), range_sum_deviation=d)

    with _Timer(rep, "matrix_units"):
        pe = ONE - sum((W(x, x + "*") for x in gens), OperatorExpr())
        core = safe_core(wX, R // 2)
        bad = []
        pairs = _pairs(core.points, 60, rng)
        for u, v in pairs:
            e = OperatorExpr({word_operator(u): 1}) * pe * OperatorExpr({word_operator(v): 1}).star()
            if not _same(truncate(e, wX, envX), _unit(wX, u, v)):
                bad.append((u, v))
        rep.add("cone-matrix-units", "cuntz:units-from-pe", not bad, sampled=len(pairs), failures=bad)

    with _Timer(rep, "truncation"):
        radii = [max(1, R - 2), max(1, R - 1), R]
        rows = []
        ok = True
        for g in gens:
            for sym in (g, g + "*"):
                prof = rank_profile(W("P", sym) - W(sym, "P"), envY, radii)
                m = truncate(W("P", sym) - W(sym, "P"), wY, envY)
                support = sorted({c for (_, c) in m.entries}, key=Word.sort_key)
                vals = [r for _, r in prof.ranks]
                ok &= prof.stabilized and vals[-1] <= 1
                rows.append({"generator": sym, "ranks": prof.ranks, "support": support})
        rep.add("projection-commutator", "cuntz:P-y-minus-y-P-single-vector", ok, cases=rows)

        symbols = [GenSymbol(g, s) for g in gens for s in (False, True)]
        words = [w for k in range(1, word_length + 1) for w in itertools.product(symbols, repeat=k)]
        longer = list(itertools.product(symbols, repeat=word_length + 1))
        words += rng.sample(longer, min(extra_words, len(longer)))
        rows = []
        ok = True
        for word in words:
            ranks = []
            for r in radii:
                wy, wx = build_window(Y, r), build_window(X, r)
                e = OperatorExpr({word: 1})
                compressed = truncate(W("P") * e * W("P"), wy, envY)
                on_cone = _embed(truncate(e, wx, envX), wy)
                ranks.append(rank(compressed - on_cone))
            ok &= len(set(ranks)) == 1 and ranks[0] <= len(word)
            rows.append({"word": " ".join(map(str, word)), "ranks": ranks})
        rep.add("compression-vs-cone", "cuntz:PyP-compact-perturbation", ok, cases=rows)

    with _Timer(rep, "independence"):
        qr = quasi_reduced_words(gens, 3)
        # a size-3 word needs points of length 3 inside the safe core
        wI = wX if R >= 6 else build_window(X, 6)
        indep = independence_gram(qr, wI, envX)
        rep.add("quasi-reduced-independence", "cuntz:quasi-reduced-independent", indep, words=len(qr))
        bad = [w for w in qr if not annihilated_below(w, wI, envX, word_type(w))]
        rep.add("type-vanishing", "cuntz:type-l-kills-short-words", not bad, failures=[" ".join(map(str, w)) for w in bad])
    return rep
