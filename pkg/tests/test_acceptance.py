"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import itertools
import json
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from oracles import boundary_of_simplex, invariants_from_minors, simplex  # noqa: E402

from qdg import qv  # noqa: E402
from qdg.complexes import (  # noqa: E402
    ComplexVertex,
    abstract_descending_link,
    abstract_link,
    cover_by_skeleton_neighborhoods,
    full_subcomplex_check,
    intersect_complexes,
    intersect_links,
    is_flag,
    is_isomorphism,
    link_from_diagrams,
)
from qdg.config import AcceptanceConfig  # noqa: E402
from qdg.diagram import canonical_code, dumps, identity_diagram, is_annular, is_planar, peel_exhaustive  # noqa: E402
from qdg.figures import fixture_text, load_fixture  # noqa: E402
from qdg.generators import enumerate_small, random_diagram  # noqa: E402
from qdg.presentation import QV_BASE, V_BASE  # noqa: E402
from qdg.rewriting import reduce  # noqa: E402
from qdg.topology import (  # noqa: E402
    boundary_matrix,
    check_n_connected,
    connected_components,
    homology,
    smith_normal_form,
)

CFG = AcceptanceConfig()
BUDGET_S = {1: 30, 2: 60, 3: 1, 4: 30, 5: 30, 6: 5, 7: 600, 8: 60, 9: 60, 10: 120, 11: 10}


@functools.lru_cache(maxsize=None)
def link(family: str, k: int, l: int, max_dim: int):
    return abstract_descending_link(k, l, family, max_dim=max_dim)


# -- criteria ---------------------------------------------------------------------------


def check_1():
    c = CFG.confluence
    bad = with_dipoles = 0
    for i in range(c.diagrams):
        rng = random.Random(c.seed + i)
        d = random_diagram(rng, c.max_transistors, QV_BASE, "x", c.dipole_rate)
        with_dipoles += len(d.transistors) != len(reduce(d).transistors)
        codes = {canonical_code(reduce(d, random.Random(rng.random()))) for _ in range(c.orders)}
        bad += len(codes) != 1
    return bad == 0, (f"{c.diagrams} diagrams x {c.orders} removal orders, {bad} disagreements "
                      f"({with_dipoles} had dipoles)")


def check_2():
    c = CFG.group_laws
    e = qv.identity()
    addrs = qv.addresses(c.eval_depth)
    fails = {"assoc": 0, "inverse": 0, "eval": 0}
    for i in range(c.triples):
        s = c.seed + 3 * i
        g, h, k = (qv.random_element(s + j, c.caret_budget) for j in range(3))
        fails["assoc"] += (g * h) * k != g * (h * k)
        fails["inverse"] += g * qv.inverse(g) != e
        gh = g * h
        fails["eval"] += any(qv.evaluate(gh, v) != qv.evaluate(g, qv.evaluate(h, v)) for v in addrs)
    ok = not any(fails.values())
    return ok, (f"{c.triples} triples at caret budget {c.caret_budget}, {len(addrs)} addresses; "
                f"failures {fails}")


def check_3():
    tp = load_fixture("figure3_treepair")
    g = qv.GroupElement.of(load_fixture("figure4"))
    fwd = dumps(qv.treepair_to_diagram(tp).diagram) == fixture_text("figure4")
    back = qv.diagram_to_treepair(g) == tp
    back_text = json.dumps(qv.diagram_to_treepair(g).to_json(), sort_keys=True, indent=1) + "\n"
    back = back and back_text == fixture_text("figure3_treepair")
    evals = [str(g("010")) == "0110", str(g("1")) == "ε", str(g("ε")) == "0"]
    tails = ["".join(p) for n in range(5) for p in itertools.product("01", repeat=n)]
    evals.append(all(g("11" + s).bits == "1" + s for s in tails))
    ok = fwd and back and all(evals)
    return ok, (f"tree pair -> diagram bit-exact {fwd}, diagram -> tree pair bit-exact {back}, "
                f"evaluations {sum(evals)}/4 (11s -> 1s over {len(tails)} tails)")


def check_4():
    c = CFG.kernel
    hom_fail = 0
    for i in range(c.pairs):
        g = qv.random_element(c.seed + 2 * i, c.caret_budget)
        h = qv.random_element(c.seed + 2 * i + 1, c.caret_budget)
        lhs = qv.project_to_V(g * h)
        rhs = qv.project_to_V(g) * qv.project_to_V(h)
        hom_fail += lhs.code != rhs.code
    ker_fail = supp_fail = moved = 0
    for i in range(c.kernel_elements):
        g = qv.kernel_element(c.seed + 1000 + i, 1 + i % c.kernel_carets)
        ker_fail += not qv.is_kernel_element(g)
        depth = qv.diagram_to_treepair(g).depth()
        supports = [qv.support(g, depth + j) for j in range(c.support_slack + 1)]
        supp_fail += any(s != supports[0] for s in supports)
        moved += bool(supports[0])
    ok = hom_fail == ker_fail == supp_fail == 0
    return ok, (f"pi homomorphism on {c.pairs} pairs: {hom_fail} failures; {c.kernel_elements} kernel "
                f"elements: {ker_fail} off-kernel, {supp_fail} unstable supports ({moved} nontrivial)")


def check_5():
    iso = total = 0
    for k in range(1, CFG.link_k_max + 1):
        for l in range(0, CFG.link_l_max + 1):
            L = link_from_diagrams(ComplexVertex.of(identity_diagram(QV_BASE, "x" * k + "a" * l)))
            total += 1
            iso += L.isomorphic and is_isomorphism(L.complex, L.abstract, L.to_abstract)
    flags = full = checked = 0
    for k in range(1, 7):
        for l in range(0, 4):
            qvl = abstract_descending_link(k, l, "QV")
            flags += is_flag(abstract_link(k, l)) + is_flag(qvl)
            for fam in ("QF", "QT"):
                K = abstract_descending_link(k, l, fam)
                flags += is_flag(K)
                full += full_subcomplex_check(K, qvl)
                checked += 1
    ok = iso == total and flags == 2 * checked and full == checked
    return ok, (f"diagram links isomorphic {iso}/{total}; flag {flags}/{2 * checked}; "
                f"QF/QT full in QV {full}/{checked}")


def check_6():
    comps = {f: connected_components(link(f, 5, 3, 1)) for f in ("QF", "QT", "QV")}
    return all(c == 1 for c in comps.values()), f"components {comps}"


def check_7():
    out = []
    ok = True
    for fam in ("QF", "QT"):
        K = link(fam, 8, 5, 2)
        rep = check_n_connected(K, 1, "strict", "snf", CFG.tietze_budget)
        good = (rep.verdict == "pass" and rep.components == 1 and rep.betti == [0, 0]
                and rep.torsion[1] == [] and rep.pi1 == "trivial")
        ok &= good
        out.append(f"{fam}(8,5) f={K.f_vector()} H1=0 pi1={rep.pi1} "
                   f"[{rep.details.get('tietze_moves')} moves] {'pass' if good else 'FAIL'}")
    K = link("QV", 9, 5, 2)
    rep = check_n_connected(K, 1, "homology-only", "modp")
    d2 = rep.details["d2"]
    good = (rep.verdict == "pass" and rep.components == 1 and rep.betti[1] == 0
            and d2["primes_agree"] and set(d2["rank_mod_p"]) == {d2["expected_rank"]}
            and rep.caveat is not None)
    ok &= good
    out.append(f"QV(9,5) f={K.f_vector()} rank d2 mod {d2['primes']} = {d2['rank_mod_p']} "
               f"(expected {d2['expected_rank']}), integer unit pivots {d2['integer_unit_pivots']}, "
               f"pi1 {rep.pi1} with caveat, {'pass' if good else 'FAIL'}")
    return ok, "; ".join(out)


def _random_vertex_set(rng, K, max_size):
    size = rng.randint(1, max_size)
    return rng.sample(K.vertex_labels, size)


def check_8():
    c = CFG.intersections
    rng = random.Random(c.seed)
    parts = []
    ok = True
    for fam, k, l in c.targets:
        K = link(fam, k, l, 2)
        iso = exact = runs = 0
        for _ in range(c.samples):
            S = _random_vertex_set(rng, K, c.max_size)
            r = intersect_links(K, S)
            rec = r.recognition
            iso += r.isomorphic
            used_colors = len({v[2] for v in S})
            good_l = rec.l_prime == l - used_colors >= l - len(S)
            if fam == "QV":
                exact += rec.exact_bookkeeping and rec.k_prime >= k - 2 * len(S) and good_l
            elif rec.family == "QF":
                exact += rec.k_prime >= k - 3 * len(S) and good_l
            else:
                runs += 1
                exact += sum(rec.runs) == rec.slot_count and good_l
        ok &= iso == exact == c.samples
        parts.append(f"{fam}({k},{l}): isomorphic {iso}/{c.samples}, bookkeeping {exact}/{c.samples}"
                     + (f" ({runs} split into several runs)" if fam == "QF" else ""))
    # intersections of t cover members are QF links with k' >= k - 3
    members, cert = cover_by_skeleton_neighborhoods(8, 5, "QF", 1)
    seen = good = 0
    for t in (2, 3):
        for fam in itertools.combinations(range(len(members)), t):
            common = intersect_complexes([members[i] for i in fam])
            if not common.n_vertices:
                continue
            seen += 1
            centers = [cert.centers[i] for i in fam]
            m0 = max(c[1] for c in centers) + 1
            kp = 8 - m0 + 1
            lp = 5 - len({c[2] for c in centers})
            model = abstract_descending_link(kp, lp, "QF", max_dim=3)
            shift = m0 - 1
            free = sorted(set(range(1, 6)) - {c[2] for c in centers})
            relab = {(m + shift, m + 1 + shift, free[g - 1]) for m, _, g in model.vertex_labels}
            good += set(common.vertex_labels) == relab and kp >= 8 - 3 and lp >= 5 - t
    ok &= good == seen
    parts.append(f"QF cover intersections: {good}/{seen} equal QF(k',l') with k' >= k-3")
    return ok, "; ".join(parts)


def check_9():
    parts = []
    ok = True
    for n, (k, l) in ((0, (5, 3)), (1, (8, 5))):
        members, cert = cover_by_skeleton_neighborhoods(k, l, "QF", n)
        ok &= cert.ok
        parts.append(f"QF({k},{l}) n={n}: covered {cert.ok} ({cert.simplices_checked} simplices)")
    members, cert = cover_by_skeleton_neighborhoods(8, 5, "QF", 1)
    vsets = [set(M.vertex_labels) for M in members]
    fams = list(itertools.combinations(range(len(members)), 1 + 3))
    meet = sum(bool(set.intersection(*(vsets[i] for i in f))) for f in fams)
    ok &= meet == len(fams)
    parts.append(f"4-subfamilies with common vertex {meet}/{len(fams)}")
    _, bad = cover_by_skeleton_neighborhoods(8, 5, "QF", 1, centers=[(2, 3, b) for b in range(1, 6)])
    ok &= not bad.ok
    parts.append(f"m=2-only cover rejected with witness {bad.witness}")
    return ok, "; ".join(parts)


def check_10():
    c = CFG.membership
    disagree = qf = qt = 0
    for i in range(c.elements):
        order = ("any", "order", "cyclic")[i % 3]
        g = qv.random_element(c.seed + i, c.caret_budget, leaf_order=order)
        a, b = qv.member_QF(g), qv.member_QT(g)
        disagree += (a != qv.member_QF_by_planarity(g)) + (b != qv.member_QT_by_annularity(g))
        qf += a
        qt += b
    n = mism = 0
    for d in enumerate_small(V_BASE, c.oracle_transistors, c.oracle_tops, c.full_perm_limit,
                             c.sampled_perms):
        n += 1
        mism += (is_planar(d) != peel_exhaustive(d, False)) + (is_annular(d) != peel_exhaustive(d, True))
    ok = disagree == 0 and mism == 0
    return ok, (f"{c.elements} elements ({qf} in QF, {qt} in QT): {disagree} disagreements; "
                f"peeling oracle on {n} diagrams: {mism} mismatches")


def check_11():
    c = CFG.homology
    complexes = [link(f, k, l, 3) for f in ("QF", "QT", "QV") for k in range(1, 8) for l in range(5)]
    complexes += [abstract_link(k, l, 3) for k in range(1, 6) for l in range(4)]
    complexes += [link("QF", 8, 5, 2), link("QT", 8, 5, 2), link("QV", 9, 5, 2)]
    complexes += [boundary_of_simplex(n) for n in (2, 3, 4)] + [simplex(4)]
    dd = sum(
        (boundary_matrix(K, d - 1) @ boundary_matrix(K, d)).is_zero()
        for K in complexes for d in range(2, K.dim + 1)
    )
    total = sum(max(0, K.dim - 1) for K in complexes)
    golden = [
        homology(boundary_of_simplex(2), 1, "snf").betti == [0, 1],
        homology(boundary_of_simplex(3), 2, "snf").betti == [0, 0, 1],
        homology(simplex(3), 2, "snf").betti == [0, 0, 0],
    ]
    rng = random.Random(c.seed)
    snf_bad = 0
    for _ in range(c.matrices):
        r, s = rng.randint(1, c.max_size), rng.randint(1, c.max_size)
        m = [[rng.randint(-c.entry_range, c.entry_range) for _ in range(s)] for _ in range(r)]
        inv = smith_normal_form(m)
        snf_bad += inv != invariants_from_minors(m) or any(b % a for a, b in zip(inv, inv[1:]))
    ok = dd == total and all(golden) and snf_bad == 0
    return ok, (f"d^2 = 0 on {dd}/{total} boundary pairs of {len(complexes)} complexes; "
                f"golden {sum(golden)}/3; SNF oracle failures {snf_bad}/{c.matrices}")


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 12)}


def run_check(i: int) -> tuple[bool, str]:
    t0 = time.perf_counter()
    ok, detail = CHECKS[i]()
    dt = time.perf_counter() - t0
    over = "" if dt <= BUDGET_S[i] else f" OVER BUDGET {BUDGET_S[i]}s"
    line = f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{dt:.1f}s{over}]"
    return ok, line


@pytest.fixture
def report(capsys):
    def emit(line):
        with capsys.disabled():
            print("\n" + line)
    return emit


@pytest.mark.slow
@pytest.mark.parametrize("i", list(CHECKS))
def test_criterion(i, report):
    ok, line = run_check(i)
    report(line)
    assert ok, line


if __name__ == "__main__":
    results = [run_check(i) for i in CHECKS]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
