"""Acceptance criteria AC-1 .. AC-10.

Each criterion is a plain function returning ``(ok, detail)``.  Under pytest
every criterion is one test with a 60 second budget and the conftest prints
one PASS/FAIL line per criterion; run this file directly for the same lines
without pytest.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction

import sympy as sp

from anmirror import cli, fs_ring, paths, syz_base, wrapped
from anmirror.fs_ring import Monomial
from anmirror.report import RunConfig

BUDGET = 60.0


def ac_1():
    rng = random.Random(2024)
    for n in (1, 2, 3, 4):
        a = tuple(Fraction(i + 1) for i in range(n + 1))
        for _ in range(50):
            path = paths.random_strongly_admissible_path(a, rng)
            wc = paths.winding_by_crossings(path, a)
            if wc != paths.winding_by_lift(path, a):
                return False, f"winding mismatch at n={n}"
            if paths.syz_transform(path, a).degrees != tuple(-x for x in wc):
                return False, f"transform is not the negated winding at n={n}"
        if any(paths.syz_transform(paths.gamma0(a), a).degrees):
            return False, f"straight ray is not trivial at n={n}"
    return True, "200 random paths"


def ac_2():
    u, w = syz_base.u, syz_base.w
    if sp.simplify(syz_base.monodromy(False).images[0] - u * w) != 0:
        return False, "uncorrected loop"
    if sp.simplify(syz_base.monodromy(True).images[0] - u) != 0:
        return False, "corrected loop"
    triples = 0
    for n in (1, 2, 3, 4):
        triples += syz_base.glued_cover_relations(n).cocycle_checked
    for n in (1, 2, 3):
        if not syz_base.match_resolution_charts(n).ok:
            return False, f"chart match n={n}"
    return True, f"{triples} cocycle triples"


def ac_3():
    for n in (1, 2, 3, 4):
        eps = fs_ring.default_epsilon(n, 4)
        for e in (eps, eps / 2):
            bad = fs_ring.count_law_mismatches(n, 4, e)
            if bad:
                return False, f"n={n} eps={e}: {bad[:2]}"
    return True, "n<=4, k<=4, eps and eps/2"


def ac_4():
    for n in (1, 2, 3):
        rep = fs_ring.verify_ring_isom(n, 3)
        if not rep.ok:
            return False, f"n={n}: {rep}"
    for n in (1, 2):
        table, _ = fs_ring.ring_A_structure(n, 3)
        if fs_ring.check_associativity(table):
            return False, f"associativity n={n}"
    return True, "n<=3, w<=3"


def ac_5():
    summary = []
    for n in (1, 2, 3):
        rep = fs_ring.verify_ring_isom(n, 3)
        if rep.degree_mismatches:
            return False, f"n={n}: {rep.degree_mismatches[:2]}"
        summary.append(f"n={n}: min {rep.min_matches}, max {rep.max_matches}/{rep.max_cases}")
    return True, "resolved as min; " + "; ".join(summary)


def ac_6():
    for n in (1, 2, 3):
        for sign in (1, -1):
            rep = wrapped.verify_psi_ring_isom(n, 3, sign)
            if not rep.ok:
                return False, f"n={n} sign={sign}"
    xy = Monomial(1, 1)
    total = (wrapped.psi(wrapped.WrappedGenerator(0, 0, 1, xy, 0, 1))
             + wrapped.psi(wrapped.WrappedGenerator(0, 0, 1, xy, 1, 1)))
    if total.as_dict() != {xy: 1}:
        return False, f"worked identity gave {total}"
    return True, "n<=3, w<=3, both signs"


def ac_7():
    counts = {}
    for n in (1, 2, 3):
        for rec in wrapped.compare_with_mirror_side(n, 2, 3, "delta"):
            counts[rec.status] = counts.get(rec.status, 0) + 1
            if rec.status == "fail":
                return False, f"n={n} {rec}"
            if rec.status == "pass" and not rec.algebraic_certified:
                return False, "uncertified level reported as pass"
    return counts.get("fail", 0) == 0, str(counts)


def ac_8():
    worst = [0.0, 0.0, 0.0]
    for n in (1, 2, 3):
        rep = paths.check_section(tuple(range(1, n + 2)), size=21)
        worst = [max(worst[0], rep.max_residency), max(worst[1], rep.max_projection_error),
                 max(worst[2], rep.max_pullback)]
    ok = worst[0] <= 1e-12 and worst[1] <= 1e-12 and worst[2] <= 1e-6
    return ok, f"residency {worst[0]:.1e}, projection {worst[1]:.1e}, pullback {worst[2]:.1e}"


def ac_9():
    for n in (1, 2, 3, 4):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if fs_ring.dual_cycle_pairing(i, j, n) != int(i == j):
                    return False, f"n={n} ({i}, {j})"
    return True, "n<=4"


def ac_10():
    cfg = RunConfig("verify", n=1, w_max=2, seed=7)
    first = cli.cmd_verify("all", cfg).render()
    second = cli.cmd_verify("all", cfg).render()
    if first != second:
        return False, "in-process reports differ"
    cmd = [sys.executable, "-m", "anmirror", "verify", "fs", "--n", "1", "--wmax", "2", "--seed", "7"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    return outs[0] == outs[1], "byte-identical reports"


CRITERIA = [(f"AC-{k}", globals()[f"ac_{k}"]) for k in range(1, 11)]


def _timed(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


def _check(fn):
    ok, detail, elapsed = _timed(fn)
    assert ok, detail
    assert elapsed < BUDGET, f"took {elapsed:.1f}s"


def test_ac1_winding_and_transform():
    _check(ac_1)


def test_ac2_gluing_and_monodromy():
    _check(ac_2)


def test_ac3_count_law():
    _check(ac_3)


def test_ac4_thimble_ring():
    _check(ac_4)


def test_ac5_marked_points():
    _check(ac_5)


def test_ac6_psi_isomorphism():
    _check(ac_6)


def test_ac7_filtered_dimensions():
    _check(ac_7)


def test_ac8_section():
    _check(ac_8)


def test_ac9_dual_cycles():
    _check(ac_9)


def test_ac10_determinism():
    _check(ac_10)


if __name__ == "__main__":
    failed = 0
    for label, fn in CRITERIA:
        try:
            ok, detail, elapsed = _timed(fn)
        except Exception as exc:  # report and continue with the next criterion
            ok, detail, elapsed = False, repr(exc), 0.0
        ok = ok and elapsed < BUDGET
        failed += not ok
        print(f"{label}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {detail}")
    sys.exit(1 if failed else 0)
