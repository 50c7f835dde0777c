"""Acceptance gate: one test per numbered criterion, each printing a
single pass line with its elapsed time against the stated budget.

Criterion 11 (the 2^32 coverage bitmap for (12,2,(7,5))) is optional
and gated: it needs multiple hours and >= 512 MB for the bitmap pass,
so it only runs when REGORB_HUGE=1 is set, mirroring the CLI's --huge.
"""

import itertools
import math
import os
import re
import time

import numpy as np
import pytest

from regorb import (boundlib, cli, gfplin, graphcert, orbitengine, permsym,
                    repkit, spechtmod, tables)
from regorb.orbitengine import CoverageBudget

MEDIUM_PAIRS = ((7, 2), (8, 2), (9, 2), (10, 2))


def _passline(num: int, title: str, t0: float, budget_s: float, detail: str = ""):
    elapsed = time.monotonic() - t0
    assert elapsed < budget_s, f"criterion {num} exceeded budget: {elapsed:.1f}s >= {budget_s}s"
    tail = f" -- {detail}" if detail else ""
    print(f"[PASS] criterion {num:02d} {title}: {elapsed:.1f}s < {budget_s:.0f}s{tail}")


def _scalar_subgroup(a: int, p: int) -> list[int]:
    lam = tables.scalar_of_order(a, p)
    return sorted({pow(lam, k, p) for k in range(a)})


def test_criterion_01_dimension_table():
    """Every module dimension (and A_n split) in the embedded rows, n <= 10."""
    t0 = time.monotonic()
    checked = 0
    for row in tables.TABLE_MODULES:
        if row.n > 10:
            continue
        rep = spechtmod.build_dmu(row.n, row.p, row.mu)
        assert rep.dim == row.dim_sn, (row.mu, rep.dim, row.dim_sn)
        pieces = repkit.an_pieces(rep)
        assert len(pieces) == row.an_pieces, (row.mu, len(pieces))
        for piece in pieces:
            assert piece.dim == row.dim_an, (row.mu, piece.dim, row.dim_an)
        checked += 1 + len(pieces)
    # spot anchors stated explicitly in the contract
    assert spechtmod.dmu_dim(5, 2, (3, 2)) == 4
    assert spechtmod.dmu_dim(6, 3, (4, 1, 1)) == 6
    assert spechtmod.dmu_dim(6, 5, (3, 3)) == 5
    assert spechtmod.dmu_dim(7, 2, (5, 2)) == 14
    assert spechtmod.dmu_dim(8, 2, (6, 2)) == 14
    assert [p.dim for p in repkit.an_pieces(spechtmod.build_dmu(9, 2, (5, 3, 1)))] == [20, 20]
    _passline(1, "dimension table", t0, 300, f"{checked} modules")


def test_criterion_02_verdict_replay_small(capsys):
    """verify-tables --max-n 6 replays every small-row verdict."""
    t0 = time.monotonic()
    code = cli.main(["verify-tables", "--max-n", "6"])
    out = capsys.readouterr().out
    assert code == 0
    assert "all verified: 25 cells run, 5 skipped" in out
    assert "MISMATCH" not in out

    def line_with(fragment: str) -> str:
        hits = [ln for ln in out.splitlines() if fragment in ln]
        assert len(hits) == 1, (fragment, hits)
        return hits[0]

    # scalar sensitivity: adjoining scalars flips these cells
    assert ": Regular" in line_with("mu=3x1x1 An  ")
    assert ": NoRegular" in line_with("mu=3x1x1 An*C2")
    assert ": Regular" in line_with("mu=3x3 An  ")
    for frag in ("mu=3x3 An*C2", "mu=3x3 An*C4", "mu=3x3 Sn  ",
                 "mu=3x3 Sn*C2", "mu=3x3 Sn*C4"):
        assert ": NoRegular" in line_with(frag)
    with capsys.disabled():
        _passline(2, "verdict replay n<=6", t0, 600)


def test_criterion_03_verdict_replay_medium():
    """Listed medium rows are NoRegular; >= 3 witnessed complements per (n,p).

    The complement dimension cap is 48: it is the least cap admitting
    three witnessed non-listed Regular cells at every medium pair (at
    cap 24 the (8,2), (9,2) and (10,2) pairs have at most two, the
    complete dimension lists leave nothing smaller to use).
    """
    t0 = time.monotonic()
    listed = {(7, 2, (4, 3)), (7, 2, (5, 2)), (8, 2, (5, 3)), (8, 2, (6, 2)),
              (9, 2, (5, 4)), (9, 2, (5, 3, 1)), (10, 2, (6, 4))}
    jobs = tables.jobs_for(10)
    noreg = [j for j in jobs if j.expected == "NoRegular"
             and (j.n, j.p, j.mu) in listed]
    assert len(noreg) == 12  # every listed cell, both kinds where tabled
    for job in noreg:
        out = tables.run_table_job(job)
        assert out.ok, out.line()
        for d in out.detail:
            assert ("Pigeonhole" in d) or ("FullCoverage" in d), out.line()

    regular_pieces = {pair: [] for pair in MEDIUM_PAIRS}
    for job in jobs:
        if job.expected != "Regular" or (job.n, job.p) not in regular_pieces:
            continue
        out = tables.run_table_job(job)  # verifies witness stabilizer == 1
        assert out.ok, out.line()
        for d in out.detail:
            m = re.search(r": Regular \(RegularWitness, dim (\d+)\)", d)
            assert m, d
            assert int(m.group(1)) <= 48, d
            regular_pieces[(job.n, job.p)].append(d)
    counts = {pair: len(v) for pair, v in regular_pieces.items()}
    assert all(c >= 3 for c in counts.values()), counts
    _passline(3, "verdict replay medium", t0, 7200, f"complements {counts}")


def test_criterion_04_fully_deleted_module_law():
    """Exact law for 5 <= n <= 12, p <= n: S_n-side never regular (all
    scalar subgroups, both sign twists); A_n-side regular iff p = n-1,
    with the explicit witness verified by exact orbit size |A_n|."""
    t0 = time.monotonic()
    law_cells = 0
    for n in range(5, 13):
        for p in (q for q in range(2, n + 1) if gfplin.is_prime(q)):
            sn_order = math.factorial(n)
            for a in tables.divisors(p - 1):
                scalars = _scalar_subgroup(a, p)
                for signed in (False, True):
                    law = orbitengine.fdpm_law_verdict(
                        n, p, "Sn", scalars, signed, sn_order * a)
                    assert not law.regular, (n, p, a, signed)
                    assert law.min_stab >= 2
                    law_cells += 1
            an_law = orbitengine.fdpm_law_verdict(
                n, p, "An", [1], False, sn_order // 2)
            assert an_law.regular == (p == n - 1), (n, p)
            law_cells += 1

    # the three regular cells carry the explicit witness (1,..,p-1,0,0)
    for n, p in ((6, 5), (8, 7), (12, 11)):
        witness = np.array(list(range(1, p)) + [0, 0], dtype=np.int64)
        assert witness.sum() % p == 0
        stab = orbitengine.fdpm_stab_order_of_values(witness, n, p, "An", [1], False)
        assert stab == 1
        an_order = math.factorial(n) // 2
        predicted = orbitengine.fdpm_tuple_orbit_size(witness, n, "An")
        assert predicted == an_order, (n, p)
        if n <= 8:  # exact BFS enumeration where the orbit fits in memory
            (rep,) = repkit.an_pieces(spechtmod.build_fdpm(n, p))
            coords = rep.fdpm_lift.compress(witness[None, :])[0]
            assert orbitengine.orbit_size(rep, coords,
                                          CoverageBudget(max_orbit=10**8)) == an_order
    # |A_12| = 239'500'800 exceeds the enumeration budget of this host;
    # the witness there is verified by the exact tuple-orbit count above,
    # an independent derivation cross-checked against BFS at n in {6, 8}.
    _passline(4, "deleted-module law", t0, 1800, f"{law_cells} law cells")


def test_criterion_05_bound_anchors():
    t0 = time.monotonic()
    assert boundlib.g_floor(2, 20) == 620
    assert boundlib.g_floor(2, 21) == 697
    assert boundlib.g_floor(3, 19) == 352
    assert boundlib.h_spin_floor(3, 8) == 38
    assert boundlib.h_spin_floor(11, 17) == 124
    assert [boundlib.f_p(2, n) for n in (15, 17, 19, 21)] == [127, 253, 505, 930]
    assert [boundlib.f_p(3, n) for n in (11, 12, 13, 14, 15)] == [54, 88, 107, 175, 213]
    for n in range(15, 21):
        assert 2 * boundlib.f_p(2, n) > boundlib.f_p(2, n + 2)
    for n in range(11, 14):
        assert 2 * boundlib.f_p(3, n) > boundlib.f_p(3, n + 2)
    _passline(5, "bound anchors", t0, 1)


def test_criterion_06_delta_cross_check():
    t0 = time.monotonic()
    assert boundlib.delta_cover("2An", 8, 3) == 8
    assert boundlib.delta_cover("2Sn", 8, 5) == 8
    assert boundlib.delta_cover("2Sn", 10, 3) == 16
    assert boundlib.delta_cover("2An", 11, 3) == 16
    assert boundlib.delta_cover("2An", 12, 3) == 16
    _passline(6, "spin dimension delta", t0, 1)


def test_criterion_07_graph_certificates():
    """certify_regular + zero obligation-sample violations on every cell.

    Hook needs (n-2,1,1) to be p-regular, which fails at p = 2, so hook
    cells run for p in {3,5}; n = 12 runs for odd p only (the explicit
    vector needs 1 + 1 != 0).
    """
    t0 = time.monotonic()
    cells = 0
    for n in range(12, 21):
        for shape in (graphcert.TWO_ROW, graphcert.HOOK):
            for p in (2, 3, 5):
                if p == 2 and (n == 12 or shape == graphcert.HOOK):
                    continue
                s = graphcert.build_regular_candidate(n, shape, p)
                report = graphcert.certify_regular(s, shape)
                assert report.passed, (n, shape, p, report)
                violations = graphcert.proof_obligation_samples(
                    s, shape, samples=100_000)
                assert violations == 0, (n, shape, p, violations)
                cells += 1
    assert cells == 44
    _passline(7, "graph certificates", t0, 600, f"{cells} certificates")


def test_criterion_08_base_sizes():
    t0 = time.monotonic()
    got = []
    for n, p, mu, kind, piece_index, expected in tables.base_size_rows():
        rep = spechtmod.build_dmu(n, p, mu)
        if kind == "An":
            rep = repkit.an_pieces(rep)[piece_index]
        t, vectors, certified = orbitengine.min_trivializing_tuple(rep)
        assert t + 1 == expected, (n, p, mu, kind, t + 1, expected)
        assert certified, (n, p, mu, kind)
        got.append(t + 1)
    assert got == [4, 5, 4, 4, 3, 3]
    _passline(8, "affine base sizes", t0, 3600, f"sizes {got}")


def test_criterion_09_cover_builtin():
    t0 = time.monotonic()
    rep = repkit.load_builtin_cover("sl2_5_f5")
    assert (rep.p, rep.dim) == (5, 2)
    ok, why = repkit.faithfulness_check(rep)
    assert ok, why
    assert len(repkit.bfs_closure(rep.generators, 5)) == 120
    v = orbitengine.verdict(rep)
    assert v.outcome == "NoRegular"
    assert v.certificate["kind"] == "Pigeonhole"
    _passline(9, "SL_2(5) cover builtin", t0, 60)


def test_criterion_10_property_suites():
    t0 = time.monotonic()

    # rank-nullity on 10^4 random matrices
    rng = np.random.default_rng(gfplin.DEFAULT_SEED)
    for _ in range(10_000):
        p = int(rng.choice([2, 3, 5]))
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, 7))
        a = rng.integers(0, p, size=(m, k), dtype=np.int64)
        assert gfplin.rank(a, p) + gfplin.kernel(a, p).shape[0] == m

    built = [(row.n, row.p, row.mu) for row in tables.TABLE_MODULES if row.n <= 10]

    # Gram symmetry and invariance for every built partition
    for n, p, mu in built:
        data = spechtmod.specht_data(n, p, mu)
        assert np.array_equal(data.gram, data.gram.T)
        for g in permsym.coxeter_generators(n):
            S = data.specht_matrix(g)
            assert np.array_equal(
                gfplin.matmul(gfplin.matmul(S, data.gram, p), S.T, p), data.gram)

    # Coxeter relations for every build_dmu output
    for n, p, mu in built:
        rep = spechtmod.build_dmu(n, p, mu)
        eye = gfplin.identity(rep.dim)
        gens = rep.generators
        for s in gens:
            assert np.array_equal(gfplin.matmul(s, s, p), eye)
        for i in range(len(gens) - 1):
            b = gfplin.matmul(gens[i], gens[i + 1], p)
            assert np.array_equal(gfplin.matmul(gfplin.matmul(b, b, p), b, p), eye)
        for i, j in itertools.combinations(range(len(gens)), 2):
            if j > i + 1:
                assert np.array_equal(gfplin.matmul(gens[i], gens[j], p),
                                      gfplin.matmul(gens[j], gens[i], p))

    # fixed-space dimension bound across all class representatives
    for n, p, mu in built:
        rep = spechtmod.build_dmu(n, p, mu)
        d = rep.dim
        for cls in permsym.prime_order_class_reps(n, "Sn"):
            is_transp = cls.ctype == (2,) + (1,) * (n - 2)
            r = boundlib.r_upper(n, is_transp)
            k = orbitengine.fixed_dim(rep, rep.matrix(cls.rep))
            assert k <= d * (1 - 1 / r), (n, p, mu, cls.ctype, k)

    # orbit sizes partition p^d on every small-enough module
    partitions_checked = 0
    for n, p, mu in built:
        rep = spechtmod.build_dmu(n, p, mu)
        if rep.space_size() <= (1 << 16):
            assert sum(orbitengine.orbit_partition(rep)) == rep.space_size()
            partitions_checked += 1
    assert partitions_checked >= 5

    # coverage bitmap is thread-count independent (1 vs 8 workers)
    for rep in (spechtmod.build_dmu(5, 3, (3, 1, 1)),
                repkit.scalar_extension(spechtmod.build_dmu(5, 3, (3, 1, 1)), 2),
                spechtmod.build_dmu(6, 3, (4, 1, 1))):
        c1, g1 = orbitengine.coverage_certify_no_regular(rep, CoverageBudget(jobs=1))
        c8, g8 = orbitengine.coverage_certify_no_regular(rep, CoverageBudget(jobs=8))
        assert (c1 is None) == (c8 is None)
        if c1 is not None:
            assert c1 == c8
        else:
            assert np.array_equal(g1, g8)

    _passline(10, "property suites", t0, 1800)


@pytest.mark.skipif(not os.environ.get("REGORB_HUGE"),
                    reason="2^32 coverage bitmap for (12,2,(7,5)): needs "
                           ">= 512 MB for the bitmap and a multi-hour budget; "
                           "enable with REGORB_HUGE=1 (CLI: --huge)")
def test_criterion_11_huge_coverage_gated():
    t0 = time.monotonic()
    rep = spechtmod.build_dmu(12, 2, (7, 5))
    assert rep.dim == 32
    budget = CoverageBudget(max_vspace=1 << 32, huge=True, jobs=1)
    v = orbitengine.verdict(rep, budget)
    assert v.outcome == "NoRegular"
    assert v.certificate["kind"] == "FullCoverage"
    _passline(11, "huge coverage bitmap", t0, 6 * 3600)
