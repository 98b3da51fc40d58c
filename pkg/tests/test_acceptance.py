"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line to the terminal (visible
even without ``-s``) and then asserts. Run alone with

    pytest tests/test_acceptance.py -v
"""

from __future__ import annotations

import json
import random
import time
from fractions import Fraction
from itertools import permutations

import pytest

from dsqo import cli
from dsqo.extremal import (
    b_constraints,
    count_triples,
    double_description_b,
    enumerate_extreme_b,
    enumerate_extreme_u1,
    extreme_slice_count,
    is_extreme,
    two_slice_criterion_holds,
    u1_constraints,
)
from dsqo.linalg import enumerate_vertices
from dsqo.majorization import SimplexVector, majorizes
from dsqo.matrix_classes import (
    SymMatrix,
    check_form_bounds,
    half_offdiagonal,
    in_U1,
    in_Uk,
    ones,
    random_row_sum_matrix,
    random_simplex_point,
    random_uk_member,
    solve_symmetrization,
)
from dsqo.qso import (
    apply,
    check_necessary_conditions,
    complete_to_dsqo,
    is_dsqo,
    majorization_witness,
    permute_qso,
)
from dsqo.serialization import encode_matrix, encode_qso

from conftest import example_matrix, example_operator, t_alpha
from instances import broken_qso

F = Fraction
H = F(1, 2)
INSTANCES = 500


@pytest.fixture
def verdict(pytestconfig):
    capture = pytestconfig.pluginmanager.getplugin("capturemanager")

    def emit(label: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else "")
        with capture.global_and_fixture_disabled():
            print("\n" + line)
        assert ok, line

    return emit


def timed_run(argv):
    start = time.perf_counter()
    code, report = cli.run(argv)
    return code, report, time.perf_counter() - start


@pytest.fixture(scope="module")
def extr_b():
    return enumerate_extreme_b(3)


def test_criterion_1_u1_m2(verdict):
    code, report, secs = timed_run(["enum-u1", "--m", "2"])
    listed = {
        SymMatrix.of(rows)
        for rows in ([[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, H], [H, 0]], [[0, H], [H, 1]])
    }
    got = [SymMatrix.of(rows) for rows in report.value["matrices"]]
    ok = code == 0 and len(got) == 4 and set(got) == listed and secs < 1
    verdict("1 enum-u1 m=2", ok, f"{len(got)} matrices in {secs:.3f}s")


def test_criterion_2_u1_m3(verdict):
    code, report, secs = timed_run(["enum-u1", "--m", "3", "--oracle"])
    got = [SymMatrix.of(rows) for rows in report.value["matrices"]]
    dd = [SymMatrix.from_upper(3, v) for v in enumerate_vertices(u1_constraints(3))]
    ok = (
        code == 0
        and len(got) == 25
        and half_offdiagonal(3) not in got
        and report.value["oracle_agrees"]
        and got == dd
        and secs < 10
    )
    verdict("2 enum-u1 m=3", ok, f"{len(got)} matrices, M excluded, oracle agrees, {secs:.3f}s")


def test_criterion_3_b_m3(verdict, extr_b):
    code, report, secs = timed_run(["enum-b", "--m", "3"])
    summary = report.value["summary"]
    members = set(extr_b)
    closed = all(permute_qso(v, pi) in members for v in extr_b for pi in permutations(range(3)))
    wire = [encode_qso(v) for v in extr_b] == report.value["tensors"]
    triples = (summary["triples_all_extreme"], summary["triples_with_M"])
    ok = (
        code == 0
        and report.value["count"] == 222
        and triples == (31, 6)
        and count_triples(enumerate_extreme_u1(3)) == (31, 6)
        and closed
        and wire
        and double_description_b(3) == extr_b
        and secs < 300
    )
    verdict("3 enum-b m=3", ok, f"{report.value['count']} tensors, triples {triples}, {secs:.2f}s")


def test_criterion_4_every_extreme_operator(verdict, extr_b):
    bad = []
    allowed = {F(0), H, F(1)}
    for n, v in enumerate(extr_b):
        checks = (
            bool(is_dsqo(v)),
            check_necessary_conditions(v).passed,
            two_slice_criterion_holds(v),
            majorization_witness(v, trials=200, seed=n) is None,
            set(v.coordinates()) <= allowed,
        )
        if not all(checks):
            bad.append(n)
    verdict("4 all 222 operators pass every check", len(extr_b) == 222 and not bad,
            f"{len(extr_b) - len(bad)}/{len(extr_b)} clean")


def test_criterion_5_worked_symmetrization(verdict, tmp_path):
    a = example_matrix()
    path = tmp_path / "a.json"
    path.write_text(json.dumps(encode_matrix(a.entries)), encoding="utf-8")
    code, report = cli.run(["solve-sym", "--matrix", str(path)])
    t = [[F(v) for v in row] for row in report.value]
    stochastic = all(v >= 0 for row in t for v in row) and all(sum(row) == 1 for row in t)
    symmetric = all((t[i][j] + t[j][i]) / 2 == a[i, j] for i in range(3) for j in range(3))
    code2, report2 = cli.run(["solution-vertices", "--matrix", str(path)])
    verts = [[[F(v) for v in row] for row in vert] for vert in report2.value["vertices"]]
    expected = sorted([t_alpha(F(1, 10)), t_alpha(F(6, 10))])
    ok = code == 0 and stochastic and symmetric and code2 == 0 and sorted(verts) == expected
    verdict("5 solve-sym and solution-vertices on the worked matrix", ok,
            f"{len(verts)} vertices at alpha 1/10 and 6/10")


def test_criterion_6a_round_trip(verdict):
    rng = random.Random(601)
    failures = 0
    for _ in range(INSTANCES):
        m = rng.choice((2, 3, 4, 5))
        a = random_row_sum_matrix(m, 1, rng).symmetrized()
        if not in_U1(a) or solve_symmetrization(a).symmetrized() != a:
            failures += 1
    verdict("6a random symmetrizations round-trip", failures == 0,
            f"{INSTANCES - failures}/{INSTANCES}")


def test_criterion_6b_uk_algebra(verdict):
    rng = random.Random(602)
    failures = 0
    for _ in range(INSTANCES):
        m = rng.choice((2, 3, 4))
        k = rng.randint(1, m)
        a, _ = random_uk_member(m, k, rng)
        ok = k == m or bool(in_Uk(ones(m) - a, m - k))  # i
        ok = ok and [j for j in range(1, m + 1) if in_Uk(a, j)] == [k]  # ii
        ok = ok and all(in_Uk(a.scale(F(p, k)), p) for p in range(1, k + 1))  # iv
        for l in range(1, k):  # v, split k = (k - l) + l
            ok = ok and bool(in_Uk(a.scale(F(k - l, k)), k - l)) and bool(in_Uk(a.scale(F(l, k)), l))
        failures += not ok
    verdict("6b U_k algebra i, ii, iv, v", failures == 0, f"{INSTANCES - failures}/{INSTANCES}")


def test_criterion_6c_form_bounds(verdict):
    rng = random.Random(603)
    failures = 0
    for _ in range(INSTANCES):
        m = rng.choice((2, 3, 4))
        k = rng.randint(1, m)
        a, _ = random_uk_member(m, k, rng)
        if not all(check_form_bounds(a, k, random_simplex_point(m, rng)) for _ in range(50)):
            failures += 1
    verdict("6c quadratic form bounds, 50 points each", failures == 0,
            f"{INSTANCES - failures}/{INSTANCES}")


def test_criterion_6d_completed_operators(verdict):
    rng = random.Random(604)
    failures = 0
    for n in range(INSTANCES):
        m = rng.choice((2, 3, 4))
        a, _ = random_uk_member(m, 1, rng)
        v = complete_to_dsqo([a], m)
        c = SimplexVector.center(m)
        if apply(v, c) != c or majorization_witness(v, trials=1000, seed=n) is not None:
            failures += 1
    verdict("6d completed operators fix the center, no witness in 1000 trials",
            failures == 0, f"{INSTANCES - failures}/{INSTANCES}")


def test_criterion_6e_structured_witness(verdict):
    rng = random.Random(605)
    failures = 0
    for _ in range(INSTANCES):
        m = rng.choice((2, 3, 4))
        v, k, subset = broken_qso(m, rng)
        check = is_dsqo(v)
        x = check.counterexample(m)
        ok = not check and x is not None and not majorizes(apply(v, x), x)
        # the slice-level witness also breaks the k=1 form bound
        slice_check = in_U1(v.slices[k])
        ok = ok and not check_form_bounds(v.slices[k], 1, slice_check.violation_point(m))
        failures += not ok
    verdict("6e broken operators caught by the structured witness", failures == 0,
            f"{INSTANCES - failures}/{INSTANCES}")


def test_criterion_7_worked_operator(verdict, tmp_path):
    v = example_operator()
    path = tmp_path / "v.json"
    path.write_text(json.dumps(encode_qso(v)), encoding="utf-8")
    start = time.perf_counter()
    code, _ = cli.run(["check-dsqo", "--qso", str(path)])
    extreme = is_extreme(v, b_constraints(3))
    slices = extreme_slice_count(v)
    secs = time.perf_counter() - start
    ok = code == 0 and extreme and slices == 2 and secs < 1
    verdict("7 worked operator", ok, f"d.s.q.o., extreme in B, {slices} extreme slices, {secs:.3f}s")
