"""Acceptance gate: one test per criterion, each with its time limit.

Every test records PASS or FAIL (with elapsed time) for the terminal summary
printed by ``conftest.py``; the assertions themselves are the verdict.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from bwcantor import (
    Affine,
    AntichainRay,
    LinkKind,
    RaySpec,
    antichain_common_count,
    antichain_terms,
    common_terms,
    compose_index,
    cs_spec,
    inequivalence_certificate,
    parity_admissible,
    refute_tail_equality,
    replay_witness,
    schedule,
    series_state,
    stage_index,
    tails_equal_cs,
    whitehead_prefix,
)
from bwcantor import codec
from bwcantor.cli import main
from bwcantor.index import IndexedNesting
from bwcantor.sequences import DISTINCT, FINITE, INFINITE, INCONCLUSIVE, REFUTED, random_distinct_ray_pairs

import oracles


@contextmanager
def criterion(record, n: int, title: str, limit: float):
    start = time.perf_counter()
    passed = False
    try:
        yield
        passed = True
    finally:
        elapsed = time.perf_counter() - start
        ok = passed and elapsed < limit
        record(n, title, ok, elapsed)
    assert elapsed < limit, f"criterion {n} took {elapsed:.2f} s, limit {limit} s"


def test_criterion_1_schedule_reproduction(acceptance_record):
    with criterion(acceptance_record, 1, "schedule reproduction for s_i = i", 1.0):
        entries = schedule(Affine(1, 0), 3).entries
        for e, want in zip(entries, oracles.IDENTITY_SCHEDULE):
            assert (e.stage, e.start, e.end, e.sigma, e.next_stage) == (
                want["stage"], want["start"], want["end"], want["sigma"], want["next"]
            )
        assert entries[2].stage == oracles.IDENTITY_N3 == 2**36 + 5


def test_criterion_2_criterion_identities(acceptance_record):
    with criterion(acceptance_record, 2, "partial-sum identities and blockwise vs per-stage sums", 5.0):
        spec = cs_spec(Affine(1, 0))
        assert series_state(spec, 5 - 1).partial_sum == 1
        assert series_state(spec, oracles.IDENTITY_N3 - 1).partial_sum == 2

        # gap(sigma) = sigma + 1: block 3 runs from stage 25 with sigma = 2**25 + 38,
        # whose exact partial sums need a 2**25-bit denominator, so the budget is raised.
        stop = 10**5
        budget = 2**26
        blocks, _ = oracles.small_schedule(1, 0, lambda s: s + 1, 3, max_block_terms=1 << 26)
        assert blocks == [(1, 2), (4, 20), (25, 2**25 + 38)]
        inj = cs_spec(Affine(1, 0), "sigma+1", budget)
        # sigma at every stage up to 10**5
        starts = dict(blocks)
        sigma = 0
        for i in range(1, stop + 1):
            sigma = starts.get(i, sigma)
            entry = inj.entry_for_stage(i)
            assert entry.sigma == sigma
        # exact partial sums: every stage through block 3's start, then a seeded sample up to 10**5
        rng = random.Random(2)
        stages = list(range(0, 41)) + sorted(rng.sample(range(41, stop), 40)) + [stop]
        for i in stages:
            num, exp = oracles.exponents_to_dyadic(oracles.per_stage_exponents(blocks, i))
            got = series_state(inj, i).partial_sum
            assert (got.numerator, got.exponent) == (num, exp), i


def test_criterion_3_rigidity_suite(acceptance_record):
    with criterion(acceptance_record, 3, "rigidity: 200 random ray pairs for s_i = i", 10.0):
        seed = Affine(1, 0)
        spec = cs_spec(seed)
        pairs = random_distinct_ray_pairs(200, rng_seed=20261015, max_prefix=32, max_period=8)
        assert len({(a, b) for a, b in pairs}) == 200
        for a, b in pairs:
            v = tails_equal_cs(seed, a, b)
            assert v.kind == DISTINCT
            assert replay_witness(seed, a, b, v.witness).ok
            r = refute_tail_equality(whitehead_prefix(spec, a, 64), whitehead_prefix(spec, b, 64), 8, 64)
            assert r.kind in (REFUTED, INCONCLUSIVE)
            if v.witness.stage is not None and v.witness.stage <= 64:
                # the cited mismatch lies inside the window, so zero offset cannot survive
                assert 0 not in r.surviving_offsets


def test_criterion_4_antichain_suite(acceptance_record):
    with criterion(acceptance_record, 4, "antichain: 50 ray pairs diverging at depth <= 16", 2.0):
        rng = random.Random(4)
        for _ in range(50):
            d = rng.randint(0, 16)
            shared = tuple(rng.randint(0, 1) for _ in range(d))
            bit = rng.randint(0, 1)
            tail_a = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 6)))
            tail_b = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 6)))
            a = RaySpec(shared + (bit,) + tail_a, (rng.randint(0, 1),))
            b = RaySpec(shared + (1 - bit,) + tail_b, (rng.randint(0, 1),))
            assert a.divergence_depth(b) == d
            assert antichain_common_count(a, b) == d + 1
            ta, tb = antichain_terms(a, 20), antichain_terms(b, 20)
            assert ta == oracles.heap_labels(a.bits(20), 20) and tb == oracles.heap_labels(b.bits(20), 20)
            assert ta[: d + 1] == tb[: d + 1]
            assert not set(ta[d + 1 :]) & set(tb[d + 1 :])
            c = common_terms(AntichainRay(a), AntichainRay(b))
            assert (c.kind, c.count) == (FINITE, d + 1)


def test_criterion_5_inequivalence(acceptance_record):
    with criterion(acceptance_record, 5, "inequivalence certificates vs brute-force intersection", 10.0):
        assert inequivalence_certificate(Affine(2, 0), Affine(2, 1)).issued
        assert not inequivalence_certificate(Affine(1, 0), Affine(2, 0)).issued
        rng = random.Random(5)
        bound = 10**6
        kinds = set()
        for _ in range(100):
            a, c = rng.randint(1, 20), rng.randint(1, 20)
            b, d = rng.randint(0, 20), rng.randint(0, 20)
            hit = bool(np.any(oracles.affine_values_mask(a, b, bound) & oracles.affine_values_mask(c, d, bound)))
            got = common_terms(Affine(a, b), Affine(c, d))
            kinds.add(got.kind)
            assert got.kind == (INFINITE if hit else FINITE), (a, b, c, d)
            assert inequivalence_certificate(Affine(a, b), Affine(c, d)).issued == (not hit)
        assert kinds == {FINITE, INFINITE}


def test_criterion_6_geometric_index(acceptance_record):
    with criterion(acceptance_record, 6, "geometric-index calculus", 1.0):
        kinds = list(LinkKind)
        chains = [c for n in range(11) for c in itertools.product(kinds, repeat=n)]
        value = {c: compose_index(c) for c in chains}
        for c in chains:
            for cut in range(len(c) + 1):
                assert value[c] == compose_index(IndexedNesting(c[:cut])) * compose_index(IndexedNesting(c[cut:]))
        assert all(stage_index(i, k) == 2 ** (k - i) for i in range(12) for k in range(i, 12))
        # two null-homologous tori of index 0 with a nonzero union of index <= 2: only 2 is admissible
        assert [p for p in (1, 2) if parity_admissible(0, 0, p)] == [2]


def test_criterion_7_geometry(acceptance_record):
    from bwcantor.geometry import BING_PAIR_LINKING, GeometryParams, embed_stage_tree, obj_text, verify_embedding
    from bwcantor.geometry.verify import parent_degree

    with criterion(acceptance_record, 7, "depth-2 nested tori for s_i = i", 60.0):
        spec = cs_spec(Affine(1, 0))
        params = GeometryParams()
        tori = embed_stage_tree(spec, 2, params)
        assert len(tori) == 10
        report = verify_embedding(tori)
        assert report.passed, [(r.check, r.subject, r.margin) for r in report.failures()]
        assert all(r.margin > 0 for r in report.records)
        for t in tori[1:]:
            assert round(parent_degree(t.core, tori[t.parent])) == 0
        gauss = report.by_check("winding-gauss")
        assert abs(round(gauss[0].value)) == 1 and all(round(r.value) == 0 for r in gauss[1:])
        links = report.by_check("bing-linking")
        assert len(links) == 3
        assert all(abs(r.value - BING_PAIR_LINKING) < 0.1 for r in links)
        text = obj_text(tori, params.tube_segments)
        again = obj_text(embed_stage_tree(spec, 2, params), params.tube_segments)
        assert text.encode() == again.encode()


def _cli(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, json.loads(out) if out.strip() else None


def test_criterion_8_cli_contract(acceptance_record, capsys, tmp_path):
    with criterion(acceptance_record, 8, "CLI exit codes 0/2/3/4 and JSON round-trips", 60.0):
        code, doc = _cli(capsys, "generate", "--seed", "affine:1,0", "--blocks", "2")
        assert code == 0 and doc["blocks"][1]["stage"] == "5"
        assert codec.schedule_to_json(codec.schedule_from_json(doc)) == doc
        assert _cli(capsys, "generate", "--seed", "affine:1,0", "--blocks", "0")[0] == 2
        assert _cli(capsys, "generate", "--seed", "prefix:1", "--blocks", "2")[0] == 2
        assert _cli(capsys, "check-cantor", "--spec", "{not json")[0] == 2
        assert _cli(capsys, "generate", "--seed", "affine:1,0", "--blocks", "4")[0] == 3
        code, doc = _cli(capsys, "mesh", "--spec", "zeros:1", "--depth", "1",
                         "--params", '{"samples": 64, "clearance_fraction": 1.0}')
        assert code == 4 and not doc["report"]["passed"]

        code, doc = _cli(capsys, "check-cantor", "--spec", "cs:affine:1,0", "--stage", "4")
        assert code == 0 and doc["verdict"]["kind"] == "diverges-certified"
        assert codec.verdict_to_json(codec.verdict_from_json(doc["verdict"])) == doc["verdict"]
        assert codec.series_to_json(codec.series_from_json(doc["series"])) == doc["series"]
        assert codec.spec_to_json(codec.spec_from_json(doc["spec"])) == doc["spec"]
        code, doc = _cli(capsys, "check-cantor", "--spec", "zeros:3")
        assert code == 0 and doc["verdict"]["kind"] == "partial-only"
        for a, b, want in (("affine:2,0", "affine:2,1", "certificate"), ("affine:1,0", "affine:2,0", "no-certificate"),
                           ("affine:3,1", "affine:3,1", "no-certificate")):
            code, doc = _cli(capsys, "compare", "--seed-a", a, "--seed-b", b)
            assert code == 0 and doc["result"] == want
            assert codec.certificate_to_json(codec.certificate_from_json(doc)) == doc
        code, doc = _cli(capsys, "rigidity", "--seed", "affine:1,0", "--random", "10", "--seed-rng", "8")
        assert code == 0 and doc["ok"]
        assert codec.rigidity_to_json(codec.rigidity_from_json(doc)) == doc
        again = _cli(capsys, "rigidity", "--seed", "affine:1,0", "--random", "10", "--seed-rng", "8")[1]
        assert again == doc
        wpath = tmp_path / "w.json"
        wpath.write_text(json.dumps(doc["pairs"][0]["witness_doc"]))
        code, rep = _cli(capsys, "verify-witness", str(wpath))
        assert code == 0 and codec.replay_to_json(codec.replay_from_json(rep)) == rep
        code, doc = _cli(capsys, "index", "--chain", "bing,whitehead,bing")
        assert code == 0 and doc["index"] == "8"
        out = tmp_path / "mesh.json"
        code, _ = _cli(capsys, "mesh", "--spec", "zeros:1", "--depth", "1", "--params", '{"samples": 64}',
                       "--out", str(out))
        doc = json.loads(out.read_text())
        assert code == 0 and codec.report_to_json(codec.report_from_json(doc["report"])) == doc["report"]
