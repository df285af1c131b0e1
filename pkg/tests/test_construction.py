from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bwcantor import (
    Affine,
    AntichainRay,
    ExplicitPrefix,
    IndexUnrepresentable,
    InvalidSeed,
    RaySpec,
    SeedUnevaluable,
    ValidationError,
    antichain_common_count,
    antichain_terms,
    cs_spec,
    schedule,
    stage_labels,
)
from bwcantor.tree import BingBlock, NodeAddress, ZeroLabels

from oracles import IDENTITY_BLOCK3_START, IDENTITY_N3, IDENTITY_SCHEDULE, heap_labels, small_schedule

rays = st.builds(
    RaySpec,
    st.lists(st.integers(0, 1), max_size=10).map(tuple),
    st.lists(st.integers(0, 1), min_size=1, max_size=5).map(tuple),
)


def test_identity_schedule_matches_hand_values():
    s = schedule(Affine(1, 0), 3)
    for e, want in zip(s.entries, IDENTITY_SCHEDULE):
        assert (e.block, e.stage, e.start, e.end, e.sigma, e.next_stage) == (
            want["block"], want["stage"], want["start"], want["end"], want["sigma"], want["next"]
        )
    third = s.entries[2]
    assert third.stage == IDENTITY_N3 and third.start == IDENTITY_BLOCK3_START
    assert third.end is None and third.sigma is None  # 2**(2**36) terms cannot be written down


def test_identity_stage_labels():
    spec = cs_spec(Affine(1, 0))
    assert stage_labels(spec, 1) == BingBlock(1, 1, 1, 2)
    assert stage_labels(spec, 3) == ZeroLabels(3)
    assert stage_labels(spec, 5) == BingBlock(5, 2, 3, 34)
    assert spec.label(NodeAddress((0,))) == 1
    assert spec.label(NodeAddress((1,))) == 2
    assert stage_labels(spec, IDENTITY_N3 - 1) == ZeroLabels(IDENTITY_N3 - 1)


def test_affine_2_1_first_block():
    spec = cs_spec(Affine(2, 1))
    assert [spec.label(NodeAddress((b,))) for b in (0, 1)] == [3, 5]


def test_explicit_prefix_runs_out():
    spec = cs_spec(ExplicitPrefix((1, 2)))
    assert stage_labels(spec, 1) == BingBlock(1, 1, 1, 2)
    with pytest.raises(SeedUnevaluable):
        stage_labels(spec, 5)


def test_block_count_past_budget():
    with pytest.raises(IndexUnrepresentable):
        schedule(Affine(1, 0), 4)
    with pytest.raises(ValidationError):
        schedule(Affine(1, 0), 0)


def test_budget_can_be_lowered():
    with pytest.raises(IndexUnrepresentable):
        schedule(Affine(1, 0), 3, budget_bits=16)


def test_invalid_seeds():
    for bad in [lambda: Affine(0, 1), lambda: Affine(1, -1), lambda: ExplicitPrefix((2, 2)),
                lambda: ExplicitPrefix(()), lambda: ExplicitPrefix((0, 1))]:
        with pytest.raises(InvalidSeed):
            bad()
    with pytest.raises(InvalidSeed):
        schedule("not a seed", 1)  # type: ignore[arg-type]


def test_antichain_examples():
    assert antichain_terms(RaySpec.all_zeros(), 4) == [1, 2, 4, 8]
    assert antichain_terms(RaySpec.all_ones(), 4) == [1, 3, 7, 15]
    assert antichain_terms(RaySpec((0,), (1,)), 4) == [1, 2, 5, 11]
    assert antichain_common_count(RaySpec.all_zeros(), RaySpec.all_ones()) == 1
    assert antichain_common_count(RaySpec((0,), (1,)), RaySpec.all_zeros()) == 2


@given(rays, st.integers(1, 40))
def test_antichain_terms_match_heap_oracle(ray, count):
    terms = antichain_terms(ray, count)
    assert terms == heap_labels(ray.bits(count), count)
    assert all(x < y for x, y in zip(terms, terms[1:]))
    seed = AntichainRay(ray)
    assert [seed.term(k) for k in range(1, count + 1)] == terms


@given(rays, rays)
def test_antichain_common_count_matches_enumeration(a, b):
    n = antichain_common_count(a, b)
    if a == b:
        assert n == float("inf")
        return
    horizon = n + 12
    shared = set(antichain_terms(a, horizon)) & set(antichain_terms(b, horizon))
    assert len(shared) == n


@given(st.integers(1, 6), st.integers(0, 6), st.sampled_from(["pow2", "sigma+1"]))
def test_schedule_recurrence_against_oracle(a, b, gap):
    gap_fn = (lambda s: 2**s) if gap == "pow2" else (lambda s: s + 1)
    want, _ = small_schedule(a, b, gap_fn, 3, max_block_terms=1 << 16)
    got = []
    for e in cs_spec(Affine(a, b), gap).blocks:
        if len(got) == len(want):
            break
        got.append((e.stage, e.sigma))
    assert got == want


@given(st.integers(1, 5), st.integers(0, 5))
def test_schedule_invariants(a, b):
    entries = [e for e in cs_spec(Affine(a, b), "sigma+1").blocks if e.sigma is not None][:3]
    prev_end = 0
    for e in entries:
        assert e.start == prev_end + 1 and e.end - e.start + 1 == 2**e.stage
        if e.next_stage is not None:
            assert e.next_stage > e.stage
        prev_end = e.end
