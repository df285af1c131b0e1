from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bwcantor import (
    Affine,
    AntichainRay,
    ExplicitPrefix,
    InvalidSeed,
    RaySpec,
    SupportedSequence,
    ValidationError,
    WindowTooSmall,
    Witness,
    common_terms,
    cs_spec,
    inequivalence_certificate,
    refute_tail_equality,
    replay_witness,
    rigidity_report,
    tails_equal_cs,
    whitehead_prefix,
)
from bwcantor.sequences import (
    DISTINCT,
    EQUAL,
    FINITE,
    INCONCLUSIVE,
    INFINITE,
    REFUTED,
    UNKNOWN_UP_TO,
    VALUE_MISMATCH,
    random_distinct_ray_pairs,
)

from oracles import IDENTITY_N3, affine_values_mask

rays = st.builds(
    RaySpec,
    st.lists(st.integers(0, 1), max_size=12).map(tuple),
    st.lists(st.integers(0, 1), min_size=1, max_size=5).map(tuple),
)
identity = Affine(1, 0)


def test_whitehead_prefixes_of_identity_seed():
    spec = cs_spec(identity)
    assert whitehead_prefix(spec, RaySpec.all_zeros(), 5) == [0, 1, 0, 0, 0, 3]
    assert whitehead_prefix(spec, RaySpec.all_ones(), 5) == [0, 2, 0, 0, 0, 34]


@given(rays, st.integers(0, 40))
def test_whitehead_support_is_the_schedule(ray, depth):
    seq = whitehead_prefix(cs_spec(identity), ray, depth)
    support = [k for k, v in enumerate(seq) if v]
    assert support == [k for k in (1, 5) if k <= depth]


def test_witness_for_first_bit():
    v = tails_equal_cs(identity, RaySpec.all_zeros(), RaySpec.all_ones())
    assert v.kind == DISTINCT
    assert v.witness == Witness(0, 1, 1, VALUE_MISMATCH, "b")
    r = replay_witness(identity, RaySpec.all_zeros(), RaySpec.all_ones(), v.witness)
    assert r.ok and r.mode == "evaluated" and r.labels == (1, 2)


def test_witness_for_second_bit_cites_stage_five():
    a, b = RaySpec((0,), (0,)), RaySpec((0,), (1,))
    v = tails_equal_cs(identity, a, b)
    assert (v.witness.divergence_depth, v.witness.block, v.witness.stage) == (1, 2, 5)
    r = replay_witness(identity, a, b, v.witness)
    assert r.ok and r.labels == (3, 18)


def test_witness_past_the_second_block_is_structural():
    a = RaySpec((0,) * 39, (0,))
    b = RaySpec((0,) * 39 + (1,), (0,))
    v = tails_equal_cs(identity, a, b)
    assert v.witness.divergence_depth == 39 and v.witness.stage == IDENTITY_N3
    r = replay_witness(identity, a, b, v.witness)
    assert r.ok and r.mode == "structural"


def test_equal_rays():
    r = RaySpec((1, 0), (1, 0))
    assert tails_equal_cs(identity, r, RaySpec((), (1, 0))).kind == EQUAL


def test_tampered_witnesses_fail_replay():
    a, b = RaySpec.all_zeros(), RaySpec((1,), (0,))
    w = tails_equal_cs(identity, a, b).witness
    assert not replay_witness(identity, a, b, Witness(w.divergence_depth, w.block, w.stage, w.reason, "a")).ok
    assert not replay_witness(identity, a, b, Witness(1, w.block, w.stage, w.reason, w.larger)).ok
    assert not replay_witness(identity, a, b, Witness(0, 2, 5, w.reason, w.larger)).ok


@given(st.integers(1, 5), st.integers(0, 5), rays, rays)
def test_witnesses_replay_for_random_seeds(a, b, ray_a, ray_b):
    seed = Affine(a, b)
    v = tails_equal_cs(seed, ray_a, ray_b)
    if ray_a == ray_b:
        assert v.kind == EQUAL
        return
    assert v.kind == DISTINCT
    assert replay_witness(seed, ray_a, ray_b, v.witness).ok


def test_refute_examples():
    a = SupportedSequence.from_values([0, 1, 0, 0, 0, 3])
    b = SupportedSequence.from_values([0, 2, 0, 0, 0, 34])
    v = refute_tail_equality(a, b, 1, 5)
    assert v.kind == REFUTED and set(v.last_mismatch) == {-1, 0, 1}
    same = refute_tail_equality(a, a, 1, 5)
    assert same.kind == INCONCLUSIVE and 0 in same.surviving_offsets
    with pytest.raises(WindowTooSmall):
        refute_tail_equality(a, b, 8, 10)


@given(st.lists(st.integers(0, 3), min_size=30, max_size=30), st.integers(0, 6))
def test_refute_never_rules_out_a_true_shift(values, shift):
    values[0] = 0
    shifted = values[shift:] + [0] * shift
    v = refute_tail_equality(values, shifted, 6, 28)
    # a[p] == b[p - shift] holds on the whole window
    assert v.kind == INCONCLUSIVE and -shift in v.surviving_offsets


def test_supported_sequence_validation():
    with pytest.raises(ValidationError):
        SupportedSequence(((0, 1),))
    with pytest.raises(ValidationError):
        SupportedSequence(((2, 1), (1, 1)))
    with pytest.raises(ValidationError):
        SupportedSequence.from_values([1, 0])


def test_compare_examples():
    assert inequivalence_certificate(Affine(2, 0), Affine(2, 1)).issued
    cert = inequivalence_certificate(Affine(1, 0), Affine(2, 0))
    assert not cert.issued and cert.common.kind == INFINITE
    c = common_terms(AntichainRay(RaySpec.all_zeros()), AntichainRay(RaySpec.all_ones()))
    assert (c.kind, c.count) == (FINITE, 1)


def test_affine_antichain_decided_exactly():
    zeros, ones = AntichainRay(RaySpec.all_zeros()), AntichainRay(RaySpec.all_ones())
    assert common_terms(Affine(3, 1), zeros).kind == INFINITE  # 4, 16, 64, ...
    assert common_terms(Affine(3, 2), ones).kind == FINITE  # 2**k - 1 is never 2 mod 3
    assert common_terms(ones, Affine(5, 0)).kind == INFINITE


def test_explicit_seeds_are_bounded():
    c = common_terms(ExplicitPrefix((1, 2, 3)), Affine(1, 0))
    assert c.kind == UNKNOWN_UP_TO and c.count == 3 and c.bound == 3
    assert not inequivalence_certificate(ExplicitPrefix((1, 2, 3)), Affine(1, 0)).issued


@given(st.integers(1, 20), st.integers(0, 20), st.integers(1, 20), st.integers(0, 20))
def test_affine_pairs_against_brute_force(a, b, c, d):
    bound = 20000
    hits = np.count_nonzero(affine_values_mask(a, b, bound) & affine_values_mask(c, d, bound))
    got = common_terms(Affine(a, b), Affine(c, d))
    if got.kind == INFINITE:
        assert hits > 0
    else:
        assert got.kind == FINITE and got.count == 0 and hits == 0


@given(st.integers(1, 12), st.integers(0, 12), rays)
def test_affine_antichain_against_enumeration(a, b, ray):
    terms = [1]
    for bit in ray.bits(200):
        terms.append(2 * terms[-1] + bit)
    hits = [t for t in terms if t > b and (t - b) % a == 0]
    got = common_terms(Affine(a, b), AntichainRay(ray))
    if got.kind == FINITE:
        assert len(hits) == got.count
    else:
        assert got.kind == INFINITE
        # the residue cycle repeats within a few dozen steps, so hits recur late
        assert any(t.bit_length() > 150 for t in hits)


def test_rigidity_report_identity_seed():
    pairs = random_distinct_ray_pairs(50, rng_seed=3)
    pairs.append((RaySpec.all_ones(), RaySpec.all_ones()))
    rep = rigidity_report(identity, pairs)
    assert rep.ok and rep.pairs[-1].same_point
    assert all(x < y for x, y in zip(rep.gaps, rep.gaps[1:]))
    with pytest.raises(InvalidSeed):
        rigidity_report("s_i = i", pairs)  # type: ignore[arg-type]


def test_random_pairs_are_deterministic_and_distinct():
    p1 = random_distinct_ray_pairs(20, 7)
    assert p1 == random_distinct_ray_pairs(20, 7)
    assert all(a != b for a, b in p1)
