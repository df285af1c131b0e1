from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bwcantor import (
    Affine,
    AntichainRay,
    Dyadic,
    ExplicitPrefix,
    ExplicitSpec,
    RaySpec,
    StandardBWSpec,
    ValidationError,
    cs_spec,
    divergence_report,
    inequivalence_certificate,
    refute_tail_equality,
    rigidity_report,
    schedule,
    series_state,
    tails_equal_cs,
)
from bwcantor import codec
from bwcantor.sequences import random_distinct_ray_pairs

rays = st.builds(
    RaySpec,
    st.lists(st.integers(0, 1), max_size=8).map(tuple),
    st.lists(st.integers(0, 1), min_size=1, max_size=4).map(tuple),
)
seeds = st.one_of(
    st.builds(Affine, st.integers(1, 50), st.integers(0, 50)),
    st.lists(st.integers(1, 10), min_size=1, max_size=6).map(
        lambda d: ExplicitPrefix(tuple(sum(d[: k + 1]) for k in range(len(d))))
    ),
    st.builds(AntichainRay, rays),
)


def roundtrip(doc):
    return json.loads(json.dumps(doc))


@given(seeds)
def test_seed_literals_roundtrip(seed):
    assert codec.parse_seed(str(seed)) == seed


@given(seeds, st.sampled_from(["pow2", "sigma+1"]))
def test_cs_spec_roundtrip(seed, gap):
    spec = cs_spec(seed, gap)
    assert codec.spec_from_json(roundtrip(codec.spec_to_json(spec))) == spec


def test_other_specs_roundtrip():
    for spec in (ExplicitSpec(((0,), (1, 2))), StandardBWSpec((1, 2), (0,)), StandardBWSpec((3,))):
        assert codec.spec_from_json(roundtrip(codec.spec_to_json(spec))) == spec


def test_spec_literals(tmp_path):
    assert codec.parse_spec("cs:affine:1,0") == cs_spec(Affine(1, 0))
    assert codec.parse_spec("zeros:2") == ExplicitSpec.zeros(2)
    assert codec.parse_spec("standard:1,2(0)") == StandardBWSpec((1, 2), (0,))
    assert codec.parse_spec("standard:(1)") == StandardBWSpec((), (1,))
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"kind": "explicit", "stages": [[0], [0, 1]]}))
    assert codec.parse_spec(str(path)) == ExplicitSpec(((0,), (0, 1)))
    for bad in ("nonsense", '{"kind": "cs", "seed": "affine:1,0", "extra": 1}', "cs:affine:1", "{oops"):
        with pytest.raises(ValidationError):
            codec.parse_spec(bad)


def test_schedule_roundtrip_keeps_unrepresentable_fields():
    s = schedule(Affine(1, 0), 3)
    doc = roundtrip(codec.schedule_to_json(s))
    assert doc["blocks"][2]["stage"] == str(2**36 + 5)
    assert "unrepresentable" in doc["blocks"][2]["sigma"]
    back = codec.schedule_from_json(doc)
    assert back.entries == s.entries


def test_series_verdict_roundtrip():
    spec = cs_spec(Affine(1, 0))
    st_ = series_state(spec, 2**36 + 4)
    assert codec.series_from_json(roundtrip(codec.series_to_json(st_))) == st_
    v = divergence_report(spec)
    assert codec.verdict_from_json(roundtrip(codec.verdict_to_json(v))) == v


def test_huge_integers_survive_the_digit_limit():
    x = Dyadic(3**20000 + 2, 5)
    assert codec.dyadic_from_json(roundtrip(codec.dyadic_to_json(x))) == x


def test_witness_and_tail_roundtrip():
    a, b = RaySpec.all_zeros(), RaySpec((0, 1), (0,))
    v = tails_equal_cs(Affine(1, 0), a, b)
    assert codec.tail_from_json(roundtrip(codec.tail_to_json(v))) == v
    doc = roundtrip(codec.witness_doc(Affine(1, 0), a, b, v.witness))
    assert codec.witness_doc_from_json(doc) == (Affine(1, 0), a, b, v.witness, "pow2")
    r = refute_tail_equality([0, 1, 0, 0, 0, 3], [0, 2, 0, 0, 0, 34], 1, 5)
    assert codec.tail_from_json(roundtrip(codec.tail_to_json(r))) == r
    with pytest.raises(ValidationError):
        codec.witness_doc_from_json({**doc, "schema": "other"})


def test_certificate_and_rigidity_roundtrip():
    c = inequivalence_certificate(Affine(2, 0), Affine(2, 1))
    assert codec.certificate_from_json(roundtrip(codec.certificate_to_json(c))) == c
    rep = rigidity_report(Affine(1, 0), random_distinct_ray_pairs(5, 1))
    doc = roundtrip(codec.rigidity_to_json(rep))
    assert codec.rigidity_to_json(codec.rigidity_from_json(doc)) == doc
