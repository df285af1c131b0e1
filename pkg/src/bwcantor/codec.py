"""Literal syntaxes and JSON encodings.

Large integers (stages, seed terms, sigma, dyadic numerators) are written as
decimal strings so no consumer ever truncates them.  Values too large to
materialize are written as ``{"unrepresentable": reason}``.  Every encoder
has a decoder and ``decode(encode(x)) == x``.
"""

from __future__ import annotations

import decimal
import json
import math
import os
import re
from typing import Any

from .construction import (
    GAP_RULES,
    Affine,
    AntichainRay,
    CSFamilySpec,
    ExplicitPrefix,
    IncreasingSequenceSpec,
    Schedule,
    ScheduleEntry,
)
from .criterion import DivergenceVerdict, Dyadic, SeriesState
from .errors import BWError, ValidationError
from .geometry.verify import CheckRecord, VerificationReport
from .sequences import (
    CommonTerms,
    InequivalenceCertificate,
    PairResult,
    Replay,
    RigidityReport,
    TailVerdict,
    Witness,
)
from .tree import DefiningSequenceSpec, ExplicitSpec, RaySpec, StandardBWSpec, parse_ray

__all__ = [
    "parse_seed",
    "parse_spec",
    "seed_from_json",
    "spec_to_json",
    "spec_from_json",
    "schedule_to_json",
    "schedule_from_json",
    "dyadic_to_json",
    "dyadic_from_json",
    "series_to_json",
    "series_from_json",
    "verdict_to_json",
    "verdict_from_json",
    "witness_to_json",
    "witness_from_json",
    "witness_doc",
    "witness_doc_from_json",
    "tail_to_json",
    "tail_from_json",
    "common_to_json",
    "common_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "replay_to_json",
    "replay_from_json",
    "rigidity_to_json",
    "rigidity_from_json",
    "report_to_json",
    "report_from_json",
    "WITNESS_SCHEMA",
]

WITNESS_SCHEMA = "bwcantor-witness.v1"

_INT = re.compile(r"\d+")


def _decimal(n: int) -> str:
    """Decimal digits of ``n``, also past the interpreter's int/str digit limit."""
    if n.bit_length() < 12000:
        return str(n)
    with decimal.localcontext() as ctx:
        ctx.prec = decimal.MAX_PREC
        return str(decimal.Decimal(n))


def _from_decimal(text: str) -> int:
    if len(text) < 3600:
        return int(text)
    with decimal.localcontext() as ctx:
        ctx.prec = decimal.MAX_PREC
        return int(decimal.Decimal(text))


def _big(n: int | None, reason: BWError | str | None = None) -> Any:
    if n is None:
        return {"unrepresentable": str(reason) if reason else "unknown"}
    return _decimal(n)


def _unbig(x: Any) -> int | None:
    if isinstance(x, dict) and "unrepresentable" in x:
        return None
    if isinstance(x, str) and _INT.fullmatch(x):
        return _from_decimal(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ValidationError(f"expected a decimal string, got {x!r}")


def _ints(text: str, what: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not re.fullmatch(r"-?\d+", p) for p in parts):
        raise ValidationError(f"{what} must be comma-separated integers, got {text!r}")
    return tuple(int(p) for p in parts)


def parse_seed(text: str) -> IncreasingSequenceSpec:
    """``affine:a,b`` | ``prefix:s1,s2,...`` | ``antichain:<ray>``."""
    if not isinstance(text, str) or ":" not in text:
        raise ValidationError(f"seed literal must look like 'affine:1,0', got {text!r}")
    kind, _, body = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "affine":
        vals = _ints(body, "affine seed")
        if len(vals) != 2:
            raise ValidationError("affine seed takes exactly two integers a,b")
        return Affine(*vals)
    if kind == "prefix":
        return ExplicitPrefix(_ints(body, "seed prefix"))
    if kind == "antichain":
        return AntichainRay(parse_ray(body))
    raise ValidationError(f"unknown seed kind {kind!r}")


seed_from_json = parse_seed


def spec_to_json(spec: DefiningSequenceSpec) -> dict:
    if isinstance(spec, CSFamilySpec):
        if not isinstance(spec.gap, str):
            raise ValidationError("only named gap rules serialize")
        return {"kind": "cs", "seed": str(spec.seed), "gap": spec.gap}
    if isinstance(spec, ExplicitSpec):
        return {"kind": "explicit", "stages": [list(s) for s in spec.stages]}
    if isinstance(spec, StandardBWSpec):
        period = None if spec.m_period is None else list(spec.m_period)
        return {"kind": "standard", "m_prefix": list(spec.m_prefix), "m_period": period}
    raise ValidationError(f"cannot serialize {type(spec).__name__}")


def _check_keys(data: dict, allowed: set[str], what: str) -> None:
    if not isinstance(data, dict):
        raise ValidationError(f"{what} must be a JSON object")
    unknown = set(data) - allowed
    if unknown:
        raise ValidationError(f"unknown keys in {what}: {sorted(unknown)}")


def spec_from_json(data: dict, budget_bits: int | None = None) -> DefiningSequenceSpec:
    extra = {} if budget_bits is None else {"budget_bits": budget_bits}
    kind = data.get("kind") if isinstance(data, dict) else None
    if kind == "cs":
        _check_keys(data, {"kind", "seed", "gap"}, "cs spec")
        gap = data.get("gap", "pow2")
        if gap not in GAP_RULES:
            raise ValidationError(f"unknown gap rule {gap!r}")
        return CSFamilySpec(parse_seed(data["seed"]), gap, **extra)
    if kind == "explicit":
        _check_keys(data, {"kind", "stages"}, "explicit spec")
        stages = data.get("stages")
        if not isinstance(stages, list) or not all(isinstance(s, list) for s in stages):
            raise ValidationError("explicit stages must be a list of lists")
        return ExplicitSpec(tuple(tuple(s) for s in stages), **extra)
    if kind == "standard":
        _check_keys(data, {"kind", "m_prefix", "m_period"}, "standard spec")
        period = data.get("m_period")
        return StandardBWSpec(tuple(data.get("m_prefix", ())), None if period is None else tuple(period), **extra)
    raise ValidationError(f"spec kind must be one of cs, explicit, standard; got {kind!r}")


def parse_spec(text: str, budget_bits: int | None = None) -> DefiningSequenceSpec:
    """A spec from inline JSON, a JSON file, or a short literal.

    Short literals: ``cs:<seed>`` (e.g. ``cs:affine:1,0``), ``zeros:D`` for
    the all-zero explicit spec of depth ``D``, and ``standard:1,2(0)`` for
    ``m = 1, 2, 0, 0, ...``.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            return spec_from_json(json.loads(text), budget_bits)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"spec is not valid JSON: {exc}") from None
    if text.startswith("cs:"):
        return spec_from_json({"kind": "cs", "seed": text[3:]}, budget_bits)
    if text.startswith("zeros:"):
        depth = _ints(text[6:], "depth")
        if len(depth) != 1 or depth[0] < 0:
            raise ValidationError("zeros:D needs one natural D")
        return ExplicitSpec.zeros(depth[0])
    if text.startswith("standard:"):
        m = re.fullmatch(r"([\d,\s]*?)(?:\(([\d,\s]+)\))?", text[9:])
        if not m:
            raise ValidationError(f"standard literal must look like 'standard:1,2(0)', got {text!r}")
        prefix = _ints(m.group(1).rstrip(","), "m prefix") if m.group(1).strip(", ") else ()
        period = _ints(m.group(2), "m period") if m.group(2) else None
        return spec_from_json({"kind": "standard", "m_prefix": list(prefix), "m_period": period}, budget_bits)
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            try:
                return spec_from_json(json.load(fh), budget_bits)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{text}: not valid JSON: {exc}") from None
    raise ValidationError(f"unrecognized spec {text!r}")


# --- schedule and series -----------------------------------------------------


def _entry_to_json(e: ScheduleEntry) -> dict:
    return {
        "block": e.block,
        "stage": _big(e.stage),
        "range": {"start": _big(e.start), "end": _big(e.end, e.sigma_error)},
        "sigma": _big(e.sigma, e.sigma_error),
        "next_stage": _big(e.next_stage, e.next_error),
    }


def _entry_from_json(d: dict) -> ScheduleEntry:
    return ScheduleEntry(
        int(d["block"]), _unbig(d["stage"]), _unbig(d["range"]["start"]),  # type: ignore[arg-type]
        _unbig(d["range"]["end"]), _unbig(d["sigma"]), _unbig(d["next_stage"]),
    )


def schedule_to_json(s: Schedule) -> dict:
    return {"seed": str(s.seed), "gap": s.gap_rule, "blocks": [_entry_to_json(e) for e in s.entries]}


def schedule_from_json(d: dict) -> Schedule:
    return Schedule(parse_seed(d["seed"]), d["gap"], tuple(_entry_from_json(e) for e in d["blocks"]))


def _approx(x: Dyadic) -> float | None:
    f = float(x)
    return f if math.isfinite(f) else None


def dyadic_to_json(x: Dyadic) -> dict:
    return {"numerator": _decimal(x.numerator), "exponent": _decimal(x.exponent), "approx": _approx(x)}


def dyadic_from_json(d: dict) -> Dyadic:
    return Dyadic(_unbig(d["numerator"]), _unbig(d["exponent"]))


def series_to_json(s: SeriesState) -> dict:
    return {"stage": _decimal(s.stage), "sigma": _decimal(s.sigma), "partial_sum": dyadic_to_json(s.partial_sum)}


def series_from_json(d: dict) -> SeriesState:
    return SeriesState(_unbig(d["stage"]), _unbig(d["sigma"]), dyadic_from_json(d["partial_sum"]))


def verdict_to_json(v: DivergenceVerdict) -> dict:
    return {
        "kind": v.kind,
        "reason": v.reason,
        "detail": v.detail,
        "state": None if v.state is None else series_to_json(v.state),
    }


def verdict_from_json(d: dict) -> DivergenceVerdict:
    state = None if d.get("state") is None else series_from_json(d["state"])
    return DivergenceVerdict(d["kind"], d["reason"], d.get("detail", ""), state)


# --- witnesses and verdicts --------------------------------------------------


def witness_to_json(w: Witness) -> dict:
    stage = _big(w.stage, "first scheduled stage past the divergence depth exceeds the bit budget")
    return {
        "divergence_depth": _decimal(w.divergence_depth),
        "block": _decimal(w.block),
        "stage": stage,
        "reason": w.reason,
        "larger": w.larger,
    }


def witness_from_json(d: dict) -> Witness:
    return Witness(_unbig(d["divergence_depth"]), _unbig(d["block"]), _unbig(d["stage"]), d["reason"], d["larger"])


def witness_doc(seed: IncreasingSequenceSpec, ray_a: RaySpec, ray_b: RaySpec, w: Witness, gap: str = "pow2") -> dict:
    """Self-contained witness, the input format of ``verify-witness``."""
    return {
        "schema": WITNESS_SCHEMA,
        "seed": str(seed),
        "gap": gap,
        "ray_a": str(ray_a),
        "ray_b": str(ray_b),
        "witness": witness_to_json(w),
    }


def witness_doc_from_json(d: dict) -> tuple[IncreasingSequenceSpec, RaySpec, RaySpec, Witness, str]:
    _check_keys(d, {"schema", "seed", "gap", "ray_a", "ray_b", "witness"}, "witness document")
    if d.get("schema") != WITNESS_SCHEMA:
        raise ValidationError(f"witness document schema must be {WITNESS_SCHEMA}")
    try:
        return (
            parse_seed(d["seed"]), parse_ray(d["ray_a"]), parse_ray(d["ray_b"]),
            witness_from_json(d["witness"]), d.get("gap", "pow2"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed witness document: {exc}") from None


def tail_to_json(v: TailVerdict) -> dict:
    return {
        "kind": v.kind,
        "witness": None if v.witness is None else witness_to_json(v.witness),
        "max_offset": v.max_offset,
        "depth": v.depth,
        "last_mismatch": {str(k): v.last_mismatch[k] for k in sorted(v.last_mismatch)},
        "surviving_offsets": list(v.surviving_offsets),
    }


def tail_from_json(d: dict) -> TailVerdict:
    return TailVerdict(
        d["kind"],
        None if d.get("witness") is None else witness_from_json(d["witness"]),
        d.get("max_offset"),
        d.get("depth"),
        {int(k): int(x) for k, x in d.get("last_mismatch", {}).items()},
        tuple(d.get("surviving_offsets", ())),
    )


def replay_to_json(r: Replay) -> dict:
    labels = None if r.labels is None else [_decimal(x) for x in r.labels]
    return {"ok": r.ok, "mode": r.mode, "detail": r.detail, "labels": labels}


def replay_from_json(d: dict) -> Replay:
    labels = None if d.get("labels") is None else tuple(_unbig(x) for x in d["labels"])
    return Replay(bool(d["ok"]), d["mode"], d["detail"], labels)  # type: ignore[arg-type]


def common_to_json(c: CommonTerms) -> dict:
    return {
        "kind": c.kind,
        "count": None if c.count is None else _decimal(c.count),
        "bound": None if c.bound is None else _decimal(c.bound),
        "description": c.description,
    }


def common_from_json(d: dict) -> CommonTerms:
    return CommonTerms(
        d["kind"],
        None if d.get("count") is None else _unbig(d["count"]),
        None if d.get("bound") is None else _unbig(d["bound"]),
        d.get("description", ""),
    )


def certificate_to_json(c: InequivalenceCertificate) -> dict:
    return {
        "result": "certificate" if c.issued else "no-certificate",
        "seed_a": str(c.seed_a),
        "seed_b": str(c.seed_b),
        "common_terms": common_to_json(c.common),
        "reason": c.reason,
    }


def certificate_from_json(d: dict) -> InequivalenceCertificate:
    return InequivalenceCertificate(
        d["result"] == "certificate",
        parse_seed(d["seed_a"]),
        parse_seed(d["seed_b"]),
        common_from_json(d["common_terms"]),
        d["reason"],
    )


def rigidity_to_json(r: RigidityReport, gap: str = "pow2") -> dict:
    pairs = []
    for p in r.pairs:
        pairs.append({
            "ray_a": str(p.ray_a),
            "ray_b": str(p.ray_b),
            "same_point": p.same_point,
            "verdict": tail_to_json(p.verdict),
            "replay": None if p.replay is None else replay_to_json(p.replay),
            "witness_doc": None if p.verdict.witness is None
            else witness_doc(r.seed, p.ray_a, p.ray_b, p.verdict.witness, gap),
        })
    return {
        "seed": str(r.seed),
        "gap": gap,
        "ok": r.ok,
        "divergence": verdict_to_json(r.divergence),
        "gaps": [_decimal(g) for g in r.gaps],
        "pairs": pairs,
    }


def rigidity_from_json(d: dict) -> RigidityReport:
    pairs = tuple(
        PairResult(
            parse_ray(p["ray_a"]), parse_ray(p["ray_b"]), tail_from_json(p["verdict"]), bool(p["same_point"]),
            None if p.get("replay") is None else replay_from_json(p["replay"]),
        )
        for p in d["pairs"]
    )
    return RigidityReport(
        parse_seed(d["seed"]), pairs, verdict_from_json(d["divergence"]), tuple(_unbig(g) for g in d["gaps"])
    )


def report_to_json(r: VerificationReport) -> dict:
    return r.to_dict()


def report_from_json(d: dict) -> VerificationReport:
    return VerificationReport(tuple(
        CheckRecord(x["check"], x["subject"], float(x["value"]), float(x["margin"]), x["unit"], x.get("detail", ""))
        for x in d["records"]
    ))
