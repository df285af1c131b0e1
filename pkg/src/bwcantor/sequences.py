"""Whitehead sequences, tail comparison, and rigidity/inequivalence certificates.

The Whitehead sequence of a point is ``(0, w_{1,x(1)}, w_{2,x(2)}, ...)``, the
labels met along its ray.  A self homeomorphism carrying one point of the
Cantor set to another forces their Whitehead sequences to share a tail.  For
``C(s)`` two distinct rays never do, and this module produces replayable
witnesses of that.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .construction import (
    Affine,
    AntichainRay,
    CSFamilySpec,
    ExplicitPrefix,
    IncreasingSequenceSpec,
    _require_seed,
    antichain_common_count,
    antichain_terms,
    cs_spec,
)
from .criterion import DivergenceVerdict, divergence_report
from .errors import (
    DEFAULT_BUDGET_BITS,
    BWError,
    IndexUnrepresentable,
    InvalidSeed,
    ValidationError,
    WindowTooSmall,
    fmt_int,
)
from .tree import DefiningSequenceSpec, RaySpec

__all__ = [
    "SupportedSequence",
    "Witness",
    "TailVerdict",
    "whitehead_prefix",
    "tails_equal_cs",
    "replay_witness",
    "refute_tail_equality",
    "CommonTerms",
    "common_terms",
    "InequivalenceCertificate",
    "inequivalence_certificate",
    "RigidityReport",
    "rigidity_report",
    "scheduled_gaps",
    "random_ray",
    "random_distinct_ray_pairs",
]

EQUAL = "equal"
DISTINCT = "distinct"
REFUTED = "refuted-up-to"
INCONCLUSIVE = "inconclusive"

VALUE_MISMATCH = "value-mismatch"
SUPPORT_MISALIGNMENT = "support-misalignment"


class RigidityViolation(BWError):
    exit_code = 4


@dataclass(frozen=True)
class SupportedSequence:
    """A natural-number sequence that is zero off a finite support.

    Position 0 (the leading entry of every Whitehead sequence) is never in
    the support.
    """

    support: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        support = tuple((int(p), int(v)) for p, v in self.support)
        last = 0
        for p, v in support:
            if p <= last:
                raise ValidationError("support positions must be >= 1 and strictly increasing")
            if v <= 0:
                raise ValidationError("support values must be positive")
            last = p
        object.__setattr__(self, "support", support)

    @classmethod
    def from_values(cls, values: Sequence[int]) -> SupportedSequence:
        if values and values[0] != 0:
            raise ValidationError("a Whitehead sequence starts with 0")
        return cls(tuple((p, v) for p, v in enumerate(values) if v))

    def value(self, pos: int) -> int:
        for p, v in self.support:
            if p == pos:
                return v
        return 0

    def prefix(self, depth: int) -> list[int]:
        out = [0] * (depth + 1)
        for p, v in self.support:
            if p <= depth:
                out[p] = v
        return out


@dataclass(frozen=True)
class Witness:
    """Why two rays of ``C(s)`` have different Whitehead tails.

    The rays agree on bits ``< divergence_depth``; ``stage`` is the first
    scheduled stage past it (``None`` when too large to write down), where
    they sit on different nodes and so read different seed terms.
    ``larger`` names the ray ("a" or "b") on the right, which gets the larger
    term.  Nonzero offsets are excluded separately because the scheduled
    gaps strictly increase.
    """

    divergence_depth: int
    block: int
    stage: int | None
    reason: str
    larger: str


@dataclass(frozen=True)
class TailVerdict:
    kind: str
    witness: Witness | None = None
    max_offset: int | None = None
    depth: int | None = None
    last_mismatch: dict[int, int] = field(default_factory=dict)
    surviving_offsets: tuple[int, ...] = ()


def _show(n: int | None) -> str:
    return "unrepresentable" if n is None else fmt_int(n)


def whitehead_prefix(spec: DefiningSequenceSpec, ray: RaySpec, depth: int) -> list[int]:
    """``(0, w_{1,x(1)}, ..., w_{depth,x(depth)})`` along ``ray``."""
    if depth < 0:
        raise ValidationError("depth must be >= 0")
    if isinstance(spec, CSFamilySpec):
        return [spec.ray_label(ray, k) for k in range(depth + 1)]
    return [spec.label(ray.node(k)) for k in range(depth + 1)]


def tails_equal_cs(
    seed: IncreasingSequenceSpec,
    ray_a: RaySpec,
    ray_b: RaySpec,
    gap: str = "pow2",
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> TailVerdict:
    """Decide tail equality of two Whitehead sequences of ``C(seed)``.

    Purely structural: only the divergence depth and the schedule position
    just past it are computed.
    """
    _require_seed(seed)
    d = ray_a.divergence_depth(ray_b)
    if d is None:
        return TailVerdict(EQUAL)
    spec = cs_spec(seed, gap, budget_bits)
    block, stage = None, None
    last = None
    for e in spec.blocks:
        last = e
        if e.stage > d:
            block, stage = e.block, e.stage
            break
    if block is None:
        # every later stage is beyond the budget, hence beyond d
        block = last.block + 1  # type: ignore[union-attr]
    larger = "a" if ray_a.bit(d) == 1 else "b"
    return TailVerdict(DISTINCT, Witness(d, block, stage, VALUE_MISMATCH, larger))


@dataclass(frozen=True)
class Replay:
    ok: bool
    mode: str
    detail: str
    labels: tuple[int, int] | None = None


def replay_witness(
    seed: IncreasingSequenceSpec,
    ray_a: RaySpec,
    ray_b: RaySpec,
    witness: Witness,
    gap: str = "pow2",
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> Replay:
    """Recheck a witness against its inputs.

    The label mismatch is evaluated through :func:`whitehead_prefix` when the
    cited stage is small enough; otherwise it is rechecked structurally from
    the bit at the divergence depth and monotonicity of the seed.
    """
    d = witness.divergence_depth
    if ray_a.bits(d) != ray_b.bits(d) or ray_a.bit(d) == ray_b.bit(d):
        return Replay(False, "structural", f"rays do not first differ at bit {d}")
    if witness.reason != VALUE_MISMATCH:
        return Replay(False, "structural", f"unsupported reason {witness.reason!r}")
    spec = cs_spec(seed, gap, budget_bits)
    entries = list(spec.blocks)
    prev_stage = entries[witness.block - 2].stage if witness.block >= 2 else 0
    if witness.block >= 2 and witness.block - 2 >= len(entries):
        return Replay(False, "structural", "cited block is past the schedule")
    if prev_stage > d and witness.block >= 2:
        return Replay(False, "structural", "an earlier scheduled stage already lies past d")
    if witness.block - 1 < len(entries):
        n_j = entries[witness.block - 1].stage
        if witness.stage != n_j or n_j <= d:
            return Replay(False, "structural", f"block {witness.block} is stage {fmt_int(n_j)}, cited {_show(witness.stage)}")
    elif witness.stage is not None:
        return Replay(False, "structural", "cited a concrete stage the schedule cannot reach")
    expected_larger = "a" if ray_a.bit(d) == 1 else "b"
    if witness.stage is not None:
        try:
            if witness.stage <= 4096:
                la = whitehead_prefix(spec, ray_a, witness.stage)[-1]
                lb = whitehead_prefix(spec, ray_b, witness.stage)[-1]
            else:
                la, lb = spec.ray_label(ray_a, witness.stage), spec.ray_label(ray_b, witness.stage)
        except IndexUnrepresentable:
            pass
        else:
            larger = "a" if la > lb else "b"
            ok = la != lb and larger == witness.larger
            return Replay(ok, "evaluated", f"labels at stage {fmt_int(witness.stage)}: {fmt_int(la)} vs {fmt_int(lb)}", (la, lb))
    ok = expected_larger == witness.larger
    return Replay(
        ok,
        "structural",
        f"ray {expected_larger} turns right at bit {d}, so its ordinal and seed term are larger",
    )


def refute_tail_equality(
    a: SupportedSequence | Sequence[int],
    b: SupportedSequence | Sequence[int],
    max_offset: int,
    depth: int,
) -> TailVerdict:
    """Look for an alignment ``a[p] == b[p + delta]`` on the common window.

    Returns ``refuted-up-to`` when every offset ``|delta| <= max_offset``
    meets a mismatch inside positions ``0..depth`` (an alignment with that
    offset would have to start after ``last_mismatch[delta]``), and
    ``inconclusive`` otherwise.  Finite data never confirms equality.
    """
    if max_offset < 0 or depth < 0:
        raise ValidationError("max_offset and depth must be >= 0")
    if depth < 2 * max_offset + 2:
        raise WindowTooSmall(f"depth {depth} < 2*{max_offset}+2")
    xa, xb = _window(a, depth), _window(b, depth)
    last: dict[int, int] = {}
    surviving = []
    for delta in range(-max_offset, max_offset + 1):
        lo, hi = max(0, -delta), min(depth, depth - delta)
        bad = [p for p in range(lo, hi + 1) if xa[p] != xb[p + delta]]
        if bad:
            last[delta] = bad[-1]
        else:
            surviving.append(delta)
    if surviving:
        return TailVerdict(INCONCLUSIVE, max_offset=max_offset, depth=depth,
                           last_mismatch=last, surviving_offsets=tuple(surviving))
    return TailVerdict(REFUTED, max_offset=max_offset, depth=depth, last_mismatch=last)


def _window(x: SupportedSequence | Sequence[int], depth: int) -> list[int]:
    if isinstance(x, SupportedSequence):
        return x.prefix(depth)
    values = list(x)
    if len(values) < depth + 1:
        raise ValidationError(f"sequence prefix has {len(values)} entries, need {depth + 1}")
    return values[: depth + 1]


# --- common terms and inequivalence ------------------------------------------

FINITE = "finite"
INFINITE = "infinite"
UNKNOWN_UP_TO = "unknown-up-to"


@dataclass(frozen=True)
class CommonTerms:
    kind: str
    count: int | None = None
    bound: int | None = None
    description: str = ""


def _affine_affine(s: Affine, t: Affine) -> CommonTerms:
    a, b, c, d = s.a, s.b, t.a, t.b
    g = math.gcd(a, c)
    if (d - b) % g:
        return CommonTerms(FINITE, 0, description=f"{b} mod {a} and {d} mod {c} are incompatible (gcd {g})")
    lcm = a // g * c
    # x = b + a*k with a*k = d - b (mod c)  ->  k = (d-b)/g * inv(a/g) mod c/g
    m = c // g
    k = ((d - b) // g * pow(a // g, -1, m)) % m if m > 1 else 0
    r = (b + a * k) % lcm
    floor = max(a + b, c + d)
    x0 = floor + ((r - floor) % lcm)
    return CommonTerms(INFINITE, description=f"every x = {r} (mod {lcm}) with x >= {x0}")


def _affine_antichain(s: Affine, ray: RaySpec) -> CommonTerms:
    """Exact: heap labels along an eventually periodic ray are eventually periodic mod ``a``."""
    a, b = s.a, s.b
    target, floor = b % a, a + b
    lp, p = len(ray.prefix), len(ray.period)
    value, small = 1, True  # exact label while it stays below `floor`
    residue = 1 % a
    seen: dict[tuple[int, int], int] = {}
    hits_at: list[int] = []
    residues: list[int] = []
    k = 1
    while True:
        if k - 1 >= lp:
            state = (residue, (k - 1 - lp) % p)
            if state in seen:
                # states on the cycle recur with ever larger labels, so the floor no longer matters
                if target in residues[seen[state] - 1:]:
                    return CommonTerms(INFINITE, description=f"ray labels hit {target} mod {a} once per cycle")
                return CommonTerms(FINITE, len(hits_at), description="residue cycle misses the progression")
            seen[state] = k
        hit = residue == target and not (small and value < floor)
        residues.append(residue)
        if hit:
            hits_at.append(k)
        bit = ray.bit(k - 1)
        residue = (2 * residue + bit) % a
        if small:
            value = 2 * value + bit
            small = value < floor
        k += 1


def _terms_up_to(seed: IncreasingSequenceSpec, bound: int) -> set[int]:
    out = set()
    k = 1
    while True:
        try:
            v = seed.term(k)
        except BWError:
            break
        if v > bound:
            break
        out.add(v)
        k += 1
    return out


def common_terms(
    s: IncreasingSequenceSpec, t: IncreasingSequenceSpec, value_bound: int = 10**6
) -> CommonTerms:
    _require_seed(s)
    _require_seed(t)
    if isinstance(s, Affine) and isinstance(t, Affine):
        return _affine_affine(s, t)
    if isinstance(s, AntichainRay) and isinstance(t, AntichainRay):
        n = antichain_common_count(s.ray, t.ray)
        if n == math.inf:
            return CommonTerms(INFINITE, description="identical rays")
        return CommonTerms(FINITE, int(n), description=f"shared prefix of {int(n)} vertices")
    if isinstance(s, Affine) and isinstance(t, AntichainRay):
        return _affine_antichain(s, t.ray)
    if isinstance(s, AntichainRay) and isinstance(t, Affine):
        return _affine_antichain(t, s.ray)
    bound = value_bound
    for x in (s, t):
        if isinstance(x, ExplicitPrefix):
            bound = min(bound, x.terms[-1])
    shared = _terms_up_to(s, bound) & _terms_up_to(t, bound)
    return CommonTerms(UNKNOWN_UP_TO, len(shared), bound, f"{len(shared)} common values <= {bound}")


@dataclass(frozen=True)
class InequivalenceCertificate:
    issued: bool
    seed_a: IncreasingSequenceSpec
    seed_b: IncreasingSequenceSpec
    common: CommonTerms
    reason: str


def inequivalence_certificate(
    seed_a: IncreasingSequenceSpec, seed_b: IncreasingSequenceSpec, value_bound: int = 10**6
) -> InequivalenceCertificate:
    """Certificate that ``C(seed_a)`` and ``C(seed_b)`` are inequivalently embedded.

    Issued only when the seeds provably share finitely many terms.  A refusal
    is not a claim of equivalence.
    """
    common = common_terms(seed_a, seed_b, value_bound)
    if common.kind == FINITE:
        return InequivalenceCertificate(
            True, seed_a, seed_b, common,
            f"seeds share only {common.count} terms, so no two points have Whitehead sequences with a common tail",
        )
    why = "infinitely many common terms" if common.kind == INFINITE else "finiteness of common terms is undecided"
    return InequivalenceCertificate(False, seed_a, seed_b, common, why)


# --- rigidity ---------------------------------------------------------------


def scheduled_gaps(spec: CSFamilySpec) -> list[int]:
    """Representable gaps ``n_{j+1} - n_j``."""
    return [e.gap for e in spec.blocks if e.gap is not None]


@dataclass(frozen=True)
class PairResult:
    ray_a: RaySpec
    ray_b: RaySpec
    verdict: TailVerdict
    same_point: bool
    replay: Replay | None


@dataclass(frozen=True)
class RigidityReport:
    seed: IncreasingSequenceSpec
    pairs: tuple[PairResult, ...]
    divergence: DivergenceVerdict
    gaps: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.divergence.certified and all(
            p.same_point or (p.verdict.kind == DISTINCT and p.replay is not None and p.replay.ok)
            for p in self.pairs
        )


def rigidity_report(
    seed: IncreasingSequenceSpec,
    sample_rays: Sequence[tuple[RaySpec, RaySpec]],
    gap: str = "pow2",
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> RigidityReport:
    """Check every sampled pair of points of ``C(seed)`` for tail distinctness.

    Pairs of equal rays are the same point and are flagged rather than
    counted against rigidity.
    """
    if not isinstance(seed, (Affine, ExplicitPrefix, AntichainRay)):
        raise InvalidSeed(f"not a seed sequence spec: {seed!r}")
    spec = cs_spec(seed, gap, budget_bits)
    gaps = scheduled_gaps(spec)
    if any(y <= x for x, y in zip(gaps, gaps[1:])):
        raise RigidityViolation(f"scheduled gaps are not strictly increasing: {[fmt_int(g) for g in gaps]}")
    results = []
    for ray_a, ray_b in sample_rays:
        verdict = tails_equal_cs(seed, ray_a, ray_b, gap, budget_bits)
        if verdict.kind == EQUAL:
            if ray_a != ray_b:
                raise RigidityViolation(f"distinct rays {ray_a} and {ray_b} reported equal")
            results.append(PairResult(ray_a, ray_b, verdict, True, None))
            continue
        replay = replay_witness(seed, ray_a, ray_b, verdict.witness, gap, budget_bits)  # type: ignore[arg-type]
        if not replay.ok:
            raise RigidityViolation(f"witness for {ray_a} vs {ray_b} failed replay: {replay.detail}")
        results.append(PairResult(ray_a, ray_b, verdict, False, replay))
    return RigidityReport(seed, tuple(results), divergence_report(spec), tuple(gaps))


def random_ray(rng: random.Random, max_prefix: int = 32, max_period: int = 8) -> RaySpec:
    prefix = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, max_prefix)))
    period = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, max_period)))
    return RaySpec(prefix, period)


def random_distinct_ray_pairs(
    count: int, rng_seed: int, max_prefix: int = 32, max_period: int = 8
) -> list[tuple[RaySpec, RaySpec]]:
    """Deterministic sample of ``count`` pairs of distinct eventually periodic rays."""
    rng = random.Random(rng_seed)
    pairs = []
    while len(pairs) < count:
        a, b = random_ray(rng, max_prefix, max_period), random_ray(rng, max_prefix, max_period)
        if a != b:
            pairs.append((a, b))
    return pairs
