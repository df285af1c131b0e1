"""The rigid C(s) family and the antichain of almost-disjoint seed sequences.

For a strictly increasing seed ``s`` the scheduled stages are
``n_1 = 1`` and ``n_{j+1} = 2**sigma(n_j) + n_j``; stage ``n_j`` takes the next
``2**n_j`` seed terms as its labels and every other stage is all zeros.
``sigma(n_j)`` is the running sum of the per-stage maxima, which for a
scheduled stage is its last (largest) seed term.

Big quantities are kept symbolic: a schedule entry whose seed range end or
sigma would exceed the bit budget records ``None`` instead.  Because every
admissible gap rule satisfies ``gap(sigma) > sigma``, an unrepresentable
entry implies the next scheduled stage exceeds every representable stage
index, which is what lets stage queries past it still answer ``ZeroLabels``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence, Union

from .errors import (
    DEFAULT_BUDGET_BITS,
    BWError,
    IndexUnrepresentable,
    InvalidSeed,
    SeedUnevaluable,
    ValidationError,
    check_bits,
    fmt_int,
)
from .tree import (
    BingBlock,
    DefiningSequenceSpec,
    NodeAddress,
    RaySpec,
    StageLabeling,
    ZeroLabels,
    _check_stage,
)

__all__ = [
    "Affine",
    "ExplicitPrefix",
    "AntichainRay",
    "IncreasingSequenceSpec",
    "GAP_RULES",
    "ScheduleEntry",
    "Schedule",
    "schedule",
    "CSFamilySpec",
    "cs_spec",
    "antichain_terms",
    "antichain_common_count",
]


# --- seed sequences ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Affine:
    """``s_i = a*i + b`` for ``i >= 1``."""

    a: int = 1
    b: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise InvalidSeed("affine coefficients must be integers")
        if self.a < 1 or self.b < 0:
            raise InvalidSeed(f"affine seed needs a >= 1 and b >= 0, got a={self.a}, b={self.b}")

    def term(self, k: int, budget_bits: int = DEFAULT_BUDGET_BITS) -> int:
        _check_index(k, budget_bits)
        value = self.a * k + self.b
        check_bits(value.bit_length(), f"seed term s_{fmt_int(k)}", budget_bits)
        return value

    def __str__(self) -> str:
        return f"affine:{self.a},{self.b}"


@dataclass(frozen=True, slots=True)
class ExplicitPrefix:
    """A finite, strictly increasing list of positive terms; later terms are unknown."""

    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise InvalidSeed("explicit seed prefix is empty")
        if any(not isinstance(t, int) or isinstance(t, bool) for t in terms):
            raise InvalidSeed("seed terms must be integers")
        if terms[0] < 1:
            raise InvalidSeed("seed terms must be positive")
        for x, y in zip(terms, terms[1:]):
            if y <= x:
                raise InvalidSeed(f"seed prefix not strictly increasing at {x}, {y}")
        object.__setattr__(self, "terms", terms)

    def term(self, k: int, budget_bits: int = DEFAULT_BUDGET_BITS) -> int:
        _check_index(k, budget_bits)
        if k > len(self.terms):
            raise SeedUnevaluable(f"seed term s_{fmt_int(k)} requested but only {len(self.terms)} given")
        return self.terms[k - 1]

    def __str__(self) -> str:
        return "prefix:" + ",".join(map(str, self.terms))


@dataclass(frozen=True, slots=True)
class AntichainRay:
    """Heap labels along a ray of the breadth-first numbered binary tree.

    The root is 1 and a step with bit ``x`` maps label ``L`` to ``2L + x``,
    so ``s_k`` is the label at depth ``k-1``.
    """

    ray: RaySpec

    def term(self, k: int, budget_bits: int = DEFAULT_BUDGET_BITS) -> int:
        _check_index(k, budget_bits)
        check_bits(k, f"antichain term s_{fmt_int(k)}", budget_bits)
        return (1 << (k - 1)) | self.ray.ordinal_at(k - 1, budget_bits)

    def __str__(self) -> str:
        return f"antichain:{self.ray}"


IncreasingSequenceSpec = Union[Affine, ExplicitPrefix, AntichainRay]


def _check_index(k: int, budget_bits: int) -> None:
    if not isinstance(k, int):
        raise ValidationError(f"seed index must be a positive integer, got {k!r}")
    if k < 1:
        raise ValidationError(f"seed index must be positive, got {fmt_int(k)}")
    check_bits(k.bit_length(), f"seed index {fmt_int(k)}", budget_bits)


def seed_is_valid(seed: object) -> bool:
    return isinstance(seed, (Affine, ExplicitPrefix, AntichainRay))


def _require_seed(seed: object) -> None:
    if not seed_is_valid(seed):
        raise InvalidSeed(f"not a seed sequence spec: {seed!r}")


# --- gap rules ---------------------------------------------------------------

GapRule = Callable[[int, int], int]


def pow2_gap(sigma: int, budget_bits: int) -> int:
    check_bits(sigma + 1, f"gap 2**{fmt_int(sigma)}", budget_bits)
    return 1 << sigma


def succ_gap(sigma: int, budget_bits: int) -> int:
    return sigma + 1


#: Named gap rules.  Every rule must satisfy ``gap(sigma) > sigma``.
GAP_RULES: dict[str, GapRule] = {"pow2": pow2_gap, "sigma+1": succ_gap}


def _resolve_gap(gap: str | GapRule) -> GapRule:
    if callable(gap):
        return gap
    try:
        return GAP_RULES[gap]
    except KeyError:
        raise ValidationError(f"unknown gap rule {gap!r}; known: {sorted(GAP_RULES)}") from None


# --- schedule ----------------------------------------------------------------


@dataclass(frozen=True)
class ScheduleEntry:
    """One scheduled Bing-block stage.

    ``end`` and ``sigma`` are ``None`` when they cannot be materialized; the
    reason is kept in ``sigma_error``.  ``next_stage`` is ``n_{j+1}`` or
    ``None`` (reason in ``next_error``).
    """

    block: int
    stage: int
    start: int
    end: int | None
    sigma: int | None
    next_stage: int | None
    sigma_error: BWError | None = field(default=None, compare=False, repr=False)
    next_error: BWError | None = field(default=None, compare=False, repr=False)

    @property
    def gap(self) -> int | None:
        return None if self.next_stage is None else self.next_stage - self.stage


@dataclass(frozen=True)
class Schedule:
    seed: IncreasingSequenceSpec
    gap_rule: str
    entries: tuple[ScheduleEntry, ...]

    def stages(self) -> list[int]:
        return [e.stage for e in self.entries]


def _generate(seed: IncreasingSequenceSpec, gap: GapRule, budget: int) -> Iterator[ScheduleEntry]:
    j, n, prev_end, sigma_prev = 1, 1, 0, 0
    while True:
        start = prev_end + 1
        end: int | None = None
        sigma: int | None = None
        sigma_error: BWError | None = None
        if n + 1 > budget:
            sigma_error = IndexUnrepresentable(f"seed range end of block {j} (2**{fmt_int(n)} terms)", n + 1, budget)
        else:
            end = start + (1 << n) - 1
            try:
                check_bits(end.bit_length(), f"seed range end of block {j}", budget)
                sigma = sigma_prev + seed.term(end, budget)
                check_bits(sigma.bit_length(), f"sigma at stage {fmt_int(n)}", budget)
            except BWError as exc:
                sigma, sigma_error = None, exc
                if isinstance(exc, IndexUnrepresentable) and end.bit_length() > budget:
                    end = None
        if sigma is None:
            yield ScheduleEntry(j, n, start, end, None, None, sigma_error, sigma_error)
            return
        try:
            nxt = n + gap(sigma, budget)
            check_bits(nxt.bit_length(), f"stage n_{j + 1}", budget)
        except IndexUnrepresentable as exc:
            yield ScheduleEntry(j, n, start, end, sigma, None, None, exc)
            return
        yield ScheduleEntry(j, n, start, end, sigma, nxt)
        j, n, prev_end, sigma_prev = j + 1, nxt, end, sigma


class _Blocks:
    """Lazily extended, thread-safe list of schedule entries."""

    def __init__(self, seed: IncreasingSequenceSpec, gap: GapRule, budget: int):
        self._gen = _generate(seed, gap, budget)
        self._entries: list[ScheduleEntry] = []
        self._done = False
        self._lock = threading.Lock()

    def get(self, idx: int) -> ScheduleEntry | None:
        with self._lock:
            while len(self._entries) <= idx and not self._done:
                try:
                    self._entries.append(next(self._gen))
                except StopIteration:
                    self._done = True
            return self._entries[idx] if idx < len(self._entries) else None

    def __iter__(self) -> Iterator[ScheduleEntry]:
        idx = 0
        while (e := self.get(idx)) is not None:
            yield e
            idx += 1


@lru_cache(maxsize=256)
def _blocks(seed: IncreasingSequenceSpec, gap: GapRule, budget: int) -> _Blocks:
    return _Blocks(seed, gap, budget)


def _gap_name(gap: str | GapRule) -> str:
    if isinstance(gap, str):
        return gap
    for name, fn in GAP_RULES.items():
        if fn is gap:
            return name
    return getattr(gap, "__name__", "custom")


def schedule(
    seed: IncreasingSequenceSpec,
    j_max: int,
    gap: str | GapRule = "pow2",
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> Schedule:
    """Entries for blocks ``1..j_max``.

    Raises :class:`IndexUnrepresentable` when some ``n_j`` with ``j <= j_max``
    is itself too large, and :class:`SeedUnevaluable` when an explicit prefix
    runs out.  Entries whose range end or sigma is too large are returned
    with those fields set to ``None``.
    """
    _require_seed(seed)
    if not isinstance(j_max, int) or j_max < 1:
        raise ValidationError(f"j_max must be >= 1, got {j_max!r}")
    blocks = _blocks(seed, _resolve_gap(gap), budget_bits)
    entries = []
    for idx in range(j_max):
        e = blocks.get(idx)
        if e is None:
            cause = entries[-1].next_error
            if isinstance(cause, IndexUnrepresentable):
                raise IndexUnrepresentable(
                    f"scheduled stage n_{idx + 1}, which lies past {cause.what}", cause.bits, budget_bits
                ) from cause
            raise cause  # type: ignore[misc]
        if e.sigma is None and not isinstance(e.sigma_error, IndexUnrepresentable):
            raise e.sigma_error  # type: ignore[misc]
        entries.append(e)
    return Schedule(seed, _gap_name(gap), tuple(entries))


# --- the C(s) defining sequence ----------------------------------------------


@dataclass(frozen=True)
class CSFamilySpec(DefiningSequenceSpec):
    """Defining sequence of ``C(s)``; labels come from the schedule of ``seed``."""

    seed: IncreasingSequenceSpec
    gap: str | GapRule = "pow2"
    budget_bits: int = DEFAULT_BUDGET_BITS

    def __post_init__(self) -> None:
        _require_seed(self.seed)
        _resolve_gap(self.gap)

    @property
    def blocks(self) -> _Blocks:
        return _blocks(self.seed, _resolve_gap(self.gap), self.budget_bits)

    def entry_for_stage(self, i: int) -> ScheduleEntry | None:
        """The block whose run ``[n_j, n_{j+1})`` contains stage ``i`` (None for i = 0)."""
        _check_stage(i, self.budget_bits)
        prev = None
        for e in self.blocks:
            if i < e.stage:
                return prev
            if e.next_stage is None:
                if i == e.stage or isinstance(e.next_error, IndexUnrepresentable):
                    return e
                raise e.next_error  # type: ignore[misc]
            if i < e.next_stage:
                return e
            prev = e
        raise AssertionError("schedule generator ended without a terminal entry")

    def stage_labels(self, i: int) -> StageLabeling:
        e = self.entry_for_stage(i)
        if e is None or i != e.stage:
            return ZeroLabels(i)
        if e.sigma is None and not isinstance(e.sigma_error, IndexUnrepresentable):
            raise e.sigma_error  # type: ignore[misc]
        if e.end is None:
            raise IndexUnrepresentable(
                f"seed index range of block {e.block} (stage {fmt_int(e.stage)})", e.stage + 1, self.budget_bits
            )
        return BingBlock(i, e.block, e.start, e.end)

    def label(self, addr: NodeAddress) -> int:
        labels = self.stage_labels(addr.depth)
        if isinstance(labels, BingBlock):
            return self.seed.term(labels.start + addr.ordinal, self.budget_bits)
        return 0

    def ray_label(self, ray: RaySpec, stage: int) -> int:
        """Label of the depth-``stage`` node on ``ray`` without building its address."""
        labels = self.stage_labels(stage)
        if isinstance(labels, BingBlock):
            return self.seed.term(labels.start + ray.ordinal_at(stage, self.budget_bits), self.budget_bits)
        return 0

    def stage_max(self, i: int) -> int:
        labels = self.stage_labels(i)
        if isinstance(labels, BingBlock):
            return self.seed.term(labels.end, self.budget_bits)
        return 0


def cs_spec(
    seed: IncreasingSequenceSpec,
    gap: str | GapRule = "pow2",
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> CSFamilySpec:
    return CSFamilySpec(seed, gap, budget_bits)


# --- antichain of almost disjoint sequences ----------------------------------


def antichain_terms(ray: RaySpec, count: int) -> list[int]:
    if count < 1:
        raise ValidationError("count must be >= 1")
    out = [1]
    bits = ray.iter_bits()
    for _ in range(count - 1):
        out.append(2 * out[-1] + next(bits))
    return out


def antichain_common_count(ray_a: RaySpec, ray_b: RaySpec) -> int | float:
    """Number of shared terms; ``math.inf`` for equal rays.

    Heap labels encode their whole path, so two rays share exactly the labels
    of their common prefix vertices.
    """
    d = ray_a.divergence_depth(ray_b)
    return math.inf if d is None else d + 1
