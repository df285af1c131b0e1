"""The labeled binary tree of a generalized Bing-Whitehead construction.

A node at depth ``i`` stands for one torus of stage ``M_i``; its label is the
number of Whitehead constructions performed inside that torus before the next
Bing split.  Nodes within a stage are ordered by the binary value of their
address (left child = bit 0), so the conventional 1-based index ``j`` of a
torus is ``ordinal + 1``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import (
    DEFAULT_BUDGET_BITS,
    StageOutOfRange,
    ValidationError,
    check_bits,
    fmt_int,
)

__all__ = [
    "NodeAddress",
    "RaySpec",
    "children",
    "ExplicitLabels",
    "ZeroLabels",
    "UniformLabels",
    "BingBlock",
    "StageLabeling",
    "DefiningSequenceSpec",
    "ExplicitSpec",
    "StandardBWSpec",
    "stage_labels",
    "label_at",
    "parse_ray",
]


def _check_bits_tuple(bits: Sequence[int], what: str) -> tuple[int, ...]:
    out = tuple(bits)
    for b in out:
        if b not in (0, 1) or isinstance(b, bool):
            raise ValidationError(f"{what} must contain only 0/1, got {b!r}")
    return out


@dataclass(frozen=True, slots=True)
class NodeAddress:
    """Finite path from the root; ``bits[k]`` is the turn taken at depth ``k``."""

    bits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", _check_bits_tuple(self.bits, "node address"))

    @classmethod
    def from_string(cls, text: str) -> NodeAddress:
        if text in ("", "root", "-"):
            return cls(())
        if not re.fullmatch(r"[01]+", text):
            raise ValidationError(f"node address must be a 0/1 string, got {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def depth(self) -> int:
        return len(self.bits)

    @property
    def ordinal(self) -> int:
        value = 0
        for b in self.bits:
            value = 2 * value + b
        return value

    @property
    def index(self) -> int:
        """1-based position ``j`` of the node within its stage."""
        return self.ordinal + 1

    def child(self, bit: int) -> NodeAddress:
        return NodeAddress(self.bits + (bit,))

    def parent(self) -> NodeAddress:
        if not self.bits:
            raise ValidationError("the root has no parent")
        return NodeAddress(self.bits[:-1])

    def __str__(self) -> str:
        return "".join(map(str, self.bits)) or "root"


def children(addr: NodeAddress) -> tuple[NodeAddress, NodeAddress]:
    return addr.child(0), addr.child(1)


def _primitive_period(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for p in range(1, n + 1):
        if n % p == 0 and period[:p] * (n // p) == period:
            return period[:p]
    return period


@dataclass(frozen=True, slots=True)
class RaySpec:
    """An eventually periodic infinite path: ``prefix`` then ``period`` forever.

    Instances are normalized on construction (primitive period, shortest
    prefix), so two specs describe the same bit stream iff they compare equal.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        prefix = _check_bits_tuple(self.prefix, "ray prefix")
        period = _check_bits_tuple(self.period, "ray period")
        if not period:
            raise ValidationError("ray period must be nonempty")
        period = _primitive_period(period)
        while prefix and prefix[-1] == period[-1]:
            period = (prefix[-1],) + period[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def all_zeros(cls, prefix: Sequence[int] = ()) -> RaySpec:
        return cls(tuple(prefix), (0,))

    @classmethod
    def all_ones(cls, prefix: Sequence[int] = ()) -> RaySpec:
        return cls(tuple(prefix), (1,))

    def bit(self, k: int) -> int:
        if k < 0:
            raise ValidationError("bit index must be nonnegative")
        lp = len(self.prefix)
        if k < lp:
            return self.prefix[k]
        return self.period[(k - lp) % len(self.period)]

    def bits(self, n: int) -> tuple[int, ...]:
        return tuple(self.bit(k) for k in range(n))

    def iter_bits(self) -> Iterator[int]:
        yield from self.prefix
        while True:
            yield from self.period

    def node(self, depth: int) -> NodeAddress:
        return NodeAddress(self.bits(depth))

    def ordinal_at(self, depth: int, budget_bits: int = DEFAULT_BUDGET_BITS) -> int:
        """Ordinal of the depth-``depth`` node on the ray, in closed form."""
        check_bits(depth, f"ordinal of a depth-{depth} node", budget_bits)
        lp, p = len(self.prefix), len(self.period)
        if depth <= lp:
            return NodeAddress(self.prefix[:depth]).ordinal
        head = NodeAddress(self.prefix).ordinal
        m = depth - lp
        q, rem = divmod(m, p)
        per = NodeAddress(self.period).ordinal
        # q copies of the period, as one integer: per * (2^{pq}-1)/(2^p-1)
        repeated = per * (((1 << (p * q)) - 1) // ((1 << p) - 1))
        tail = (repeated << rem) | NodeAddress(self.period[:rem]).ordinal
        return (head << m) | tail

    def divergence_depth(self, other: RaySpec) -> int | None:
        """First bit index where the rays differ, or ``None`` if they are equal."""
        if self == other:
            return None
        horizon = max(len(self.prefix), len(other.prefix)) + math.lcm(
            len(self.period), len(other.period)
        )
        for k in range(horizon):
            if self.bit(k) != other.bit(k):
                return k
        raise AssertionError("normalized rays compare unequal but agree on the horizon")

    def __str__(self) -> str:
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"


def parse_ray(text: str) -> RaySpec:
    """Parse ``"01(10)"`` -> prefix ``01`` then ``10`` repeated.

    ``"zeros"``/``"ones"`` and a bare ``"(0)"`` are accepted too.
    """
    text = text.strip()
    if text in ("zeros", "allzeros"):
        return RaySpec.all_zeros()
    if text in ("ones", "allones"):
        return RaySpec.all_ones()
    m = re.fullmatch(r"([01]*)\(([01]+)\)", text)
    if not m:
        raise ValidationError(f"ray literal must look like '01(10)', got {text!r}")
    return RaySpec(tuple(int(c) for c in m.group(1)), tuple(int(c) for c in m.group(2)))


# --- stage labelings -------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ExplicitLabels:
    stage: int
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != 2**self.stage:
            raise ValidationError(
                f"stage {self.stage} needs {2 ** self.stage} labels, got {len(self.labels)}"
            )
        if any((not isinstance(w, int)) or w < 0 for w in self.labels):
            raise ValidationError(f"stage {self.stage} labels must be naturals")

    def maximum(self) -> int:
        return max(self.labels)


@dataclass(frozen=True, slots=True)
class ZeroLabels:
    stage: int

    def maximum(self) -> int:
        return 0


@dataclass(frozen=True, slots=True)
class UniformLabels:
    """Every node of the stage carries ``value`` (standard BW stages)."""

    stage: int
    value: int

    def maximum(self) -> int:
        return self.value


@dataclass(frozen=True, slots=True)
class BingBlock:
    """A scheduled stage whose labels are seed terms ``start..end`` in order."""

    stage: int
    block: int
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.end - self.start + 1 != 1 << self.stage:
            raise ValidationError("Bing block range length must be 2**stage")


StageLabeling = Union[ExplicitLabels, ZeroLabels, UniformLabels, BingBlock]


def _check_stage(i: int, budget_bits: int) -> None:
    if not isinstance(i, int) or isinstance(i, bool) or i < 0:
        raise ValidationError(f"stage index must be a natural number, got {i!r}")
    check_bits(i.bit_length(), f"stage index {fmt_int(i)}", budget_bits)


class DefiningSequenceSpec:
    """Common interface of the symbolic defining-sequence descriptions."""

    budget_bits: int = DEFAULT_BUDGET_BITS

    def stage_labels(self, i: int) -> StageLabeling:
        raise NotImplementedError

    def label(self, addr: NodeAddress) -> int:
        raise NotImplementedError

    def stage_max(self, i: int) -> int:
        """``w_i``, the largest label of stage ``i``."""
        return self.stage_labels(i).maximum()


@dataclass(frozen=True)
class ExplicitSpec(DefiningSequenceSpec):
    """Finitely many stages given label by label; ``stages[i]`` has ``2**i`` entries."""

    stages: tuple[tuple[int, ...], ...]
    budget_bits: int = DEFAULT_BUDGET_BITS

    def __post_init__(self) -> None:
        stages = tuple(tuple(s) for s in self.stages)
        if not stages:
            raise ValidationError("explicit spec needs at least stage 0")
        for i, labels in enumerate(stages):
            ExplicitLabels(i, labels)
        if stages[0] != (0,):
            raise ValidationError("stage 0 must carry the single label 0")
        object.__setattr__(self, "stages", stages)

    @classmethod
    def zeros(cls, depth: int) -> ExplicitSpec:
        return cls(tuple((0,) * 2**i for i in range(depth + 1)))

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    def stage_labels(self, i: int) -> StageLabeling:
        _check_stage(i, self.budget_bits)
        if i > self.depth:
            raise StageOutOfRange(f"stage {fmt_int(i)} beyond explicit depth {self.depth}")
        return ExplicitLabels(i, self.stages[i])

    def label(self, addr: NodeAddress) -> int:
        if addr.depth > self.depth:
            raise StageOutOfRange(f"stage {addr.depth} beyond explicit depth {self.depth}")
        return self.stages[addr.depth][addr.ordinal]

    def stage_max(self, i: int) -> int:
        return max(self.stage_labels(i).labels)


@dataclass(frozen=True)
class StandardBWSpec(DefiningSequenceSpec):
    """Standard BW(m_1, m_2, ...): every depth-``i`` node carries ``m_i``.

    ``m_prefix`` followed by ``m_period`` repeated; with ``m_period=None``
    the sequence is finite and stages past its end are out of range.
    """

    m_prefix: tuple[int, ...] = ()
    m_period: tuple[int, ...] | None = None
    budget_bits: int = DEFAULT_BUDGET_BITS

    def __post_init__(self) -> None:
        prefix = tuple(self.m_prefix)
        period = None if self.m_period is None else tuple(self.m_period)
        for m in prefix + (period or ()):
            if not isinstance(m, int) or isinstance(m, bool) or m < 0:
                raise ValidationError(f"m values must be naturals, got {m!r}")
        if period is not None and not period:
            raise ValidationError("m period must be nonempty")
        object.__setattr__(self, "m_prefix", prefix)
        object.__setattr__(self, "m_period", period)

    def m(self, i: int) -> int:
        if i < 1:
            raise ValidationError("m is indexed from 1")
        lp = len(self.m_prefix)
        if i <= lp:
            return self.m_prefix[i - 1]
        if self.m_period is None:
            raise StageOutOfRange(f"stage {fmt_int(i)} beyond the {lp} given m values")
        return self.m_period[(i - 1 - lp) % len(self.m_period)]

    def stage_labels(self, i: int) -> StageLabeling:
        _check_stage(i, self.budget_bits)
        if i == 0:
            return ZeroLabels(0)
        value = self.m(i)
        return UniformLabels(i, value) if value else ZeroLabels(i)

    def label(self, addr: NodeAddress) -> int:
        return 0 if addr.depth == 0 else self.m(addr.depth)


def stage_labels(spec: DefiningSequenceSpec, i: int) -> StageLabeling:
    return spec.stage_labels(i)


def label_at(spec: DefiningSequenceSpec, addr: NodeAddress) -> int:
    """``w_{depth, ordinal+1}`` for the node at ``addr``."""
    return spec.label(addr)
