"""Exact partial sums of ``sum_i 2**-sigma_i`` and divergence certificates.

``sigma_i = w_1 + ... + w_i`` with ``w_i`` the largest label of stage ``i``.
When the series diverges the decomposition into points and components of
the compactum is shrinkable, so the construction can be realized as a
Cantor set.  Divergence is only ever certified by a recognized structural
rule; finite data alone yields a partial sum, never a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .construction import CSFamilySpec, pow2_gap
from .errors import DEFAULT_BUDGET_BITS, ValidationError, check_bits, fmt_int
from .tree import DefiningSequenceSpec, ExplicitSpec, StandardBWSpec

__all__ = [
    "Dyadic",
    "SeriesState",
    "DivergenceVerdict",
    "series_state",
    "divergence_report",
    "block_contributions",
    "DIVERGES",
    "PARTIAL",
    "UNKNOWN",
]

DIVERGES = "diverges-certified"
PARTIAL = "partial-only"
UNKNOWN = "unknown"

REASON_CS_BLOCK = "cs-block-rule"
REASON_BOUNDED_SIGMA = "bounded-sigma"
REASON_CONVERGES = "series-converges"
REASON_UNRECOGNIZED = "unrecognized-pattern"


@total_ordering
@dataclass(frozen=True, slots=True, eq=False)
class Dyadic:
    """The nonnegative rational ``numerator / 2**exponent``, kept normalized."""

    numerator: int
    exponent: int = 0

    def __post_init__(self) -> None:
        n, e = self.numerator, self.exponent
        if e < 0:
            n, e = n << -e, 0
        if n == 0:
            e = 0
        elif e:
            shift = min((n & -n).bit_length() - 1, e)
            n, e = n >> shift, e - shift
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def power(cls, k: int) -> Dyadic:
        """``2**-k``."""
        return cls(1, k)

    def __add__(self, other: Dyadic | int) -> Dyadic:
        if isinstance(other, int):
            other = Dyadic(other)
        e = max(self.exponent, other.exponent)
        return Dyadic(
            (self.numerator << (e - self.exponent)) + (other.numerator << (e - other.exponent)), e
        )

    __radd__ = __add__

    def __mul__(self, k: int) -> Dyadic:
        return Dyadic(self.numerator * k, self.exponent)

    __rmul__ = __mul__

    def _cmp_key(self, other: Dyadic) -> tuple[int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.numerator == other.numerator and self.exponent == other.exponent

    def __lt__(self, other: Dyadic | int) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        a, b = self._cmp_key(other)
        return a < b

    def __hash__(self) -> int:
        return hash((self.numerator, self.exponent))

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        n, e = self.numerator, self.exponent
        extra = n.bit_length() - 64
        if extra > 0:
            n, e = n >> extra, e - extra
        if e > 2000:
            return 0.0
        if e < -2000:
            return math.inf
        try:
            return math.ldexp(float(n), -e)
        except OverflowError:
            return math.inf

    def __str__(self) -> str:
        num = fmt_int(self.numerator)
        return f"{num}/2^{fmt_int(self.exponent)}" if self.exponent else num

    def __repr__(self) -> str:
        return f"Dyadic({fmt_int(self.numerator)}, {fmt_int(self.exponent)})"


@dataclass(frozen=True)
class SeriesState:
    stage: int
    sigma: int
    partial_sum: Dyadic


@dataclass(frozen=True)
class DivergenceVerdict:
    kind: str
    reason: str
    detail: str = ""
    state: SeriesState | None = None

    @property
    def certified(self) -> bool:
        return self.kind == DIVERGES


def _budget(spec: DefiningSequenceSpec) -> int:
    return getattr(spec, "budget_bits", DEFAULT_BUDGET_BITS)


def _term(x: Dyadic, budget: int) -> Dyadic:
    """``x`` after checking that its denominator fits the bit budget."""
    check_bits(x.exponent, "denominator of the exact partial sum", budget)
    return x


def _per_stage(spec: DefiningSequenceSpec, i: int) -> SeriesState:
    budget = _budget(spec)
    sigma, total = 0, Dyadic(0)
    for t in range(1, i + 1):
        sigma += spec.stage_max(t)
        total += _term(Dyadic.power(sigma), budget)
    return SeriesState(i, sigma, total)


def _geometric_block(first_exp: int, step: int, count: int, budget: int = DEFAULT_BUDGET_BITS) -> Dyadic:
    """``sum_{c<count} 2**-(first_exp + c*step)`` as an exact dyadic."""
    check_bits(first_exp + count * step, "denominator of the exact partial sum", budget)
    if count <= 0:
        return Dyadic(0)
    if step == 0:
        return Dyadic(count, first_exp)
    # sum 2^{-c*step} = (2^{count*step} - 1) / ((2^step - 1) * 2^{(count-1)*step})
    num = ((1 << (count * step)) - 1) // ((1 << step) - 1)
    return Dyadic(num, first_exp + (count - 1) * step)


def _standard_series(spec: StandardBWSpec, i: int) -> SeriesState:
    lp = len(spec.m_prefix)
    if spec.m_period is None or i <= lp:
        return _per_stage(spec, i)
    head = _per_stage(spec, lp)
    sigma, total = head.sigma, head.partial_sum
    period = spec.m_period
    p, step = len(period), sum(period)
    full, rem = divmod(i - lp, p)
    # within one period the offsets are the prefix sums of the period
    offset = 0
    for k in range(p):
        offset += period[k]
        reps = full + (1 if k < rem else 0)
        total += _geometric_block(sigma + offset, step, reps, _budget(spec))
    sigma += full * step + sum(period[:rem])
    return SeriesState(i, sigma, total)


def _cs_series(spec: CSFamilySpec, i: int) -> SeriesState:
    total, sigma = Dyadic(0), 0
    for e in spec.blocks:
        if i < e.stage:
            break
        if e.next_stage is not None and i >= e.next_stage:
            total += _term(Dyadic(e.next_stage - e.stage, e.sigma), spec.budget_bits)  # a whole run
            continue
        if e.sigma is None:
            raise e.sigma_error  # type: ignore[misc]
        total += _term(Dyadic(i - e.stage + 1, e.sigma), spec.budget_bits)
        sigma = e.sigma
        break
    return SeriesState(i, sigma, total)


def series_state(spec: DefiningSequenceSpec, i: int) -> SeriesState:
    """``sigma_i`` and ``sum_{t=1..i} 2**-sigma_t`` exactly.

    C(s) specs are summed run by run (sigma is constant between scheduled
    stages), so stages like ``2**36 + 4`` cost nothing.
    """
    if not isinstance(i, int) or i < 0:
        raise ValidationError(f"stage must be a natural number, got {i!r}")
    if isinstance(spec, CSFamilySpec):
        spec.entry_for_stage(i)  # budget/range checks
        return _cs_series(spec, i)
    spec.stage_labels(i)
    if isinstance(spec, StandardBWSpec):
        return _standard_series(spec, i)
    return _per_stage(spec, i)


def block_contributions(spec: CSFamilySpec, j_max: int) -> list[tuple[int, Dyadic]]:
    """``(n_{j+1} - n_j) * 2**-sigma(n_j)`` for every block with representable ends."""
    out = []
    for e in spec.blocks:
        if e.block > j_max or e.next_stage is None:
            break
        out.append((e.block, Dyadic(e.next_stage - e.stage, e.sigma)))
    return out


def divergence_report(spec: DefiningSequenceSpec) -> DivergenceVerdict:
    if isinstance(spec, CSFamilySpec):
        if spec.gap in ("pow2", pow2_gap):
            checked = block_contributions(spec, 64)
            if any(c != 1 for _, c in checked):
                return DivergenceVerdict(UNKNOWN, REASON_UNRECOGNIZED, "block rule failed a spot check")
            return DivergenceVerdict(
                DIVERGES,
                REASON_CS_BLOCK,
                f"every scheduled block contributes exactly 1 (checked exactly for blocks 1..{len(checked)})",
            )
        return DivergenceVerdict(UNKNOWN, REASON_UNRECOGNIZED, f"gap rule {spec.gap!r} has no certificate")
    if isinstance(spec, StandardBWSpec):
        if spec.m_period is None:
            return DivergenceVerdict(
                PARTIAL, REASON_UNRECOGNIZED, "finite m data", series_state(spec, len(spec.m_prefix))
            )
        lp = len(spec.m_prefix)
        if sum(spec.m_period) == 0:
            head = series_state(spec, lp)
            return DivergenceVerdict(
                DIVERGES,
                REASON_BOUNDED_SIGMA,
                f"m vanishes past stage {lp}, so sigma stays {head.sigma} and every term is 2^-{head.sigma}",
            )
        return DivergenceVerdict(
            UNKNOWN,
            REASON_CONVERGES,
            "sigma grows linearly along the period, so the series converges and the criterion is not met",
        )
    if isinstance(spec, ExplicitSpec):
        return DivergenceVerdict(
            PARTIAL, REASON_UNRECOGNIZED, "finite explicit data", series_state(spec, spec.depth)
        )
    return DivergenceVerdict(UNKNOWN, REASON_UNRECOGNIZED)
