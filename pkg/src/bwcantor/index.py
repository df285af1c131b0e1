"""Symbolic geometric-index calculus.

``N(K, T)`` counts the minimal intersections of ``K`` with a meridional disk
of ``T``.  Both the Bing and the Whitehead link have index 2 in their
parent, indices multiply under nesting, and two index-0 tori form a union of
even index.  No geometry is involved: these are the bookkeeping rules the
stage-matching arguments rely on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ValidationError
from .tree import DefiningSequenceSpec, RaySpec

__all__ = [
    "LinkKind",
    "IndexedNesting",
    "link_index",
    "compose_index",
    "parity_admissible",
    "stage_index",
    "ray_chain",
    "parse_chain",
]


class LinkKind(enum.Enum):
    BING = "bing"
    WHITEHEAD = "whitehead"


_LINK_INDEX = {LinkKind.BING: 2, LinkKind.WHITEHEAD: 2}


@dataclass(frozen=True)
class IndexedNesting:
    """Link kinds met going inward from an outer torus to an inner one."""

    chain: tuple[LinkKind, ...] = ()

    def __add__(self, other: IndexedNesting) -> IndexedNesting:
        return IndexedNesting(self.chain + other.chain)

    def __len__(self) -> int:
        return len(self.chain)


def link_index(kind: LinkKind) -> int:
    return _LINK_INDEX[LinkKind(kind)]


def compose_index(chain: IndexedNesting | Iterable[LinkKind]) -> int:
    """Product of the link indices along ``chain``; the empty chain has index 1."""
    kinds = chain.chain if isinstance(chain, IndexedNesting) else tuple(chain)
    out = 1
    for k in kinds:
        out *= link_index(k)
    return out


def parity_admissible(index_a: int, index_b: int, pair_index: int) -> bool:
    """Whether ``pair_index`` is possible for the union of two tori of the given indices.

    Only the case of two null-homologous tori (index 0 each) constrains the
    union, whose index must then be even.
    """
    for x in (index_a, index_b, pair_index):
        if not isinstance(x, int) or x < 0:
            raise ValidationError(f"indices are natural numbers, got {x!r}")
    if index_a == 0 and index_b == 0:
        return pair_index % 2 == 0
    return True


def stage_index(i: int, k: int) -> int:
    """Index of a stage-``k`` component in the stage-``i`` torus containing it.

    Stages here are construction steps, one link per step, so the answer is
    ``2**(k - i)`` for every defining sequence.
    """
    if not (0 <= i <= k):
        raise ValidationError(f"need 0 <= i <= k, got i={i}, k={k}")
    return 1 << (k - i)


def ray_chain(spec: DefiningSequenceSpec, ray: RaySpec, i: int, k: int) -> IndexedNesting:
    """Link kinds along ``ray`` from tree depth ``i`` down to tree depth ``k``.

    Each node with label ``w`` contributes ``w`` Whitehead links followed by
    the Bing link to the next depth.
    """
    if not (0 <= i <= k):
        raise ValidationError(f"need 0 <= i <= k, got i={i}, k={k}")
    out: list[LinkKind] = []
    for depth in range(i, k):
        w = spec.label(ray.node(depth))
        out.extend([LinkKind.WHITEHEAD] * w)
        out.append(LinkKind.BING)
    return IndexedNesting(tuple(out))


def parse_chain(items: Sequence[str] | str) -> IndexedNesting:
    """Accepts ``"bing,whitehead"``, ``"BW"`` or a list of names; ``""`` is the empty chain."""
    if isinstance(items, str):
        text = items.strip()
        if "," in text or text.lower() in ("bing", "whitehead"):
            items = [t for t in text.split(",") if t.strip()]
        else:
            items = list(text)
    out = []
    for raw in items:
        t = raw.strip().lower()
        if t in ("b", "bing"):
            out.append(LinkKind.BING)
        elif t in ("w", "whitehead"):
            out.append(LinkKind.WHITEHEAD)
        else:
            raise ValidationError(f"unknown link kind {raw!r}")
    return IndexedNesting(tuple(out))
