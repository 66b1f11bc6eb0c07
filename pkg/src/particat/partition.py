"""
Two-row set partitions and the four diagram operations.

A partition diagram has k upper points and l lower points; the k+l points are
split into nonempty blocks, and blocks may connect the two rows.  Internally
the upper points get ids 0..k-1 (left to right) and the lower points get ids
k..k+l-1 (left to right).  Every value is immutable and kept in a canonical
form: blocks are sorted internally, and the block list is ordered by first
appearance when scanning the upper row left to right and then the lower row
left to right.  Two diagrams are equal exactly when their canonical forms are.

The text grammar is ``<upper-word>[@<upper-colors>]:<lower-word>[@<lower-colors>]``
where the words are letter strings, the same letter denoting the same block
across both rows, and color strings are over ``{w, b}``.  Examples::

    a:a         the identity strand
    aab:accc    a three-block diagram in P(3, 4)
    ab@wb:ba@bw a colored crossing
    :           the empty diagram

Composition stacks one diagram on top of another.  ``compose(bottom, top)``
glues the lower row of ``top`` to the upper row of ``bottom`` and returns the
result together with the number of removed loops, i.e. connected components
of the gluing that consist of middle points only.  Each such loop contributes
a factor N in the associated matrix calculus, so the count is tracked exactly.

Points may optionally carry a color (``w`` or ``b``); colored and uncolored
diagrams never mix.  Colors travel with their points under every operation
and flip when a point changes row under rotation.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

__all__ = [
    "Partition",
    "PartitionStats",
    "CompositionResult",
    "GrammarError",
    "ArityError",
    "ColorError",
    "canonicalize",
    "tensor",
    "compose",
    "involution",
    "rotate",
    "stats",
    "predicates",
    "conjugate_colors",
    "is_noncrossing",
    "is_pair",
    "all_blocks_even",
    "blocks_at_most_two",
    "is_symmetric",
    "is_idempotent",
    "is_projective",
    "identity",
    "parse_partition",
    "serialize",
    "empty_partition",
    "all_set_partitions",
    "random_partition",
]

WHITE = "w"
BLACK = "b"

Corner = Literal["ul", "ll", "ur", "lr"]


class GrammarError(ValueError):
    """Raised on malformed partition text; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ArityError(ValueError):
    """Raised when row counts do not match the requested operation."""


class ColorError(ValueError):
    """Raised on colored/uncolored mismatches or bad color data."""


def _flip(color: str) -> str:
    return BLACK if color == WHITE else WHITE


class Partition:
    """An immutable two-row set partition, always in canonical form.

    Attributes:
        upper:  number of upper points k.
        lower:  number of lower points l.
        blocks: tuple of blocks; each block is an ascending tuple of point
                ids in 0..k+l-1 (ids < k are upper).  Blocks are ordered by
                their minimal id.
        colors: ``None`` for an uncolored diagram, else a tuple of 'w'/'b'
                of length k+l (one entry per point).
    """

    __slots__ = ("upper", "lower", "blocks", "colors", "_hash", "_ser")

    upper: int
    lower: int
    blocks: tuple[tuple[int, ...], ...]
    colors: Optional[tuple[str, ...]]

    def __init__(
        self,
        upper: int,
        lower: int,
        blocks: tuple[tuple[int, ...], ...],
        colors: Optional[tuple[str, ...]] = None,
    ):
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_ser", None)

    def __setattr__(self, name, value):  # pragma: no cover - immutability
        raise AttributeError("Partition is immutable")

    @staticmethod
    def make(
        upper: int,
        lower: int,
        blocks: Iterable[Iterable[int]],
        colors: Optional[Sequence[str]] = None,
    ) -> "Partition":
        """Validate and canonicalize raw block data into a Partition."""
        n = upper + lower
        norm = tuple(sorted(tuple(sorted(set(b))) for b in blocks))
        seen: list[int] = []
        for b in norm:
            if not b:
                raise ValueError("empty block")
            seen.extend(b)
        if sorted(seen) != list(range(n)):
            raise ValueError(
                f"blocks must partition the {n} points exactly, got {sorted(seen)}"
            )
        col: Optional[tuple[str, ...]] = None
        if colors is not None:
            col = tuple(colors)
            if len(col) != n:
                raise ColorError(f"expected {n} colors, got {len(col)}")
            bad = [c for c in col if c not in (WHITE, BLACK)]
            if bad:
                raise ColorError(f"colors must be 'w' or 'b', got {bad[0]!r}")
        return Partition(upper, lower, norm, col)

    @staticmethod
    def _raw(
        upper: int,
        lower: int,
        blocks: tuple[tuple[int, ...], ...],
        colors: Optional[tuple[str, ...]],
    ) -> "Partition":
        """Trusted constructor: blocks must already be canonical."""
        return Partition(upper, lower, blocks, colors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.upper == other.upper
            and self.lower == other.lower
            and self.blocks == other.blocks
            and self.colors == other.colors
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.upper, self.lower, self.blocks, self.colors))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def n_points(self) -> int:
        return self.upper + self.lower

    @property
    def colored(self) -> bool:
        return self.colors is not None

    def block_of(self) -> list[int]:
        """Map point id -> index of its block in canonical order."""
        owner = [-1] * self.n_points
        for i, b in enumerate(self.blocks):
            for x in b:
                owner[x] = i
        return owner

    def upper_colors(self) -> tuple[str, ...]:
        if self.colors is None:
            raise ColorError("partition is uncolored")
        return self.colors[: self.upper]

    def lower_colors(self) -> tuple[str, ...]:
        if self.colors is None:
            raise ColorError("partition is uncolored")
        return self.colors[self.upper :]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Partition({serialize(self)!r})"

    def __str__(self) -> str:
        return serialize(self)

    def sort_key(self) -> tuple[int, int, str]:
        """Total order used for deterministic enumeration everywhere."""
        return (self.n_points, self.upper, serialize(self))


@dataclass(frozen=True)
class PartitionStats:
    """Block counts: b blocks, t through-blocks, beta = b - t."""

    b: int
    t: int
    beta: int


class CompositionResult(tuple):
    """Pair (partition, removed_loops) returned by :func:`compose`."""

    __slots__ = ()

    def __new__(cls, partition: Partition, removed_loops: int):
        return super().__new__(cls, (partition, removed_loops))

    @property
    def partition(self) -> Partition:
        return self[0]

    @property
    def removed_loops(self) -> int:
        return self[1]


# ---------------------------------------------------------------------------
# construction helpers


def empty_partition(colored: bool = False) -> Partition:
    """The diagram with no points at all; unit for the tensor product."""
    return Partition.make(0, 0, (), colors=() if colored else None)


def identity(k: int, colors: Optional[Sequence[str]] = None) -> Partition:
    """k vertical strands; optional per-strand colors (same on both ends)."""
    blocks = [(i, k + i) for i in range(k)]
    col = None
    if colors is not None:
        col = tuple(colors) + tuple(colors)
    return Partition.make(k, k, blocks, col)


def canonicalize(p: Partition) -> Partition:
    """Return the canonical form of ``p`` (a no-op, kept for symmetry).

    Construction already normalizes, so this is the identity; it exists so
    callers can state intent and so the idempotence contract is explicit.
    """
    return Partition.make(p.upper, p.lower, p.blocks, p.colors)


# ---------------------------------------------------------------------------
# the four category operations


def tensor(p: Partition, q: Partition) -> Partition:
    """Horizontal concatenation: q is placed to the right of p."""
    if p.colored != q.colored:
        raise ColorError("cannot tensor colored with uncolored")
    k, l = p.upper, p.lower
    k2, l2 = q.upper, q.lower

    def shift(x: int) -> int:
        # q's upper points slide right by k, its lower points by k + l
        return x + k if x < k2 else x + k + l

    blocks = [tuple(x if x < k else x + k2 for x in b) for b in p.blocks]
    blocks += [tuple(shift(x) for x in b) for b in q.blocks]
    blocks.sort()
    colors = None
    if p.colored:
        assert p.colors is not None and q.colors is not None
        colors = (
            p.colors[:k] + q.colors[:k2] + p.colors[k:] + q.colors[k2:]
        )
    return Partition._raw(k + k2, l + l2, tuple(blocks), colors)


def compose(bottom: Partition, top: Partition) -> CompositionResult:
    """Stack ``top`` over ``bottom`` and read off the glued diagram.

    Requires ``top.lower == bottom.upper``; the shared points become middle
    points and are removed.  The result lives in P(top.upper, bottom.lower).
    Removed loops are the connected components of the gluing consisting of
    middle points only (an isolated middle point counts as one loop).
    """
    if top.lower != bottom.upper:
        raise ArityError(
            f"cannot compose: top has {top.lower} lower points, "
            f"bottom has {bottom.upper} upper points"
        )
    if top.colored != bottom.colored:
        raise ColorError("cannot compose colored with uncolored")
    if top.colored and top.lower_colors() != bottom.upper_colors():
        raise ColorError("middle-row colors do not match")
    k = top.upper
    mid = top.lower
    m = bottom.lower
    total = k + mid + m
    # node ids: 0..k-1 result uppers, k..k+mid-1 middles, k+mid.. result lowers
    parent = list(range(total))

    def union(x: int, y: int) -> None:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        if x != y:
            parent[y] = x

    for b in top.blocks:
        first = b[0]
        for x in b[1:]:
            union(first, x)
    bu = bottom.upper
    shift = k + mid - bu
    for b in bottom.blocks:
        first = b[0] + k if b[0] < bu else b[0] + shift
        for x in b[1:]:
            union(first, x + k if x < bu else x + shift)

    # collect components in one ascending scan; within a component the node
    # ids come out ascending, so each block tuple is ascending already and
    # only the outer block order needs a final sort
    comps: dict[int, list[int]] = {}
    for node in range(total):
        r = parent[node]
        while parent[r] != r:
            r = parent[r]
        grp = comps.get(r)
        if grp is None:
            comps[r] = [node]
        else:
            grp.append(node)

    blocks = []
    loops = 0
    km = k + mid
    for members in comps.values():
        outer = [x if x < k else x - mid for x in members if x < k or x >= km]
        if outer:
            blocks.append(tuple(outer))
        else:
            loops += 1
    blocks.sort()
    colors = None
    if top.colored:
        assert top.colors is not None and bottom.colors is not None
        colors = top.colors[:k] + bottom.colors[bu:]
    return CompositionResult(Partition._raw(k, m, tuple(blocks), colors), loops)


def involution(p: Partition) -> Partition:
    """Turn the diagram upside down; colors stay attached to their points."""
    k, l = p.upper, p.lower

    def swap(x: int) -> int:
        return x + l if x < k else x - k

    blocks = sorted(tuple(sorted(swap(x) for x in b)) for b in p.blocks)
    colors = None
    if p.colored:
        assert p.colors is not None
        colors = p.colors[k:] + p.colors[:k]
    return Partition._raw(l, k, tuple(blocks), colors)


def rotate(p: Partition, corner: Corner) -> Partition:
    """Move one outermost point to the other row, keeping all strings.

    ``ul``: leftmost upper point becomes leftmost lower point.
    ``ll``: leftmost lower point becomes leftmost upper point.
    ``ur``: rightmost upper point becomes rightmost lower point.
    ``lr``: rightmost lower point becomes rightmost upper point.

    In colored mode the moved point's color flips.
    """
    k, l = p.upper, p.lower
    if corner in ("ul", "ur"):
        if k == 0:
            raise ArityError("upper row is empty")
        new_k, new_l = k - 1, l + 1
        moved = 0 if corner == "ul" else k - 1
        if corner == "ul":
            # old upper i>0 -> i-1; old point 0 -> leftmost lower; lowers shift by 1
            remap = {0: new_k}
            for i in range(1, k):
                remap[i] = i - 1
            for j in range(l):
                remap[k + j] = new_k + 1 + j
        else:
            # old upper k-1 -> rightmost lower; lowers keep their slots
            remap = {k - 1: new_k + l}
            for i in range(k - 1):
                remap[i] = i
            for j in range(l):
                remap[k + j] = new_k + j
    else:
        if l == 0:
            raise ArityError("lower row is empty")
        new_k, new_l = k + 1, l - 1
        moved = k if corner == "ll" else k + l - 1
        if corner == "ll":
            remap = {k: 0}
            for i in range(k):
                remap[i] = i + 1
            for j in range(1, l):
                remap[k + j] = new_k + j - 1
        else:
            remap = {k + l - 1: k}
            for i in range(k):
                remap[i] = i
            for j in range(l - 1):
                remap[k + j] = new_k + j
    blocks = [tuple(remap[x] for x in b) for b in p.blocks]
    colors = None
    if p.colored:
        assert p.colors is not None
        new_colors = [""] * (k + l)
        for old, new in remap.items():
            c = p.colors[old]
            new_colors[new] = _flip(c) if old == moved else c
        colors = tuple(new_colors)
    return Partition.make(new_k, new_l, blocks, colors)


# ---------------------------------------------------------------------------
# statistics and predicates


def stats(p: Partition) -> PartitionStats:
    """Counts (b, t, beta): blocks, through-blocks, non-through-blocks."""
    k = p.upper
    b = len(p.blocks)
    t = sum(1 for blk in p.blocks if blk[0] < k and blk[-1] >= k)
    return PartitionStats(b, t, b - t)


def _boundary_positions(p: Partition) -> list[int]:
    """Position of each point on the diagram boundary, walked clockwise.

    Upper points come first left to right, then the lower points right to
    left, so strings can be drawn inside the disk without crossings exactly
    when no two blocks interleave in this order.
    """
    k, l = p.upper, p.lower
    pos = [0] * (k + l)
    for i in range(k):
        pos[i] = i
    for j in range(l):
        pos[k + j] = k + (l - 1 - j)
    return pos


def is_noncrossing(p: Partition) -> bool:
    """True when no two blocks interleave in the cyclic boundary order."""
    pos = _boundary_positions(p)
    occ = [sorted(pos[x] for x in b) for b in p.blocks]
    nb = len(occ)
    for i in range(nb):
        for j in range(i + 1, nb):
            merged = sorted((q, 0) for q in occ[i]) + sorted((q, 1) for q in occ[j])
            merged.sort()
            changes = sum(
                1 for a, bb in zip(merged, merged[1:]) if a[1] != bb[1]
            )
            if changes >= 3:
                return False
    return True


def is_pair(p: Partition) -> bool:
    return all(len(b) == 2 for b in p.blocks)


def all_blocks_even(p: Partition) -> bool:
    return all(len(b) % 2 == 0 for b in p.blocks)


def blocks_at_most_two(p: Partition) -> bool:
    return all(len(b) <= 2 for b in p.blocks)


def is_symmetric(p: Partition) -> bool:
    return p == involution(p)


def is_idempotent(p: Partition) -> bool:
    if p.upper != p.lower:
        raise ArityError("idempotence needs equal row sizes")
    return compose(p, p).partition == p


def is_projective(p: Partition) -> bool:
    if p.upper != p.lower:
        raise ArityError("projectivity needs equal row sizes")
    return is_symmetric(p) and is_idempotent(p)


def predicates(p: Partition) -> dict[str, bool]:
    """Bundle of the standard structural predicates.

    ``is_idempotent`` and ``is_projective`` are reported as False when the
    row sizes differ (the direct functions raise instead).
    """
    square = p.upper == p.lower
    idem = square and compose(p, p).partition == p
    sym = is_symmetric(p)
    return {
        "is_noncrossing": is_noncrossing(p),
        "is_pair": is_pair(p),
        "all_blocks_even": all_blocks_even(p),
        "blocks_at_most_two": blocks_at_most_two(p),
        "is_symmetric": sym,
        "is_idempotent": idem,
        "is_projective": sym and idem,
    }


def conjugate_colors(p: Partition) -> Partition:
    """Flip every point's color; defined for colored diagrams only."""
    if p.colors is None:
        raise ColorError("partition is uncolored")
    return Partition.make(
        p.upper, p.lower, p.blocks, tuple(_flip(c) for c in p.colors)
    )


# ---------------------------------------------------------------------------
# text grammar

_LETTERS = string.ascii_lowercase + string.ascii_uppercase


def serialize(p: Partition) -> str:
    """Canonical text form; inverse of :func:`parse_partition`."""
    cached = p._ser
    if cached is not None:
        return cached
    if len(p.blocks) > len(_LETTERS):
        raise ValueError("too many blocks for the letter grammar")
    owner = p.block_of()
    upper_word = "".join(_LETTERS[owner[i]] for i in range(p.upper))
    lower_word = "".join(
        _LETTERS[owner[p.upper + j]] for j in range(p.lower)
    )
    if p.colors is None:
        text = f"{upper_word}:{lower_word}"
    else:
        uc = "".join(p.colors[: p.upper])
        lc = "".join(p.colors[p.upper :])
        # a colored empty row still needs the marker so parsing stays unambiguous
        up = f"{upper_word}@{uc}" if p.upper else "@"
        lo = f"{lower_word}@{lc}" if p.lower else "@"
        text = f"{up}:{lo}"
    object.__setattr__(p, "_ser", text)
    return text


def _parse_row(text: str, offset: int) -> tuple[str, Optional[str]]:
    if "@" in text:
        word, _, colortext = text.partition("@")
        return word, colortext
    return text, None


def parse_partition(text: str) -> Partition:
    """Parse the letter grammar; raises :class:`GrammarError` on bad input."""
    if text.count(":") != 1:
        raise GrammarError("expected exactly one ':'", text.find(":"))
    upper_text, lower_text = text.split(":")
    upper_word, upper_colors = _parse_row(upper_text, 0)
    lower_word, lower_colors = _parse_row(lower_text, len(upper_text) + 1)
    if (upper_colors is None) != (lower_colors is None):
        raise GrammarError("either both rows carry colors or neither does")
    k, l = len(upper_word), len(lower_word)
    blocks: dict[str, list[int]] = {}
    for pos, ch in enumerate(upper_word + lower_word):
        if ch not in _LETTERS:
            raise GrammarError(f"invalid block letter {ch!r}", pos)
        blocks.setdefault(ch, []).append(pos)
    colors = None
    if upper_colors is not None:
        assert lower_colors is not None
        if len(upper_colors) != k:
            raise GrammarError(
                f"upper row has {k} points but {len(upper_colors)} colors"
            )
        if len(lower_colors) != l:
            raise GrammarError(
                f"lower row has {l} points but {len(lower_colors)} colors"
            )
        for pos, ch in enumerate(upper_colors + lower_colors):
            if ch not in (WHITE, BLACK):
                raise GrammarError(f"invalid color {ch!r}", pos)
        colors = tuple(upper_colors + lower_colors)
    return Partition.make(k, l, blocks.values(), colors)


# ---------------------------------------------------------------------------
# enumeration and random generation


def all_set_partitions(n: int):
    """Yield all set partitions of 0..n-1 via restricted growth strings."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def emit() -> tuple[tuple[int, ...], ...]:
        groups: dict[int, list[int]] = {}
        for i, g in enumerate(rgs):
            groups.setdefault(g, []).append(i)
        return tuple(tuple(g) for g in groups.values())

    def rec(i: int, max_used: int):
        if i == n:
            yield emit()
            return
        for g in range(max_used + 2):
            rgs[i] = g
            yield from rec(i + 1, max(max_used, g))

    yield from rec(1, 0)


def random_partition(rng, k: int, l: int, colored: bool = False) -> Partition:
    """A random diagram in P(k, l); block count follows a CRP-style draw."""
    n = k + l
    if n == 0:
        return empty_partition(colored)
    blocks: list[list[int]] = []
    for x in range(n):
        choice = rng.randrange(len(blocks) + 1)
        if choice == len(blocks):
            blocks.append([x])
        else:
            blocks[choice].append(x)
    colors = None
    if colored:
        colors = tuple(rng.choice((WHITE, BLACK)) for _ in range(n))
    return Partition.make(k, l, blocks, colors)
