"""
Structural theory of diagrams: the through-block factorization and what is
built on it.

Every diagram p factors uniquely as p = q* r s where s and q are *building*
diagrams (each lower point sits in its own block, is connected upward, and
lower points are ordered by their smallest upper neighbour) and r is a
*through* diagram (a permutation written as vertical-free pairs).  The number
of through-blocks of p equals the middle arity of the factorization.

Projective diagrams (symmetric idempotents, equivalently q* q for some q) are
partially ordered by domination: q is dominated by p when pq = q.  Tensor
products of projectives are broken below by grafting *mixing diagrams* between
the through-block structures; the noncrossing mixing diagrams fall into two
one-parameter families realized here by :func:`square` and :func:`boxvert`.

Symmetry groups, the cross-arity equivalence of projectives, and the word
invariants for the even-block and colored-pair settings also live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Optional, Sequence, TYPE_CHECKING

from .partition import (
    ArityError,
    ColorError,
    CompositionResult,
    Partition,
    WHITE,
    all_blocks_even,
    compose,
    empty_partition,
    involution,
    is_pair,
    is_projective,
    serialize,
    stats,
    tensor,
)

if TYPE_CHECKING:  # pragma: no cover
    from .categories import CategorySpec

__all__ = [
    "ThroughBlockDecomposition",
    "MixingPartition",
    "Permutation",
    "through_block_decomposition",
    "projective_from",
    "dominates",
    "strictly_dominates",
    "to_through_partition",
    "p_sigma",
    "sym_group",
    "equivalent",
    "enumerate_mixing",
    "mix",
    "square",
    "boxvert",
    "word_h",
    "word_u",
    "is_building",
    "is_through",
    "upper_building",
    "compose_chain",
    "SYM_SEARCH_CAP",
]

Permutation = tuple[int, ...]
"""A permutation of 0..m-1 given as the tuple of images."""

SYM_SEARCH_CAP = 8
"""Largest through-block count for which the full permutation search runs."""


@dataclass(frozen=True)
class ThroughBlockDecomposition:
    """The unique triple (q, r, s) with source = q* r s.

    ``s`` rebuilds the upper row (a building diagram in P(k, t)), ``q`` the
    lower row (in P(l, t)), and ``r`` matches their through-blocks up (a
    through diagram in P(t, t)).
    """

    lower_building: Partition  # q
    middle: Partition  # r
    upper_building: Partition  # s

    def recompose(self) -> Partition:
        return compose_chain(
            involution(self.lower_building), self.middle, self.upper_building
        )


@dataclass(frozen=True)
class MixingPartition:
    """A projective diagram grafted between two through-block structures.

    All blocks have size 2 or 4: vertical pairs (a, a'), upper pairs (a, b)
    and their mirrored lower pairs with a in the left part and b in the right
    part, and quadruples (a, a', b, b') across the parts.
    """

    left_arity: int
    right_arity: int
    partition: Partition


def compose_chain(*parts: Partition) -> Partition:
    """Compose bottom-to-top: compose_chain(c, b, a) is the stack a over b over c."""
    if not parts:
        raise ValueError("need at least one diagram")
    result = parts[-1]
    for nxt in reversed(parts[:-1]):
        result = compose(nxt, result).partition
    return result


# ---------------------------------------------------------------------------
# building / through structure


def is_building(p: Partition) -> bool:
    """Lower points in distinct blocks, each connected upward, ordered by
    their smallest upper neighbour."""
    k = p.upper
    owner = p.block_of()
    seen: set[int] = set()
    mins: list[int] = []
    for j in range(p.lower):
        b = owner[k + j]
        if b in seen:
            return False
        seen.add(b)
        ups = [x for x in p.blocks[b] if x < k]
        if not ups:
            return False
        mins.append(min(ups))
    return all(a < b for a, b in zip(mins, mins[1:]))


def is_through(p: Partition) -> bool:
    """A permutation diagram: every block one upper and one lower point."""
    if p.upper != p.lower:
        return False
    return all(
        len(b) == 2 and b[0] < p.upper <= b[1] for b in p.blocks
    )


def through_block_decomposition(p: Partition) -> ThroughBlockDecomposition:
    """Factor p = q* r s through its through-blocks.

    The upper building diagram keeps p's upper block structure and pins each
    through-block to a fresh lower point, ordered by smallest upper point;
    the lower building diagram does the same from below; the middle diagram
    records which upper through-block continues into which lower one.
    """
    k, l = p.upper, p.lower
    through = [
        i
        for i, b in enumerate(p.blocks)
        if b[0] < k and b[-1] >= k
    ]
    t = len(through)
    # canonical block order sorts by overall min, which for blocks meeting the
    # upper row is the min upper point; so `through` is already in upper order
    upper_rank = {b: i for i, b in enumerate(through)}
    lower_rank = {
        b: i
        for i, b in enumerate(
            sorted(through, key=lambda bi: min(x for x in p.blocks[bi] if x >= k))
        )
    }

    s_blocks = []
    for bi, b in enumerate(p.blocks):
        ups = [x for x in b if x < k]
        if not ups:
            continue
        if bi in upper_rank:
            s_blocks.append(tuple(ups) + (k + upper_rank[bi],))
        else:
            s_blocks.append(tuple(ups))
    q_blocks = []
    for bi, b in enumerate(p.blocks):
        lows = [x - k for x in b if x >= k]
        if not lows:
            continue
        if bi in lower_rank:
            q_blocks.append(tuple(lows) + (l + lower_rank[bi],))
        else:
            q_blocks.append(tuple(lows))
    r_blocks = [(upper_rank[bi], t + lower_rank[bi]) for bi in through]

    s_colors = q_colors = r_colors = None
    if p.colored:
        assert p.colors is not None
        s_colors = p.colors[:k] + (WHITE,) * t
        q_colors = p.colors[k:] + (WHITE,) * t
        r_colors = (WHITE,) * (2 * t)
    s = Partition.make(k, t, s_blocks, s_colors)
    q = Partition.make(l, t, q_blocks, q_colors)
    r = Partition.make(t, t, r_blocks, r_colors)
    return ThroughBlockDecomposition(q, r, s)


def upper_building(p: Partition) -> Partition:
    """The s-part of the factorization of a projective p (so p = s* s)."""
    return through_block_decomposition(p).upper_building


def projective_from(q: Partition) -> Partition:
    """q* q, the canonical projective diagram attached to any q."""
    return compose(involution(q), q).partition


# ---------------------------------------------------------------------------
# domination order


def _check_projective_pair(p: Partition, q: Partition) -> None:
    if p.upper != p.lower or q.upper != q.lower:
        raise ArityError("domination needs square diagrams")
    if p.upper != q.upper:
        raise ArityError("domination compares equal arities")
    if not (is_projective(p) and is_projective(q)):
        raise ValueError("domination is defined for projective diagrams only")


def dominates(p: Partition, q: Partition) -> bool:
    """True when pq = q (equivalently qp = q): q sits below p."""
    _check_projective_pair(p, q)
    return compose(p, q).partition == q


def strictly_dominates(p: Partition, q: Partition) -> bool:
    return p != q and dominates(p, q)


# ---------------------------------------------------------------------------
# permutations inside projective diagrams


def to_through_partition(sigma: Permutation, colored: bool = False) -> Partition:
    """The through diagram of a permutation: upper i joins lower sigma(i)."""
    m = len(sigma)
    if sorted(sigma) != list(range(m)):
        raise ValueError(f"not a permutation of 0..{m - 1}: {sigma}")
    blocks = [(i, m + sigma[i]) for i in range(m)]
    colors = (WHITE,) * (2 * m) if colored else None
    return Partition.make(m, m, blocks, colors)


def p_sigma(p: Partition, sigma: Permutation) -> Partition:
    """Insert the permutation between the two halves of a projective p."""
    if not is_projective(p):
        raise ValueError("p must be projective")
    t = stats(p).t
    if len(sigma) != t:
        raise ArityError(
            f"permutation acts on {len(sigma)} strands, p has {t} through-blocks"
        )
    pu = upper_building(p)
    r = to_through_partition(sigma, p.colored)
    return compose_chain(involution(pu), r, pu)


def sym_group(spec: "CategorySpec", p: Partition) -> list[Permutation]:
    """All permutations sigma with p_sigma still in the category.

    Always a subgroup of the full symmetric group on the through-blocks.
    """
    from .categories import contains

    if not contains(spec, p):
        raise ValueError("p does not belong to the category")
    t = stats(p).t
    if t == 0:
        raise ValueError("the symmetry group needs at least one through-block")
    if t > SYM_SEARCH_CAP:
        raise ValueError(
            f"through-block count {t} exceeds the search cap {SYM_SEARCH_CAP}"
        )
    pu = upper_building(p)
    pu_star = involution(pu)
    out = []
    for sigma in permutations(range(t)):
        cand = compose_chain(
            pu_star, to_through_partition(sigma, p.colored), pu
        )
        if contains(spec, cand):
            out.append(tuple(sigma))
    return out


def equivalent(spec: "CategorySpec", p: Partition, q: Partition) -> bool:
    """Whether some r in the category has r*r = p and rr* = q.

    Any witness must be of the form q_u* r_sigma p_u, so the search runs over
    permutations of the through-blocks; for noncrossing categories only the
    identity permutation can occur and the search collapses to one test.
    """
    from .categories import contains, is_noncrossing_spec

    if not (is_projective(p) and is_projective(q)):
        raise ValueError("equivalence is defined for projective diagrams")
    if not (contains(spec, p) and contains(spec, q)):
        raise ValueError("both diagrams must belong to the category")
    tp, tq = stats(p).t, stats(q).t
    if tp != tq:
        return False
    if p == q:
        return True
    if p.upper == q.upper and (
        not p.colored or p.upper_colors() == q.lower_colors()
    ):
        pq = compose(p, q).partition
        if stats(pq).t == tp:
            return True
    pu = upper_building(p)
    qu_star = involution(upper_building(q))
    if is_noncrossing_spec(spec):
        sigmas: Iterable[Permutation] = [tuple(range(tp))]
    else:
        if tp > SYM_SEARCH_CAP:
            raise ValueError(
                f"through-block count {tp} exceeds the search cap {SYM_SEARCH_CAP}"
            )
        sigmas = permutations(range(tp))
    for sigma in sigmas:
        witness = compose_chain(
            qu_star, to_through_partition(tuple(sigma), p.colored), pu
        )
        if contains(spec, witness):
            return True
    return False


# ---------------------------------------------------------------------------
# mixing diagrams


def _mixing_from_pairs(
    k: int,
    l: int,
    pairs: Sequence[tuple[int, int]],
    closed: Sequence[bool],
    colored: bool = False,
) -> MixingPartition:
    """Assemble the diagram from cross pairs; columns not in a pair stay vertical."""
    n = k + l
    in_pair = {c for ab in pairs for c in ab}
    blocks: list[tuple[int, ...]] = []
    for c in range(n):
        if c not in in_pair:
            blocks.append((c, n + c))
    for (a, b), quad in zip(pairs, closed):
        if quad:
            blocks.append((a, b, n + a, n + b))
        else:
            blocks.append((a, b))
            blocks.append((n + a, n + b))
    colors = (WHITE,) * (2 * n) if colored else None
    return MixingPartition(k, l, Partition.make(n, n, blocks, colors))


def enumerate_mixing(k: int, l: int) -> list[MixingPartition]:
    """All (k, l)-mixing diagrams, generated shape-first.

    A mixing diagram is determined by a partial matching of left columns to
    right columns plus an open/closed flag per matched pair: open pairs give
    an upper pair and its mirrored lower pair, closed pairs give a quadruple,
    and unmatched columns stay vertical.
    """
    out = []
    for m in range(min(k, l) + 1):
        for left in combinations(range(k), m):
            for right in combinations(range(k, k + l), m):
                for image in permutations(right):
                    for flags in product((False, True), repeat=m):
                        out.append(
                            _mixing_from_pairs(
                                k, l, list(zip(left, image)), flags
                            )
                        )
    return out


def mix(p: Partition, q: Partition, h: MixingPartition) -> Partition:
    """Graft h between the through-block structures of p and q.

    The result is projective, dominated by p tensor q, and distinct triples
    (p, q, h) give distinct results.
    """
    tp, tq = stats(p).t, stats(q).t
    if (h.left_arity, h.right_arity) != (tp, tq):
        raise ArityError(
            f"mixing diagram is ({h.left_arity}, {h.right_arity}) "
            f"but through-block counts are ({tp}, {tq})"
        )
    pu = upper_building(p)
    qu = upper_building(q)
    mid = tensor(pu, qu)
    hp = h.partition
    if p.colored and not hp.colored:
        hp = Partition.make(
            hp.upper, hp.lower, hp.blocks, (WHITE,) * hp.n_points
        )
    return compose_chain(involution(mid), hp, mid)


def _padded_mixing(
    alpha: int, beta: int, a: int, close_outermost: bool
) -> MixingPartition:
    """The nested-pairs mixing diagram of depth a, padded with verticals.

    The a pairs connect the rightmost a left columns to the leftmost a right
    columns in nested fashion; with ``close_outermost`` the outermost pair
    becomes a quadruple (closing any inner pair would force a crossing, so
    this is the only noncrossing choice).
    """
    pairs = [(alpha - a + i, alpha + (a - 1) - i) for i in range(a)]
    closed = [False] * a
    if close_outermost:
        closed[0] = True
    return _mixing_from_pairs(alpha, beta, pairs, closed)


def square(p: Partition, q: Partition, a: int) -> Partition:
    """Cancel the a innermost through-blocks of p against those of q.

    Through-block count drops by 2a: t(result) = t(p) + t(q) - 2a.
    """
    tp, tq = stats(p).t, stats(q).t
    if not 0 <= a <= min(tp, tq):
        raise ArityError(f"depth {a} out of range for t = ({tp}, {tq})")
    return mix(p, q, _padded_mixing(tp, tq, a, False))


def boxvert(p: Partition, q: Partition, a: int) -> Partition:
    """Cancel a-1 through-block pairs and merge the innermost pair into one.

    Through-block count becomes t(p) + t(q) - 2a + 1; needs a >= 1.
    """
    tp, tq = stats(p).t, stats(q).t
    if not 1 <= a <= min(tp, tq):
        raise ArityError(f"depth {a} out of range for t = ({tp}, {tq})")
    return mix(p, q, _padded_mixing(tp, tq, a, True))


# ---------------------------------------------------------------------------
# word invariants


def _through_blocks(p: Partition) -> list[tuple[int, ...]]:
    k = p.upper
    return [b for b in p.blocks if b[0] < k and b[-1] >= k]


def word_h(p: Partition) -> str:
    """One letter per through-block, left to right by smallest upper point:
    '0' for blocks of size divisible by four, '1' otherwise."""
    if not is_projective(p):
        raise ValueError("word invariants need a projective diagram")
    if not all_blocks_even(p):
        raise ValueError("all blocks must have even size")
    return "".join(
        "0" if len(b) % 4 == 0 else "1" for b in _through_blocks(p)
    )


def word_u(p: Partition) -> str:
    """Upper colors of the through-pairs, left to right, as a w/b string.

    Dropping the non-through pairs of a projective colored pair diagram
    leaves vertical through-pairs only; their color sequence is a complete
    equivalence invariant in the colored pair setting.
    """
    if not is_projective(p):
        raise ValueError("word invariants need a projective diagram")
    if p.colors is None:
        raise ColorError("the alternating word needs a colored diagram")
    if not is_pair(p):
        raise ValueError("the alternating word needs a pair diagram")
    assert p.colors is not None
    return "".join(p.colors[b[0]] for b in _through_blocks(p))
