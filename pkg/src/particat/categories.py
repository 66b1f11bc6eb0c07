"""
Categories of diagrams: built-in membership predicates and bounded closures.

A category is a family of diagram sets containing the identity strand and
stable under tensor, composition, involution and rotation.  The built-ins:

====== ====================================================================
id     members
====== ====================================================================
p      every uncolored diagram
p2     pair diagrams (all blocks of size two)
nc     noncrossing diagrams
nc2    noncrossing pair diagrams
ncb    noncrossing diagrams with blocks of size at most two
nceven noncrossing diagrams with all blocks of even size
ucol   colored noncrossing pair diagrams whose through-pairs have equal end
       colors and whose non-through pairs have opposite end colors
====== ====================================================================

Generated categories carry a generator list and a point bound; membership is
decided against the bounded closure and queries beyond the bound raise
:class:`UndecidableMembershipError` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional

from .partition import (
    ArityError,
    ColorError,
    Partition,
    all_blocks_even,
    all_set_partitions,
    blocks_at_most_two,
    compose,
    identity,
    involution,
    is_noncrossing,
    is_pair,
    is_projective,
    is_symmetric,
    parse_partition,
    rotate,
    serialize,
    tensor,
    WHITE,
    BLACK,
)

__all__ = [
    "CategorySpec",
    "BoundsExceededError",
    "UndecidableMembershipError",
    "BUILTIN_IDS",
    "contains",
    "membership",
    "closure",
    "enumerate_in",
    "projectives",
    "is_noncrossing_spec",
    "category_from_name",
    "DEFAULT_MAX_POINTS",
    "MAX_ENUM_POINTS",
]

BUILTIN_IDS = ("p", "p2", "nc", "nc2", "ncb", "nceven", "ucol")

DEFAULT_MAX_POINTS = 10
MAX_ENUM_POINTS = 10


class BoundsExceededError(RuntimeError):
    """A requested enumeration or closure is beyond the configured size caps."""


class UndecidableMembershipError(RuntimeError):
    """Membership cannot be decided within the bound of a generated category."""


@dataclass(frozen=True)
class CategorySpec:
    """Either a named built-in or a generator list with a point bound."""

    builtin: Optional[str] = None
    generators: tuple[Partition, ...] = ()
    max_points: int = DEFAULT_MAX_POINTS

    def __post_init__(self) -> None:
        if self.builtin is not None:
            if self.builtin not in BUILTIN_IDS:
                raise ValueError(f"unknown builtin category {self.builtin!r}")
            if self.generators:
                raise ValueError("builtin categories take no generators")
        else:
            modes = {g.colored for g in self.generators}
            if len(modes) > 1:
                raise ColorError("generators mix colored and uncolored diagrams")

    @staticmethod
    def named(builtin: str) -> "CategorySpec":
        return CategorySpec(builtin=builtin)

    @property
    def colored(self) -> bool:
        if self.builtin is not None:
            return self.builtin == "ucol"
        return bool(self.generators) and self.generators[0].colored

    def name(self) -> str:
        if self.builtin is not None:
            return self.builtin
        gens = ",".join(serialize(g) for g in self.generators)
        return f"gen[{gens}]<= {self.max_points}"


# ---------------------------------------------------------------------------
# built-in predicates


def _ucol_colors_ok(p: Partition) -> bool:
    assert p.colors is not None
    k = p.upper
    for b in p.blocks:
        if len(b) != 2:
            return False
        x, y = b
        through = x < k <= y
        same = p.colors[x] == p.colors[y]
        if through != same:
            return False
    return True


def _builtin_contains(builtin: str, p: Partition) -> bool:
    if builtin == "ucol":
        if not p.colored:
            raise ColorError("the colored pair category needs colored diagrams")
        return is_pair(p) and is_noncrossing(p) and _ucol_colors_ok(p)
    if p.colored:
        raise ColorError(f"category {builtin!r} holds uncolored diagrams")
    if builtin == "p":
        return True
    if builtin == "p2":
        return is_pair(p)
    if builtin == "nc":
        return is_noncrossing(p)
    if builtin == "nc2":
        return is_pair(p) and is_noncrossing(p)
    if builtin == "ncb":
        return blocks_at_most_two(p) and is_noncrossing(p)
    if builtin == "nceven":
        return all_blocks_even(p) and is_noncrossing(p)
    raise ValueError(f"unknown builtin {builtin!r}")


# ---------------------------------------------------------------------------
# bounded closure of generated categories

_CLOSURE_CACHE: dict[CategorySpec, frozenset[Partition]] = {}


def _legal_rotations(p: Partition) -> Iterator[Partition]:
    if p.upper:
        yield rotate(p, "ul")
        yield rotate(p, "ur")
    if p.lower:
        yield rotate(p, "ll")
        yield rotate(p, "lr")


def closure(
    generators: Iterable[Partition], max_points: int = DEFAULT_MAX_POINTS
) -> frozenset[Partition]:
    """Smallest set within the point bound containing the generators and the
    identity strand and stable under the four operations.

    Deterministic: the worklist is processed in canonical order, and the
    rotation orbit of each member is taken eagerly.
    """
    gens = tuple(generators)
    colored = bool(gens) and gens[0].colored
    members: set[Partition] = set()
    by_points: dict[int, list[Partition]] = {}
    by_upper: dict[int, list[Partition]] = {}
    by_lower: dict[int, list[Partition]] = {}
    frontier: list[Partition] = []

    def add(x: Partition) -> None:
        if x.n_points <= max_points and x not in members:
            members.add(x)
            by_points.setdefault(x.n_points, []).append(x)
            by_upper.setdefault(x.upper, []).append(x)
            by_lower.setdefault(x.lower, []).append(x)
            frontier.append(x)

    add(identity(1, colors="w" if colored else None))
    for g in gens:
        if g.colored != colored:
            raise ColorError("generators mix colored and uncolored diagrams")
        add(g)

    while frontier:
        batch = sorted(frontier, key=Partition.sort_key)
        frontier = []
        tensor_partners = {
            n: [y for m, ys in by_points.items() if m <= n for y in ys]
            for n in range(max_points + 1)
        }
        tops = {u: list(by_lower.get(u, ())) for u in by_lower}
        bottoms = {l: list(by_upper.get(l, ())) for l in by_upper}
        for x in batch:
            add(involution(x))
            stack = [x]
            seen_rot = {x}
            while stack:
                r = stack.pop()
                for rr in _legal_rotations(r):
                    if rr not in seen_rot:
                        seen_rot.add(rr)
                        add(rr)
                        stack.append(rr)
            for y in tensor_partners[max_points - x.n_points]:
                add(tensor(x, y))
                add(tensor(y, x))
            if not colored:
                for y in tops.get(x.upper, ()):
                    add(compose(x, y).partition)
                for y in bottoms.get(x.lower, ()):
                    add(compose(y, x).partition)
            else:
                xu, xl = x.upper_colors(), x.lower_colors()
                for y in tops.get(x.upper, ()):
                    if y.lower_colors() == xu:
                        add(compose(x, y).partition)
                for y in bottoms.get(x.lower, ()):
                    if y.upper_colors() == xl:
                        add(compose(y, x).partition)
    return frozenset(members)


def _closure_of(spec: CategorySpec) -> frozenset[Partition]:
    cached = _CLOSURE_CACHE.get(spec)
    if cached is None:
        cached = closure(spec.generators, spec.max_points)
        _CLOSURE_CACHE[spec] = cached
    return cached


# ---------------------------------------------------------------------------
# membership


def membership(spec: CategorySpec, p: Partition) -> Optional[bool]:
    """Three-valued membership: True, False, or None when undecidable."""
    if spec.builtin is not None:
        return _builtin_contains(spec.builtin, p)
    if p.colored != spec.colored:
        raise ColorError("diagram color mode does not match the category")
    if p.n_points > spec.max_points:
        return None
    return p in _closure_of(spec)


def contains(spec: CategorySpec, p: Partition) -> bool:
    """Boolean membership; undecidable queries raise instead of returning."""
    result = membership(spec, p)
    if result is None:
        raise UndecidableMembershipError(
            f"{p} has {p.n_points} points, beyond the bound "
            f"{spec.max_points} of the generated category"
        )
    return result


def is_noncrossing_spec(spec: CategorySpec) -> bool:
    """Whether every member is noncrossing (exact for built-ins; for
    generated categories it is decided on the generators, which is enough
    since the operations preserve noncrossingness)."""
    if spec.builtin is not None:
        return spec.builtin != "p" and spec.builtin != "p2"
    return all(is_noncrossing(g) for g in spec.generators)


# ---------------------------------------------------------------------------
# enumeration


def _colorings(p: Partition) -> Iterator[Partition]:
    for colors in product((WHITE, BLACK), repeat=p.n_points):
        yield Partition.make(p.upper, p.lower, p.blocks, colors)


def enumerate_in(spec: CategorySpec, k: int, l: int) -> list[Partition]:
    """All members of the category with k upper and l lower points.

    Brute force over set partitions (and colorings in colored mode), guarded
    by the Bell-number growth cap.
    """
    if k + l > MAX_ENUM_POINTS:
        raise BoundsExceededError(
            f"enumeration of {k + l} points exceeds the cap {MAX_ENUM_POINTS}"
        )
    out = []
    for blocks in all_set_partitions(k + l):
        base = Partition.make(k, l, blocks)
        if spec.colored:
            if spec.builtin == "ucol" and not (
                is_pair(base) and is_noncrossing(base)
            ):
                continue
            for cand in _colorings(base):
                if contains(spec, cand):
                    out.append(cand)
        else:
            if contains(spec, base):
                out.append(base)
    out.sort(key=Partition.sort_key)
    return out


def _noncrossing_partitions_of_row(k: int) -> list[tuple[tuple[int, ...], ...]]:
    row = []
    for blocks in all_set_partitions(k):
        if is_noncrossing(Partition.make(k, 0, blocks)):
            row.append(blocks)
    return row


def _ucol_projective_colorings(p: Partition) -> Iterator[Partition]:
    """Symmetric colorings obeying the pair color rule, block by block."""
    k = p.upper
    upper_blocks = [b for b in p.blocks if b[0] < k]
    choices = []
    for b in upper_blocks:
        if b[-1] >= k:  # through-pair {a, a'}: both ends one color
            choices.append([(WHITE,), (BLACK,)])
        else:  # upper pair {a, b}: opposite colors (mirrored below)
            choices.append([(WHITE, BLACK), (BLACK, WHITE)])
    for pick in product(*choices):
        upper_colors = [WHITE] * k
        for b, cols in zip(upper_blocks, pick):
            ups = [x for x in b if x < k]
            for x, c in zip(ups, cols):
                upper_colors[x] = c
        colors = tuple(upper_colors) * 2
        yield Partition.make(p.upper, p.lower, p.blocks, colors)


_PROJECTIVES_CACHE: dict[tuple[CategorySpec, int], list[Partition]] = {}


def projectives(spec: CategorySpec, k: int) -> list[Partition]:
    """All projective members of the category in C(k, k), canonically sorted.

    For the noncrossing built-ins these are generated directly from pairs
    (noncrossing row partition, subset of through-marked blocks) instead of
    filtering all set partitions, which keeps larger arities reachable.
    Results are cached per (category, arity).
    """
    key = (spec, k)
    cached = _PROJECTIVES_CACHE.get(key)
    if cached is not None:
        return list(cached)
    out = _projectives_uncached(spec, k)
    _PROJECTIVES_CACHE[key] = out
    return list(out)


def _projectives_uncached(spec: CategorySpec, k: int) -> list[Partition]:
    if spec.builtin in ("nc", "nc2", "ncb", "nceven", "ucol"):
        out = []
        for row_blocks in _noncrossing_partitions_of_row(k):
            nblocks = len(row_blocks)
            for mask in range(1 << nblocks):
                blocks = []
                for i, b in enumerate(row_blocks):
                    mirrored = tuple(x + k for x in b)
                    if mask >> i & 1:
                        blocks.append(b + mirrored)
                    else:
                        blocks.append(b)
                        blocks.append(mirrored)
                cand = Partition.make(k, k, blocks)
                if not is_noncrossing(cand):
                    continue
                if spec.builtin == "ucol":
                    if not is_pair(cand):
                        continue
                    out.extend(_ucol_projective_colorings(cand))
                elif _builtin_contains(spec.builtin, cand):
                    out.append(cand)
        out.sort(key=Partition.sort_key)
        return out
    return [p for p in enumerate_in(spec, k, k) if is_projective(p)]


# ---------------------------------------------------------------------------
# registry


def category_from_name(
    name: str, max_points: int = DEFAULT_MAX_POINTS
) -> CategorySpec:
    """Resolve a CLI-facing category name.

    Built-ins by id; ``gen:<file>`` loads generator diagrams from a text
    file, one per line in the module grammar (blank lines are skipped).
    """
    if name in BUILTIN_IDS:
        return CategorySpec.named(name)
    if name.startswith("gen:"):
        path = name[4:]
        gens = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    gens.append(parse_partition(line))
        return CategorySpec(generators=tuple(gens), max_points=max_points)
    raise ValueError(
        f"unknown category {name!r}; expected one of {', '.join(BUILTIN_IDS)} "
        "or gen:<file>"
    )
