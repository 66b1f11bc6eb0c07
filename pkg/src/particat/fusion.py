"""
Fusion of projective diagrams and the word calculus that labels it.

The tensor product of two projective diagrams splits along the projective
diagrams obtained by grafting a mixing diagram between their through-block
structures; inside a category the fusion set is exactly the grafted family
intersected with the category.  A brute-force realization straight from the
domination order is provided as an independent oracle.

For the standard noncrossing categories the equivalence classes of
projectives carry closed-form labels (natural numbers, words over Z2, or
alternating color words) and the fusion of labels is given by a free fusion
semiring: words over a letter set with an involution and a partial letter
fusion, tensored by

    w (x) w' = sum over w = az, w' = conj(z) b of [ab] + [a * b]

where conj reverses the word and conjugates letters, ab is concatenation and
a * b fuses the touching letters (the term is dropped when either side is
empty or the letter fusion is undefined).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .partition import (
    Partition,
    empty_partition,
    identity,
    is_projective,
    parse_partition,
    serialize,
    stats,
    tensor,
    WHITE,
    BLACK,
)
from .structure import (
    MixingPartition,
    boxvert,
    dominates,
    enumerate_mixing,
    equivalent,
    mix,
    square,
    strictly_dominates,
    word_h,
    word_u,
)
from .categories import (
    CategorySpec,
    contains,
    projectives,
)

__all__ = [
    "FusionLabel",
    "FusionResult",
    "FreeFusionSemiring",
    "fusion_candidates",
    "fusion",
    "fusion_brute_force",
    "decompose_power",
    "label_for",
    "label_to_partition",
    "labelled_fusion",
    "semiring_tensor",
    "z2_semiring",
    "alternating_semiring",
    "single_loop_semiring",
    "single_arc_semiring",
    "freeness_probe",
    "conjugate_word",
    "LABELLED_IDS",
]

LABELLED_IDS = {
    "nc": "S",
    "nc2": "O",
    "ncb": "B",
    "nceven": "H",
    "ucol": "U",
}


@dataclass(frozen=True)
class FusionLabel:
    """Category-specific name of an equivalence class of projectives.

    kind 'nat' carries an int, 'z2' a 0/1 word, 'alt' a w/b word, and
    'class' the canonical representative diagram.
    """

    kind: str
    value: Union[int, str, Partition]

    def render(self) -> Union[int, str]:
        if self.kind == "class":
            assert isinstance(self.value, Partition)
            return serialize(self.value)
        if self.kind == "alt":
            assert isinstance(self.value, str)
            return _runs_encode(self.value)
        return self.value

    def sort_token(self) -> tuple:
        v = self.value
        if isinstance(v, Partition):
            return (2, serialize(v))
        if isinstance(v, int):
            return (0, v)
        return (1, len(v), v)


@dataclass(frozen=True)
class FusionResult:
    """The projective diagrams of one fusion, tagged with through-counts."""

    members: tuple[tuple[Partition, int], ...]

    @property
    def partitions(self) -> list[Partition]:
        return [p for p, _ in self.members]

    @property
    def t_values(self) -> list[int]:
        return [t for _, t in self.members]


# ---------------------------------------------------------------------------
# partition-level fusion


def fusion_candidates(p: Partition, q: Partition) -> list[Partition]:
    """All graftings of a mixing diagram between p and q, deduplicated.

    Complete over the mixing enumeration at (t(p), t(q)); every candidate is
    projective and dominated by the plain tensor product.
    """
    if not (is_projective(p) and is_projective(q)):
        raise ValueError("fusion needs projective diagrams")
    seen = set()
    out = []
    for h in enumerate_mixing(stats(p).t, stats(q).t):
        m = mix(p, q, h)
        if m not in seen:
            seen.add(m)
            out.append(m)
    out.sort(key=lambda m: (stats(m).t, serialize(m)))
    return out


def fusion(spec: CategorySpec, p: Partition, q: Partition) -> FusionResult:
    """The fusion set inside the category: grafted candidates that belong.

    Membership of every candidate must be decidable; bounded generated
    categories raise on candidates beyond their bound rather than guessing.
    """
    if not (contains(spec, p) and contains(spec, q)):
        raise ValueError("both diagrams must belong to the category")
    members = [
        (m, stats(m).t)
        for m in fusion_candidates(p, q)
        if contains(spec, m)
    ]
    return FusionResult(tuple(members))


def fusion_brute_force(
    spec: CategorySpec, p: Partition, q: Partition
) -> FusionResult:
    """Independent oracle straight from the domination order.

    Enumerates every projective member at the joint arity, keeps those
    dominated by the tensor product, and discards any that are already
    dominated by a tensor with one factor strictly lowered inside the
    category.  Used to cross-validate :func:`fusion`; exponentially more
    expensive, so only viable at small arity.
    """
    if not (contains(spec, p) and contains(spec, q)):
        raise ValueError("both diagrams must belong to the category")
    a, b = p.upper, q.upper
    pq = tensor(p, q)
    lowered_left = [
        l for l in projectives(spec, a)
        if (not p.colored or l.colors == p.colors) and strictly_dominates(p, l)
    ]
    lowered_right = [
        r for r in projectives(spec, b)
        if (not q.colored or r.colors == q.colors) and strictly_dominates(q, r)
    ]
    out = []
    for m in projectives(spec, a + b):
        if m.colored and m.colors != pq.colors:
            continue
        if not dominates(pq, m):
            continue
        if any(dominates(tensor(l, q), m) for l in lowered_left):
            continue
        if any(dominates(tensor(p, r), m) for r in lowered_right):
            continue
        out.append((m, stats(m).t))
    out.sort(key=lambda mt: (mt[1], serialize(mt[0])))
    return FusionResult(tuple(out))


# ---------------------------------------------------------------------------
# labels


def _runs_encode(word: str) -> str:
    """Run-length form of a w/b word: 'wwb' -> '2w1b'; empty word -> ''."""
    if not word:
        return ""
    out = []
    cur = word[0]
    count = 1
    for ch in word[1:]:
        if ch == cur:
            count += 1
        else:
            out.append(f"{count}{cur}")
            cur, count = ch, 1
    out.append(f"{count}{cur}")
    return "".join(out)


def runs_decode(text: str) -> str:
    """Inverse of the run-length form; also accepts a plain w/b word."""
    if set(text) <= {WHITE, BLACK}:
        return text
    word = []
    num = ""
    for ch in text:
        if ch.isdigit():
            num += ch
        elif ch in (WHITE, BLACK):
            word.append(ch * int(num or "1"))
            num = ""
        else:
            raise ValueError(f"bad alternating word {text!r}")
    if num:
        raise ValueError(f"bad alternating word {text!r}")
    return "".join(word)


def label_for(spec: CategorySpec, p: Partition) -> FusionLabel:
    """The class label of a projective member in its category's scheme."""
    scheme = LABELLED_IDS.get(spec.builtin or "")
    if scheme in ("S", "O", "B"):
        return FusionLabel("nat", stats(p).t)
    if scheme == "H":
        return FusionLabel("z2", word_h(p))
    if scheme == "U":
        return FusionLabel("alt", word_u(p))
    return FusionLabel("class", p)


def label_to_partition(scheme: str, label: Union[int, str]) -> Partition:
    """Canonical representative diagram of a label.

    Natural number schemes use the k-strand identity, with the double
    singleton standing in for zero where singletons exist (scheme S) and the
    empty diagram elsewhere; word schemes tensor the single-block letters.
    """
    if scheme in ("S", "O", "B"):
        k = int(label)
        if k < 0:
            raise ValueError("labels are nonnegative")
        if k == 0:
            return parse_partition("a:b") if scheme == "S" else empty_partition()
        return identity(k)
    if scheme == "H":
        word = str(label)
        if not set(word) <= {"0", "1"}:
            raise ValueError(f"bad Z2 word {word!r}")
        rep = empty_partition()
        four = parse_partition("aa:aa")
        strand = identity(1)
        for ch in word:
            rep = tensor(rep, four if ch == "0" else strand)
        return rep
    if scheme == "U":
        word = runs_decode(str(label))
        rep = empty_partition(colored=True)
        for ch in word:
            rep = tensor(rep, identity(1, colors=ch))
        return rep
    raise ValueError(f"unknown label scheme {scheme!r}")


# ---------------------------------------------------------------------------
# free fusion semirings


@dataclass(frozen=True)
class FreeFusionSemiring:
    """Letter set with involution and a partial letter fusion law."""

    letters: tuple[str, ...]
    involution: tuple[tuple[str, str], ...]
    fusion_law: tuple[tuple[tuple[str, str], str], ...]

    def conj_letter(self, x: str) -> str:
        return dict(self.involution)[x]

    def fuse(self, x: str, y: str) -> Optional[str]:
        return dict(self.fusion_law).get((x, y))

    def conj(self, word: str) -> str:
        return "".join(self.conj_letter(x) for x in reversed(word))

    def tensor_words(self, w: str, wp: str) -> list[str]:
        return semiring_tensor(self, w, wp)


def semiring_tensor(s: FreeFusionSemiring, w: str, wp: str) -> list[str]:
    """The word tensor product, as a multiset of words.

    Sums over all splittings w = a z with the conjugate of z a prefix of w';
    each splitting contributes the concatenation and, when both remainders
    are nonempty and the touching letters fuse, the fused word.
    """
    out = []
    for cut in range(len(w), -1, -1):
        a, z = w[:cut], w[cut:]
        zbar = s.conj(z)
        if not wp.startswith(zbar):
            continue
        b = wp[len(zbar) :]
        out.append(a + b)
        if a and b:
            fused = s.fuse(a[-1], b[0])
            if fused is not None:
                out.append(a[:-1] + fused + b[1:])
    return sorted(out, key=lambda word: (len(word), word))


def z2_semiring() -> FreeFusionSemiring:
    """Letters 0/1 counting block size mod 4; self-conjugate, additive fusion.

    Letter fusion is addition in Z2 because merging two through-blocks adds
    their sizes.  The letters are self-conjugate: reversing a diagram does
    not change block sizes.
    """
    return FreeFusionSemiring(
        ("0", "1"),
        (("0", "0"), ("1", "1")),
        ((("0", "0"), "0"), (("0", "1"), "1"), (("1", "0"), "1"), (("1", "1"), "0")),
    )


def alternating_semiring() -> FreeFusionSemiring:
    """Two mutually conjugate letters with no fusion at all."""
    return FreeFusionSemiring((WHITE, BLACK), ((WHITE, BLACK), (BLACK, WHITE)), ())


def single_loop_semiring() -> FreeFusionSemiring:
    """One self-conjugate letter that fuses with itself (scheme S)."""
    return FreeFusionSemiring(("a",), (("a", "a"),), ((("a", "a"), "a"),))


def single_arc_semiring() -> FreeFusionSemiring:
    """One self-conjugate letter without fusion (schemes O and B)."""
    return FreeFusionSemiring(("a",), (("a", "a"),), ())


def conjugate_word(scheme: str, word: str) -> str:
    if scheme == "H":
        return z2_semiring().conj(word)
    if scheme == "U":
        return alternating_semiring().conj(word)
    raise ValueError(f"no word conjugation for scheme {scheme!r}")


# ---------------------------------------------------------------------------
# labelled fusion in closed form


def labelled_fusion(
    scheme: str, left: Union[int, str], right: Union[int, str]
) -> list[Union[int, str]]:
    """Closed-form fusion on labels for the five standard schemes.

    S: all naturals from |k - l| to k + l.  O and B: the same range in steps
    of two.  H: the Z2-word semiring.  U: the alternating-word semiring.
    """
    if scheme == "S":
        k, l = int(left), int(right)
        return list(range(abs(k - l), k + l + 1))
    if scheme in ("O", "B"):
        k, l = int(left), int(right)
        return list(range(abs(k - l), k + l + 1, 2))
    if scheme == "H":
        w, wp = str(left), str(right)
        if not (set(w) <= {"0", "1"} and set(wp) <= {"0", "1"}):
            raise ValueError("H labels are 0/1 words")
        return semiring_tensor(z2_semiring(), w, wp)
    if scheme == "U":
        w, wp = runs_decode(str(left)), runs_decode(str(right))
        return semiring_tensor(alternating_semiring(), w, wp)
    raise ValueError(f"unknown label scheme {scheme!r}")


# ---------------------------------------------------------------------------
# tensor power decomposition


def decompose_power(spec: CategorySpec, k: int) -> list[dict]:
    """Equivalence classes of the projective members at arity k.

    Each record carries the canonical representative (minimal
    serialization), all members, the through-block count, and the class
    label in the category's scheme.
    """
    members = projectives(spec, k)
    classes: list[list[Partition]] = []
    for p in members:
        for cls in classes:
            if equivalent(spec, cls[0], p):
                cls.append(p)
                break
        else:
            classes.append([p])
    records = []
    for cls in classes:
        cls_sorted = sorted(cls, key=Partition.sort_key)
        rep = cls_sorted[0]
        records.append(
            {
                "representative": rep,
                "members": cls_sorted,
                "t": stats(rep).t,
                "label": label_for(spec, rep),
            }
        )
    records.sort(
        key=lambda rec: (rec["t"], rec["label"].sort_token())
    )
    return records


# ---------------------------------------------------------------------------
# freeness evidence


def _block_as_partition(p: Partition, block: tuple[int, ...]) -> Partition:
    """A block of a diagram, re-read as a standalone single-block diagram."""
    k = p.upper
    ups = [x for x in block if x < k]
    lows = [x for x in block if x >= k]
    new_block = tuple(range(len(ups) + len(lows)))
    colors = None
    if p.colored:
        assert p.colors is not None
        colors = tuple(p.colors[x] for x in ups) + tuple(
            p.colors[x] for x in lows
        )
    return Partition.make(len(ups), len(lows), [new_block], colors)


def _single_block_projectives(
    spec: CategorySpec, max_arity: int
) -> list[Partition]:
    out = []
    for k in range(1, max_arity + 1):
        for p in projectives(spec, k):
            if len(p.blocks) == 1:
                out.append(p)
    return out


def freeness_probe(spec: CategorySpec, max_arity: int = 3) -> dict:
    """Evidence for a free fusion structure on a noncrossing category.

    Reports whether every block of every enumerated member stays in the
    category, the single-block letter set with its involution and merge
    fusion, and whether class labels at the tested arities embed injectively
    into words over the letters.
    """
    from .categories import enumerate_in
    from .partition import conjugate_colors, involution as _inv

    # block stability over all members at small sizes
    block_stable = True
    for n in range(0, 2 * max_arity + 1):
        for k in range(n + 1):
            for p in enumerate_in(spec, k, n - k):
                for b in p.blocks:
                    if not contains(spec, _block_as_partition(p, b)):
                        block_stable = False

    singles = _single_block_projectives(spec, max_arity)
    letter_classes: list[list[Partition]] = []
    for p in singles:
        for cls in letter_classes:
            if equivalent(spec, cls[0], p):
                cls.append(p)
                break
        else:
            letter_classes.append([p])
    reps = [sorted(c, key=Partition.sort_key)[0] for c in letter_classes]

    def letter_of(p: Partition) -> Optional[int]:
        for idx, rep in enumerate(reps):
            if equivalent(spec, rep, p):
                return idx
        return None

    involution_table = {}
    for idx, rep in enumerate(reps):
        conj = conjugate_colors(rep) if rep.colored else rep
        involution_table[idx] = letter_of(conj)
    fusion_table = {}
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            merged = boxvert(a, b, 1)
            fusion_table[(i, j)] = (
                letter_of(merged) if contains(spec, merged) else None
            )

    # labels embed into words over the letters
    injective = True
    complete = True
    for k in range(1, max_arity + 1):
        words_seen: dict[tuple, list[Partition]] = {}
        for rec in decompose_power(spec, k):
            rep = rec["representative"]
            kk = rep.upper
            through = [
                b for b in rep.blocks if b[0] < kk and b[-1] >= kk
            ]
            word = tuple(
                letter_of(_block_as_partition(rep, b)) for b in through
            )
            if None in word:
                complete = False
            words_seen.setdefault(word, []).append(rep)
        if any(len(v) > 1 for v in words_seen.values()):
            injective = False

    return {
        "category": spec.name(),
        "block_stable": block_stable,
        "letters": [serialize(r) for r in reps],
        "involution": involution_table,
        "fusion": {f"{i},{j}": v for (i, j), v in fusion_table.items()},
        "labels_injective": injective,
        "letters_complete": complete,
        "max_arity": max_arity,
    }
