"""Built-in predicates, generated closures, enumeration, projectives."""

import random

import pytest

from particat.partition import (
    ColorError,
    Partition,
    compose,
    empty_partition,
    identity,
    involution,
    is_projective,
    parse_partition,
    rotate,
    serialize,
    tensor,
)
from particat.categories import (
    BoundsExceededError,
    CategorySpec,
    UndecidableMembershipError,
    category_from_name,
    closure,
    contains,
    enumerate_in,
    membership,
    projectives,
)
from particat.structure import upper_building

NC = CategorySpec.named("nc")
NC2 = CategorySpec.named("nc2")
NCB = CategorySpec.named("ncb")
NCEVEN = CategorySpec.named("nceven")
UCOL = CategorySpec.named("ucol")
P_ALL = CategorySpec.named("p")
P2 = CategorySpec.named("p2")

CROSSING = Partition.make(2, 2, [(0, 3), (1, 2)])
FOURBLOCK = parse_partition("aa:aa")


class TestContains:
    def test_crossing_examples(self):
        assert not contains(NC2, CROSSING)
        assert contains(P2, CROSSING)
        assert not contains(NC, CROSSING)

    def test_even_block_examples(self):
        assert contains(NCEVEN, FOURBLOCK)
        assert not contains(NCEVEN, parse_partition("a:b"))
        assert not contains(NCB, FOURBLOCK)
        assert contains(NCB, parse_partition(":a"))

    def test_colored_pair_rules(self):
        same = Partition.make(2, 0, [(0, 1)], colors="ww")
        mixed = Partition.make(2, 0, [(0, 1)], colors="wb")
        assert not contains(UCOL, same)
        assert contains(UCOL, mixed)
        assert contains(UCOL, identity(1, colors="w"))
        two_tone_strand = Partition.make(1, 1, [(0, 1)], colors="wb")
        assert not contains(UCOL, two_tone_strand)

    def test_color_mode_enforced(self):
        with pytest.raises(ColorError):
            contains(NC, identity(1, colors="w"))
        with pytest.raises(ColorError):
            contains(UCOL, identity(1))

    def test_builtins_operation_closed(self):
        rng = random.Random(5)
        for spec in (P_ALL, P2, NC, NC2, NCB, NCEVEN):
            pool = []
            for k, l in ((0, 2), (1, 1), (2, 2), (1, 3)):
                pool.extend(enumerate_in(spec, k, l))
            sample = rng.sample(pool, min(25, len(pool)))
            for p in sample:
                assert contains(spec, involution(p))
                if p.upper:
                    assert contains(spec, rotate(p, "ul"))
                    assert contains(spec, rotate(p, "ur"))
                if p.lower:
                    assert contains(spec, rotate(p, "ll"))
                    assert contains(spec, rotate(p, "lr"))
                for q in rng.sample(pool, 5):
                    if p.n_points + q.n_points <= 8:
                        assert contains(spec, tensor(p, q))
                    if q.lower == p.upper:
                        assert contains(spec, compose(p, q).partition)

    def test_ucol_rotation_preserves_membership(self):
        pool = []
        for k in range(0, 3):
            pool.extend(projectives(UCOL, k))
        for p in pool:
            if p.upper:
                assert contains(UCOL, rotate(p, "ul"))
                assert contains(UCOL, rotate(p, "ur"))
            if p.lower:
                assert contains(UCOL, rotate(p, "ll"))
                assert contains(UCOL, rotate(p, "lr"))


class TestClosure:
    def test_identity_alone_gives_noncrossing_pairs(self):
        got = closure((), 8)
        want = set()
        for n in range(0, 9):
            for k in range(n + 1):
                want.update(enumerate_in(NC2, k, n - k))
        assert set(got) == want

    def test_fourblock_generates_even_blocks(self):
        got = closure((FOURBLOCK,), 8)
        want = set()
        for n in range(0, 9):
            for k in range(n + 1):
                want.update(enumerate_in(NCEVEN, k, n - k))
        assert set(got) == want

    def test_singleton_generates_small_blocks_six_points(self):
        got = closure((parse_partition(":a"),), 6)
        want = set()
        for n in range(0, 7):
            for k in range(n + 1):
                want.update(enumerate_in(NCB, k, n - k))
        assert set(got) == want

    @pytest.mark.slow
    def test_singleton_generates_small_blocks_eight_points(self):
        got = closure((parse_partition(":a"),), 8)
        want = set()
        for n in range(0, 9):
            for k in range(n + 1):
                want.update(enumerate_in(NCB, k, n - k))
        assert set(got) == want

    def test_rotation_orbit_closed(self):
        spec = CategorySpec(generators=(FOURBLOCK,), max_points=6)
        p = FOURBLOCK
        orbit = [p]
        for corner in ("ul", "ur", "ll", "lr"):
            q = p
            for _ in range(4):
                if (corner in ("ul", "ur") and q.upper == 0) or (
                    corner in ("ll", "lr") and q.lower == 0
                ):
                    break
                q = rotate(q, corner)
                orbit.append(q)
        for q in orbit:
            assert membership(spec, q) is True

    def test_membership_beyond_bound_is_unknown(self):
        spec = CategorySpec(generators=(FOURBLOCK,), max_points=4)
        big = identity(3)
        assert membership(spec, big) is None
        with pytest.raises(UndecidableMembershipError):
            contains(spec, big)


class TestEnumerate:
    def test_small_counts(self):
        assert len(enumerate_in(NC2, 2, 2)) == 2
        assert len(enumerate_in(P2, 2, 2)) == 3
        assert len(enumerate_in(NC, 1, 1)) == 2
        assert len(enumerate_in(P_ALL, 0, 0)) == 1
        assert enumerate_in(P_ALL, 0, 0) == [empty_partition()]

    def test_ordered_and_unique(self):
        out = enumerate_in(NC, 2, 2)
        assert out == sorted(out, key=Partition.sort_key)
        assert len(set(out)) == len(out)

    def test_growth_guard(self):
        with pytest.raises(BoundsExceededError):
            enumerate_in(P_ALL, 6, 5)


class TestProjectives:
    def test_strand_only_for_pairs(self):
        assert projectives(NC2, 1) == [identity(1)]

    def test_noncrossing_arity_one(self):
        got = projectives(NC, 1)
        assert got == sorted(
            [identity(1), parse_partition("a:b")], key=Partition.sort_key
        )

    def test_projective_iff_square_of_upper_part(self):
        for k in range(0, 4):
            for q in projectives(P_ALL, k):
                pu = upper_building(q)
                assert compose(involution(pu), pu).partition == q

    def test_direct_generation_matches_filter(self):
        for spec in (NC, NC2, NCB, NCEVEN):
            for k in range(0, 4):
                fast = projectives(spec, k)
                slow = [
                    p for p in enumerate_in(spec, k, k) if is_projective(p)
                ]
                assert fast == sorted(slow, key=Partition.sort_key)

    def test_ucol_direct_generation_matches_filter(self):
        for k in range(0, 3):
            fast = projectives(UCOL, k)
            slow = [p for p in enumerate_in(UCOL, k, k) if is_projective(p)]
            assert fast == sorted(slow, key=Partition.sort_key)


class TestRegistry:
    def test_builtin_names(self):
        for name in ("p", "p2", "nc", "nc2", "ncb", "nceven", "ucol"):
            assert category_from_name(name).builtin == name

    def test_generator_file(self, tmp_path):
        path = tmp_path / "gens.txt"
        path.write_text("aa:aa\n\n:a\n", encoding="utf-8")
        spec = category_from_name(f"gen:{path}", max_points=6)
        assert spec.generators == (FOURBLOCK, parse_partition(":a"))
        assert spec.max_points == 6
        assert membership(spec, FOURBLOCK) is True

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            category_from_name("frobenius")
