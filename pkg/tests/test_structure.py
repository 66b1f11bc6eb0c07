"""Through-block factorization, domination, mixing, words, equivalence."""

import random
from itertools import permutations

import pytest

from particat.partition import (
    ArityError,
    Partition,
    all_set_partitions,
    compose,
    empty_partition,
    identity,
    involution,
    is_noncrossing,
    is_projective,
    parse_partition,
    random_partition,
    serialize,
    stats,
    tensor,
    conjugate_colors,
)
from particat.structure import (
    boxvert,
    dominates,
    enumerate_mixing,
    equivalent,
    is_building,
    is_through,
    mix,
    p_sigma,
    projective_from,
    square,
    sym_group,
    through_block_decomposition,
    to_through_partition,
    word_h,
    word_u,
)
from particat.categories import CategorySpec, contains, projectives

P1 = parse_partition("aab:accc")
FOURBLOCK = parse_partition("aa:aa")
DOUBLEPAIR = parse_partition("aa:bb")
NC = CategorySpec.named("nc")
NC2 = CategorySpec.named("nc2")
NCEVEN = CategorySpec.named("nceven")
UCOL = CategorySpec.named("ucol")
P_ALL = CategorySpec.named("p")


def rand_rng():
    return random.Random(77)


class TestThroughBlockDecomposition:
    def test_identity(self):
        for k in range(4):
            d = through_block_decomposition(identity(k))
            assert d.upper_building == identity(k)
            assert d.middle == identity(k)
            assert d.lower_building == identity(k)

    def test_example(self):
        d = through_block_decomposition(P1)
        assert serialize(d.upper_building) == "aab:a"
        assert serialize(d.middle) == "a:a"
        assert serialize(d.lower_building) == "abbb:a"
        assert d.recompose() == P1

    def test_parts_wellformed_and_recompose(self):
        rng = rand_rng()
        for _ in range(400):
            p = random_partition(rng, rng.randrange(5), rng.randrange(5),
                                 colored=rng.random() < 0.3)
            d = through_block_decomposition(p)
            assert is_building(d.upper_building)
            assert is_building(d.lower_building)
            assert is_through(d.middle)
            assert d.lower_building.lower == stats(p).t
            assert d.recompose() == p

    def test_block_count_relation(self):
        rng = rand_rng()
        for _ in range(300):
            p = random_partition(rng, rng.randrange(5), rng.randrange(5))
            d = through_block_decomposition(p)
            st = stats(p)
            assert st.b == (
                stats(d.lower_building).b + stats(d.upper_building).b - st.t
            )
            assert st.beta == (
                stats(d.lower_building).beta + stats(d.upper_building).beta
            )

    def test_noncrossing_middle_trivial(self):
        for n in range(0, 7):
            for k in range(n + 1):
                for blocks in all_set_partitions(n):
                    p = Partition.make(k, n - k, blocks)
                    if not is_noncrossing(p):
                        continue
                    d = through_block_decomposition(p)
                    assert d.middle == identity(stats(p).t)

    def test_unique_over_valid_triples(self):
        # every valid factorization triple is recovered by decomposing its
        # recomposition
        rng = rand_rng()
        count = 0
        while count < 200:
            k, l, t = rng.randrange(4), rng.randrange(4), rng.randrange(3)
            if t > min(k, l):
                continue
            s = _random_building(rng, k, t)
            q = _random_building(rng, l, t)
            if s is None or q is None:
                continue
            sigma = list(range(t))
            rng.shuffle(sigma)
            r = to_through_partition(tuple(sigma))
            p = compose(compose(involution(q), r).partition, s).partition
            d = through_block_decomposition(p)
            assert (d.lower_building, d.middle, d.upper_building) == (q, r, s)
            count += 1


def _random_building(rng, k, t):
    """Random building diagram in P(k, t), or None when k cannot host t."""
    if t > k:
        return None
    anchors = sorted(rng.sample(range(k), t))
    blocks = {i: [anchors[i]] for i in range(t)}
    extras = [x for x in range(k) if x not in anchors]
    free = []
    for x in extras:
        targets = [i for i in range(t) if anchors[i] < x]
        if targets and rng.random() < 0.6:
            blocks[rng.choice(targets)].append(x)
        else:
            free.append((x,))
    out = [tuple(sorted(b)) + (k + i,) for i, b in blocks.items()] + free
    return Partition.make(k, t, out)


class TestProjectiveFrom:
    def test_identity(self):
        assert projective_from(identity(1)) == identity(1)

    def test_crossing_collapses(self):
        crossing = Partition.make(2, 2, [(0, 3), (1, 2)])
        assert projective_from(crossing) == identity(2)

    def test_random_projective_and_tripod(self):
        rng = rand_rng()
        for _ in range(500):
            q = random_partition(rng, rng.randrange(5), rng.randrange(5))
            p = projective_from(q)
            assert is_projective(p)
            assert stats(p).t == stats(q).t
            assert compose(compose(q, involution(q)).partition, q).partition == q


class TestDomination:
    def test_fourblock_below_identity(self):
        assert dominates(identity(2), FOURBLOCK)
        assert not dominates(FOURBLOCK, identity(2))

    def test_reflexive(self):
        for p in projectives(P_ALL, 2):
            assert dominates(p, p)

    def test_incomparable_pair(self):
        double_singletons = Partition.make(2, 2, [(0,), (1,), (2,), (3,)])
        assert not dominates(DOUBLEPAIR, double_singletons)
        assert not dominates(double_singletons, DOUBLEPAIR)

    def test_equal_t_forces_equality(self):
        projs = projectives(P_ALL, 3)
        for p in projs:
            for q in projs:
                if dominates(p, q):
                    assert stats(q).t <= stats(p).t
                    if stats(q).t == stats(p).t:
                        assert p == q

    def test_non_projective_rejected(self):
        with pytest.raises(ValueError):
            dominates(identity(2), Partition.make(2, 2, [(0, 3), (1, 2)]))


class TestPSigma:
    def test_identity_permutation(self):
        for p in projectives(P_ALL, 2):
            assert p_sigma(p, tuple(range(stats(p).t))) == p

    def test_transposition_gives_crossing(self):
        crossing = Partition.make(2, 2, [(0, 3), (1, 2)])
        assert p_sigma(identity(2), (1, 0)) == crossing

    def test_group_law(self):
        rng = rand_rng()
        pool = [p for p in projectives(P_ALL, 3) if stats(p).t > 0]
        for _ in range(200):
            p = rng.choice(pool)
            t = stats(p).t
            sigma = tuple(rng.sample(range(t), t))
            tau = tuple(rng.sample(range(t), t))
            composed = tuple(sigma[tau[i]] for i in range(t))
            assert (
                compose(p_sigma(p, sigma), p_sigma(p, tau)).partition
                == p_sigma(p, composed)
            )
            inverse = tuple(sigma.index(i) for i in range(t))
            assert p_sigma(p, inverse) == involution(p_sigma(p, sigma))


class TestSymGroup:
    def test_noncrossing_trivial(self):
        for p in projectives(NC, 3):
            if stats(p).t == 0:
                continue
            assert sym_group(NC, p) == [tuple(range(stats(p).t))]

    def test_full_group_with_crossing(self):
        group = sym_group(P_ALL, identity(3))
        assert len(group) == 6

    def test_half_liberated_order_two(self):
        halflib = to_through_partition((2, 1, 0))
        spec = CategorySpec(generators=(halflib,), max_points=6)
        group = sym_group(spec, identity(3))
        assert sorted(group) == [(0, 1, 2), (2, 1, 0)]

    def test_closed_under_product_and_inverse(self):
        halflib = to_through_partition((2, 1, 0))
        spec = CategorySpec(generators=(halflib,), max_points=8)
        group = set(sym_group(spec, identity(4)))
        assert len(group) == 4  # parity-preserving permutations of 4 strands
        for a in group:
            assert tuple(a.index(i) for i in range(len(a))) in group
            for b in group:
                assert tuple(a[b[i]] for i in range(len(b))) in group


class TestEquivalence:
    def test_hyperoctahedral_neighbours_differ(self):
        p = tensor(FOURBLOCK, identity(1))
        q = tensor(identity(1), FOURBLOCK)
        assert not equivalent(NCEVEN, p, q)

    def test_hyperoctahedral_padded_pair(self):
        p = tensor(DOUBLEPAIR, FOURBLOCK)
        q = tensor(FOURBLOCK, DOUBLEPAIR)
        assert equivalent(NCEVEN, p, q)

    def test_nc_equivalence_is_through_count(self):
        pool = projectives(NC, 2) + projectives(NC, 3)
        for p in pool:
            for q in pool:
                assert equivalent(NC, p, q) == (stats(p).t == stats(q).t)

    def test_shortcut_matches_full_search(self):
        # the single-permutation shortcut for noncrossing categories agrees
        # with the full search
        pool = [p for p in projectives(NCEVEN, 3)]
        for p in pool:
            for q in pool:
                got = equivalent(NCEVEN, p, q)
                want = _equivalent_full_search(NCEVEN, p, q)
                assert got == want

    def test_requires_membership(self):
        with pytest.raises(ValueError):
            equivalent(NC2, parse_partition("a:b"), identity(1))


def _equivalent_full_search(spec, p, q):
    from particat.structure import upper_building, compose_chain

    tp, tq = stats(p).t, stats(q).t
    if tp != tq:
        return False
    pu = upper_building(p)
    qu_star = involution(upper_building(q))
    for sigma in permutations(range(tp)):
        witness = compose_chain(
            qu_star, to_through_partition(tuple(sigma), p.colored), pu
        )
        if contains(spec, witness):
            return True
    return False


class TestMixing:
    def test_counts_small(self):
        assert len(enumerate_mixing(0, 0)) == 1
        assert len(enumerate_mixing(1, 1)) == 3
        assert len(enumerate_mixing(2, 1)) == 5
        assert len(enumerate_mixing(2, 2)) == 17

    def test_all_projective(self):
        for k, l in ((1, 1), (2, 1), (2, 2), (3, 1)):
            for h in enumerate_mixing(k, l):
                assert is_projective(h.partition)

    def test_one_one_members(self):
        got = {serialize(h.partition) for h in enumerate_mixing(1, 1)}
        assert got == {"ab:ab", "aa:bb", "aa:aa"}

    def test_noncrossing_members_are_padded_families(self):
        for k in range(0, 4):
            for l in range(0, 4):
                got = {
                    h.partition
                    for h in enumerate_mixing(k, l)
                    if is_noncrossing(h.partition)
                }
                want = set()
                from particat.structure import _padded_mixing

                for a in range(0, min(k, l) + 1):
                    want.add(_padded_mixing(k, l, a, False).partition)
                    if a >= 1:
                        want.add(_padded_mixing(k, l, a, True).partition)
                assert got == want

    def test_identity_mixing_gives_tensor(self):
        rng = rand_rng()
        for _ in range(50):
            p = projective_from(random_partition(rng, 3, rng.randrange(4)))
            q = projective_from(random_partition(rng, 2, rng.randrange(3)))
            tp, tq = stats(p).t, stats(q).t
            ident = enumerate_mixing(tp, tq)[0]
            assert ident.partition == identity(tp + tq)
            assert mix(p, q, ident) == tensor(p, q)

    def test_graft_dominated_and_injective(self):
        # injectivity of the graft holds at each fixed arity split (a, b)
        for a in range(0, 3):
            for b in range(0, 3 - a + 1):
                seen = {}
                for p in projectives(P_ALL, a):
                    for q in projectives(P_ALL, b):
                        pq = tensor(p, q)
                        for h in enumerate_mixing(stats(p).t, stats(q).t):
                            m = mix(p, q, h)
                            assert dominates(pq, m)
                            key = (p, q, h.partition)
                            assert seen.setdefault(m, key) == key

    def test_arity_mismatch(self):
        h = enumerate_mixing(1, 1)[0]
        with pytest.raises(ArityError):
            mix(identity(2), identity(1), h)

    def test_membership_descends_to_factors(self):
        # whenever a graft lands in a category, both factors belong too
        for spec in (NC, NCEVEN):
            pool = projectives(P_ALL, 1) + projectives(P_ALL, 2)
            for p in pool:
                for q in pool:
                    for h in enumerate_mixing(stats(p).t, stats(q).t):
                        if contains(spec, mix(p, q, h)):
                            assert contains(spec, p) and contains(spec, q)


class TestSquareBoxvert:
    def test_square_zero_is_tensor(self):
        assert square(identity(2), identity(3), 0) == tensor(
            identity(2), identity(3)
        )

    def test_through_count_arithmetic(self):
        pool = []
        for k in range(0, 4):
            pool.extend(projectives(NC, k))
        for p in pool:
            for q in pool:
                tp, tq = stats(p).t, stats(q).t
                for a in range(0, min(tp, tq) + 1):
                    assert stats(square(p, q, a)).t == tp + tq - 2 * a
                for a in range(1, min(tp, tq) + 1):
                    assert stats(boxvert(p, q, a)).t == tp + tq - 2 * a + 1

    def test_boxvert_merges_blocks(self):
        six = Partition.make(3, 3, [(0, 1, 2, 3, 4, 5)])
        merged = boxvert(FOURBLOCK, six, 1)
        assert contains(NCEVEN, merged)
        through = [b for b in merged.blocks
                   if b[0] < merged.upper and b[-1] >= merged.upper]
        assert len(through) == 1 and len(through[0]) == 10

    def test_depth_out_of_range(self):
        with pytest.raises(ArityError):
            square(identity(1), identity(1), 2)
        with pytest.raises(ArityError):
            boxvert(identity(1), identity(1), 0)


class TestWords:
    def test_single_letters(self):
        assert word_h(tensor(FOURBLOCK, identity(1))) == "01"
        assert word_h(tensor(identity(1), FOURBLOCK)) == "10"
        assert word_h(identity(3)) == "111"

    def test_word_complete_invariant_for_even_blocks(self):
        pool = []
        for k in range(0, 5):
            pool.extend(projectives(NCEVEN, k))
        for p in pool:
            for q in pool:
                assert equivalent(NCEVEN, p, q) == (word_h(p) == word_h(q))

    def test_word_h_needs_even_blocks(self):
        with pytest.raises(ValueError):
            word_h(parse_partition("a:a").__class__.make(1, 1, [(0,), (1,)]))

    def test_word_u_reads_colors(self):
        w = identity(1, colors="w")
        b = identity(1, colors="b")
        assert word_u(tensor(w, b)) == "wb"
        assert word_u(empty_partition(colored=True)) == ""

    def test_word_u_needs_pairs(self):
        p = Partition.make(2, 2, [(0, 1, 2, 3)], colors="wwww")
        with pytest.raises(ValueError):
            word_u(p)

    def test_word_u_conjugation(self):
        for k in range(0, 3):
            for p in projectives(UCOL, k):
                conj = conjugate_colors(p)
                flipped = word_u(p).translate(str.maketrans("wb", "bw"))
                assert word_u(conj) == flipped

    def test_trivial_class_from_full_square(self):
        w = identity(1, colors="w")
        p = tensor(w, w)
        res = square(p, conjugate_colors(p), 2)
        assert contains(UCOL, res)
        assert equivalent(UCOL, res, empty_partition(colored=True))
