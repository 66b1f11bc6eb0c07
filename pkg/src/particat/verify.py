"""
Verification suites: exhaustive structural identities at desk scale.

Each suite returns a report dict with at least ``passed`` (bool), ``checks``
(number of individual assertions evaluated) and ``failures`` (list of short
strings, empty when green).  The command line exposes them behind
``verify --suite <name>``; the acceptance tests drive the same functions at
their pinned sizes.
"""

from __future__ import annotations

import random
from itertools import combinations

from .partition import (
    Partition,
    all_set_partitions,
    compose,
    involution,
    is_projective,
    random_partition,
    serialize,
    stats,
    tensor,
)
from .structure import (
    dominates,
    enumerate_mixing,
    is_building,
    is_through,
    mix,
    through_block_decomposition,
)
from .categories import CategorySpec, contains, projectives
from .matrix_model import check_functor
from .fusion import fusion, fusion_brute_force

__all__ = [
    "suite_functor",
    "suite_structure",
    "suite_fusion",
    "run_suite",
    "SUITES",
]


def _partitions_up_to(max_points: int):
    for n in range(max_points + 1):
        for blocks in all_set_partitions(n):
            for k in range(n + 1):
                yield Partition.make(k, n - k, blocks)


def suite_functor(
    N: int = 3, max_points: int = 6, samples: int = 500, seed: int = 2024
) -> dict:
    """Matrix rules on random composable pairs: transpose, Kronecker, loop
    factor, and idempotence where applicable."""
    rng = random.Random(seed)
    half = max(1, max_points // 2)
    checks = 0
    failures: list[str] = []
    for _ in range(samples):
        k = rng.randrange(half + 1)
        l = rng.randrange(half + 1)
        m = rng.randrange(half + 1)
        top = random_partition(rng, k, l)
        bottom = random_partition(rng, l, m)
        report = check_functor(bottom, top, N)
        checks += sum(1 for key in report if key.endswith("_rule"))
        if not report["passed"]:
            failures.append(
                f"functor rules failed on {serialize(bottom)} / {serialize(top)}"
            )
    return {
        "suite": "functor",
        "N": N,
        "samples": samples,
        "checks": checks,
        "failures": failures[:10],
        "passed": not failures,
    }


def suite_structure(max_points: int = 8) -> dict:
    """Exhaustive structural identities on all diagrams within the bound.

    Covers factorization validity and recomposition, evenness of the
    non-through count on projectives, the partial order axioms of
    domination, and injectivity plus domination of the mixing graft.
    """
    checks = 0
    failures: list[str] = []

    for p in _partitions_up_to(max_points):
        d = through_block_decomposition(p)
        checks += 4
        if not is_building(d.upper_building):
            failures.append(f"upper part not building for {serialize(p)}")
        if not is_building(d.lower_building):
            failures.append(f"lower part not building for {serialize(p)}")
        if not is_through(d.middle):
            failures.append(f"middle part not a permutation for {serialize(p)}")
        if d.recompose() != p:
            failures.append(f"recomposition failed for {serialize(p)}")
        st = stats(p)
        if p.upper == p.lower and is_projective(p):
            checks += 1
            if st.beta % 2 != 0:
                failures.append(f"odd non-through count on projective {serialize(p)}")
            loops = compose(p, p).removed_loops
            checks += 1
            if st.beta != 2 * loops:
                failures.append(f"loop count mismatch on {serialize(p)}")

    # domination axioms over the full projective sets at half the bound
    spec_all = CategorySpec.named("p")
    for k in range(0, max_points // 2 + 1):
        projs = projectives(spec_all, k)
        ident = None
        for p in projs:
            checks += 1
            if not dominates(p, p):
                failures.append(f"domination not reflexive at {serialize(p)}")
            if stats(p).t == k and p.upper == k and len(p.blocks) == k:
                ident = p
        for p in projs:
            checks += 1
            if ident is not None and not dominates(ident, p):
                failures.append(f"identity not maximal over {serialize(p)}")
        for p, q in combinations(projs, 2):
            checks += 1
            if dominates(p, q) and dominates(q, p):
                failures.append(
                    f"antisymmetry fails on {serialize(p)}, {serialize(q)}"
                )
        for p in projs:
            for q in projs:
                if p is q or not dominates(p, q):
                    continue
                for r in projs:
                    if r is q or not dominates(q, r):
                        continue
                    checks += 1
                    if not dominates(p, r):
                        failures.append(
                            "transitivity fails on "
                            f"{serialize(p)}, {serialize(q)}, {serialize(r)}"
                        )

    # mixing: injectivity of the graft at each fixed arity split, and
    # domination by the tensor product
    max_side = max_points // 2
    for a in range(0, max_side + 1):
        for b in range(0, max_side - a + 1):
            seen: dict[Partition, tuple] = {}
            for p in projectives(spec_all, a):
                tp = stats(p).t
                for q in projectives(spec_all, b):
                    tq = stats(q).t
                    pq = tensor(p, q)
                    for h in enumerate_mixing(tp, tq):
                        m = mix(p, q, h)
                        key = (p, q, h.partition)
                        checks += 2
                        if m in seen and seen[m] != key:
                            failures.append(f"mixing graft collides at {serialize(m)}")
                        seen[m] = key
                        if not dominates(pq, m):
                            failures.append(
                                f"graft not dominated by tensor at {serialize(m)}"
                            )
    return {
        "suite": "structure",
        "max_points": max_points,
        "checks": checks,
        "failures": failures[:10],
        "passed": not failures,
    }


def suite_fusion(max_row_points: int = 2) -> dict:
    """Grafted fusion against the brute-force domination oracle."""
    checks = 0
    failures: list[str] = []
    for name in ("nc", "nc2", "nceven", "ncb"):
        spec = CategorySpec.named(name)
        pool = []
        for k in range(0, max_row_points + 1):
            pool.extend(projectives(spec, k))
        for p in pool:
            for q in pool:
                checks += 1
                fast = fusion(spec, p, q)
                slow = fusion_brute_force(spec, p, q)
                if fast.members != slow.members:
                    failures.append(
                        f"{name}: mismatch at {serialize(p)} x {serialize(q)}"
                    )
    return {
        "suite": "fusion",
        "max_row_points": max_row_points,
        "checks": checks,
        "failures": failures[:10],
        "passed": not failures,
    }


def run_suite(name: str, N: int = 3, max_points: int = 6) -> dict:
    if name == "functor":
        return suite_functor(N=N, max_points=max_points)
    if name == "structure":
        return suite_structure(max_points=max_points)
    if name == "fusion":
        return suite_fusion(max_row_points=min(2, max_points // 2))
    if name == "all":
        reports = [
            suite_functor(N=N, max_points=max_points),
            suite_structure(max_points=min(6, max_points)),
            suite_fusion(max_row_points=2),
        ]
        return {
            "suite": "all",
            "checks": sum(r["checks"] for r in reports),
            "failures": [f for r in reports for f in r["failures"]],
            "passed": all(r["passed"] for r in reports),
            "parts": reports,
        }
    raise ValueError(f"unknown suite {name!r}")


SUITES = ("functor", "structure", "fusion", "all")
