"""Lattice-only reconstruction: classes, normal abelian parts, quotients, length."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rackle import (
    NOT_SOLVABLE,
    BadPartition,
    NotGroupLattice,
    NotNormal,
    ReconstructionContext,
    coset_partition_of,
    find_coset_partition,
    is_hypothetical_coset_partition,
    join_of_cosets,
    join_poset,
    lattice_derived_length,
    matching_bijection_oracle,
    max_normal_abelian,
    maximal_boolean_elements,
    partition_bijection,
    recover_classes,
)
from rackle.catalog import stall_lattice
from rackle.errors import NoPartition
from rackle.groups import normal_subgroups, quotient
from rackle.lattice import (
    AbstractLattice,
    abstract_from_cover_pairs,
    are_isomorphic,
    check_isomorphism,
    enumerate_subrack_lattice,
    to_abstract,
)
from rackle.racks import group_rack
from rackle.reconstruct import HypotheticalCosetPartition

from conftest import get_abstract, get_group, get_lattice


def support_sizes(ab, idxs):
    return sorted(len(ab.atoms_below(x)) for x in idxs)


class TestRecoverClasses:
    def test_s3(self):
        part = recover_classes(get_abstract("S3"))
        assert sorted(part.sizes()) == [1, 2, 3]

    def test_boolean_all_singletons(self):
        part = recover_classes(get_abstract("Z6"))
        assert part.sizes() == (1,) * 6

    def test_q8(self):
        part = recover_classes(get_abstract("Q8"))
        assert sorted(part.sizes()) == [1, 1, 2, 2, 2]

    def test_shuffle_invariant_sizes(self):
        for seed in (1, 2, 3):
            part = recover_classes(get_abstract("S4", seed=seed))
            assert sorted(part.sizes()) == [1, 3, 6, 6, 8]

    def test_stall_fixture(self):
        part = recover_classes(stall_lattice())
        assert sorted(part.sizes()) == [1, 3, 3]

    def test_blocks_tile_the_atoms(self):
        ab = get_abstract("D6", seed=9)
        part = recover_classes(ab)
        union = 0
        for b in part.blocks:
            assert union & b == 0
            union |= b
        assert union == (1 << ab.n_atoms) - 1

    def test_chain_is_rejected(self):
        chain = abstract_from_cover_pairs(3, [(0, 1), (1, 2)])
        with pytest.raises(NotGroupLattice):
            recover_classes(chain)

    def test_overlapping_complements_rejected(self):
        # coatoms {a,b}, {a,c}, {c,d}: complements double-cover atoms
        lat = AbstractLattice(size=9, n_atoms=4,
                              supports=[0, 1, 2, 4, 8, 3, 5, 12, 15], top=8)
        with pytest.raises(NotGroupLattice):
            recover_classes(lat)


class TestMaximalBoolean:
    def test_s3(self):
        ab = get_abstract("S3")
        mb = maximal_boolean_elements(ab)
        assert support_sizes(ab, mb) == [2, 2, 2, 3]

    def test_boolean_whole_lattice(self):
        ab = get_abstract("Z12")
        assert maximal_boolean_elements(ab) == [ab.top]

    def test_q8_and_d4(self):
        for name in ("Q8", "D4"):
            ab = get_abstract(name)
            mb = maximal_boolean_elements(ab)
            assert support_sizes(ab, mb) == [4, 4, 4], name

    def test_a4(self):
        ab = get_abstract("A4")
        assert support_sizes(ab, maximal_boolean_elements(ab)) == [3, 3, 3, 3, 4]

    def test_stall(self):
        lat = stall_lattice()
        mb = maximal_boolean_elements(lat)
        assert support_sizes(lat, mb) == [1] * 7


class TestMaxNormalAbelian:
    def test_s3_rotations(self):
        ab = get_abstract("S3")
        mna = max_normal_abelian(ab)
        assert support_sizes(ab, mna) == [3]

    def test_boolean_top(self):
        ab = get_abstract("Z6xZ2")
        assert max_normal_abelian(ab) == [ab.top]

    def test_d4_three_subgroups(self):
        ab = get_abstract("D4", seed=4)
        assert support_sizes(ab, max_normal_abelian(ab)) == [4, 4, 4]

    def test_a4_v4(self):
        ab = get_abstract("A4")
        assert support_sizes(ab, max_normal_abelian(ab)) == [4]

    def test_s4_v4(self):
        ab = get_abstract("S4")
        assert support_sizes(ab, max_normal_abelian(ab)) == [4]

    def test_stall_identity_only(self):
        lat = stall_lattice()
        mna = max_normal_abelian(lat)
        assert support_sizes(lat, mna) == [1]

    def test_candidates_are_inclusion_maximal(self):
        ab = get_abstract("D6", seed=2)
        mna = max_normal_abelian(ab)
        for x in mna:
            for y in mna:
                if x != y:
                    assert not ab.leq(x, y)


class TestCosetOps:
    def test_s3_mod_a3(self):
        g = get_group("S3")
        n3 = next(h for h in normal_subgroups(g) if len(h) == 3)
        parts = coset_partition_of(g, n3)
        assert sorted(len(p) for p in parts) == [3, 3]
        assert g.identity in parts[0]

    def test_trivial_and_whole(self):
        g = get_group("D4")
        singletons = coset_partition_of(g, frozenset({0}))
        assert len(singletons) == 8
        whole = coset_partition_of(g, frozenset(range(8)))
        assert len(whole) == 1

    def test_not_normal(self):
        g = get_group("S3")
        t = next(x for x in range(6) if g.element_order(x) == 2)
        with pytest.raises(NotNormal):
            coset_partition_of(g, frozenset({0, t}))

    def test_join_of_cosets_spans(self):
        g = get_group("S3")
        n3 = next(h for h in normal_subgroups(g) if len(h) == 3)
        t = next(x for x in range(6) if g.element_order(x) == 2)
        joined = join_of_cosets(g, n3, [0, t])
        assert joined == frozenset(range(6))

    def test_join_of_cosets_single(self):
        g = get_group("S3")
        n3 = next(h for h in normal_subgroups(g) if len(h) == 3)
        assert join_of_cosets(g, n3, [0]) == n3

    def test_join_representative_invariance(self):
        g = get_group("D4")
        for n in normal_subgroups(g):
            parts = coset_partition_of(g, n)
            rng = random.Random(1)
            for _ in range(10):
                reps = [rng.choice(sorted(p)) for p in parts[:2]]
                a = join_of_cosets(g, n, reps)
                b = join_of_cosets(g, n, list(reversed(reps)))
                assert a == b


class TestPartitionBijection:
    def test_equal_partitions(self):
        p = [{0, 1}, {2, 3}, {4, 5}]
        f = partition_bijection(p, p)
        assert sorted(f) == [0, 1, 2]
        for i, j in enumerate(f):
            assert p[i] & p[j]

    def test_crossing_pair(self):
        p = [{1, 2}, {3, 4}]
        q = [{1, 3}, {2, 4}]
        f = partition_bijection(p, q)
        assert sorted(f) == [0, 1]
        for i, j in enumerate(f):
            assert p[i] & q[j]

    def test_count_mismatch(self):
        with pytest.raises(BadPartition):
            partition_bijection([{0, 1}], [{0}, {1}])

    def test_size_mismatch(self):
        with pytest.raises(BadPartition):
            partition_bijection([{0, 1}, {2}], [{0}, {1, 2}])

    def test_ground_set_mismatch(self):
        with pytest.raises(BadPartition):
            partition_bijection([{0, 1}], [{2, 3}])

    def test_matching_oracle_positive(self):
        p = [frozenset({1, 2}), frozenset({3, 4})]
        q = [frozenset({1, 3}), frozenset({2, 4})]
        f = matching_bijection_oracle(p, q)
        assert f is not None and sorted(f) == [0, 1]

    def test_matching_oracle_negative(self):
        p = [frozenset({1}), frozenset({2})]
        q = [frozenset({3}), frozenset({4})]
        assert matching_bijection_oracle(p, q) is None


@st.composite
def partition_pair(draw):
    m = draw(st.integers(min_value=1, max_value=6))
    k = draw(st.integers(min_value=1, max_value=6))
    items = list(range(m * k))
    r = random.Random(draw(st.integers(min_value=0, max_value=10**6)))
    a, b = items[:], items[:]
    r.shuffle(a)
    r.shuffle(b)
    ps = [a[i * k:(i + 1) * k] for i in range(m)]
    qs = [b[i * k:(i + 1) * k] for i in range(m)]
    return ps, qs


@given(partition_pair())
@settings(max_examples=200, deadline=None)
def test_partition_bijection_always_valid(pair):
    ps, qs = pair
    f = partition_bijection(ps, qs)
    assert sorted(f) == list(range(len(ps)))
    for i, j in enumerate(f):
        assert set(ps[i]) & set(qs[j])
    # independent confirmation a valid assignment exists at all
    assert matching_bijection_oracle(
        [frozenset(p) for p in ps], [frozenset(q) for q in qs]) is not None


class TestHypotheticalPartition:
    def _s3_setup(self):
        g = get_group("S3")
        lat = get_lattice("S3")
        ab = to_abstract(lat)  # unshuffled: atom position i is ground element i
        ctx = ReconstructionContext(ab)
        n3 = next(h for h in normal_subgroups(g) if len(h) == 3)
        parts = []
        for coset in coset_partition_of(g, n3):
            m = 0
            for x in coset:
                m |= 1 << x
            parts.append(m)
        return ctx, HypotheticalCosetPartition(parts=tuple(parts))

    def test_true_cosets_pass(self):
        ctx, hp = self._s3_setup()
        rep = is_hypothetical_coset_partition(ctx, hp)
        assert rep.ok, rep.text()

    def test_modes_agree(self):
        ctx, hp = self._s3_setup()
        a = is_hypothetical_coset_partition(ctx, hp, mode="exhaustive")
        b = is_hypothetical_coset_partition(ctx, hp, mode="sample", seed=3)
        assert a.ok and b.ok

    def test_wrong_partition_fails(self):
        g = get_group("S3")
        ab = to_abstract(get_lattice("S3"))
        ctx = ReconstructionContext(ab)
        e = g.identity
        ts = [x for x in range(6) if g.element_order(x) == 2]
        rs = [x for x in range(6) if g.element_order(x) == 3]
        parts = (
            1 << e | 1 << ts[0],
            1 << rs[0] | 1 << ts[1],
            1 << rs[1] | 1 << ts[2],
        )
        rep = is_hypothetical_coset_partition(
            ctx, HypotheticalCosetPartition(parts=parts))
        assert not rep.ok
        assert any(ln.startswith("FAIL") for ln in rep.lines)

    def test_c1_violations(self):
        ab = to_abstract(get_lattice("S3"))
        ctx = ReconstructionContext(ab)
        overlap = (0b11, 0b110, 0b111000)  # parts share atom 1
        rep = is_hypothetical_coset_partition(
            ctx, HypotheticalCosetPartition(parts=overlap))
        assert not rep.ok
        assert any("C1" in ln for ln in rep.lines if ln.startswith("FAIL"))


class TestFindCosetPartition:
    def test_s3(self):
        ab = get_abstract("S3", seed=1)
        ctx = ReconstructionContext(ab)
        n = max_normal_abelian(ctx)[0]
        hp = find_coset_partition(ctx, n)
        assert hp.count == 2 and hp.part_size() == 3
        assert hp.parts[hp.distinguished] == ctx.atom_support(n)

    def test_d4(self):
        ab = get_abstract("D4", seed=2)
        ctx = ReconstructionContext(ab)
        for n in max_normal_abelian(ctx):
            hp = find_coset_partition(ctx, n)
            assert hp.count == 2 and hp.part_size() == 4

    def test_whole_lattice_single_part(self):
        ab = get_abstract("Z6")
        ctx = ReconstructionContext(ab)
        n = max_normal_abelian(ctx)[0]   # the top of a Boolean lattice
        hp = find_coset_partition(ctx, n)
        assert hp.count == 1

    def test_stall_has_none(self):
        lat = stall_lattice()
        ctx = ReconstructionContext(lat)
        part = recover_classes(ctx)
        three = next(x for x in range(lat.size)
                     if len(lat.atoms_below(x)) == 3)
        with pytest.raises(NoPartition):
            find_coset_partition(ctx, three, part)


class TestJoinPoset:
    def test_s3_quotient_is_b1(self):
        ab = get_abstract("S3")
        ctx = ReconstructionContext(ab)
        n = max_normal_abelian(ctx)[0]
        hp = find_coset_partition(ctx, n)
        jp = join_poset(ctx, hp)
        g = get_group("S3")
        n3 = next(h for h in normal_subgroups(g) if len(h) == 3)
        q, _ = quotient(g, n3)
        target = to_abstract(enumerate_subrack_lattice(group_rack(q)))
        mapping = are_isomorphic(jp, target)
        assert mapping is not None and check_isomorphism(jp, target, mapping)

    def test_boolean_quotient(self):
        # B6 with a 2-element block structure collapses to B3
        ab = get_abstract("Z6")
        ctx = ReconstructionContext(ab)
        n = next(x for x in range(ab.size)
                 if len(ab.atoms_below(x)) == 2 and ab.leq(ab.atoms[0], x))
        hp = find_coset_partition(ctx, n)
        jp = join_poset(ctx, hp)
        assert jp.size == 8 and jp.n_atoms == 3 and jp.is_boolean()

    def test_cap(self):
        from rackle.config import DEFAULT_LIMITS
        from rackle.errors import TooLarge
        ab = get_abstract("S3")
        ctx = ReconstructionContext(ab)
        n = max_normal_abelian(ctx)[0]
        hp = find_coset_partition(ctx, n)
        with pytest.raises(TooLarge):
            join_poset(ctx, hp, DEFAULT_LIMITS.with_(join_poset_cap=1))


class TestDerivedLength:
    def test_degenerate(self):
        triv = get_abstract("triv")
        assert lattice_derived_length(triv) == 0

    def test_abelian(self):
        for name in ("Z2", "Z9", "Z6xZ2"):
            assert lattice_derived_length(get_abstract(name)) == 1, name

    def test_metabelian(self):
        for name in ("S3", "D4", "Q8", "A4", "D6"):
            assert lattice_derived_length(get_abstract(name, seed=5)) == 2, name

    def test_s4(self):
        assert lattice_derived_length(get_abstract("S4", seed=8)) == 3

    def test_stall_not_solvable(self):
        verdict = lattice_derived_length(stall_lattice())
        assert verdict is NOT_SOLVABLE

    def test_seed_invariance(self):
        vals = {lattice_derived_length(get_abstract("D5", seed=s))
                for s in (None, 1, 2)}
        assert vals == {2}
