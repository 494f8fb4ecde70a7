"""The bundled group catalog, constructors, fixtures, and name lookup."""

import pytest

from rackle import (
    TooLarge,
    alternating,
    catalog_entries,
    cyclic,
    derived_length_oracle,
    dicyclic,
    dihedral,
    group_invariants,
    named_group,
    sl23,
    stall_lattice,
    symmetric,
)
from rackle.catalog import fixture_group, fixture_text
from rackle.lattice import AbstractLattice


class TestConstructors:
    def test_cyclic(self):
        assert cyclic(1).name == "triv"
        g = cyclic(7)
        assert g.order == 7 and g.is_abelian() and g.name == "Z7"

    def test_dihedral(self):
        g = dihedral(12)
        assert g.order == 12 and g.name == "D6" and not g.is_abelian()
        assert sorted(g.order_histogram().items()) == [(1, 1), (2, 7), (3, 2), (6, 2)]

    def test_dihedral_odd_order(self):
        with pytest.raises(TooLarge):
            dihedral(7)

    def test_dicyclic(self):
        q8 = dicyclic(8)
        assert q8.name == "Q8" and q8.order == 8
        assert sum(1 for x in range(8) if q8.element_order(x) == 2) == 1
        dic3 = dicyclic(12)
        assert dic3.name == "Dic3" and dic3.order == 12

    def test_dicyclic_bad_order(self):
        with pytest.raises(TooLarge):
            dicyclic(10)

    def test_symmetric(self):
        assert symmetric(3).order == 6
        assert symmetric(4).order == 24
        with pytest.raises(TooLarge):
            symmetric(5)

    def test_alternating(self):
        assert alternating(4).order == 12
        a5 = alternating(5)
        assert a5.order == 60
        _, dl = derived_length_oracle(a5)
        assert not dl
        with pytest.raises(TooLarge):
            alternating(6)


class TestCatalog:
    def test_complete_through_order_12(self):
        per_order = {}
        for g in catalog_entries(12):
            per_order[g.order] = per_order.get(g.order, 0) + 1
        assert per_order == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2,
                             7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5}

    def test_names_unique_and_sorted(self):
        entries = catalog_entries(16)
        names = [g.name for g in entries]
        assert len(set(names)) == len(names)
        keys = [(g.order, g.name) for g in entries]
        assert keys == sorted(keys)

    def test_order_16_entries(self):
        names = {g.name for g in catalog_entries(16) if g.order == 16}
        assert names == {"Z16", "Z8xZ2", "Z4xZ4", "Z4xZ2xZ2", "Z2xZ2xZ2xZ2",
                         "D8", "Q16", "Z2xD4", "Z2xQ8"}

    def test_larger_entries_present(self):
        names = {g.name for g in catalog_entries(60)}
        assert "S4" in names and "A5" in names

    def test_order24_flag(self, monkeypatch):
        monkeypatch.setenv("RACKLE_ORDER24", "0")
        assert "sl23" not in {g.name for g in catalog_entries(24)}
        monkeypatch.setenv("RACKLE_ORDER24", "1")
        assert "sl23" in {g.name for g in catalog_entries(24)}

    def test_pairwise_distinct_order8(self):
        hists = set()
        for g in catalog_entries(8):
            if g.order == 8:
                hists.add(tuple(sorted(g.order_histogram().items())))
        assert len(hists) == 5


class TestNamedGroup:
    def test_aliases(self):
        assert named_group("v4").name == "Z2xZ2"
        assert named_group("K4").name == "Z2xZ2"
        assert named_group("d3").name == "S3"
        assert named_group("dic2").name == "Q8"
        assert named_group("z1").name == "triv"

    def test_case_insensitive(self):
        assert named_group("q16").order == 16
        assert named_group("z6xz2").order == 12

    def test_specials(self):
        assert named_group("S4").order == 24
        assert named_group("a5").order == 60
        assert named_group("sl23").order == 24

    def test_unknown(self):
        with pytest.raises(KeyError):
            named_group("M11")


class TestFixtures:
    def test_s3_table(self):
        g = fixture_group("s3.cay")
        inv = group_invariants(g)
        assert inv.order == 6 and not inv.is_abelian and inv.derived_length == 2

    def test_sl23(self):
        g = sl23()
        inv = group_invariants(g)
        assert inv.order == 24
        assert inv.derived_length == 3
        assert sorted(g.order_histogram().items()) == [
            (1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]

    def test_stall_lattice(self):
        lat = stall_lattice()
        assert isinstance(lat, AbstractLattice)
        assert lat.size == 14 and lat.n_atoms == 7

    def test_fixture_text_has_comments_stripped_on_parse(self):
        text = fixture_text("stall.lat")
        assert text.splitlines()[0].split()[0] == "14"
