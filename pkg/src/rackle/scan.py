"""Per-group verification pipeline and the lattice-isomorphic pair scan.

Every check emits one `PASS|FAIL <check> <witness>` line; reports carry the
seed and configuration that produced them so a rerun is byte-identical.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .config import DEFAULT_LIMITS, Limits, thread_count
from .errors import RackleError, TooLarge
from .groups import (
    NOT_SOLVABLE,
    FiniteGroup,
    conjugacy_classes,
    derived_length_oracle,
    group_invariants,
    maximal_abelian_subgroups,
    maximal_normal_abelian_oracle,
    normal_subgroups,
    quotient,
)
from .lattice import (
    are_isomorphic,
    brute_force_closed_masks,
    check_isomorphism,
    enumerate_subrack_lattice,
    to_abstract,
)
from .racks import closure_mask, group_rack, is_closed_mask
from .reconstruct import (
    HypotheticalCosetPartition,
    ReconstructionContext,
    find_coset_partition,
    is_hypothetical_coset_partition,
    join_poset,
    lattice_derived_length,
    max_normal_abelian,
    maximal_boolean_elements,
    recover_classes,
)
from .topology import (
    mobius_bottom_top,
    proper_part,
    reduced_euler_characteristic,
    sphere_check,
)


@dataclass
class ScanReport:
    seed: int
    config: str
    lines: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(ln.startswith("FAIL") for ln in self.lines)

    def failures(self) -> list[str]:
        return [ln for ln in self.lines if ln.startswith("FAIL")]

    def text(self) -> str:
        head = [f"# seed={self.seed} {self.config}"]
        return "\n".join(head + self.lines) + "\n"


def _mask_of(members) -> int:
    out = 0
    for v in members:
        out |= 1 << v
    return out


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def verify_group(
    g: FiniteGroup,
    limits: Limits = DEFAULT_LIMITS,
    seed: int = 0,
    exhaustive: bool = False,
) -> list[str]:
    """Run the whole pipeline on one group; one report line per check."""
    lines: list[str] = []
    name = g.name or f"order{g.order}"

    if g.order > limits.ground_cap:
        lines.append(
            f"SKIP enumerate {name} ground set {g.order} over cap {limits.ground_cap}"
        )
        return lines

    rack = group_rack(g)
    try:
        lat = enumerate_subrack_lattice(rack, limits=limits, workers=1)
    except TooLarge as exc:
        lines.append(f"FAIL enumerate {name} {exc}")
        return lines
    note = ""
    if g.order <= 12:
        if brute_force_closed_masks(rack) == lat.elements:
            note = ", brute-force scan agrees"
        else:
            lines.append(f"FAIL enumerate {name} lectic and brute-force outputs differ")
            return lines
    lines.append(f"PASS enumerate {name} {lat.size} elements{note}")

    cc = conjugacy_classes(g)
    full = (1 << g.order) - 1
    complements = {full ^ _mask_of(c) for c in cc.classes}
    if lat.size <= 5000:
        coatom_masks = {lat.elements[x] for x in lat.coatoms}
        agree = coatom_masks == complements
    else:
        # big lattice: check the complements are closed, pairwise
        # incomparable, and that every proper element sits under one
        agree = all(m in lat._index for m in complements)
        agree = agree and all(
            not (a != b and a & b == a) for a in complements for b in complements
        )
        if agree:
            for mask in lat.elements:
                if mask == full:
                    continue
                if not any(mask & c == mask for c in complements):
                    agree = False
                    break
    if agree:
        lines.append(f"PASS coatoms {name} c={cc.count} class complements")
    else:
        lines.append(f"FAIL coatoms {name} coatoms do not match class complements")

    ab = to_abstract(lat)
    ctx = ReconstructionContext(ab)
    # with no shuffle seed, atom position p is ground element p
    mb = maximal_boolean_elements(ctx)
    mb_supports = {ctx.atom_support(x) for x in mb}
    if g.order <= limits.subgroup_cap:
        oracle_ab = {_mask_of(h) for h in maximal_abelian_subgroups(g, limits)}
        if mb_supports == oracle_ab:
            lines.append(f"PASS boolean-elements {name} {len(mb)} maximal abelian")
        else:
            lines.append(
                f"FAIL boolean-elements {name} lattice {sorted(mb_supports)} "
                f"vs oracle {sorted(oracle_ab)}"
            )
    else:
        lines.append(f"SKIP boolean-elements {name} order over subgroup cap")

    classes = recover_classes(ctx)
    class_masks = {_mask_of(c) for c in cc.classes}
    if {b for b in classes.blocks} == class_masks:
        lines.append(f"PASS classes {name} blocks match conjugacy classes")
    else:
        lines.append(f"FAIL classes {name} blocks differ from conjugacy classes")

    mna = max_normal_abelian(ctx, classes)
    mna_supports = {ctx.atom_support(x) for x in mna}
    oracle_mna = {_mask_of(h) for h in maximal_normal_abelian_oracle(g)}
    if mna_supports == oracle_mna:
        lines.append(f"PASS normal-abelian {name} {len(mna)} candidates")
    else:
        lines.append(
            f"FAIL normal-abelian {name} lattice {sorted(mna_supports)} "
            f"vs oracle {sorted(oracle_mna)}"
        )

    lines.append(_coset_join_check(g, name, limits, seed, exhaustive))

    hyp_fail = None
    quot_fail = None
    quot_count = 0
    for nmask in sorted(oracle_mna):
        members = frozenset(_bits(nmask))
        parts_group = _cosets_as_masks(g, members)
        partition = HypotheticalCosetPartition(parts=tuple(parts_group))
        rep = is_hypothetical_coset_partition(
            ctx,
            partition,
            classes=classes,
            mode="exhaustive" if exhaustive else "auto",
            seed=seed,
            limits=limits,
        )
        if not rep.ok:
            hyp_fail = f"N={sorted(members)}: " + "; ".join(rep.lines)
            break
        n_elem = ctx.element_of_atoms(nmask)
        try:
            found = find_coset_partition(ctx, n_elem, classes, limits=limits)
            jp = join_poset(ctx, found, limits=limits)
        except RackleError as exc:
            quot_fail = f"N={sorted(members)}: {exc}"
            break
        q, _ = quotient(g, members)
        q_lat = to_abstract(
            enumerate_subrack_lattice(group_rack(q), limits=limits), seed=seed
        )
        mapping = are_isomorphic(jp, q_lat, limits=limits)
        if mapping is None or not check_isomorphism(jp, q_lat, mapping):
            quot_fail = f"N={sorted(members)}: join poset not isomorphic to quotient lattice"
            break
        quot_count += 1
    if hyp_fail:
        lines.append(f"FAIL hypothetical {name} {hyp_fail}")
    else:
        lines.append(f"PASS hypothetical {name} coset partitions satisfy the conditions")
    if quot_fail:
        lines.append(f"FAIL quotient-poset {name} {quot_fail}")
    else:
        lines.append(
            f"PASS quotient-poset {name} {quot_count} quotients match join posets"
        )

    shuffled = to_abstract(lat, seed=seed)
    dl_lat = lattice_derived_length(shuffled, limits=limits)
    _, dl_oracle = derived_length_oracle(g)
    if dl_lat == dl_oracle or (dl_lat is NOT_SOLVABLE and dl_oracle is NOT_SOLVABLE):
        lines.append(f"PASS derive {name} lattice={dl_lat} oracle={dl_oracle}")
    else:
        lines.append(f"FAIL derive {name} lattice={dl_lat} oracle={dl_oracle}")

    mu = mobius_bottom_top(ab)
    sphere_ok = sphere_check(ab, cc.count)
    chi_note = ""
    if ab.size - 2 <= limits.chain_count_cap:
        chi = reduced_euler_characteristic(proper_part(ab), limits=limits)
        if chi != mu:
            lines.append(f"FAIL sphere {name} mu={mu} chain-count={chi}")
            return lines
        chi_note = ", chain count agrees"
    if sphere_ok:
        lines.append(f"PASS sphere {name} mu={mu} c={cc.count}{chi_note}")
    else:
        lines.append(f"FAIL sphere {name} mu={mu} expected {(-1) ** cc.count}")
    return lines


def _cosets_as_masks(g: FiniteGroup, members: frozenset[int]) -> list[int]:
    from .reconstruct import coset_partition_of

    return [_mask_of(c) for c in coset_partition_of(g, members)]


def _coset_join_check(
    g: FiniteGroup, name: str, limits: Limits, seed: int, exhaustive: bool
) -> str:
    """Coset-join sweep: joins of coset subsets over all normal subgroups."""
    rows = group_rack(g).op
    rng = random.Random(seed)
    checked = 0
    for members in normal_subgroups(g):
        cosets = _cosets_as_masks(g, members)
        for c in cosets:
            if not is_closed_mask(rows, c):
                return f"FAIL coset-joins {name} coset {c:b} of N={sorted(members)} not closed"
        m = len(cosets)
        n = len(members)
        space = (n + 1) ** m - 1
        if exhaustive or space <= limits.tuple_budget:
            gen = _all_rep_tuples(cosets)
        else:
            gen = _sampled_rep_tuples(cosets, rng, limits.sample_count)
        for chosen, reps in gen:
            union = 0
            for c in chosen:
                union |= c
            direct = closure_mask(rows, union)
            closure = closure_mask(rows, _mask_of(reps))
            predicted = 0
            for c in cosets:
                if c & closure:
                    predicted |= c
            if direct != predicted:
                return (
                    f"FAIL coset-joins {name} N={sorted(members)} reps={reps}: "
                    f"join {direct:b} vs predicted {predicted:b}"
                )
            checked += 1
    return f"PASS coset-joins {name} {checked} tuples across {len(normal_subgroups(g))} normal subgroups"


def _all_rep_tuples(cosets: list[int]):
    m = len(cosets)
    for r in range(1, m + 1):
        for idxs in itertools.combinations(range(m), r):
            pools = [_bits(cosets[i]) for i in idxs]
            for reps in itertools.product(*pools):
                yield [cosets[i] for i in idxs], reps


def _sampled_rep_tuples(cosets: list[int], rng: random.Random, count: int):
    m = len(cosets)
    for _ in range(count):
        r = rng.randint(1, m)
        idxs = sorted(rng.sample(range(m), r))
        reps = tuple(rng.choice(_bits(cosets[i])) for i in idxs)
        yield [cosets[i] for i in idxs], reps


# ---------------------------------------------------------------------------
# pair scan


def pairs_scan(
    max_order: int = 12,
    limits: Limits = DEFAULT_LIMITS,
    seed: int = 0,
    exhaustive: bool = False,
) -> ScanReport:
    """Compare invariants across every lattice-isomorphic catalog pair."""
    from .catalog import catalog_entries

    config = (
        f"order_max={max_order} exhaustive={exhaustive} "
        f"tuple_budget={limits.tuple_budget} threads={thread_count()}"
    )
    report = ScanReport(seed=seed, config=config)
    groups = [g for g in catalog_entries(max_order, limits) if g.order <= limits.ground_cap]
    lats = []
    for i, g in enumerate(groups):
        lat = enumerate_subrack_lattice(group_rack(g), limits=limits)
        lats.append(to_abstract(lat, seed=seed + i))
        report.lines.append(
            f"INFO group {g.name} order={g.order} lattice={lat.size}"
        )
    iso_pairs = 0
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            a, b = lats[i], lats[j]
            if a.size != b.size or len(a.atoms) != len(b.atoms):
                continue
            mapping = are_isomorphic(a, b, limits=limits)
            if mapping is None:
                report.lines.append(
                    f"INFO pair {groups[i].name} {groups[j].name} same size, not isomorphic"
                )
                continue
            if not check_isomorphism(a, b, mapping):
                report.lines.append(
                    f"FAIL pair {groups[i].name} {groups[j].name} reported map is not an isomorphism"
                )
                continue
            iso_pairs += 1
            inv_a = group_invariants(groups[i])
            inv_b = group_invariants(groups[j])
            agree = (
                inv_a.is_abelian == inv_b.is_abelian
                and (inv_a.nilpotency_class is None) == (inv_b.nilpotency_class is None)
                and inv_a.is_solvable == inv_b.is_solvable
                and inv_a.derived_length == inv_b.derived_length
                and inv_a.is_simple == inv_b.is_simple
            )
            if agree:
                report.lines.append(
                    f"PASS pair {groups[i].name} {groups[j].name} isomorphic lattices, "
                    f"invariants agree (dl={inv_a.derived_length})"
                )
            else:
                report.lines.append(
                    f"FAIL pair {groups[i].name} {groups[j].name} isomorphic lattices "
                    f"but invariants differ: {inv_a.summary()} vs {inv_b.summary()}"
                )
            if inv_a.nilpotency_class != inv_b.nilpotency_class:
                report.lines.append(
                    f"INFO pair {groups[i].name} {groups[j].name} nilpotency classes "
                    f"{inv_a.nilpotency_class} vs {inv_b.nilpotency_class}"
                )
    verdict = "PASS" if report.ok else "FAIL"
    report.lines.append(
        f"{verdict} pairs-scan {len(groups)} groups, {iso_pairs} isomorphic pairs, "
        f"{len(report.failures())} violations"
    )
    return report


def full_verification(
    max_order: int = 12,
    limits: Limits = DEFAULT_LIMITS,
    seed: int = 0,
    exhaustive: bool = False,
) -> ScanReport:
    """verify_group over the catalog, then the pair scan, in one report."""
    from .catalog import catalog_entries

    config = (
        f"order_max={max_order} exhaustive={exhaustive} "
        f"tuple_budget={limits.tuple_budget} threads={thread_count()}"
    )
    report = ScanReport(seed=seed, config=config)
    for g in catalog_entries(max_order, limits):
        report.lines.extend(verify_group(g, limits=limits, seed=seed, exhaustive=exhaustive))
    pair_report = pairs_scan(max_order, limits=limits, seed=seed, exhaustive=exhaustive)
    report.lines.extend(pair_report.lines)
    return report
