"""Racks as operation tables and the three conjugation-rack constructors.

A rack here is a square table op[a][b] = a ▷ b over indices 0..m-1. For
conjugation racks a ▷ b is a b a^-1 inside some finite group; those always
satisfy the quandle axioms, but raw tables can be fed in and checked too.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BadIndex, FormatError, NotPrime
from .groups import FiniteGroup, conjugacy_classes

OpTable = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ConjugationRack:
    size: int
    op: OpTable
    # ground_labels[i] = index of this point inside the source group, if any
    ground_labels: tuple[int, ...] | None = None
    source: str = "raw"
    name: str = ""

    def apply(self, a: int, b: int) -> int:
        return self.op[a][b]

    def translation_rows(self) -> list[list[int]]:
        """Row a is the left translation b -> a▷b, handy for closure loops."""
        return [list(row) for row in self.op]

    def __repr__(self) -> str:
        label = self.name or self.source
        return f"<rack {label}, {self.size} points>"


@dataclass(frozen=True)
class AxiomReport:
    is_rack: bool
    is_quandle: bool
    # on failure: ("A1", a, b, c) or ("A2", a) or ("A3", a)
    witnesses: tuple[tuple, ...]

    def __bool__(self) -> bool:
        return self.is_rack


def verify_rack_axioms(op: Sequence[Sequence[int]]) -> AxiomReport:
    """Check self-distributivity, bijective translations, and idempotence."""
    m = len(op)
    witnesses: list[tuple] = []
    for row in op:
        if len(row) != m or any(not (0 <= x < m) for x in row):
            raise BadIndex("operation table is not square over [0,m)")
    a2_ok = True
    for a in range(m):
        if len(set(op[a])) != m:
            witnesses.append(("A2", a))
            a2_ok = False
    a1_ok = True
    for a in range(m):
        ra = op[a]
        for b in range(m):
            rab = op[ra[b]]
            rb = op[b]
            for c in range(m):
                if ra[rb[c]] != rab[ra[c]]:
                    witnesses.append(("A1", a, b, c))
                    a1_ok = False
                    break
            if not a1_ok:
                break
        if not a1_ok:
            break
    is_rack = a1_ok and a2_ok
    a3_ok = all(op[a][a] == a for a in range(m))
    if is_rack and not a3_ok:
        bad = next(a for a in range(m) if op[a][a] != a)
        witnesses.append(("A3", bad))
    return AxiomReport(
        is_rack=is_rack,
        is_quandle=is_rack and a3_ok,
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# constructors from groups


def group_rack(g: FiniteGroup) -> ConjugationRack:
    """Whole-group conjugation quandle: op[a][b] = a b a^-1."""
    n = g.order
    op = tuple(
        tuple(g.conj(a, b) for b in range(n)) for a in range(n)
    )
    return ConjugationRack(
        size=n,
        op=op,
        ground_labels=tuple(range(n)),
        source="group-rack",
        name=g.name,
    )


def conjugacy_class_rack(g: FiniteGroup, class_index: int) -> ConjugationRack:
    """Conjugation restricted to one class; classes are closed under it."""
    cc = conjugacy_classes(g)
    if not (0 <= class_index < cc.count):
        raise BadIndex(f"class index {class_index} out of range [0,{cc.count})")
    members = cc.classes[class_index]
    pos = {x: i for i, x in enumerate(members)}
    op = tuple(
        tuple(pos[g.conj(a, b)] for b in members) for a in members
    )
    return ConjugationRack(
        size=len(members),
        op=op,
        ground_labels=tuple(members),
        source="class-rack",
        name=f"{g.name or 'G'}-class{class_index}",
    )


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def p_power_rack(g: FiniteGroup, p: int) -> ConjugationRack:
    """Conjugation on the elements whose order is a power of p.

    The identity has order p^0 and is always kept. When p does not divide
    |G| the ground set degenerates to {identity}; that is legitimate, just
    uninteresting.
    """
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    members = []
    for x in range(g.order):
        k = g.element_order(x)
        while k % p == 0:
            k //= p
        if k == 1:
            members.append(x)
    pos = {x: i for i, x in enumerate(members)}
    op = tuple(
        tuple(pos[g.conj(a, b)] for b in members) for a in members
    )
    return ConjugationRack(
        size=len(members),
        op=op,
        ground_labels=tuple(members),
        source="p-power-rack",
        name=f"{g.name or 'G'}-{p}power",
    )


# ---------------------------------------------------------------------------
# closure

def closure_mask(rows: Sequence[Sequence[int]], seed_mask: int) -> int:
    """Least superset of the seed closed under internal ▷, as a bitmask.

    Worklist saturation: when a point enters, cross it with everything
    already present, both ways. This is the hot loop of the whole package.
    """
    mask = 0
    work = []
    s = seed_mask
    while s:
        low = s & -s
        i = low.bit_length() - 1
        mask |= low
        work.append(i)
        s ^= low
    while work:
        a = work.pop()
        ra = rows[a]
        m = mask
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            for c in (ra[b], rows[b][a]):
                bit = 1 << c
                if not mask & bit:
                    mask |= bit
                    work.append(c)
    return mask


def closure_extend(rows: Sequence[Sequence[int]], closed_mask: int, j: int) -> int:
    """Closure of closed_mask ∪ {j}, exploiting that closed_mask is closed."""
    mask = closed_mask | (1 << j)
    work = [j]
    while work:
        a = work.pop()
        ra = rows[a]
        m = mask
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            for c in (ra[b], rows[b][a]):
                bit = 1 << c
                if not mask & bit:
                    mask |= bit
                    work.append(c)
    return mask


def rack_closure(rack: ConjugationRack, seeds: Iterable[int]) -> frozenset[int]:
    """Subrack generated by the seeds."""
    mask = 0
    for s in seeds:
        if not (0 <= s < rack.size):
            raise BadIndex(f"seed {s} outside ground set of size {rack.size}")
        mask |= 1 << s
    out = closure_mask(rack.op, mask)
    return frozenset(i for i in range(rack.size) if out >> i & 1)


def is_closed_mask(rows: Sequence[Sequence[int]], mask: int) -> bool:
    m = mask
    members = []
    while m:
        low = m & -m
        members.append(low.bit_length() - 1)
        m ^= low
    for a in members:
        ra = rows[a]
        for b in members:
            if not mask >> ra[b] & 1:
                return False
    return True


# ---------------------------------------------------------------------------
# file format


def parse_rack(text: str, name: str = "") -> ConjugationRack:
    """Rack table text: first line m, then m rows of m indices. '#' comments."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty rack file")
    try:
        m = int(lines[0])
    except ValueError as exc:
        raise FormatError(f"bad size line {lines[0]!r}") from exc
    if len(lines) != m + 1:
        raise FormatError(f"expected {m} table rows, found {len(lines) - 1}")
    op = []
    for ln in lines[1:]:
        try:
            row = tuple(int(tok) for tok in ln.split())
        except ValueError as exc:
            raise FormatError(f"bad table row {ln!r}") from exc
        if len(row) != m or any(not (0 <= x < m) for x in row):
            raise FormatError(f"row {ln!r} is not {m} indices in [0,{m})")
        op.append(row)
    report = verify_rack_axioms(op)
    if not report.is_rack:
        raise FormatError(f"table violates rack axioms: {report.witnesses[0]}")
    return ConjugationRack(size=m, op=tuple(op), source="raw", name=name)


def format_rack(rack: ConjugationRack) -> str:
    rows = [" ".join(str(x) for x in row) for row in rack.op]
    return "\n".join([str(rack.size)] + rows) + "\n"


def load_rack(path: str) -> ConjugationRack:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stem = os.path.basename(path).rsplit(".", 1)[0]
    return parse_rack(text, name=stem)
