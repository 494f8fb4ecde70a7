"""Finite groups as multiplication tables, plus the oracles built on them.

Everything downstream (racks, lattices, reconstruction) treats a group as an
immutable table. Validation happens once, on ingestion; after that every
operation is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import BadIndex, FormatError, NotAGroup, NotNormal, TooLarge

Table = tuple[tuple[int, ...], ...]


class _NotSolvable:
    """Sentinel returned where a derived length would go. Falsy on purpose."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NOT_SOLVABLE"

    def __bool__(self) -> bool:
        return False


NOT_SOLVABLE = _NotSolvable()


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    mul: Table
    inv: tuple[int, ...]
    identity: int = 0
    name: str = ""

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conj(self, a: int, b: int) -> int:
        """a b a^-1."""
        return self.mul[self.mul[a][b]][self.inv[a]]

    def commutator(self, a: int, b: int) -> int:
        """a b a^-1 b^-1."""
        return self.mul[self.conj(a, b)][self.inv[b]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    def order_histogram(self) -> dict[int, int]:
        """Element-order multiset; a cheap isomorphism invariant."""
        hist: dict[int, int] = {}
        for a in range(self.order):
            k = self.element_order(a)
            hist[k] = hist.get(k, 0) + 1
        return hist

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<{label} of order {self.order}>"


# ---------------------------------------------------------------------------
# construction and validation


def _validate_table(table: Sequence[Sequence[int]]) -> None:
    n = len(table)
    if n == 0:
        raise NotAGroup("empty table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotAGroup(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not (0 <= x < n):
                raise NotAGroup(f"entry {x} in row {i} out of range [0,{n})")
    full = frozenset(range(n))
    for i, row in enumerate(table):
        if frozenset(row) != full:
            raise NotAGroup(f"row {i} is not a permutation")
    for j in range(n):
        if frozenset(table[i][j] for i in range(n)) != full:
            raise NotAGroup(f"column {j} is not a permutation")


def _find_identity(table: Sequence[Sequence[int]]) -> int:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    raise NotAGroup("no two-sided identity")


def _check_associative(table: Sequence[Sequence[int]]) -> None:
    m = np.asarray(table, dtype=np.int64)
    # row-blocked check keeps memory at O(n^2) per step
    for a in range(len(table)):
        left = m[m[a], :]
        right = m[a][m]
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            b, c = int(bad[0]), int(bad[1])
            raise NotAGroup(f"associativity fails at ({a},{b},{c})")


def relabelled(g: FiniteGroup, sigma: Sequence[int], name: str | None = None) -> FiniteGroup:
    """Transport the table through sigma: new index of old element a is sigma[a]."""
    n = g.order
    if sorted(sigma) != list(range(n)):
        raise BadIndex("relabelling is not a permutation")
    mul = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            mul[sigma[a]][sigma[b]] = sigma[g.mul[a][b]]
    inv = [0] * n
    for a in range(n):
        inv[sigma[a]] = sigma[g.inv[a]]
    return FiniteGroup(
        order=n,
        mul=tuple(tuple(row) for row in mul),
        inv=tuple(inv),
        identity=sigma[g.identity],
        name=g.name if name is None else name,
    )


def group_from_cayley_table(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Validate a multiplication table and normalize the identity to index 0."""
    _validate_table(table)
    e = _find_identity(table)
    _check_associative(table)
    n = len(table)
    mul: Table = tuple(tuple(int(x) for x in row) for row in table)
    inv = [0] * n
    for a in range(n):
        hits = [b for b in range(n) if mul[a][b] == e and mul[b][a] == e]
        if not hits:
            raise NotAGroup(f"element {a} has no two-sided inverse")
        inv[a] = hits[0]
    g = FiniteGroup(order=n, mul=mul, inv=tuple(inv), identity=e, name=name)
    if e != 0:
        sigma = list(range(n))
        sigma[0], sigma[e] = e, 0
        g = relabelled(g, sigma)
    return g


def group_from_permutation_generators(
    degree: int,
    gens: Sequence[Sequence[int]],
    name: str = "",
    limits: Limits = DEFAULT_LIMITS,
) -> FiniteGroup:
    """Close a generating set of 0-based permutation tuples under composition.

    Breadth-first closure; element 0 is always the identity permutation.
    """
    ident = tuple(range(degree))
    for p in gens:
        if sorted(p) != list(range(degree)):
            raise NotAGroup(f"generator {p} is not a permutation of degree {degree}")
    gen_tuples = [tuple(p) for p in gens]
    index: dict[tuple[int, ...], int] = {ident: 0}
    elements: list[tuple[int, ...]] = [ident]
    frontier = [ident]
    while frontier:
        nxt: list[tuple[int, ...]] = []
        for p in frontier:
            for q in gen_tuples:
                # composition acts left-to-right: (p*q)(x) = q(p(x)) is a
                # convention choice; fix "apply q after p" through indices
                r = tuple(p[q[i]] for i in range(degree))
                if r not in index:
                    if len(elements) >= limits.generation_cap:
                        raise TooLarge(
                            f"generated order exceeds cap {limits.generation_cap}"
                        )
                    index[r] = len(elements)
                    elements.append(r)
                    nxt.append(r)
        frontier = nxt
    n = len(elements)
    mul = [[0] * n for _ in range(n)]
    for a, p in enumerate(elements):
        for b, q in enumerate(elements):
            mul[a][b] = index[tuple(p[q[i]] for i in range(degree))]
    inv = [0] * n
    for a, p in enumerate(elements):
        pi = [0] * degree
        for i, x in enumerate(p):
            pi[x] = i
        inv[a] = index[tuple(pi)]
    return FiniteGroup(
        order=n,
        mul=tuple(tuple(row) for row in mul),
        inv=tuple(inv),
        identity=0,
        name=name,
    )


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass(frozen=True)
class ConjClassPartition:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.classes)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


def conjugacy_classes(g: FiniteGroup) -> ConjClassPartition:
    """Partition under x ~ a x a^-1, classes ordered by minimum member."""
    n = g.order
    seen = [False] * n
    classes: list[tuple[int, ...]] = []
    for x in range(n):
        if seen[x]:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for a in range(n):
                z = g.conj(a, y)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        for y in orbit:
            seen[y] = True
        classes.append(tuple(sorted(orbit)))
    classes.sort(key=lambda c: c[0])
    class_of = [0] * n
    for i, c in enumerate(classes):
        for y in c:
            class_of[y] = i
    return ConjClassPartition(classes=tuple(classes), class_of=tuple(class_of))


# ---------------------------------------------------------------------------
# subgroup machinery


def generated_subgroup(g: FiniteGroup, seeds: Iterable[int]) -> frozenset[int]:
    """Smallest subgroup containing the seeds; worklist closure under products."""
    members = {g.identity}
    work = []
    for s in seeds:
        if s not in members:
            members.add(s)
            work.append(s)
    while work:
        x = work.pop()
        added = []
        for y in members:
            for z in (g.mul[x][y], g.mul[y][x]):
                if z not in members:
                    added.append(z)
        xin = g.inv[x]
        if xin not in members:
            added.append(xin)
        for z in added:
            if z not in members:
                members.add(z)
                work.append(z)
    return frozenset(members)


def subgroups(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> list[frozenset[int]]:
    """All subgroups, by iterated cyclic extension starting from the trivial one."""
    if g.order > limits.subgroup_cap:
        raise TooLarge(
            f"subgroup enumeration capped at order {limits.subgroup_cap}, got {g.order}"
        )
    trivial = frozenset({g.identity})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for h in frontier:
            for x in range(g.order):
                if x in h:
                    continue
                ext = generated_subgroup(g, set(h) | {x})
                if ext not in found:
                    found.add(ext)
                    nxt.append(ext)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def is_subgroup(g: FiniteGroup, members: frozenset[int]) -> bool:
    if g.identity not in members:
        return False
    return all(g.mul[a][b] in members for a in members for b in members)


def is_normal(g: FiniteGroup, members: frozenset[int]) -> bool:
    return all(g.conj(a, x) in members for a in range(g.order) for x in members)


def is_abelian_subset(g: FiniteGroup, members: Iterable[int]) -> bool:
    ms = list(members)
    return all(
        g.mul[a][b] == g.mul[b][a] for i, a in enumerate(ms) for b in ms[:i]
    )


def normal_subgroups(g: FiniteGroup) -> list[frozenset[int]]:
    """Normal subgroups via the class-union scan.

    A normal subgroup is a union of conjugacy classes containing the identity,
    so candidates are subsets of classes rather than subsets of elements. This
    stays feasible well past the full subgroup-enumeration cap.
    """
    cc = conjugacy_classes(g)
    ident_cls = cc.class_of[g.identity]
    others = [i for i in range(cc.count) if i != ident_cls]
    out = []
    for bits in range(1 << len(others)):
        members = set(cc.classes[ident_cls])
        for j, ci in enumerate(others):
            if bits >> j & 1:
                members.update(cc.classes[ci])
        if g.order % len(members) != 0:
            continue
        fs = frozenset(members)
        if is_subgroup(g, fs):
            out.append(fs)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def maximal_normal_abelian_oracle(g: FiniteGroup) -> list[frozenset[int]]:
    """Inclusion-maximal subgroups that are simultaneously normal and abelian."""
    cand = [h for h in normal_subgroups(g) if is_abelian_subset(g, h)]
    out = [h for h in cand if not any(h < k for k in cand)]
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def maximal_abelian_subgroups(
    g: FiniteGroup, limits: Limits = DEFAULT_LIMITS
) -> list[frozenset[int]]:
    """Inclusion-maximal abelian subgroups; needs the full subgroup list."""
    cand = [h for h in subgroups(g, limits) if is_abelian_subset(g, h)]
    out = [h for h in cand if not any(h < k for k in cand)]
    return sorted(out, key=lambda s: (len(s), sorted(s)))


# ---------------------------------------------------------------------------
# series and invariants


def commutator_subgroup(g: FiniteGroup, members: frozenset[int]) -> frozenset[int]:
    comms = {
        g.commutator(a, b) for a in members for b in members
    }
    return generated_subgroup(g, comms)


def derived_length_oracle(
    g: FiniteGroup,
) -> tuple[list[frozenset[int]], int | _NotSolvable]:
    """Derived series by commutator iteration; length or NOT_SOLVABLE."""
    series = [frozenset(range(g.order))]
    while True:
        nxt = commutator_subgroup(g, series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
    if len(series[-1]) == 1:
        return series, len(series) - 1
    return series, NOT_SOLVABLE


def lower_central_series(g: FiniteGroup) -> list[frozenset[int]]:
    whole = frozenset(range(g.order))
    series = [whole]
    while True:
        cur = series[-1]
        comms = {g.commutator(a, x) for a in whole for x in cur}
        nxt = generated_subgroup(g, comms)
        if nxt == cur:
            break
        series.append(nxt)
    return series


def nilpotency_class(g: FiniteGroup) -> int | None:
    series = lower_central_series(g)
    if len(series[-1]) == 1:
        return len(series) - 1
    return None


def is_simple(g: FiniteGroup) -> bool:
    if g.order == 1:
        return False
    return len(normal_subgroups(g)) == 2


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    is_abelian: bool
    nilpotency_class: int | None
    is_solvable: bool
    derived_length: int | None
    is_simple: bool

    def summary(self) -> str:
        bits = [f"order={self.order}"]
        bits.append("abelian" if self.is_abelian else "nonabelian")
        if self.nilpotency_class is not None:
            bits.append(f"nilpotent(class {self.nilpotency_class})")
        else:
            bits.append("not nilpotent")
        if self.is_solvable:
            bits.append(f"solvable(derived length {self.derived_length})")
        else:
            bits.append("not solvable")
        if self.is_simple:
            bits.append("simple")
        return ", ".join(bits)


def group_invariants(g: FiniteGroup) -> GroupInvariants:
    _, dl = derived_length_oracle(g)
    solvable = dl is not NOT_SOLVABLE
    return GroupInvariants(
        order=g.order,
        is_abelian=g.is_abelian(),
        nilpotency_class=nilpotency_class(g),
        is_solvable=solvable,
        derived_length=dl if solvable else None,
        is_simple=is_simple(g),
    )


# ---------------------------------------------------------------------------
# quotients and products


def quotient(
    g: FiniteGroup, members: frozenset[int], name: str = ""
) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Quotient by a normal subgroup; returns (G/N, projection to coset index)."""
    if not is_subgroup(g, members):
        raise NotNormal("not a subgroup")
    if not is_normal(g, members):
        raise NotNormal("subgroup is not normal")
    n = g.order
    proj = [-1] * n
    reps: list[int] = []
    for x in range(n):
        if proj[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for h in members:
            proj[g.mul[x][h]] = idx
    # identity's coset carries index 0 because element 0 is seen first
    k = len(reps)
    mul = [[0] * k for _ in range(k)]
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            mul[i][j] = proj[g.mul[a][b]]
    q = group_from_cayley_table(mul, name=name or f"{g.name or 'G'}/N")
    return q, tuple(proj)


def direct_product(a: FiniteGroup, b: FiniteGroup, name: str = "") -> FiniteGroup:
    n = a.order * b.order
    def pack(x: int, y: int) -> int:
        return x * b.order + y
    mul = [[0] * n for _ in range(n)]
    for x1 in range(a.order):
        for y1 in range(b.order):
            for x2 in range(a.order):
                for y2 in range(b.order):
                    mul[pack(x1, y1)][pack(x2, y2)] = pack(
                        a.mul[x1][x2], b.mul[y1][y2]
                    )
    inv = [0] * n
    for x in range(a.order):
        for y in range(b.order):
            inv[pack(x, y)] = pack(a.inv[x], b.inv[y])
    return FiniteGroup(
        order=n,
        mul=tuple(tuple(row) for row in mul),
        inv=tuple(inv),
        identity=0,
        name=name or f"{a.name or 'A'}x{b.name or 'B'}",
    )


# ---------------------------------------------------------------------------
# file formats


def parse_cayley(text: str, name: str = "") -> FiniteGroup:
    """Cayley table text: first line n, then n rows of n indices. '#' comments."""
    lines = [
        ln.split("#", 1)[0].strip()
        for ln in text.splitlines()
    ]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty table file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise FormatError(f"bad order line {lines[0]!r}") from exc
    if len(lines) != n + 1:
        raise FormatError(f"expected {n} table rows, found {len(lines) - 1}")
    table = []
    for ln in lines[1:]:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise FormatError(f"bad table row {ln!r}") from exc
        table.append(row)
    return group_from_cayley_table(table, name=name)


def format_cayley(g: FiniteGroup) -> str:
    rows = [" ".join(str(x) for x in row) for row in g.mul]
    return "\n".join([str(g.order)] + rows) + "\n"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(line: str, degree: int) -> tuple[int, ...]:
    """One permutation in 1-based disjoint-cycle notation, e.g. (1 2)(3 4)."""
    stripped = line.replace(",", " ").strip()
    if not stripped:
        raise FormatError("empty permutation line")
    covered = _CYCLE_RE.sub("", stripped).strip()
    if covered:
        raise FormatError(f"stray text {covered!r} in permutation {line!r}")
    perm = list(range(degree))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        try:
            pts = [int(tok) for tok in body.split()]
        except ValueError as exc:
            raise FormatError(f"bad cycle {body!r}") from exc
        if not pts:
            continue
        for p in pts:
            if not (1 <= p <= degree):
                raise FormatError(f"point {p} outside degree {degree}")
            if p - 1 in seen:
                raise FormatError(f"point {p} repeated in {line!r}")
            seen.add(p - 1)
        for i, p in enumerate(pts):
            perm[p - 1] = pts[(i + 1) % len(pts)] - 1
    return tuple(perm)


def parse_pgen(text: str, name: str = "", limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """Permutation-generator text: first line degree, then one generator per line."""
    lines = [
        ln.split("#", 1)[0].strip()
        for ln in text.splitlines()
    ]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty generator file")
    try:
        degree = int(lines[0])
    except ValueError as exc:
        raise FormatError(f"bad degree line {lines[0]!r}") from exc
    gens = [parse_cycles(ln, degree) for ln in lines[1:]]
    return group_from_permutation_generators(degree, gens, name=name, limits=limits)


def load_group(path: str, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """Load a .cay or .pgen file, picking the parser by extension."""
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    base = os.path.basename(path)
    stem = base.rsplit(".", 1)[0]
    if path.endswith(".pgen"):
        return parse_pgen(text, name=stem, limits=limits)
    if path.endswith(".cay"):
        return parse_cayley(text, name=stem)
    raise FormatError(f"unknown group file extension on {base!r}")
