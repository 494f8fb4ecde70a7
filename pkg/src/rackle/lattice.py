"""Subrack lattices: enumeration, queries, label stripping, isomorphism.

The enumerator walks closed sets in lectic order with the canonical-generation
test, so cost scales with the output, never with 2^m. Everything downstream
that claims to be "lattice only" goes through AbstractLattice, which keeps the
order relation and nothing else.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .config import DEFAULT_LIMITS, Limits
from .errors import BadIndex, FormatError, IsomorphismTimeout, TooLarge
from .racks import ConjugationRack, closure_extend, closure_mask, is_closed_mask


def _mask_members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _sort_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return (mask.bit_count(), _mask_members(mask))


# ---------------------------------------------------------------------------
# enumeration


def _enumerate_subtree(
    rows: Sequence[Sequence[int]], m: int, start: int, j0: int, cap: int
) -> list[int]:
    """All closed sets in the canonical subtree rooted at a closed set."""
    out: list[int] = []

    def rec(a: int, j_from: int) -> None:
        out.append(a)
        if len(out) > cap:
            raise TooLarge(f"lattice exceeds cap of {cap} elements")
        for j in range(j_from, m):
            if a >> j & 1:
                continue
            b = closure_extend(rows, a, j)
            below = (1 << j) - 1
            # canonical test: adding j must not sneak in smaller new points
            if b & below == a & below:
                rec(b, j + 1)

    rec(start, j0)
    return out


def _branch_worker(args: tuple) -> list[int]:
    rows, m, start, j0, cap = args
    return _enumerate_subtree(rows, m, start, j0, cap)


def enumerate_closed_masks(
    rack: ConjugationRack, limits: Limits = DEFAULT_LIMITS, workers: int = 1
) -> list[int]:
    """Closed subsets of the rack as bitmasks, sorted by popcount then members."""
    m = rack.size
    if m > limits.ground_cap:
        raise TooLarge(f"ground set of {m} exceeds cap {limits.ground_cap}")
    rows = rack.op
    cap = limits.lattice_cap
    if workers <= 1 or m < 2:
        masks = _enumerate_subtree(rows, m, 0, 0, cap)
    else:
        # split at the root: each canonical child becomes an independent job
        branches = []
        for j in range(m):
            b = closure_extend(rows, 0, j)
            if b & ((1 << j) - 1) == 0:
                branches.append((rows, m, b, j + 1, cap))
        masks = [0]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_branch_worker, branches):
                masks.extend(part)
        if len(masks) > cap:
            raise TooLarge(f"lattice exceeds cap of {cap} elements")
    masks.sort(key=_sort_key)
    return masks


def brute_force_closed_masks(rack: ConjugationRack) -> list[int]:
    """Oracle: scan all 2^m subsets. Only viable for small ground sets."""
    m = rack.size
    if m > 20:
        raise TooLarge("brute-force scan is for small ground sets only")
    rows = rack.op
    out = [s for s in range(1 << m) if is_closed_mask(rows, s)]
    out.sort(key=_sort_key)
    return out


# ---------------------------------------------------------------------------
# concrete lattice


@dataclass
class SubrackLattice:
    rack: ConjugationRack | None
    elements: list[int]                  # member bitmasks, popcount-then-lex
    ground_size: int
    name: str = ""
    _index: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = {mask: i for i, mask in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def members(self, x: int) -> tuple[int, ...]:
        return _mask_members(self.elements[x])

    def index_of(self, mask: int) -> int:
        try:
            return self._index[mask]
        except KeyError:
            raise BadIndex(f"mask {mask:b} is not an element") from None

    def leq(self, x: int, y: int) -> bool:
        ex, ey = self.elements[x], self.elements[y]
        return ex & ey == ex

    def meet(self, x: int, y: int) -> int:
        return self.index_of(self.elements[x] & self.elements[y])

    def join(self, x: int, y: int) -> int:
        u = self.elements[x] | self.elements[y]
        hit = self._index.get(u)
        if hit is not None:
            return hit
        if self.rack is not None:
            return self.index_of(closure_mask(self.rack.op, u))
        # imported lattice with no rack: least element containing the union
        for i, mask in enumerate(self.elements):
            if mask & u == u:
                return i
        raise BadIndex("no upper bound found; element list is not a lattice")

    def upper_covers(self, x: int) -> list[int]:
        """Minimal elements strictly above x."""
        ex = self.elements[x]
        if self.rack is not None:
            cands = set()
            for j in range(self.ground_size):
                if ex >> j & 1:
                    continue
                cands.add(closure_extend(self.rack.op, ex, j))
        else:
            cands = {m for m in self.elements if m & ex == ex and m != ex}
        minimal = [
            c for c in cands
            if not any(d & c == d for d in cands if d != c and d & ex == ex)
        ]
        return sorted((self.index_of(c) for c in minimal))

    @cached_property
    def hasse(self) -> list[tuple[int, int]]:
        """Cover pairs (child, parent), sorted."""
        pairs = []
        for x in range(self.size):
            for y in self.upper_covers(x):
                pairs.append((x, y))
        pairs.sort()
        return pairs

    @cached_property
    def atoms(self) -> list[int]:
        return self.upper_covers(self.bottom)

    @cached_property
    def coatoms(self) -> list[int]:
        return sorted(x for x, y in self.hasse if y == self.top)

    def covers(self, x: int) -> list[int]:
        return self.upper_covers(x)

    def interval(self, x: int, y: int) -> list[int]:
        ex, ey = self.elements[x], self.elements[y]
        return [
            i for i, m in enumerate(self.elements)
            if m & ex == ex and m & ey == m
        ]

    def height(self) -> int:
        """Length (number of covers) of a longest bottom-to-top chain."""
        best = [0] * self.size
        for x, y in self.hasse:
            if best[x] + 1 > best[y]:
                best[y] = best[x] + 1
        return best[self.top]

    def __repr__(self) -> str:
        label = self.name or "lattice"
        return f"<{label}: {self.size} elements over {self.ground_size} points>"


def enumerate_subrack_lattice(
    rack: ConjugationRack, limits: Limits = DEFAULT_LIMITS, workers: int = 1
) -> SubrackLattice:
    masks = enumerate_closed_masks(rack, limits=limits, workers=workers)
    return SubrackLattice(
        rack=rack, elements=masks, ground_size=rack.size, name=rack.name
    )


# ---------------------------------------------------------------------------
# abstract lattice


@dataclass
class AbstractLattice:
    """Isomorphism-type object: order relation with all labels stripped.

    Atomistic lattices (every subrack lattice of a quandle is one) store one
    support bitmask per element over atom positions; order is support
    containment. Small non-atomistic posets fall back to explicit down-sets.
    """

    size: int
    n_atoms: int
    supports: list[int] | None = None    # atomistic representation
    down: list[int] | None = None        # down[x] = bitmask of {y : y <= x}
    bottom: int = 0
    top: int = 0

    def leq(self, x: int, y: int) -> bool:
        if self.supports is not None:
            sx, sy = self.supports[x], self.supports[y]
            return sx & sy == sx
        return bool(self.down[y] >> x & 1)

    @cached_property
    def atoms(self) -> list[int]:
        if self.supports is not None:
            return [x for x in range(self.size) if self.supports[x].bit_count() == 1]
        out = []
        for x in range(self.size):
            if x == self.bottom:
                continue
            below = self.down[x] & ~(1 << x) & ~(1 << self.bottom)
            if below == 0:
                out.append(x)
        return out

    @cached_property
    def _support_index(self) -> dict[int, int]:
        if self.supports is None:
            raise BadIndex("support index requires the atomistic representation")
        return {s: i for i, s in enumerate(self.supports)}

    def is_boolean(self) -> bool:
        if self.supports is None:
            return _generic_is_boolean(self)
        return self.size == 1 << self.n_atoms

    def join(self, x: int, y: int) -> int:
        if self.supports is not None:
            u = self.supports[x] | self.supports[y]
            hit = self._support_index.get(u)
            if hit is not None:
                return hit
            best = None
            for i, s in enumerate(self.supports):
                if s & u == u and (best is None or self.leq(i, best)):
                    best = i
            if best is None:
                raise BadIndex("join not found; not a lattice?")
            return best
        cands = [
            z for z in range(self.size)
            if self.leq(x, z) and self.leq(y, z)
        ]
        best = cands[0]
        for z in cands[1:]:
            if self.leq(z, best):
                best = z
        return best

    def meet(self, x: int, y: int) -> int:
        if self.supports is not None:
            u = self.supports[x] & self.supports[y]
            hit = self._support_index.get(u)
            if hit is not None:
                return hit
            best = self.bottom
            for i, s in enumerate(self.supports):
                if s & u == s and self.leq(best, i):
                    best = i
            return best
        cands = [
            z for z in range(self.size)
            if self.leq(z, x) and self.leq(z, y)
        ]
        best = cands[0]
        for z in cands[1:]:
            if self.leq(best, z):
                best = z
        return best

    def down_count(self, x: int) -> int:
        if self.supports is not None:
            sx = self.supports[x]
            return sum(1 for s in self.supports if s & sx == s)
        return self.down[x].bit_count()

    def interval_below(self, x: int) -> list[int]:
        """[bottom, x]."""
        if self.supports is not None:
            sx = self.supports[x]
            return [i for i, s in enumerate(self.supports) if s & sx == s]
        return [y for y in range(self.size) if self.leq(y, x)]

    def atoms_below(self, x: int) -> list[int]:
        return [a for a in self.atoms if self.leq(a, x)]

    @cached_property
    def proper_maximal(self) -> list[int]:
        """Coatoms: maximal elements among everything below top.

        Bottom stays in the candidate pool so the 2-element lattice reports
        its one coatom; anywhere else it loses to the atoms above it.
        """
        proper = [x for x in range(self.size) if x != self.top]
        if self.supports is not None:
            by_pop: dict[int, list[int]] = {}
            for x in proper:
                by_pop.setdefault(self.supports[x].bit_count(), []).append(x)
            pops = sorted(by_pop, reverse=True)
            out: list[int] = []
            for p in pops:
                for x in by_pop[p]:
                    sx = self.supports[x]
                    bigger = (
                        y for q in pops if q > p for y in by_pop[q]
                    )
                    if not any(sx & self.supports[y] == sx for y in bigger):
                        out.append(x)
            return sorted(out)
        return sorted(
            x for x in proper
            if not any(y != x and y != self.top and self.leq(x, y) for y in proper)
        )

    def __repr__(self) -> str:
        kind = "atomistic" if self.supports is not None else "generic"
        return f"<abstract lattice, {self.size} elements, {self.n_atoms} atoms, {kind}>"


def _generic_is_boolean(lat: AbstractLattice) -> bool:
    ats = lat.atoms
    if lat.size != 1 << len(ats):
        return False
    # join-bijection criterion: subsets of atoms hit every element once
    seen = set()
    for bits in range(1 << len(ats)):
        cur = lat.bottom
        for i, a in enumerate(ats):
            if bits >> i & 1:
                cur = lat.join(cur, a)
        if cur in seen:
            return False
        seen.add(cur)
    return len(seen) == lat.size


def is_boolean_interval(lat: AbstractLattice, x: int) -> bool:
    """Is [bottom, x] a Boolean algebra? Join-bijection criterion."""
    if lat.supports is not None:
        sx = lat.supports[x]
        k = sx.bit_count()
        count = sum(1 for s in lat.supports if s & sx == s)
        # supports are distinct by construction, so counting suffices
        return count == 1 << k
    interval = lat.interval_below(x)
    ats = [a for a in lat.atoms if lat.leq(a, x)]
    if len(interval) != 1 << len(ats):
        return False
    seen = set()
    for bits in range(1 << len(ats)):
        cur = lat.bottom
        for i, a in enumerate(ats):
            if bits >> i & 1:
                cur = lat.join(cur, a)
        seen.add(cur)
    return len(seen) == len(interval)


def to_abstract(lat: SubrackLattice, seed: int | None = None) -> AbstractLattice:
    """Strip member sets, keeping only the order relation.

    With a seed, elements and atom positions are shuffled so downstream code
    cannot lean on the concrete construction order.
    """
    atom_idxs = lat.atoms
    atom_masks = [lat.elements[a] for a in atom_idxs]
    supports = []
    atomistic = True
    for mask in lat.elements:
        s = 0
        for i, am in enumerate(atom_masks):
            if am & mask == am:
                s |= 1 << i
        supports.append(s)
    # injective supports suffice here: in a lattice, a support collision is
    # exactly an element that is not the join of its atoms
    atomistic = len(set(supports)) == len(supports)
    if not atomistic:
        # fall back to explicit down-sets; fine for small lattices
        n = lat.size
        down = [0] * n
        for x in range(n):
            for y in range(n):
                if lat.leq(y, x):
                    down[x] |= 1 << y
        order = list(range(n))
        rng = random.Random(seed)
        if seed is not None:
            rng.shuffle(order)
        pos = [0] * n
        for newi, old in enumerate(order):
            pos[old] = newi
        nd = [0] * n
        for x in range(n):
            for y in range(n):
                if down[x] >> y & 1:
                    nd[pos[x]] |= 1 << pos[y]
        return AbstractLattice(
            size=n,
            n_atoms=len(atom_idxs),
            down=nd,
            bottom=pos[lat.bottom],
            top=pos[lat.top],
        )
    n = lat.size
    order = list(range(n))
    atom_perm = list(range(len(atom_idxs)))
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(order)
        rng.shuffle(atom_perm)
    pos = [0] * n
    for newi, old in enumerate(order):
        pos[old] = newi
    shuffled = [0] * n
    for old in range(n):
        s = supports[old]
        t = 0
        for i in range(len(atom_idxs)):
            if s >> i & 1:
                t |= 1 << atom_perm[i]
        shuffled[pos[old]] = t
    return AbstractLattice(
        size=n,
        n_atoms=len(atom_idxs),
        supports=shuffled,
        bottom=pos[lat.bottom],
        top=pos[lat.top],
    )


def abstract_from_cover_pairs(
    n: int, pairs: Iterable[tuple[int, int]]
) -> AbstractLattice:
    """Build an abstract lattice from Hasse cover pairs (child, parent)."""
    down = [1 << x for x in range(n)]
    kids: dict[int, list[int]] = {}
    indeg = [0] * n
    for c, p in pairs:
        if not (0 <= c < n and 0 <= p < n):
            raise BadIndex("cover pair out of range")
        kids.setdefault(c, []).append(p)
        indeg[p] += 1
    # propagate down-sets in topological order
    order: list[int] = [x for x in range(n) if indeg[x] == 0]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for p in kids.get(x, ()):  # parents
            down[p] |= down[x]
            indeg[p] -= 1
            if indeg[p] == 0:
                order.append(p)
    if len(order) != n:
        raise FormatError("cover relation contains a cycle")
    bottoms = [x for x in range(n) if down[x].bit_count() == 1]
    tops = [x for x in range(n) if all(not down[y] >> x & 1 for y in range(n) if y != x)]
    if len(bottoms) != 1 or len(tops) != 1:
        raise FormatError("cover relation is not a bounded lattice")
    bottom, top = bottoms[0], tops[0]
    lat = AbstractLattice(size=n, n_atoms=0, down=down, bottom=bottom, top=top)
    ats = lat.atoms
    # prefer the support representation when the order allows it
    supports = []
    ok = True
    for x in range(n):
        s = 0
        for i, a in enumerate(ats):
            if lat.leq(a, x):
                s |= 1 << i
        supports.append(s)
    if len(set(supports)) == n:
        for x in range(n):
            for y in range(n):
                if (supports[x] & supports[y] == supports[x]) != lat.leq(x, y):
                    ok = False
                    break
            if not ok:
                break
    else:
        ok = False
    if ok:
        return AbstractLattice(
            size=n, n_atoms=len(ats), supports=supports, bottom=bottom, top=top
        )
    lat.n_atoms = len(ats)
    return lat


# ---------------------------------------------------------------------------
# isomorphism


def _refine_colors(lat: AbstractLattice) -> list[int]:
    n = lat.size
    if lat.supports is not None:
        color = [lat.supports[x].bit_count() for x in range(n)]
    else:
        color = [lat.down[x].bit_count() for x in range(n)]
    while True:
        sigs = []
        for x in range(n):
            below = sorted(color[y] for y in range(n) if y != x and lat.leq(y, x))
            above = sorted(color[y] for y in range(n) if y != x and lat.leq(x, y))
            sigs.append((color[x], tuple(below), tuple(above)))
        canon: dict[tuple, int] = {}
        new = []
        for s in sorted(set(sigs)):
            canon[s] = len(canon)
        for x in range(n):
            new.append(canon[sigs[x]])
        if new == color:
            return color
        color = new


def _boolean_iso(a: AbstractLattice, b: AbstractLattice) -> list[int]:
    # pair atoms in index order, then match elements by transported support
    index_b = {s: i for i, s in enumerate(b.supports)}
    mapping = [0] * a.size
    for x in range(a.size):
        mapping[x] = index_b[a.supports[x]]
    return mapping


def are_isomorphic(
    a: AbstractLattice,
    b: AbstractLattice,
    limits: Limits = DEFAULT_LIMITS,
) -> list[int] | None:
    """Order-isomorphism a→b as an index map, or None.

    Invariant refinement first; backtracking over the residual classes with a
    node budget after that.
    """
    if a.size != b.size or len(a.atoms) != len(b.atoms):
        return None
    if a.supports is not None and b.supports is not None:
        if a.is_boolean() and b.is_boolean():
            return _boolean_iso(a, b)
        if a.is_boolean() != b.is_boolean():
            return None
    ca, cb = _refine_colors(a), _refine_colors(b)
    if sorted(ca) != sorted(cb):
        return None
    n = a.size
    by_color: dict[int, list[int]] = {}
    for y in range(n):
        by_color.setdefault(cb[y], []).append(y)
    # most-constrained first
    xs = sorted(range(n), key=lambda x: (len(by_color[ca[x]]), ca[x]))
    mapping = [-1] * n
    used = [False] * n
    budget = limits.iso_node_budget
    nodes = 0

    def place(i: int) -> bool:
        nonlocal nodes
        if i == n:
            return True
        x = xs[i]
        for y in by_color[ca[x]]:
            if used[y]:
                continue
            nodes += 1
            if nodes > budget:
                raise IsomorphismTimeout(
                    f"isomorphism search exceeded {budget} nodes"
                )
            ok = True
            for j in range(i):
                u = xs[j]
                v = mapping[u]
                if a.leq(u, x) != b.leq(v, y) or a.leq(x, u) != b.leq(y, v):
                    ok = False
                    break
            if not ok:
                continue
            mapping[x] = y
            used[y] = True
            if place(i + 1):
                return True
            mapping[x] = -1
            used[y] = False
        return False

    if not place(0):
        return None
    return mapping


def check_isomorphism(
    a: AbstractLattice, b: AbstractLattice, mapping: Sequence[int]
) -> bool:
    """Verify a claimed map preserves and reflects the order on all pairs."""
    n = a.size
    if sorted(mapping) != list(range(n)):
        return False
    for x in range(n):
        for y in range(n):
            if a.leq(x, y) != b.leq(mapping[x], mapping[y]):
                return False
    return True


# ---------------------------------------------------------------------------
# .lat format


def format_lattice(lat: SubrackLattice) -> str:
    lines = [f"{lat.size} {lat.ground_size}"]
    for i, mask in enumerate(lat.elements):
        mem = " ".join(str(x) for x in _mask_members(mask))
        lines.append(f"{i} {mask.bit_count()}" + (f" {mem}" if mem else ""))
    lines.append("HASSE")
    for c, p in lat.hasse:
        lines.append(f"{c} {p}")
    return "\n".join(lines) + "\n"


def format_abstract(lat: AbstractLattice) -> str:
    """Abstract export: '-' in the member column, covers from the order."""
    n = lat.size
    if lat.supports is not None:
        order = sorted(
            range(n),
            key=lambda x: (lat.supports[x].bit_count(), _mask_members(lat.supports[x])),
        )
    else:
        order = sorted(range(n), key=lambda x: (lat.down[x].bit_count(), x))
    pos = [0] * n
    for newi, old in enumerate(order):
        pos[old] = newi
    lines = [f"{n} {lat.n_atoms}"]
    for old in order:
        k = len(lat.atoms_below(old))
        lines.append(f"{pos[old]} {k} -")
    pairs = []
    for x in range(n):
        for y in range(n):
            if x == y or not lat.leq(x, y):
                continue
            if any(
                z != x and z != y and lat.leq(x, z) and lat.leq(z, y)
                for z in range(n)
            ):
                continue
            pairs.append((pos[x], pos[y]))
    pairs.sort()
    lines.append("HASSE")
    for c, p in pairs:
        lines.append(f"{c} {p}")
    return "\n".join(lines) + "\n"


def parse_lattice(text: str, name: str = "") -> SubrackLattice | AbstractLattice:
    """Read a .lat file; concrete when member lists are present."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty lattice file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"bad header {lines[0]!r}")
    n, ground = int(head[0]), int(head[1])
    if len(lines) < n + 1:
        raise FormatError(f"expected {n} element lines")
    body = lines[1 : n + 1]
    rest = lines[n + 1 :]
    abstract = any(ln.split()[-1] == "-" for ln in body)
    if abstract:
        if not rest or rest[0] != "HASSE":
            raise FormatError("abstract lattice needs a HASSE section")
        pairs = []
        for ln in rest[1:]:
            toks = ln.split()
            if len(toks) != 2:
                raise FormatError(f"bad cover line {ln!r}")
            pairs.append((int(toks[0]), int(toks[1])))
        return abstract_from_cover_pairs(n, pairs)
    masks = [0] * n
    seen_ids = set()
    for ln in body:
        toks = ln.split()
        if len(toks) < 2:
            raise FormatError(f"bad element line {ln!r}")
        idx, pop = int(toks[0]), int(toks[1])
        members = [int(t) for t in toks[2:]]
        if idx in seen_ids or not (0 <= idx < n):
            raise FormatError(f"bad element id {idx}")
        seen_ids.add(idx)
        if len(members) != pop:
            raise FormatError(f"popcount mismatch on line {ln!r}")
        mask = 0
        for v in members:
            if not (0 <= v < ground):
                raise FormatError(f"member {v} outside ground set")
            mask |= 1 << v
        masks[idx] = mask
    if len(set(masks)) != n:
        raise FormatError("duplicate element bitsets")
    expected = sorted(masks, key=_sort_key)
    if masks != expected:
        raise FormatError("elements are not in popcount-then-lex order")
    return SubrackLattice(rack=None, elements=masks, ground_size=ground, name=name)


def load_lattice(path: str) -> SubrackLattice | AbstractLattice:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stem = os.path.basename(path).rsplit(".", 1)[0]
    return parse_lattice(text, name=stem)


def save_lattice(path: str, lat: SubrackLattice | AbstractLattice) -> None:
    text = (
        format_lattice(lat)
        if isinstance(lat, SubrackLattice)
        else format_abstract(lat)
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
