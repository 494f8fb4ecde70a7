"""Caps and budgets.

Every cap is configuration: the defaults keep desk-scale inputs fast, and
callers (or CLI flags) may raise them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    generation_cap: int = 10_000      # max order for permutation-generated groups
    subgroup_cap: int = 48            # max |G| for full subgroup enumeration
    ground_cap: int = 30              # max rack ground-set size for lattice enumeration
    lattice_cap: int = 2_000_000      # max number of lattice elements
    iso_node_budget: int = 10_000_000 # backtracking nodes for isomorphism search
    tuple_budget: int = 10_000        # exhaustive representative-tuple checks up to here
    sample_count: int = 1_000         # seeded samples when over tuple_budget
    join_poset_cap: int = 16          # max number of parts for a join poset
    chain_count_cap: int = 200        # max poset size for direct chain counting

    def with_(self, **kw) -> "Limits":
        return replace(self, **kw)


DEFAULT_LIMITS = Limits()


def thread_count() -> int:
    """Parallelism bound: RACKLE_THREADS if set, else 1."""
    raw = os.environ.get("RACKLE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def order24_enabled() -> bool:
    """Whether the bundled order-24 fixture participates in catalog sweeps."""
    return os.environ.get("RACKLE_ORDER24", "1") != "0"
