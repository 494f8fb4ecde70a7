"""Run the full cross-verification over the small catalog and print the
report.

Every pipeline stage is checked against an independent group-theoretic
oracle, then all lattice-isomorphic pairs are compared on their
solvability invariants. The same sweep backs the acceptance tests; the
command line exposes it as `rackle verify`.

Run as: python3 demos/06_verification_scan.py
"""

import sys

from rackle import full_verification

# Order 8 keeps the demo quick; `rackle verify --order-max 12` runs the
# complete small catalog in about half a minute.
report = full_verification(max_order=8)
print(report.text())

if report.ok:
    print("all checks passed")
else:
    print(f"{len(report.failures())} FAILURES")
    sys.exit(1)
