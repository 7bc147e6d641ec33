"""Resource caps.

All search/construction limits live here so every operation fails loudly
(SizeCapExceeded) instead of truncating.  The environment variable QVAR_CAPS
may hold a JSON object overriding any subset of the fields.
"""

import json
import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Caps:
    product_size: int = 4096        # max elements of a direct product
    congruence_count: int = 16384   # max congruences enumerated per algebra
    free_size: int = 4000           # max elements of a free-algebra carrier
    free_columns: int = 4096        # max evaluation columns of a free algebra
    free_work: int = 2_000_000      # max operation applications while closing
    free_rank_bound: int = 0        # 0 = derive from the inputs (max(|A|, ...))
    assignment_cap: int = 2_000_000 # max assignments scanned by holds_in
    probe_size: int = 64            # max element count of a probe-set member
    probe_count: int = 500          # max probe-set members
    hom_budget: int = 2_000_000     # max backtracking nodes per hom search

    def with_overrides(self, **kw) -> "Caps":
        return replace(self, **kw)


def caps_from_env(base: Caps = None) -> Caps:
    """Default caps merged with the QVAR_CAPS environment variable."""
    caps = base or Caps()
    raw = os.environ.get("QVAR_CAPS")
    if not raw:
        return caps
    data = json.loads(raw)
    known = {k: int(v) for k, v in data.items() if hasattr(caps, k)}
    return caps.with_overrides(**known)


DEFAULT_CAPS = Caps()
