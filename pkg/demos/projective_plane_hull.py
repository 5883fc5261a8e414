"""Second-order hull of the projective plane.

The tangent space is the 10-dimensional space of global bivectors and
every higher obstruction space vanishes, so the hull is a power series
ring in ten variables. Order 2 keeps this quick; the acceptance suite
runs order 3 with full validation.
"""

import json
import time

from ncdeform.deform import hull
from ncdeform.geometry import builtin_variety


def main(order=2):
    start = time.perf_counter()
    H = hull(builtin_variety("proj(2)"), order=order)
    print(H.presentation())
    print(json.dumps(H.to_json(), indent=2, sort_keys=True, default=str))
    print(f"{time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
