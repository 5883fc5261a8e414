"""An obstructed first-order deformation of affine 3-space.

The bivector dx^dy + y dy^dz does not satisfy the Jacobi identity: its
Schouten square is a nonzero trivector. Lifting to second order therefore
stops at the stage living in the top wedge power of the tangent sheaf.
"""

import json

from ncdeform.algebra import small_extension, truncation
from ncdeform.cli import obstructed_example
from ncdeform.deform import extend
from ncdeform.errors import Obstructed


def main():
    D = obstructed_example()
    ext = small_extension(truncation(["t"], 2), D.R)
    try:
        extend(D, ext)
    except Obstructed as exc:
        print("obstructed at", exc.report.stage)
        print(json.dumps(exc.report.to_json(), indent=2, sort_keys=True, default=str))
    else:
        print("unexpectedly unobstructed")


if __name__ == "__main__":
    main()
