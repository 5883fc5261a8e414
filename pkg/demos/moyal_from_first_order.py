"""Grow the Moyal product on the affine plane from its first-order term.

Starting from x*y - y*x = t at first order, each small extension
k[t]/t^n -> k[t]/t^(n+1) is lifted through the obstruction stages. The
plane has no higher cohomology, so every stage vanishes, and the lift
lands on the closed-form Moyal product up to equivalence.
"""

from ncdeform.algebra import small_extension, truncation
from ncdeform.deform import describe, equivalent, extend_with_report, moyal
from ncdeform.geometry import affine


def main(order=4):
    X = affine(2)
    D = moyal(X, 1)
    print(describe(D))
    for n in range(2, order + 1):
        ext = small_extension(truncation(["t"], n), D.R)
        D, report = extend_with_report(D, ext)
        print(f"t^{n}: stages {sorted(report.classes)} -> {report.stage}")
    target = moyal(X, order)
    if D.same_data(target):
        print("identical to the closed-form Moyal product")
    else:
        print("equivalent to Moyal:", equivalent(D, target) is not None)


if __name__ == "__main__":
    main()
