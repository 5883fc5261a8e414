"""Command-line driver.

    ncdeform cohomology --variety "proj(2)"
    ncdeform lift --in builtin:moyal --base "k[t]/(t^4)"
    ncdeform verify --suite lemma-df --seed 1
    ncdeform hull --variety "proj(2)" --order 3

Every command prints a human-readable summary to stderr and sorted JSON to
stdout (or --out).  Exit codes: 0 success, 1 a check failed or the input
was rejected, 3 the requested lift is obstructed.
"""

import argparse
import json
import os
import re
import sys
import time

from .algebra.artin import ArtinLocalAlgebra, ground_field_algebra, small_extension, truncation
from .algebra.field import GF, QQ
from .cech import OrderedCochain
from .deform.deformation import NCDeformation, describe, moyal
from .deform.hull import hull
from .deform.obstruction import T1Choice, extend_with_report
from .errors import NCDefError, Obstructed
from .geometry import PolyVectorSection, affine, builtin_variety
from .hochschild import lift_polyvector
from .suites import SUITES, cohomology_table, run_suite, tangent_dims

EXIT_OK, EXIT_FAIL, EXIT_OBSTRUCTED = 0, 1, 3


def thread_cap(env=None):
    """Validated NCDEF_THREADS; computations currently run in one thread."""
    raw = (env if env is not None else os.environ).get("NCDEF_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise SystemExit(f"NCDEF_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise SystemExit(f"NCDEF_THREADS must be a positive integer, got {raw!r}")
    return n


def make_field(p):
    return QQ if not p else GF(p)


# base rings ------------------------------------------------------------------------

_BASE = re.compile(r"^\s*k\s*(?:\[\s*([^\]]*)\])?\s*(?:/\s*\((.*)\))?\s*$")


def parse_base(text, field=QQ, order=None, max_order=32):
    """Parse "k", "k[t]/(t^4)" or "k[t,s]/(t^2, s^2)".

    Without an explicit order the truncation order is the least N with
    m^{N+1} contained in the ideal, found by stabilization of dimensions.
    """
    m = _BASE.match(text)
    if not m:
        raise ValueError(f"cannot parse base ring {text!r}; expected like k[t,s]/(t^2, s^2)")
    names = [x.strip() for x in (m.group(1) or "").split(",") if x.strip()]
    gens = [g.strip() for g in _split_top(m.group(2) or "") if g.strip()]
    if not names:
        if gens:
            raise ValueError("relations given without parameters")
        return ground_field_algebra(field)
    if order is not None:
        return ArtinLocalAlgebra(names, gens, order, field)
    prev = ArtinLocalAlgebra(names, gens, 1, field)
    for n in range(2, max_order + 2):
        cur = ArtinLocalAlgebra(names, gens, n, field)
        if cur.dim == prev.dim:
            return prev
        prev = cur
    raise ValueError(f"{text!r} is not Artinian below order {max_order}; pass --order")


def _split_top(s):
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


# seeds -----------------------------------------------------------------------------

def obstructed_example(field=QQ):
    """First-order data on affine(3) from ∂x∧∂y + y ∂y∧∂z, whose square has a nonzero ∧³ part."""
    X = affine(3, field)
    pi = PolyVectorSection(X, "A", 2, {((0, 1), (0, 0, 0)): field(1), ((1, 2), (0, 1, 0)): field(1)})
    return NCDeformation.from_corrections(X, truncation(["t"], 1, field), mult={"A": {"t": lift_polyvector(pi)}})


def load_deformation(spec, field=QQ):
    """A deformation from a JSON file or one of builtin:moyal, builtin:obstructed, builtin:trivial:VARIETY."""
    if spec.startswith("builtin:"):
        what = spec[len("builtin:"):]
        if what == "moyal":
            return moyal(affine(2, field), 1)
        if what == "obstructed":
            return obstructed_example(field)
        if what.startswith("trivial"):
            name = what.split(":", 1)[1] if ":" in what else "affine(2)"
            return NCDeformation.trivial(builtin_variety(name, field))
        raise ValueError(f"unknown builtin deformation {spec!r}")
    with open(spec) as fh:
        data = json.load(fh)
    cover = builtin_variety(data["variety"], field) if "variety" in data and "cover" not in data else None
    return NCDeformation.from_json(data, cover)


def _section(X, chart, p, terms):
    return PolyVectorSection(X, chart, p, {(tuple(L), tuple(e)): X.field(c) for L, e, c in terms})


def load_choice(path, X):
    """T1 choice JSON: {"bivectors": {a: {chart: terms}}, "vectors": {a: {"j,i": terms}},
    "functions": {a: {"k,j,i": terms}}}, terms a list of [wedge indices, exponent, coefficient]."""
    with open(path) as fh:
        data = json.load(fh)
    out = {}
    for kind, p, level in (("bivectors", 2, 0), ("vectors", 1, 1), ("functions", 0, 2)):
        block = {}
        for a, vals in data.get(kind, {}).items():
            chains = {}
            for key, terms in vals.items():
                chain = tuple(x.strip() for x in key.split(","))
                chains[chain] = _section(X, chain[0], p, terms)
            block[int(a)] = OrderedCochain(level, chains)
        out[kind] = block
    return T1Choice(**out)


# output ----------------------------------------------------------------------------

def emit(payload, out=None):
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def say(msg):
    print(msg, file=sys.stderr)


# commands --------------------------------------------------------------------------

def cmd_cohomology(args):
    X = builtin_variety(args.variety, make_field(args.p))
    table = cohomology_table(X, args.window)
    t1u, t2u = tangent_dims(table)
    t1t, t2t = tangent_dims(table, twisted=True)
    say(f"{X.name}: h^q(wedge^p T)")
    for p in sorted(table):
        say(f"  p={p}: " + "  ".join(f"h^{q}={k}" for q, k in sorted(table[p].items())))
    say(f"  T1 = {t1u} (twisted {t1t}), T2 = {t2u} (twisted {t2t})")
    emit({"variety": X.name, "table": {str(p): {str(q): k for q, k in row.items()} for p, row in table.items()},
          "T1": {"untwisted": t1u, "twisted": t1t}, "T2": {"untwisted": t2u, "twisted": t2t}}, args.out)
    return EXIT_OK


def _steps(R, target):
    """Intermediate algebras P/(I + m^{n+1}) from R up to target."""
    if target.params != R.params and R.nparams:
        raise ValueError("the target base must use the parameters of the source base")
    if target.order <= R.order and R.nparams:
        return [target]
    start = R.order + 1 if R.nparams else 1
    return [ArtinLocalAlgebra(target.params, target.ideal, n, target.field) for n in range(start, target.order + 1)]


def cmd_lift(args):
    field = make_field(args.p)
    D = load_deformation(args.inp, field)
    target = parse_base(args.base, field, args.order)
    if field.characteristic and target.order >= field.characteristic:
        say(f"warning: lift order {target.order} >= characteristic {field.characteristic}; "
            "factorials in star products vanish")
    choice = load_choice(args.choices, D.cover) if args.choices else None
    reports = []
    for k, Rn in enumerate(_steps(D.R, target)):
        ext = small_extension(Rn, D.R)
        try:
            D, rep = extend_with_report(D, ext, choice if k == 0 else None)
        except Obstructed as exc:
            rep = exc.report
            say(f"obstructed over {Rn!r} at {rep.stage}")
            emit({"status": "obstructed", "base": Rn.to_json(), "report": rep.to_json(),
                  "completed_steps": reports}, args.out)
            return EXIT_OBSTRUCTED
        reports.append({"base": Rn.to_json(), "report": rep.to_json()})
    D.check()
    say(describe(D))
    emit({"status": "ok", "steps": reports, "deformation": D.to_json()}, args.out)
    return EXIT_OK


def cmd_verify(args):
    kwargs = {}
    if args.mutate is not None:
        if args.suite != "lemma-df":
            raise ValueError("--mutate applies to the lemma-df suite")
        kwargs["mutate"] = args.mutate
    res = run_suite(args.suite, seed=args.seed, **kwargs)
    say(f"{'PASS' if res.ok else 'FAIL'} {res.name} seed={res.seed} checked={res.checked}")
    if not res.ok:
        say(f"  counterexample: {res.counterexample}")
    emit(res.to_json(), args.out)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_hull(args):
    X = builtin_variety(args.variety, make_field(args.p))
    if X.field.characteristic and args.order >= X.field.characteristic:
        say(f"warning: order {args.order} >= characteristic {X.field.characteristic}")
    t0 = time.perf_counter()
    H = hull(X, args.mode, args.order, args.window, args.cap, validate=args.validate)
    say(f"{X.name} ({args.mode}): {H.presentation()}  [{time.perf_counter() - t0:.1f}s]")
    emit(H.to_json(family=args.family), args.out)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="ncdeform", description="Exact noncommutative deformation computations.")
    ap.add_argument("--p", type=int, default=0, help="characteristic of the ground field (0 for QQ)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="h^q of polyvector fields and dim T1, T2")
    c.add_argument("--variety", required=True)
    c.add_argument("--window", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cohomology)

    lf = sub.add_parser("lift", help="extend a deformation to a larger base")
    lf.add_argument("--in", dest="inp", required=True, help="JSON file or builtin:moyal|obstructed|trivial:VARIETY")
    lf.add_argument("--base", required=True, help='target base, e.g. "k[t]/(t^4)"')
    lf.add_argument("--order", type=int, help="truncation order of the base (detected if omitted)")
    lf.add_argument("--choices", help="JSON tangent choice applied at the first step")
    lf.add_argument("--out")
    lf.set_defaults(func=cmd_lift)

    v = sub.add_parser("verify", help="run a randomized identity suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--mutate", type=int, help="inject a sign error into identity N (checker self-test)")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("hull", help="truncated semi-universal family")
    h.add_argument("--variety", required=True)
    h.add_argument("--mode", choices=["untwisted", "twisted"], default="untwisted")
    h.add_argument("--order", type=int, default=2)
    h.add_argument("--window", type=int)
    h.add_argument("--cap", type=int, help="coefficient-degree cap for single-chart covers")
    h.add_argument("--validate", choices=["full", "new"], default="full")
    h.add_argument("--family", action="store_true", help="include the family in the output")
    h.add_argument("--out")
    h.set_defaults(func=cmd_hull)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    thread_cap()
    try:
        return args.func(args)
    except (NCDefError, ValueError, KeyError, OSError) as exc:
        say(f"error: {type(exc).__name__}: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
