"""Sparse multivariate Laurent-localized polynomials.

A :class:`LaurentRing` is k[x_1..x_d] with some variables inverted.  Elements
are stored as ``{exponent tuple: coefficient}`` with no zero coefficients.
Negative exponents are legal only on inverted variables.
"""

import re

from .field import QQ

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class LaurentRing:
    """k[x_1..x_d][x_s^{-1} : s in inverted]."""

    def __init__(self, names, inverted=(), field=QQ):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names {self.names}")
        self.index = {n: i for i, n in enumerate(self.names)}
        inv = set()
        for v in inverted:
            inv.add(self.index[v] if isinstance(v, str) else int(v))
        self.inverted = frozenset(inv)
        self.field = field
        self.nvars = len(self.names)
        self.zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return (isinstance(other, LaurentRing) and self.names == other.names
                and self.inverted == other.inverted and self.field == other.field)

    def __hash__(self):
        return hash((self.names, self.inverted, self.field))

    def __repr__(self):
        inv = ",".join(self.names[i] for i in sorted(self.inverted))
        return f"LaurentRing({list(self.names)}, inverted=[{inv}])"

    def is_legal(self, e):
        for i, x in enumerate(e):
            if x < 0 and i not in self.inverted:
                return False
        return True

    def unit(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return tuple(e)

    def poly(self, terms=None):
        return Poly(self, terms or {})

    def const(self, c):
        c = self.field(c)
        return Poly(self, {self.zero_exp: c} if c else {})

    def one(self):
        return self.const(1)

    def gen(self, name):
        i = self.index[name] if isinstance(name, str) else name
        return Poly(self, {self.unit(i): self.field(1)})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, e, c=1):
        c = self.field(c)
        return Poly(self, {tuple(e): c} if c else {})

    def parse(self, text):
        return Poly(self, parse_terms(text, self.names, self.field), check=True)

    def fmt(self, terms):
        return format_terms(terms, self.names)


class Poly:
    """Immutable element of a :class:`LaurentRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms, check=False):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        if check:
            for e in self.terms:
                if len(e) != ring.nvars:
                    raise ValueError(f"exponent {e} has wrong length for {ring}")
                if not ring.is_legal(e):
                    raise ValueError(f"negative exponent on non-inverted variable in {ring.fmt({e: 1})}")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring.field(other)
            return Poly(self.ring, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            inv = tuple(-x for x in e)
            if not self.ring.is_legal(inv):
                raise ValueError("monomial is not a unit in this ring")
            return Poly(self.ring, {inv: 1 / c}) ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except (TypeError, ValueError):
            return False

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def derivative(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[e2] = c * e[i]
        return Poly(self.ring, out)

    def derivative_multi(self, D):
        p = self
        for i, k in enumerate(D):
            for _ in range(k):
                p = p.derivative(i)
        return p

    def substitute(self, images, target):
        """Replace variable i by ``images[i]`` (a Poly in ``target``)."""
        out = target.poly()
        cache = {}
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self):
        return min((sum(e) for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get(self.ring.zero_exp, self.ring.field(0))

    def __str__(self):
        return self.ring.fmt(self.terms)

    def __repr__(self):
        return f"Poly({self})"


def _mono_key(e):
    return (-sum(e), tuple(-x for x in e))


def format_terms(terms, names):
    """Canonical text form: terms by descending total degree, then lex."""
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, key=_mono_key):
        c = terms[e]
        factors = []
        for n, k in zip(names, e):
            if k == 1:
                factors.append(n)
            elif k:
                factors.append(f"{n}^{k}" if k > 0 else f"{n}^({k})")
        cs = str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if factors:
            body = "*".join(factors) if cs == "1" else cs + "*" + "*".join(factors)
        else:
            body = cs
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class _Parser:
    def __init__(self, text, names, field):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
            pos = m.end()
            num, name, op = m.groups()
            if num is not None:
                self.toks.append(("num", int(num)))
            elif name is not None:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", "^" if op == "**" else op))
        self.i = 0
        self.names = names
        self.index = {n: k for k, n in enumerate(names)}
        self.field = field
        self.nv = len(names)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ValueError(f"expected {op!r}, got {t[1]!r}")

    def parse(self):
        if not self.toks:
            return {}
        r = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input {self.peek()[1]!r}")
        return r

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = _pscale(self.term(), sign)
        while self.peek() in (("op", "-"), ("op", "+")):
            s = -1 if self.take()[1] == "-" else 1
            acc = _padd(acc, _pscale(self.term(), s))
        return acc

    def term(self):
        acc = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.power()
            if op == "*":
                acc = _pmul(acc, rhs)
            else:
                if len(rhs) != 1 or any(next(iter(rhs))):
                    raise ValueError("division only by nonzero scalars")
                acc = _pscale(acc, 1 / next(iter(rhs.values())))
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            paren = False
            if self.peek() == ("op", "("):
                self.take()
                paren = True
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            if paren:
                self.expect(")")
            k = -val if neg else val
            if k < 0:
                if len(base) != 1:
                    raise ValueError("negative powers only of monomials")
                (e, c), = base.items()
                base = {tuple(-x for x in e): 1 / c}
                k = -k
            out = {(0,) * self.nv: self.field(1)}
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return {(0,) * self.nv: self.field(val)}
        if kind == "name":
            if val not in self.index:
                raise ValueError(f"unknown variable {val!r}; ring has {list(self.names)}")
            e = [0] * self.nv
            e[self.index[val]] = 1
            return {tuple(e): self.field(1)}
        if val == "(":
            r = self.expr()
            self.expect(")")
            return r
        if val == "-":
            return _pscale(self.power(), -1)
        raise ValueError(f"unexpected token {val!r}")


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pscale(a, s):
    return {e: c * s for e, c in a.items() if c * s}


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = mono_mul(e1, e2)
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def parse_terms(text, names, field=QQ):
    """Parse a polynomial string into ``{exponent: coeff}``."""
    return _Parser(text, names, field).parse()
