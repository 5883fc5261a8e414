"""Exact scalar fields: the rationals (via gmpy2) and prime fields."""

from fractions import Fraction
from math import factorial

from gmpy2 import is_prime, mpq


class GFElement:
    """Element of Z/p, stored as a reduced integer representative."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return GFElement(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * GFElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(o, self.p) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return GFElement(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"GF({self.p})({self.v})"

    def __str__(self):
        return str(self.v)


class Field:
    """A ground field: characteristic 0 gives Q, a prime p gives Z/p."""

    def __init__(self, characteristic=0):
        if characteristic != 0:
            if characteristic <= 1 or not is_prime(characteristic):
                raise ValueError(f"prime field modulus must be a prime, got {characteristic}")
        self.characteristic = int(characteristic)

    def __call__(self, x):
        if self.characteristic == 0:
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            if isinstance(x, GFElement):
                raise TypeError("cannot coerce a prime field element into Q")
            return mpq(x)
        p = self.characteristic
        if isinstance(x, GFElement):
            return x
        if isinstance(x, str):
            if "/" in x:
                a, b = x.split("/")
                return GFElement(int(a), p) / int(b)
            return GFElement(int(x), p)
        if isinstance(x, (Fraction, type(mpq(0)))):
            return GFElement(int(x.numerator), p) / int(x.denominator)
        return GFElement(int(x), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv_factorial(self, n):
        f = factorial(n)
        if self.characteristic and f % self.characteristic == 0:
            raise ZeroDivisionError(f"{n}! is not invertible in characteristic {self.characteristic}")
        return self(1) / self(f)

    def fmt(self, x):
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = Field(0)


def GF(p):
    return Field(p)
