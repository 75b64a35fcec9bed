"""Exact scalar field for all coefficient arithmetic.

Scalars live in Q(i, sqrt2): numbers a + b*i + c*sqrt2 + d*i*sqrt2 with
exact rational components.  The imaginary unit makes momenta p = -i*hbar*d
exact; sqrt2 is needed because the printed ladder operators carry 1/sqrt2
normalisations.  Components are gmpy2.mpq when available (noticeably faster
than fractions.Fraction on the large normal-form computations).
"""

from __future__ import annotations

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as mpq

_Q0 = mpq(0)
_Q1 = mpq(1)


def _mk(a, b, c, d):
    """Fast internal constructor: components must already be exact rationals."""
    k = K.__new__(K)
    k.a = a
    k.b = b
    k.c = c
    k.d = d
    return k


def rat(num, den=1):
    """Exact rational from ints, strings like '2/3', or rational types."""
    if isinstance(num, str):
        return mpq(num) / den if den != 1 else mpq(num)
    return mpq(num, den) if den != 1 else mpq(num)


class K:
    """An element of Q(i, sqrt2), immutable and hashable."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=_Q0, b=_Q0, c=_Q0, d=_Q0):
        self.a = a if type(a) is type(_Q0) else mpq(a)
        self.b = b if type(b) is type(_Q0) else mpq(b)
        self.c = c if type(c) is type(_Q0) else mpq(c)
        self.d = d if type(d) is type(_Q0) else mpq(d)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def of(x):
        if isinstance(x, K):
            return x
        return K(mpq(x))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    @property
    def is_zero(self):
        return not (self.a or self.b or self.c or self.d)

    @property
    def is_rational(self):
        return not (self.b or self.c or self.d)

    @property
    def is_gaussian(self):
        return not (self.c or self.d)

    def rational_value(self):
        if not self.is_rational:
            raise ValueError("scalar is not rational: %r" % (self,))
        return self.a

    # -- ring operations -----------------------------------------------------

    def __add__(self, o):
        if not isinstance(o, K):
            o = K.of(o)
        k = K.__new__(K)
        k.a = self.a + o.a
        k.b = self.b + o.b
        k.c = self.c + o.c
        k.d = self.d + o.d
        return k

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, K):
            o = K.of(o)
        k = K.__new__(K)
        k.a = self.a - o.a
        k.b = self.b - o.b
        k.c = self.c - o.c
        k.d = self.d - o.d
        return k

    def __rsub__(self, o):
        return K.of(o).__sub__(self)

    def __neg__(self):
        return _mk(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        if not isinstance(o, K):
            o = K.of(o)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # dispatch on the sqrt2/imaginary pattern: products of pure-Gaussian
        # and pure-sqrt2 scalars dominate and need few rational mults
        if not (c1 or d1):
            if not (c2 or d2):
                if not (b1 or b2):
                    return _mk(a1 * a2, _Q0, _Q0, _Q0)
                if not (a1 or a2):
                    return _mk(-(b1 * b2), _Q0, _Q0, _Q0)
                if not b1:
                    return _mk(a1 * a2, a1 * b2, _Q0, _Q0)
                if not b2:
                    return _mk(a1 * a2, b1 * a2, _Q0, _Q0)
                return _mk(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, _Q0, _Q0)
            if not (a2 or b2):
                return _mk(_Q0, _Q0, a1 * c2 - b1 * d2, a1 * d2 + b1 * c2)
        elif not (a1 or b1) and not (c2 or d2):
            return _mk(_Q0, _Q0, c1 * a2 - d1 * b2, c1 * b2 + d1 * a2)
        elif not (a1 or b1) and not (a2 or b2):
            return _mk(2 * (c1 * c2 - d1 * d2), 2 * (c1 * d2 + d1 * c2), _Q0, _Q0)
        return _mk(
            a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2),
            a1 * c2 - b1 * d2 + c1 * a2 - d1 * b2,
            a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero scalar")
        a, b, c, d = self.a, self.b, self.c, self.d
        if not (c or d):
            n = a * a + b * b
            return K(a / n, -b / n)
        # (z + w*s)^-1 = (z - w*s) / (z^2 - 2 w^2), s = sqrt2, z,w Gaussian.
        # n = z^2 - 2 w^2 is a nonzero Gaussian rational (sqrt2 not in Q(i)).
        nre = a * a - b * b - 2 * (c * c - d * d)
        nim = 2 * (a * b - 2 * c * d)
        nn = nre * nre + nim * nim
        ire, iim = nre / nn, -nim / nn  # 1/n
        return K(
            a * ire - b * iim,
            a * iim + b * ire,
            -(c * ire - d * iim),
            -(c * iim + d * ire),
        )

    def __truediv__(self, o):
        if not isinstance(o, K):
            o = K.of(o)
        return self * o.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __rtruediv__(self, o):
        return K.of(o) * self.inverse()

    def conjugate(self):
        """Complex conjugation i -> -i (sqrt2 is real and fixed)."""
        return K(self.a, -self.b, self.c, -self.d)

    # -- comparisons / hashing -----------------------------------------------

    def __eq__(self, o):
        if not isinstance(o, K):
            if isinstance(o, (int,) + (type(_Q0),)):
                o = K.of(o)
            else:
                return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.d == o.d

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    # -- numeric conversion ----------------------------------------------------

    def to_complex(self):
        return complex(float(self.a) + 1.4142135623730951 * float(self.c),
                       float(self.b) + 1.4142135623730951 * float(self.d))

    def __repr__(self):
        parts = []
        if self.a or not self:
            parts.append(str(self.a))
        if self.b:
            parts.append("%s*i" % self.b)
        if self.c:
            parts.append("%s*sqrt2" % self.c)
        if self.d:
            parts.append("%s*i*sqrt2" % self.d)
        return "+".join(parts).replace("+-", "-")


ZERO = K()
ONE = K(_Q1)
TWO = K(mpq(2))
HALF = K(mpq(1, 2))
I = K(_Q0, _Q1)
MINUS_I = K(_Q0, -_Q1)
SQRT2 = K(_Q0, _Q0, _Q1)
INV_SQRT2 = K(_Q0, _Q0, mpq(1, 2))  # 1/sqrt2 == sqrt2/2


def kint(n):
    return K(mpq(n))


def krat(num, den=1):
    return K(mpq(num, den))
