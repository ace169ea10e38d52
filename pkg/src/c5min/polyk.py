"""Exact polynomials and rational functions in one variable ``k`` over Q.

Coefficients are :class:`fractions.Fraction`.  ``PolyK`` keeps a dense
ascending coefficient tuple with no trailing zeros; ``RatFnK`` keeps
numerator and denominator coprime with a monic denominator, so equal
functions have equal representations.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"exact coefficient required, got {type(x).__name__}")


class PolyK:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def k(cls) -> "PolyK":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "PolyK":
        return cls((c,))

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @staticmethod
    def _lift(other) -> "PolyK":
        if isinstance(other, PolyK):
            return other
        return PolyK.const(other)

    def __add__(self, other):
        if isinstance(other, RatFnK):
            return NotImplemented
        o = self._lift(other).coeffs
        n = max(len(self.coeffs), len(o))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o + (Fraction(0),) * (n - len(o))
        return PolyK(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PolyK(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, RatFnK):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFnK):
            return NotImplemented
        o = self._lift(other).coeffs
        if not self.coeffs or not o:
            return PolyK()
        out = [Fraction(0)] * (len(self.coeffs) + len(o) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o):
                    out[i + j] += a * b
        return PolyK(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = PolyK.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __truediv__(self, other):
        return RatFnK(self, self._lift(other))

    def __rtruediv__(self, other):
        return RatFnK(self._lift(other), self)

    def divmod(self, other: "PolyK") -> tuple["PolyK", "PolyK"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return PolyK(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return PolyK(quot), PolyK(rem)

    def monic(self) -> "PolyK":
        return PolyK(c / self.lead for c in self.coeffs) if self.coeffs else self

    def __call__(self, k):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def shift(self, s) -> "PolyK":
        """p(t + s) as a polynomial in t."""
        out = PolyK()
        base = PolyK((s, 1))
        for c in reversed(self.coeffs):
            out = out * base + c
        return out

    def __eq__(self, other):
        if isinstance(other, RatFnK):
            return other == self
        try:
            return self.coeffs == self._lift(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyK({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if e == 0 else ("k" if e == 1 else f"k^{e}")
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def poly_gcd(a: PolyK, b: PolyK) -> PolyK:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else PolyK.const(1)


class RatFnK:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = PolyK._lift(num), PolyK._lift(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = PolyK(), PolyK.const(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        lead = den.lead
        self.num = PolyK(c / lead for c in num.coeffs)
        self.den = PolyK(c / lead for c in den.coeffs)

    @classmethod
    def k(cls) -> "RatFnK":
        return cls(PolyK.k())

    @staticmethod
    def _lift(other) -> "RatFnK":
        return other if isinstance(other, RatFnK) else RatFnK(other)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RatFnK(self.num + o.num, self.den)
        return RatFnK(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFnK(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RatFnK(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFnK(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return 1 / self**-e
        return RatFnK(self.num**e, self.den**e)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.is_polynomial() and self.num.degree <= 0

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num(0) / self.den.lead if self.num.coeffs else Fraction(0)

    def as_poly(self) -> PolyK:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return PolyK(c / self.den.lead for c in self.num.coeffs)

    def __call__(self, k):
        d = self.den(k)
        if d == 0:
            raise ZeroDivisionError(f"pole at k={k}")
        n = self.num(k)
        if isinstance(k, (int, Fraction)):
            return Fraction(n) / Fraction(d)
        return n / d

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFnK({self})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.as_poly())
        return f"({self.num})/({self.den})"


def rref(rows: Sequence[Sequence]) -> tuple[list[list[RatFnK]], list[int]]:
    """Reduced row echelon form over Q(k); pivot is the first nonzero entry."""
    m = [[RatFnK._lift(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence]) -> list[list[RatFnK]]:
    red, pivots = rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [RatFnK(0)] * ncols
        v[f] = RatFnK(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def matmul(a, b):
    return [[sum((a[i][t] * b[t][j] for t in range(len(b))), RatFnK(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]
