"""Exact polynomials and rational functions in one indeterminate ``N`` over Q.

Rationals are :class:`fractions.Fraction`.  A :class:`PolyN` is stored as an
integer polynomial together with a positive integer denominator, which keeps
the common case of integer coefficients on a pure ``int`` fast path.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from ..errors import SpecializationError
from . import zpoly as Z

Scalar = Union[int, Fraction]


def _as_fraction(x: object) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


class PolyN:
    """A polynomial in ``N`` with rational coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        fr = [_as_fraction(c) for c in coeffs]
        d = lcm(*(c.denominator for c in fr)) if fr else 1
        self._set(Z.trim([c.numerator * (d // c.denominator) for c in fr]), d)

    def _set(self, num: Z.ZPoly, den: int) -> None:
        if not num:
            den = 1
        else:
            g = gcd(Z.content(num), den)
            if g != 1:
                num = tuple(x // g for x in num)
                den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_zpoly(cls, num: Z.ZPoly, den: int = 1) -> PolyN:
        obj = cls.__new__(cls)
        if den < 0:
            num, den = Z.neg(num), -den
        obj._set(Z.trim(num), den)
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> PolyN:
        return cls((c,))

    @classmethod
    def var(cls) -> PolyN:
        return cls.from_zpoly((0, 1))

    @classmethod
    def coerce(cls, x: object) -> PolyN:
        if isinstance(x, PolyN):
            return x
        if isinstance(x, int):
            return cls.from_zpoly((x,) if x else ())
        if isinstance(x, Fraction):
            return cls.from_zpoly((x.numerator,) if x else (), x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to PolyN")

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.num) - 1

    def leading_coefficient(self) -> Fraction:
        return Fraction(self.num[-1], self.den) if self.num else Fraction(0)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1

    def is_integral(self) -> bool:
        return self.den == 1

    def __call__(self, x: Scalar) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x: Scalar) -> Fraction:
        if isinstance(x, int):
            return Fraction(Z.evaluate(self.num, x), self.den)
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.num):
            acc = acc * x + c
        return acc / self.den

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: object) -> PolyN:
        if isinstance(other, RatFuncN):
            return NotImplemented
        o = PolyN.coerce(other)
        if self.den == o.den:
            return PolyN.from_zpoly(Z.add(self.num, o.num), self.den)
        d = lcm(self.den, o.den)
        return PolyN.from_zpoly(
            Z.add(Z.scale(self.num, d // self.den), Z.scale(o.num, d // o.den)), d
        )

    __radd__ = __add__

    def __neg__(self) -> PolyN:
        return PolyN.from_zpoly(Z.neg(self.num), self.den)

    def __sub__(self, other: object) -> PolyN:
        if isinstance(other, RatFuncN):
            return NotImplemented
        return self + (-PolyN.coerce(other))

    def __rsub__(self, other: object) -> PolyN:
        return PolyN.coerce(other) - self

    def __mul__(self, other: object) -> PolyN:
        if isinstance(other, RatFuncN):
            return NotImplemented
        o = PolyN.coerce(other)
        return PolyN.from_zpoly(Z.mul(self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PolyN:
        if e < 0:
            raise ValueError("negative exponent")
        out = PolyN.coerce(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, other: object) -> RatFuncN:
        return RatFuncN(self, other)

    def __rtruediv__(self, other: object) -> RatFuncN:
        return RatFuncN(other, self)

    def __divmod__(self, other: object) -> tuple[PolyN, PolyN]:
        b = PolyN.coerce(other)
        if not b:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        bc = b.coeffs
        db = len(bc) - 1
        q = [Fraction(0)] * max(len(r) - db, 0)
        while len(r) - 1 >= db and any(r):
            c = r[-1] / bc[-1]
            shift = len(r) - 1 - db
            q[shift] = c
            for i, y in enumerate(bc):
                r[i + shift] -= c * y
            r.pop()
            while r and not r[-1]:
                r.pop()
        return PolyN(q), PolyN(r)

    def __floordiv__(self, other: object) -> PolyN:
        return divmod(self, other)[0]

    def __mod__(self, other: object) -> PolyN:
        return divmod(self, other)[1]

    def monic(self) -> PolyN:
        if not self.num:
            return self
        return PolyN.from_zpoly(self.num, self.num[-1])

    def gcd(self, other: object) -> PolyN:
        """Monic greatest common divisor (zero if both are zero)."""
        o = PolyN.coerce(other)
        g = Z.gcd_poly(self.num, o.num)
        return PolyN.from_zpoly(g, g[-1]) if g else PolyN()

    def derivative(self) -> PolyN:
        return PolyN.from_zpoly(Z.derivative(self.num), self.den)

    # -- comparison, hashing, printing ------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFuncN):
            return other == self
        try:
            o = PolyN.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if len(self.num) <= 1:
            return hash(Fraction(self.num[0], self.den) if self.num else 0)
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"PolyN({str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    def to_json(self) -> list[int | str]:
        """Coefficients from low to high degree; non-integers as ``"p/q"``."""
        return [int(c) if c.denominator == 1 else str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[int | str]) -> PolyN:
        return cls(_as_fraction(c) for c in data)


def format_poly(coeffs: Sequence[Fraction], var: str = "N") -> str:
    """Human-readable form, highest degree first, e.g. ``N^2-3*N+1``."""
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


class RatFuncN:
    """A reduced quotient of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: object = 0, den: object = 1) -> None:
        if isinstance(num, RatFuncN) or isinstance(den, RatFuncN):
            a = RatFuncN.coerce(num) / RatFuncN.coerce(den)
            self.num, self.den = a.num, a.den
            return
        n, d = PolyN.coerce(num), PolyN.coerce(den)
        if not d:
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _reduce(n, d)

    @classmethod
    def _raw(cls, num: PolyN, den: PolyN) -> RatFuncN:
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def coerce(cls, x: object) -> RatFuncN:
        if isinstance(x, RatFuncN):
            return x
        return cls._raw(PolyN.coerce(x), PolyN.coerce(1))

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> PolyN:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num * PolyN.coerce(1 / self.den.leading_coefficient())

    def evaluate(self, x: Scalar) -> Fraction:
        d = self.den.evaluate(x)
        if not d:
            raise SpecializationError(f"denominator {self.den} vanishes at N={x}")
        return self.num.evaluate(x) / d

    __call__ = evaluate

    def __add__(self, other: object) -> RatFuncN:
        o = RatFuncN.coerce(other)
        if self.den == o.den:
            return RatFuncN(self.num + o.num, self.den)
        return RatFuncN(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RatFuncN:
        return RatFuncN._raw(-self.num, self.den)

    def __sub__(self, other: object) -> RatFuncN:
        return self + (-RatFuncN.coerce(other))

    def __rsub__(self, other: object) -> RatFuncN:
        return RatFuncN.coerce(other) - self

    def __mul__(self, other: object) -> RatFuncN:
        o = RatFuncN.coerce(other)
        return RatFuncN(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> RatFuncN:
        o = RatFuncN.coerce(other)
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        return RatFuncN(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> RatFuncN:
        return RatFuncN.coerce(other) / self

    def __pow__(self, e: int) -> RatFuncN:
        if e < 0:
            return (1 / self) ** (-e)
        return RatFuncN(self.num**e, self.den**e)

    def __eq__(self, other: object) -> bool:
        try:
            o = RatFuncN.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.is_polynomial():
            return hash(self.num)
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFuncN({str(self)!r})"

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        # present as integer numerator over a primitive integer denominator
        dz = Z.primitive(self.den.num)
        scale = Fraction(dz[-1]) / self.den.leading_coefficient()
        num = self.num * PolyN.coerce(scale)
        num_s = str(num)
        if len(num.num) > 1 or num.den != 1:
            num_s = f"({num_s})"
        return f"{num_s}/({factor_display(dz)})"

    def to_json(self) -> dict[str, list[int | str]]:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict[str, Sequence[int | str]]) -> RatFuncN:
        return cls(PolyN.from_json(data["num"]), PolyN.from_json(data.get("den", [1])))


def _reduce(n: PolyN, d: PolyN) -> tuple[PolyN, PolyN]:
    if not n:
        return n, PolyN.coerce(1)
    if len(d.num) > 1 and len(n.num) > 1:
        g = Z.gcd_poly(n.num, d.num)
        if len(g) > 1:
            n = PolyN.from_zpoly(Z.exquo(n.num, g), n.den)
            d = PolyN.from_zpoly(Z.exquo(d.num, g), d.den)
    lc = d.leading_coefficient()
    if lc != 1:
        inv = PolyN.coerce(1 / lc)
        n, d = n * inv, d * inv
    return n, d


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _squarefree_parts(f: Z.ZPoly) -> list[tuple[Z.ZPoly, int]]:
    """Yun's square-free decomposition of a primitive integer polynomial."""
    out = []
    df = Z.derivative(f)
    a = Z.gcd_poly(f, df)
    b = Z.exquo(f, a)
    c = Z.exquo(df, a)
    d = Z.sub(c, Z.derivative(b))
    i = 1
    while len(b) > 1:
        a = Z.gcd_poly(b, d) if d else Z.primitive(b)
        b = Z.exquo(b, a)
        c = Z.exquo(d, a) if d else Z.ZERO
        d = Z.sub(c, Z.derivative(b))
        if len(a) > 1:
            out.append((Z.primitive(a), i))
        i += 1
    return out


def _split_linear(p: Z.ZPoly) -> list[Z.ZPoly]:
    """Split off rational linear factors; the last entry is the leftover (maybe constant)."""
    found: list[Z.ZPoly] = []
    while len(p) > 1 and p[0] == 0:
        found.append((0, 1))
        p = p[1:]
    progress = True
    while progress and len(p) > 2:
        progress = False
        for q in _divisors(p[-1]):
            for r in _divisors(p[0]):
                for s_ in (r, -r):
                    lin = Z.primitive((-s_, q))
                    res = Z.divmod_exact(p, lin)
                    if res is not None and not res[1]:
                        found.append(lin)
                        p = res[0]
                        progress = True
                        break
                if progress:
                    break
            if progress:
                break
    return found + [p]


def factor_display(p: Z.ZPoly) -> str:
    """Render an integer polynomial as a product of square-free pieces with linear factors split off.

    Only used for printing; leftovers of degree at least two are shown expanded.
    """
    p = Z.trim(p)
    if not p:
        return "0"
    c = Z.content(p) * (1 if p[-1] > 0 else -1)
    prim = Z.primitive(p)
    pieces: list[tuple[Z.ZPoly, int]] = []
    for part, mult in _squarefree_parts(prim) if len(prim) > 1 else []:
        for f in _split_linear(part):
            if len(f) > 1:
                pieces.append((f, mult))
    merged: dict[Z.ZPoly, int] = {}
    for f, m in pieces:
        merged[f] = merged.get(f, 0) + m
    strs = []
    for f, m in sorted(merged.items(), key=lambda fm: (len(fm[0]), fm[0] != (0, 1), [abs(x) for x in fm[0]])):
        body = format_poly([Fraction(x) for x in f])
        if f != (0, 1):
            body = f"({body})"
        strs.append(body if m == 1 else f"{body}^{m}")
    if abs(c) != 1 or not strs:
        strs.insert(0, str(abs(c)))
    out = "*".join(strs)
    if len(strs) == 1 and out.startswith("(") and out.endswith(")") and out.count("(") == 1:
        out = out[1:-1]
    return ("-" if c < 0 else "") + out


def factored(p: PolyN) -> str:
    """Factored display of a polynomial over Q."""
    if not p:
        return "0"
    s = factor_display(p.num)
    return s if p.den == 1 else f"({s})/{p.den}"

N = PolyN.var()
