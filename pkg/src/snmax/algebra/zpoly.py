"""Dense univariate polynomials over the integers as plain tuples.

These helpers are the fast path behind :class:`PolyN` and the fraction-free
matrix routines.  A polynomial is a tuple of ``int`` coefficients from low to
high degree with no trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

ZPoly = tuple[int, ...]

ZERO: ZPoly = ()
ONE: ZPoly = (1,)


def trim(c: Sequence[int]) -> ZPoly:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def add(a: ZPoly, b: ZPoly) -> ZPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def sub(a: ZPoly, b: ZPoly) -> ZPoly:
    out = list(a) + [0] * (len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return trim(out)


def neg(a: ZPoly) -> ZPoly:
    return tuple(-x for x in a)


def scale(a: ZPoly, c: int) -> ZPoly:
    if not c:
        return ZERO
    return tuple(x * c for x in a)


def mul(a: ZPoly, b: ZPoly) -> ZPoly:
    if not a or not b:
        return ZERO
    if len(a) == 1:
        return scale(b, a[0])
    if len(b) == 1:
        return scale(a, b[0])
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def content(a: ZPoly) -> int:
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def primitive(a: ZPoly) -> ZPoly:
    """Divide out the integer content and make the leading coefficient positive."""
    if not a:
        return a
    g = content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return a
    return tuple(x // g for x in a)


def evaluate(a: ZPoly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pseudo_rem(a: ZPoly, b: ZPoly) -> ZPoly:
    """Remainder of ``lc(b)^e * a`` by ``b`` for a suitable ``e``."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        q = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= q * y
        r = list(trim(r))
    return tuple(r)


def divmod_exact(a: ZPoly, b: ZPoly) -> tuple[ZPoly, ZPoly] | None:
    """Quotient and remainder over the integers, or None if a non-integer quotient arises."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * max(len(a) - db, 0)
    while r and len(r) - 1 >= db:
        lr = r[-1]
        if lr % lb:
            return None
        c = lr // lb
        shift = len(r) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] -= c * y
        r = list(trim(r))
    return trim(q), tuple(r)


def exquo(a: ZPoly, b: ZPoly) -> ZPoly:
    """Exact quotient ``a / b``; raises ArithmeticError if ``b`` does not divide ``a``."""
    if len(b) == 1:
        c = b[0]
        out = []
        for x in a:
            if x % c:
                raise ArithmeticError("inexact polynomial division")
            out.append(x // c)
        return tuple(out)
    res = divmod_exact(a, b)
    if res is None or res[1]:
        raise ArithmeticError("inexact polynomial division")
    return res[0]


def gcd_poly(a: ZPoly, b: ZPoly) -> ZPoly:
    """Primitive greatest common divisor with positive leading coefficient.

    The integer content is included, so ``gcd_poly((2,), (4,)) == (2,)``.
    """
    if not a:
        return primitive(b) if b else ZERO
    if not b:
        return primitive(a)
    ca, cb = content(a), content(b)
    cg = gcd(ca, cb)
    if len(a) == 1 or len(b) == 1:
        return (cg,)
    a = primitive(a)
    b = primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = pseudo_rem(a, b)
        a, b = b, primitive(r) if r else ZERO
        if len(b) == 1:
            return (cg,)
    return scale(primitive(a), cg)


def derivative(a: ZPoly) -> ZPoly:
    return trim([i * a[i] for i in range(1, len(a))])
