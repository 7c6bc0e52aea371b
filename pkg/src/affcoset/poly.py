"""Coefficient rings and dense univariate polynomials.

Polynomials are tuples of coefficients, constant term first, with no trailing
zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

Poly = tuple


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "Z", "Zp" or "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Zp", "Q"):
            raise ValueError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "Zp" and (self.p is None or self.p < 2):
            raise ValueError("Zp needs a prime p")

    @classmethod
    def integers(cls) -> "CoefficientRing":
        return cls("Z")

    @classmethod
    def rationals(cls) -> "CoefficientRing":
        return cls("Q")

    @classmethod
    def mod(cls, p: int) -> "CoefficientRing":
        return cls("Zp", p)

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Zp" else 0

    def __call__(self, c):
        if self.kind == "Zp":
            if isinstance(c, Fraction):
                return (c.numerator * pow(c.denominator, -1, self.p)) % self.p
            return int(c) % self.p
        if self.kind == "Q":
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError(f"{c} is not an integer")
            return c.numerator
        return int(c)

    def inv(self, c):
        if self.kind == "Zp":
            return pow(int(c), -1, self.p)
        if self.kind == "Q":
            return 1 / Fraction(c)
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"{c} is not a unit in Z")

    def __str__(self) -> str:
        return f"Z_{self.p}" if self.kind == "Zp" else self.kind

    def descriptor(self) -> dict:
        return {"ring": self.kind, "p": self.p} if self.kind == "Zp" else {"ring": self.kind}


def trim(c: Sequence) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def normalize(R: CoefficientRing, c: Sequence) -> Poly:
    return trim(R(x) for x in c)


def degree(f: Poly) -> int:
    return len(f) - 1  # -1 for the zero polynomial


def add(R, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return trim(R((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) for i in range(n))


def neg(R, f: Poly) -> Poly:
    return trim(R(-x) for x in f)


def sub(R, f: Poly, g: Poly) -> Poly:
    return add(R, f, neg(R, g))


def scale(R, f: Poly, c) -> Poly:
    return trim(R(c * x) for x in f)


def mul(R, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    if R.kind == "Zp" and min(len(f), len(g)) > 32:
        # coefficients are below p, so int64 convolution is exact for desk-scale p
        prod = np.convolve(np.array(f, dtype=np.int64), np.array(g, dtype=np.int64)) % R.p
        return trim(int(x) for x in prod)
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return normalize(R, out)


def power(R, f: Poly, k: int) -> Poly:
    result: Poly = (R(1),)
    base = f
    while k:
        if k & 1:
            result = mul(R, result, base)
        k >>= 1
        if k:
            base = mul(R, base, base)
    return result


def x_minus(R, c) -> Poly:
    """``X - c``."""
    return normalize(R, [-c, 1])


def monic(R, f: Poly) -> Poly:
    if not f:
        return f
    return scale(R, f, R.inv(f[-1]))


def divmod_poly(R, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [R(0)] * max(len(f) - len(g) + 1, 0)
    lead_inv = R.inv(g[-1])
    while len(r) >= len(g) and r:
        c = R(r[-1] * lead_inv)
        shift = len(r) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = R(r[shift + i] - c * b)
        r = list(trim(r))
    return trim(q), trim(r)


def evaluate(f: Poly, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def gcd(R, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, divmod_poly(R, f, g)[1]
    return monic(R, f)


def ext_gcd(R, f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """``(d, s, t)`` with ``s f + t g = d`` monic."""
    r0, r1 = f, g
    s0, s1 = (R(1),), ()
    t0, t1 = (), (R(1),)
    while r1:
        q, r = divmod_poly(R, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(R, s0, mul(R, q, s1))
        t0, t1 = t1, sub(R, t0, mul(R, q, t1))
    if not r0:
        return r0, s0, t0
    c = R.inv(r0[-1])
    return scale(R, r0, c), scale(R, s0, c), scale(R, t0, c)


def resultant(R, f: Poly, g: Poly):
    """Resultant over a field by the Euclidean remainder sequence.

    Uses ``res(f, g) = (-1)^(deg f deg g) res(g, f)`` and
    ``res(g, f) = lc(g)^(deg f - deg r) res(g, r)`` for ``r = f mod g``.
    """
    if not f or not g:
        return R(0)
    result = R(1)
    while True:
        df, dg = degree(f), degree(g)
        if dg == 0:
            return R(result * g[0] ** df)
        if df == 0:
            return R(result * f[0] ** dg)
        if df < dg:
            f, g = g, f
            if (df * dg) % 2:
                result = -result
            continue
        # df >= dg: res(f, g) = (-1)^(df dg) res(g, f) = (-1)^(df dg) lc(g)^(df - dr) res(g, r)
        r = divmod_poly(R, f, g)[1]
        if not r:
            return R(0)
        dr = degree(r)
        if (df * dg) % 2:
            result = -result
        result = R(result * g[-1] ** (df - dr))
        f, g = g, r


def to_str(f: Poly, var: str = "X") -> str:
    if not f:
        return "0"
    terms = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if c == 0:
            continue
        mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mon and c == 1:
            s = mon
        elif mon and c == -1:
            s = f"-{mon}"
        else:
            s = f"{c}{'*' if mon else ''}{mon}"
        terms.append(s)
    return " + ".join(terms).replace("+ -", "- ")


def as_json(f: Poly) -> list:
    return [str(c) if isinstance(c, Fraction) and c.denominator != 1 else int(c) for c in f]
