"""Characteristic polynomials det(xI - A) computed without division."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrix import HermitianGraph
from .ring import QuadInt, Ring, format_qi


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients, stored low degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(t) for t in c))

    @classmethod
    def from_high(cls, coeffs: Sequence[int]) -> "IntPoly":
        return cls(tuple(reversed(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def high(self) -> list[int]:
        return list(reversed(self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def __pow__(self, k: int) -> "IntPoly":
        out = IntPoly((1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Synthetic division by a monic divisor."""
        if not other.is_monic:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return IntPoly((0,)), self
        q = [0] * (dq + 1)
        m = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            t = rem[k + m]
            q[k] = t
            if t:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= t * b
        return IntPoly(tuple(q)), IntPoly(tuple(rem[:m]) or (0,))

    def divides(self, other: "IntPoly") -> bool:
        """True when self divides other exactly."""
        _, r = other.divmod(self)
        return r.degree < 0

    def translate(self, c: int) -> "IntPoly":
        """p(x + c)."""
        out = [0]
        for a in reversed(self.coeffs):
            # out = out * (x + c) + a
            nxt = [0] * (len(out) + 1)
            for i, t in enumerate(out):
                nxt[i + 1] += t
                nxt[i] += c * t
            nxt[0] += a
            out = nxt
        return IntPoly(tuple(out))

    def reflect(self) -> "IntPoly":
        """(-1)^n p(-x), monic again."""
        n = self.degree
        return IntPoly(tuple(c * (-1) ** ((i + n) % 2) for i, c in enumerate(self.coeffs)))

    def __str__(self) -> str:
        return format_poly([str(c) for c in self.high()], numeric=self.high())


@dataclass(frozen=True)
class RingPoly:
    """Monic polynomial with coefficients in a quadratic ring, low degree first."""

    ring: Ring
    coeffs: tuple[QuadInt, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def high(self) -> list[QuadInt]:
        return list(reversed(self.coeffs))

    def conj(self) -> "RingPoly":
        return RingPoly(self.ring, tuple(c.conj() for c in self.coeffs))

    def star(self) -> "RingPoly":
        return RingPoly(self.ring, tuple(c.star() for c in self.coeffs))

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((c.a, c.b) for c in self.coeffs)

    def embed(self, sign: int = 1) -> list:
        return [c.embed(sign) for c in self.coeffs]

    def __str__(self) -> str:
        hi = self.high()
        if all(c.b == 0 for c in hi):
            return format_poly([str(c.a) for c in hi], numeric=[c.a for c in hi])
        return format_poly([format_qi(c.a, c.b) for c in hi])


class NotInteger(Exception):
    """Raised when a ring polynomial has a coefficient outside Z."""


def format_poly(coeffs_high: Sequence[str], numeric: Sequence[int] | None = None) -> str:
    """Render ``x^6 - 7x^4 + 14x^2 - 7`` from high-to-low coefficient strings."""
    n = len(coeffs_high) - 1
    parts: list[str] = []
    for k, c in enumerate(coeffs_high):
        e = n - k
        mono = "" if e == 0 else "x" if e == 1 else f"x^{e}"
        if numeric is not None:
            v = numeric[k]
            if v == 0:
                continue
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            body = (str(mag) if mag != 1 or not mono else "") + mono
        else:
            if c == "0":
                continue
            sign = "+"
            body = mono if c == "1" and mono else (f"({c})" + mono if mono else f"({c})")
        if not parts:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts) if parts else "0"


def berkowitz(m: Sequence[Sequence], one, zero) -> list:
    """Coefficients (high degree first) of det(xI - m) over a commutative ring."""
    n = len(m)
    poly = [one]
    for k in range(n):
        # column of the Toeplitz factor: 1, -a_kk, -R S, -R M S, ...
        a = m[k][k]
        col = [one, -a]
        if k:
            r = [m[k][j] for j in range(k)]
            s = [m[i][k] for i in range(k)]
            for _ in range(k):
                t = zero
                for i in range(k):
                    t = t + r[i] * s[i]
                col.append(-t)
                s = [_dot(m[i], s, k, zero) for i in range(k)]
        new = []
        for i in range(k + 2):
            t = zero
            for j in range(max(0, i - (len(col) - 1)), min(i, k) + 1):
                t = t + col[i - j] * poly[j]
            new.append(t)
        poly = new
    return poly


def _dot(row, vec, k, zero):
    t = zero
    for j in range(k):
        t = t + row[j] * vec[j]
    return t


def char_poly(g: HermitianGraph) -> RingPoly:
    r = g.ring
    hi = berkowitz(g.w, r.one, r.zero)
    return RingPoly(r, tuple(reversed(hi)))


def to_int_poly(p: RingPoly) -> IntPoly:
    if any(c.b for c in p.coeffs):
        raise NotInteger(str(p))
    return IntPoly(tuple(c.a for c in p.coeffs))


def int_char_poly(g: HermitianGraph) -> IntPoly | None:
    """Integer characteristic polynomial, or None when it is not in Z[x]."""
    try:
        return to_int_poly(char_poly(g))
    except NotInteger:
        return None


def fast_char_pairs(g: HermitianGraph) -> tuple[tuple[int, int], ...]:
    """Characteristic polynomial coordinates via floating point, rounded.

    Coefficients are recovered from the eigenvalues of both embeddings and
    rounded to the integral basis.  If any coordinate is not within 1e-4 of
    an integer the exact routine is used instead.
    """
    n = g.n
    if n > 14:
        return char_poly(g).pairs()
    r = g.ring
    if r.d < 0:
        ev = np.linalg.eigvalsh(g.numeric(1))
        c = np.poly(ev).real[::-1]
        # coefficients are real elements of the ring, i.e. integers
        rounded = np.rint(c)
        if np.max(np.abs(c - rounded)) > 1e-4:
            return char_poly(g).pairs()
        return tuple((int(x), 0) for x in rounded)
    c1 = np.poly(np.linalg.eigvalsh(g.numeric(1)))[::-1]
    c2 = np.poly(np.linalg.eigvalsh(g.numeric(-1)))[::-1]
    w1, w2 = r.omega_value(1), r.omega_value(-1)
    b = (c1 - c2) / (w1 - w2)
    a = c1 - b * w1
    ra, rb = np.rint(a), np.rint(b)
    if max(np.max(np.abs(a - ra)), np.max(np.abs(b - rb))) > 1e-4:
        return char_poly(g).pairs()
    return tuple((int(x), int(y)) for x, y in zip(ra, rb))


def det(m: Sequence[Sequence], one, zero):
    """Exact determinant via the constant term of the characteristic polynomial."""
    hi = berkowitz(m, one, zero)
    return hi[-1] if len(m) % 2 == 0 else -hi[-1]


def numeric_char_coeffs(g: HermitianGraph, sign: int = 1) -> np.ndarray:
    """Float oracle: expand prod(x - lambda_i), high degree first."""
    return np.real_if_close(np.poly(np.linalg.eigvalsh(g.numeric(sign))))
