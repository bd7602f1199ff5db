"""Quadratic surds a + b*sqrt(d) and the closed form for the 2x2 gap.

A 2x2 bistochastic matrix is determined by its diagonal entry p, and its
Marcus-Ree gap is delta2(p) = max(2p, 2(1-p)) - 2(p^2 + (1-p)^2).  For a
rational target gap in [0, 1/4] the solutions p are quadratic surds over
a single radicand, which this module represents exactly: a and b are
rationals and d a square-free non-negative integer, with b = 0 whenever
the root collapses to a rational.
"""

from __future__ import annotations

from fractions import Fraction

from .rational import as_rational, format_rational


def _squarefree(m: int) -> tuple:
    """Split m >= 0 as sf * k^2 with sf square-free; returns (sf, k)."""
    if m < 0:
        raise ValueError("radicand must be non-negative")
    if m == 0:
        return 0, 1
    sf, k = 1, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            count = 0
            while m % p == 0:
                m //= p
                count += 1
            if count % 2:
                sf *= p
            k *= p ** (count // 2)
        p += 1 if p == 2 else 2
    return sf * m, k


class Surd:
    """Exact value a + b*sqrt(d), normalized to a square-free radicand."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = as_rational(a)
        b = as_rational(b)
        if not isinstance(d, int) or d < 0:
            raise ValueError(f"radicand must be a non-negative integer, got {d!r}")
        if b != 0:
            sf, k = _squarefree(d)
            b *= k
            d = sf
            if d == 0:
                b = Fraction(0)
            elif d == 1:
                a += b
                b = Fraction(0)
                d = 0
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    @staticmethod
    def _coerce(value) -> "Surd":
        if isinstance(value, Surd):
            return value
        return Surd(as_rational(value))

    def _join_radicand(self, other: "Surd") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0:
            return self.d
        if self.d != other.d:
            raise ValueError(f"mixed radicands: sqrt({self.d}) vs sqrt({other.d})")
        return self.d

    def __add__(self, other):
        other = Surd._coerce(other)
        d = self._join_radicand(other)
        return Surd(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-Surd._coerce(other))

    def __rsub__(self, other):
        return Surd._coerce(other) + (-self)

    def __mul__(self, other):
        other = Surd._coerce(other)
        d = self._join_radicand(other)
        return Surd(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return -1 if a < 0 else (0 if a == 0 else 1)
        if a == 0:
            return -1 if b < 0 else 1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        lhs = a * a
        rhs = b * b * d
        if lhs == rhs:
            return 0
        bigger_is_a = lhs > rhs
        return (1 if a > 0 else -1) if bigger_is_a else (1 if b > 0 else -1)

    def __eq__(self, other) -> bool:
        try:
            other = Surd._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def __lt__(self, other) -> bool:
        return (self - Surd._coerce(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - Surd._coerce(other)).sign() <= 0

    def __str__(self) -> str:
        if self.b == 0:
            return format_rational(self.a)
        sign = "-" if self.b < 0 else "+"
        return f"{format_rational(self.a)} {sign} {format_rational(abs(self.b))}*sqrt({self.d})"

    def __repr__(self) -> str:
        return f"Surd({self.a!r}, {self.b!r}, {self.d})"


def sqrt_rational(q) -> Surd:
    """Exact square root of a non-negative rational as a Surd."""
    q = as_rational(q)
    if q < 0:
        raise ValueError(f"cannot take the square root of {format_rational(q)}")
    if q == 0:
        return Surd(0)
    m = q.numerator * q.denominator
    sf, k = _squarefree(m)
    return Surd(0, Fraction(k, q.denominator), sf)


def omega2(alpha) -> list:
    """All diagonal entries p of 2x2 bistochastic matrices with gap alpha.

    For alpha in [0, 1/4] the solutions are (1 +- r)/4 and (3 +- r)/4
    with r = sqrt(1 - 4*alpha); duplicates merge when alpha = 1/4.
    Returned sorted ascending.
    """
    alpha = as_rational(alpha)
    if alpha < 0 or alpha > Fraction(1, 4):
        raise ValueError(
            f"alpha must lie in [0, 1/4], got {format_rational(alpha)}"
        )
    root = sqrt_rational(1 - 4 * alpha)
    quarter = Fraction(1, 4)
    candidates = [
        (Fraction(1) - root) * quarter,
        (Fraction(1) + root) * quarter,
        (Fraction(3) - root) * quarter,
        (Fraction(3) + root) * quarter,
    ]
    out = []
    for c in sorted(candidates):
        if not out or out[-1] != c:
            out.append(c)
    return out


def omega2_classes(alpha) -> list:
    """One representative per solution class under the swap p <-> 1 - p."""
    reps = []
    for p in omega2(alpha):
        low = min(p, Surd(1) - p)
        if low not in reps:
            reps.append(low)
    return reps


def delta2(p):
    """Exact 2x2 gap max(2p, 2(1-p)) - 2(p^2 + (1-p)^2) for p in [0, 1].

    Accepts rationals and surds; returns a Fraction whenever the surd
    parts cancel (they always do on omega2 outputs) and a Surd otherwise.
    """
    p = Surd._coerce(p)
    if p.sign() < 0 or (Surd(1) - p).sign() < 0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    q = Surd(1) - p
    m = p if (p - q).sign() >= 0 else q
    value = 2 * m - 2 * (p * p + q * q)
    if value.is_rational:
        return value.rational_value()
    return value
