"""Binary quadratic form arithmetic.

A form [a, b, c] stands for a x^2 + b xy + c y^2 and is identified with the
even symmetric matrix [[2a, b], [b, 2c]]; its discriminant is b^2 - 4ac.
This module provides the group action of GL(2, Z), reduction for definite and
indefinite forms, equivalence testing with explicit witnesses, and the
enumeration of reduced representatives per discriminant.

All arithmetic is exact (Python integers), so correctness does not depend on
any word size.
"""

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import (
    DegenerateForm,
    InvalidDiscriminant,
    SquareDiscriminant,
)

__all__ = [
    "BinaryForm",
    "UnimodularMatrix",
    "FormClass",
    "IDENTITY",
    "disc",
    "content",
    "apply",
    "vee",
    "reduce",
    "is_reduced",
    "cycle",
    "equivalent_sl",
    "equivalent_gl",
    "enumerate_reduced",
    "principal_form",
    "form_class",
    "is_square",
]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _check_disc(d: int, allow_square: bool = False):
    if d == 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{d} is not a discriminant")
    if not allow_square and d > 0 and is_square(d):
        raise SquareDiscriminant(f"{d} is a perfect square")


@dataclass(frozen=True)
class BinaryForm:
    """Integral binary quadratic form [a, b, c] with b^2 - 4ac != 0."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        for x in (self.a, self.b, self.c):
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"coefficients must be integers, got {x!r}")
        if self.disc == 0:
            raise DegenerateForm(f"form {self.triple} has zero discriminant")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((2 * self.a, self.b), (self.b, 2 * self.c))

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def vee(self) -> "BinaryForm":
        return BinaryForm(self.a, -self.b, self.c)

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(-self.a, -self.b, -self.c)

    def scale(self, k: int) -> "BinaryForm":
        return BinaryForm(k * self.a, k * self.b, k * self.c)

    def divide(self, d: int) -> "BinaryForm":
        if d == 0 or self.a % d or self.b % d or self.c % d:
            raise ValueError(f"{d} does not divide {self.triple}")
        return BinaryForm(self.a // d, self.b // d, self.c // d)

    @property
    def is_positive_definite(self) -> bool:
        return self.disc < 0 and self.a > 0

    @property
    def is_negative_definite(self) -> bool:
        return self.disc < 0 and self.a < 0

    @property
    def is_indefinite(self) -> bool:
        return self.disc > 0

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.c]

    @classmethod
    def from_json(cls, data) -> "BinaryForm":
        a, b, c = data
        return cls(int(a), int(b), int(c))

    def __repr__(self):
        return f"[{self.a},{self.b},{self.c}]"


@dataclass(frozen=True)
class UnimodularMatrix:
    """2x2 integer matrix with determinant +1 or -1."""

    rows: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"matrix {self.rows} has determinant {self.det}")

    @classmethod
    def of(cls, a, b, c, d) -> "UnimodularMatrix":
        return cls(((int(a), int(b)), (int(c), int(d))))

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.rows
        return a * d - b * c

    @property
    def is_proper(self) -> bool:
        return self.det == 1

    def __mul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return UnimodularMatrix(((a * e + b * g, a * f + b * h),
                                 (c * e + d * g, c * f + d * h)))

    def inverse(self) -> "UnimodularMatrix":
        (a, b), (c, d) = self.rows
        s = self.det
        return UnimodularMatrix(((s * d, -s * b), (-s * c, s * a)))

    def transpose(self) -> "UnimodularMatrix":
        (a, b), (c, d) = self.rows
        return UnimodularMatrix(((a, c), (b, d)))

    def vee(self) -> "UnimodularMatrix":
        (a, b), (c, d) = self.rows
        return UnimodularMatrix(((a, -b), (-c, d)))

    def to_json(self):
        return [list(r) for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "UnimodularMatrix":
        return cls.of(data[0][0], data[0][1], data[1][0], data[1][1])

    def __repr__(self):
        return f"[{list(self.rows[0])},{list(self.rows[1])}]"


IDENTITY = UnimodularMatrix.of(1, 0, 0, 1)
_SWAP = UnimodularMatrix.of(0, -1, 1, 0)


def _translation(t: int) -> UnimodularMatrix:
    return UnimodularMatrix.of(1, t, 0, 1)


def disc(f: BinaryForm) -> int:
    return f.disc


def content(f: BinaryForm) -> int:
    return f.content


def vee(f: BinaryForm) -> BinaryForm:
    return f.vee()


def apply(g: UnimodularMatrix, f: BinaryForm) -> BinaryForm:
    """Form whose matrix is g^t M(f) g; preserves disc and content."""
    (p, q), (r, s) = g.rows
    # columns of g evaluated under f give the new diagonal
    a = f.value(p, r)
    c = f.value(q, s)
    b = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s
    return BinaryForm(a, b, c)


# ---------------------------------------------------------------------------
# reduction


def is_reduced(f: BinaryForm) -> bool:
    a, b, c = f.triple
    d = f.disc
    if d < 0:
        if a < 0:
            a, b, c = -a, -b, -c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (abs(b) == a or a == c):
            return False
        return True
    if is_square(d):
        raise SquareDiscriminant(f"discriminant {d} is a perfect square")
    r = isqrt(d)
    if not (0 < b <= r):
        return False
    t = 2 * abs(a)
    # sqrt(d) - b < 2|a| < sqrt(d) + b, with sqrt(d) irrational
    return d < (t + b) ** 2 and (t <= b or (t - b) ** 2 < d)


def _reduce_posdef(f: BinaryForm) -> tuple[BinaryForm, UnimodularMatrix]:
    a, b, c = f.triple
    g = IDENTITY
    while True:
        if c < a:
            a, b, c = c, -b, a
            g = g * _SWAP
            continue
        if b > a or b <= -a:
            t = (a - b) // (2 * a)  # floor division puts b + 2at in (-a, a]
            b2 = b + 2 * a * t
            c2 = a * t * t + b * t + c
            a, b, c = a, b2, c2
            g = g * _translation(t)
            continue
        break
    # boundary normalization: b >= 0 when |b| = a or a = c
    if b < 0 and -b == a:
        a, b, c = a, b + 2 * a, c + b + a
        g = g * _translation(1)
    if b < 0 and a == c:
        a, b, c = c, -b, a
        g = g * _SWAP
    return BinaryForm(a, b, c), g


def _indef_window_b(b: int, lead: int, d: int) -> int:
    """Representative of b mod 2|lead| in the reduction window for ``lead``."""
    m = 2 * abs(lead)
    r = isqrt(d)
    if abs(lead) > r:
        s = b % m  # in [0, m)
        return s if s <= abs(lead) else s - m
    return r - ((r - b) % m)


def _rho_step(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    """One reduction step (a,b,c) -> (c, b', *); returns (a', b', c', t)."""
    b2 = _indef_window_b(-b, c, d)
    t = (b2 + b) // (2 * c)
    c2 = c * t * t - b * t + a
    return c, b2, c2, t


def _reduce_indef(f: BinaryForm) -> tuple[BinaryForm, UnimodularMatrix]:
    d = f.disc
    a, b, c = f.triple
    g = IDENTITY
    while not is_reduced(BinaryForm(a, b, c)):
        a, b, c, t = _rho_step(a, b, c, d)
        g = g * _SWAP * _translation(t)
    # canonical representative: lexicographically least triple on the cycle
    best = (a, b, c)
    best_g = g
    a0, b0, c0 = a, b, c
    while True:
        a, b, c, t = _rho_step(a, b, c, d)
        g = g * _SWAP * _translation(t)
        if (a, b, c) == (a0, b0, c0):
            break
        if (a, b, c) < best:
            best = (a, b, c)
            best_g = g
    return BinaryForm(*best), best_g


def reduce(f: BinaryForm) -> tuple[BinaryForm, UnimodularMatrix]:
    """Reduced representative R and proper transform g with g^t f g = R.

    Definite forms get the classical unique reduced representative (negative
    definite ones by negating, reducing, and negating back).  Indefinite forms
    get the lexicographically least member of their cycle of reduced forms.
    """
    d = f.disc
    if d < 0:
        if f.a < 0:
            r, g = _reduce_posdef(-f)
            return -r, g
        return _reduce_posdef(f)
    if is_square(d):
        raise SquareDiscriminant(f"discriminant {d} is a perfect square")
    return _reduce_indef(f)


def cycle(f: BinaryForm) -> list[BinaryForm]:
    """The cycle of reduced forms properly equivalent to ``f`` (disc > 0)."""
    r, _ = reduce(f)
    d = r.disc
    out = [r]
    a, b, c = r.triple
    while True:
        a, b, c, _ = _rho_step(a, b, c, d)
        if (a, b, c) == r.triple:
            return out
        out.append(BinaryForm(a, b, c))


# ---------------------------------------------------------------------------
# equivalence


def equivalent_sl(f: BinaryForm, g: BinaryForm) -> UnimodularMatrix | None:
    """Witness h in SL(2, Z) with h^t f h = g, or None."""
    if f.disc != g.disc:
        return None
    rf, hf = reduce(f)
    rg, hg = reduce(g)
    if rf != rg:
        return None
    h = hf * hg.inverse()
    assert apply(h, f) == g
    return h


def equivalent_gl(f: BinaryForm, g: BinaryForm) -> bool:
    """GL(2, Z) equivalence: SL-equivalent to g or to g with b negated."""
    return equivalent_sl(f, g) is not None or equivalent_sl(f, g.vee()) is not None


# ---------------------------------------------------------------------------
# enumeration and classes


def enumerate_reduced(d: int, primitive_only: bool = False) -> list[BinaryForm]:
    """One reduced representative per proper class of discriminant ``d``.

    For d < 0 these are the positive definite reduced forms; negative definite
    classes are their negatives.  For d > 0 (non-square) one canonical
    representative per cycle is returned.
    """
    _check_disc(d)
    out = []
    if d < 0:
        amax = isqrt(-d // 3)
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                num = b * b - d
                if num % (4 * a):
                    continue
                c = num // (4 * a)
                if c < a:
                    continue
                if b < 0 and a == c:
                    continue
                out.append(BinaryForm(a, b, c))
        out.sort(key=lambda f: (f.a, abs(f.b), f.b < 0, f.c))
    else:
        seen = set()
        reps = []
        r = isqrt(d)
        for b in range(1, r + 1):
            num = b * b - d  # negative
            if num % 4:
                continue
            for absa in range(1, (r + b) // 2 + 1):
                if num % (4 * absa):
                    continue
                for a in (absa, -absa):
                    c = num // (4 * a)
                    f = BinaryForm(a, b, c)
                    if not is_reduced(f) or f.triple in seen:
                        continue
                    cyc = cycle(f)
                    seen.update(x.triple for x in cyc)
                    reps.append(min(cyc, key=lambda x: x.triple))
        out = sorted(reps, key=lambda f: f.triple)
    if primitive_only:
        out = [f for f in out if f.is_primitive]
    return out


def principal_form(d: int) -> BinaryForm:
    _check_disc(d)
    if d % 4 == 0:
        return BinaryForm(1, 0, -d // 4)
    return BinaryForm(1, 1, (1 - d) // 4)


@dataclass(frozen=True)
class FormClass:
    """Equivalence class of forms; proper=True for SL, False for GL classes.

    ``representative`` is canonical: for definite forms the unique reduced
    representative (negated for negative definite classes), for indefinite
    forms the lexicographically least triple on the cycle; a GL class is
    labeled by the smaller of the representatives of C and C^vee.
    """

    representative: BinaryForm
    discriminant: int
    proper: bool = True

    def to_json(self):
        return {"rep": self.representative.to_json(),
                "disc": self.discriminant,
                "proper": self.proper}

    def __repr__(self):
        kind = "SL" if self.proper else "GL"
        return f"<{kind} class {self.representative}>"


def form_class(f: BinaryForm, proper: bool = True) -> FormClass:
    r, _ = reduce(f)
    if not proper:
        rv, _ = reduce(f.vee())
        r = min(r, rv, key=lambda x: x.triple)
    return FormClass(r, f.disc, proper)
