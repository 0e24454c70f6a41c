"""Concordance, the Gauss product, and class groups of binary forms.

Two forms [a, b, c], [a', b', c'] of one discriminant are *concordant* when
a a' != 0, b = b', and gcd(a, a') equals the gcd of the two contents.  On a
concordant pair the product is

    [a, b, c] * [a', b, c'] = [a a', b, c / a']

with the division exact.  Any same-discriminant pair can be moved into
concordant position by SL(2, Z) transforms; composing on proper classes of
primitive forms yields the class group Cl_D.
"""

import os
from dataclasses import dataclass
from math import gcd

from .errors import (
    ImproperClass,
    MixedDiscriminants,
    NotConcordant,
    NotPrimitive,
    NotSameDiscriminant,
    SearchExhausted,
)
from .forms import (
    IDENTITY,
    BinaryForm,
    FormClass,
    UnimodularMatrix,
    apply,
    enumerate_reduced,
    form_class,
    principal_form,
)

__all__ = [
    "ConcordantPair",
    "ClassGroup",
    "is_concordant",
    "make_concordant",
    "star",
    "compose_classes",
    "class_group",
]

_DEFAULT_SCAN_BOUND = int(os.environ.get("FORMLAT_SEARCH_BOUND", "512"))


def is_concordant(p: BinaryForm, q: BinaryForm) -> bool:
    lam = gcd(p.content, q.content)
    return (p.disc == q.disc and p.a * q.a != 0 and p.b == q.b
            and gcd(abs(p.a), abs(q.a)) == lam)


@dataclass(frozen=True)
class ConcordantPair:
    """Concordant transforms of an input pair, with the witnessing matrices.

    g1^t P g1 and g2^t Q g2 are the stored forms, for the original (P, Q).
    """

    p: BinaryForm
    q: BinaryForm
    g1: UnimodularMatrix
    g2: UnimodularMatrix

    def __post_init__(self):
        if not is_concordant(self.p, self.q):
            raise NotConcordant(f"({self.p}, {self.q}) is not concordant")


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _sl_with_first_column(x: int, y: int) -> UnimodularMatrix:
    g, s, t = _egcd(x, y)
    assert g == 1, "vector must be primitive"
    return UnimodularMatrix.of(x, -t, y, s)


def _represented_value(f: BinaryForm, coprime_to: int, bound: int):
    """Nonzero value of f at a primitive vector, coprime to ``coprime_to``.

    Scans shells of increasing max-norm; within the first shell containing an
    admissible value, prefers positive values, then small magnitude, then the
    lexicographically least vector.
    """
    for r in range(1, bound + 1):
        best = None
        for x in range(-r, r + 1):
            ys = (-r, r) if abs(x) < r else range(-r, r + 1)
            for y in ys:
                if gcd(abs(x), abs(y)) != 1:
                    continue
                v = f.value(x, y)
                if v == 0 or gcd(abs(v), abs(coprime_to)) != 1:
                    continue
                key = (v < 0, abs(v), x, y)
                if best is None or key < best[0]:
                    best = (key, v, (x, y))
        if best is not None:
            return best[1], best[2]
    raise SearchExhausted(
        f"no admissible represented value of {f} within box {bound}")


def _crt(b1: int, m1: int, b2: int, m2: int) -> int:
    """Smallest-|.|  b with b = b1 (mod m1), b = b2 (mod m2)."""
    g, s, _ = _egcd(m1, m2)
    assert (b2 - b1) % g == 0
    lcm = m1 // g * m2
    b = (b1 + (b2 - b1) // g * s % (m2 // g) * m1) % lcm
    return min(b, b - lcm, key=lambda x: (abs(x), x < 0))


def make_concordant(p: BinaryForm, q: BinaryForm,
                    bound: int = _DEFAULT_SCAN_BOUND) -> ConcordantPair:
    """SL(2, Z)-transform (p, q) into a concordant pair.

    Strategy: scale out lambda = gcd(content p, content q), find values
    represented at primitive vectors with coprime leading coefficients, move
    them into leading position, then align the middle coefficients by solving
    the translation congruence mod 2 a a'.
    """
    if p.disc != q.disc:
        raise NotSameDiscriminant(f"disc {p.disc} != {q.disc}")
    if is_concordant(p, q):
        return ConcordantPair(p, q, IDENTITY, IDENTITY)
    lam = gcd(p.content, q.content)
    p1, q1 = p.divide(lam), q.divide(lam)
    d2 = q1.content
    v1, vec1 = _represented_value(p1, d2, bound)
    g1 = _sl_with_first_column(*vec1)
    v2, _vec = _represented_value(q1, v1, bound)
    g2 = _sl_with_first_column(*_vec)
    p2, q2 = apply(g1, p1), apply(g2, q1)
    assert p2.a == v1 and q2.a == v2 and gcd(abs(v1), abs(v2)) == 1
    b = _crt(p2.b, 2 * v1, q2.b, 2 * v2)
    g1 = g1 * UnimodularMatrix.of(1, (b - p2.b) // (2 * v1), 0, 1)
    g2 = g2 * UnimodularMatrix.of(1, (b - q2.b) // (2 * v2), 0, 1)
    return ConcordantPair(apply(g1, p), apply(g2, q), g1, g2)


def star(p: BinaryForm, q: BinaryForm) -> BinaryForm:
    """Gauss product [a a', b, c/a'] of a concordant pair."""
    if not is_concordant(p, q):
        raise NotConcordant(f"({p}, {q}) is not concordant")
    assert p.c % q.a == 0
    return BinaryForm(p.a * q.a, p.b, p.c // q.a)


def compose_classes(c1: FormClass, c2: FormClass) -> FormClass:
    """Composition of proper classes of primitive forms."""
    if c1.discriminant != c2.discriminant:
        raise MixedDiscriminants(
            f"disc {c1.discriminant} != {c2.discriminant}")
    if not (c1.proper and c2.proper):
        raise ImproperClass("composition needs proper (SL) classes")
    if not (c1.representative.is_primitive and c2.representative.is_primitive):
        raise NotPrimitive("composition needs primitive classes")
    pair = make_concordant(c1.representative, c2.representative)
    return form_class(star(pair.p, pair.q))


@dataclass(frozen=True)
class ClassGroup:
    """Proper classes of primitive forms of one discriminant, with the
    composition table.  For D < 0 the elements are the positive definite
    classes, as is classical."""

    discriminant: int
    elements: tuple[FormClass, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        principal = form_class(principal_form(self.discriminant))
        return self.index_of(principal)

    def index_of(self, cls: FormClass) -> int:
        return self.elements.index(cls)

    def compose(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse_index(self, i: int) -> int:
        return self.index_of(form_class(self.elements[i].representative.vee()))

    def check_axioms(self) -> bool:
        n = self.order
        e = self.identity_index
        t = self.table
        if any(sorted(row) != list(range(n)) for row in t):
            return False  # not a latin square row
        if any(t[e][i] != i or t[i][e] != i for i in range(n)):
            return False
        if any(t[i][j] != t[j][i] for i in range(n) for j in range(n)):
            return False
        if any(t[i][self.inverse_index(i)] != e for i in range(n)):
            return False
        return all(t[t[i][j]][k] == t[i][t[j][k]]
                   for i in range(n) for j in range(n) for k in range(n))

    def to_json(self):
        return {"disc": self.discriminant,
                "elements": [c.to_json() for c in self.elements],
                "table": [list(r) for r in self.table]}


def class_group(d: int) -> ClassGroup:
    """All proper primitive classes of discriminant d with composition table."""
    reps = enumerate_reduced(d, primitive_only=True)
    classes = tuple(form_class(f) for f in reps)
    index = {c.representative.triple: i for i, c in enumerate(classes)}
    table = tuple(
        tuple(index[compose_classes(ci, cj).representative.triple]
              for cj in classes)
        for ci in classes)
    group = ClassGroup(d, classes, table)
    assert group.check_axioms(), f"composition table at disc {d} is not a group"
    return group
