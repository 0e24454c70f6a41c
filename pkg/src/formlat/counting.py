"""Counting pair classes of forms and rank-1 primitive sublattices.

For D < 0 the count of unordered pairs of GL(2, Z) classes of primitive
positive definite forms is g(g+1)/2 with g the number of GL classes.  For
D > 0 the GL classes of primitive indefinite forms split into u classes equal
to their own negative and v pairs exchanged by negation; unordered pairs
modulo joint negation then number

    (u + v)(u + v + 1)/2 + v^2.

Rank-1 primitive sublattices of a hyperbolic plane of discriminant D > 0
count 1 for D = 2 and 2^(tau(D/2) - 1) for even D > 2, where tau is the
number of distinct prime factors; odd norms do not occur.

Each count has an independent brute-force oracle in this module.

Note on the indefinite formula: the four families of representative pairs
are (P_i, P_j) i <= j, (P_i, Q_j), (Q_i, Q_j) i <= j, and (Q_i, -Q_j)
i <= j; the last family needs i <= j because (Q_i, -Q_j) and (Q_j, -Q_i)
are exchanged by swap composed with joint negation.  Writing the last
contribution as v^2 (all ordered i, j) would overcount whenever v >= 2, as
the enumeration oracle shows at discriminant 60.
"""

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import InvalidDiscriminant
from .forms import (
    BinaryForm,
    enumerate_reduced,
    equivalent_gl,
    form_class,
    is_square,
)

__all__ = [
    "CountReport",
    "gl_class_reps",
    "count_definite",
    "definite_pair_oracle",
    "u_v_split",
    "count_indefinite",
    "indefinite_pair_oracle",
    "count_rank1_U",
    "rank1_oracle",
    "tau",
]


@dataclass(frozen=True)
class CountReport:
    discriminant: int
    mode: str  # "definite" | "indefinite" | "rank1"
    class_list: tuple
    total: int
    u: int | None = None
    v: int | None = None

    def __post_init__(self):
        assert self.total >= 0
        if self.mode == "indefinite":
            u, v = self.u, self.v
            assert self.total == (u + v) * (u + v + 1) // 2 + v * (v + 1) // 2

    def to_json(self):
        out = {"disc": self.discriminant, "mode": self.mode,
               "total": self.total,
               "class_list": _jsonable(self.class_list)}
        if self.mode == "indefinite":
            out["u"], out["v"] = self.u, self.v
        return out


def _jsonable(obj):
    if isinstance(obj, BinaryForm):
        return obj.to_json()
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def tau(k: int) -> int:
    """Number of distinct prime factors, by trial division."""
    if k < 1:
        raise ValueError("tau needs a positive integer")
    count = 0
    p = 2
    while p * p <= k:
        if k % p == 0:
            count += 1
            while k % p == 0:
                k //= p
        p += 1
    return count + (1 if k > 1 else 0)


# ---------------------------------------------------------------------------
# GL classes


def gl_class_reps(d: int, primitive_only: bool = True) -> list[BinaryForm]:
    """Canonical representatives of GL(2, Z) classes of discriminant d.

    For d < 0 these are classes of positive definite forms."""
    reps = enumerate_reduced(d, primitive_only)
    out = []
    seen = set()
    for f in reps:
        label = form_class(f, proper=False).representative
        if label.triple not in seen:
            seen.add(label.triple)
            out.append(label)
    return sorted(out, key=lambda f: f.triple)


# ---------------------------------------------------------------------------
# definite counting (d < 0)


def count_definite(d: int, primitive_only: bool = True) -> CountReport:
    """Unordered pairs of GL classes of positive definite forms of
    discriminant d; pairs of non-primitive classes with coprime contents are
    included when primitive_only is false."""
    if d >= 0:
        raise InvalidDiscriminant("definite counting needs d < 0")
    if d % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{d} is not a discriminant")
    if primitive_only:
        reps = gl_class_reps(d, primitive_only=True)
        pairs = [(reps[i], reps[j])
                 for i in range(len(reps)) for j in range(i, len(reps))]
        return CountReport(d, "definite", tuple(pairs), len(pairs))
    # coprime mode: stratify by content; contents e need e^2 | d with d/e^2
    # still a discriminant, and the two contents must be coprime
    strata = []
    e = 1
    while e * e <= -d:
        if d % (e * e) == 0 and (d // (e * e)) % 4 in (0, 1):
            for f in gl_class_reps(d // (e * e), primitive_only=True):
                strata.append((f.scale(e), e))
        e += 1
    pairs = []
    for i in range(len(strata)):
        for j in range(i, len(strata)):
            (f1, e1), (f2, e2) = strata[i], strata[j]
            if gcd(e1, e2) == 1:
                pairs.append((f1, f2))
    return CountReport(d, "definite", tuple(pairs), len(pairs))


def definite_pair_oracle(d: int) -> int:
    """Independent count of unordered primitive GL-pair classes at d < 0.

    Runs its own exhaustive (a, b, c) scan of reduced positive definite
    forms, merges GL classes by testing b -> -b membership in the scan list,
    and counts unordered pairs."""
    triples = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if b < 0 and (b == -a or a == c):
                continue
            if gcd(gcd(abs(a), abs(b)), abs(c)) == 1:
                triples.append((a, b, c))
        a += 1
    merged = set()
    for (a, b, c) in triples:
        mate = (a, -b, c) if (a, -b, c) in triples else (a, b, c)
        merged.add(min((a, b, c), mate))
    g = len(merged)
    return g * (g + 1) // 2


# ---------------------------------------------------------------------------
# indefinite counting (d > 0, non-square)


def u_v_split(d: int) -> tuple[int, int]:
    """(u, v): u GL classes with C = -C, and v pairs {C, -C} with C != -C."""
    _check_indefinite(d)
    reps = gl_class_reps(d, primitive_only=True)
    u = sum(1 for f in reps if equivalent_gl(f, -f))
    rest = len(reps) - u
    assert rest % 2 == 0
    return u, rest // 2


def count_indefinite(d: int) -> CountReport:
    """Pairs of GL classes of primitive indefinite forms modulo swapping and
    joint negation, listed by the four representative families."""
    _check_indefinite(d)
    reps = gl_class_reps(d, primitive_only=True)
    selfneg = [f for f in reps if equivalent_gl(f, -f)]
    rest = [f for f in reps if not equivalent_gl(f, -f)]
    qs = []
    used = set()
    for f in rest:
        if f.triple in used:
            continue
        mate = next(g for g in rest
                    if g.triple not in used and g.triple != f.triple
                    and equivalent_gl(g, -f))
        used.add(f.triple)
        used.add(mate.triple)
        qs.append((f, mate))
    u, v = len(selfneg), len(qs)
    families = []
    for i in range(u):
        for j in range(i, u):
            families.append({"kind": "PP", "pair": (selfneg[i], selfneg[j])})
    for i in range(u):
        for j in range(v):
            families.append({"kind": "PQ", "pair": (selfneg[i], qs[j][0])})
    for i in range(v):
        for j in range(i, v):
            families.append({"kind": "QQ", "pair": (qs[i][0], qs[j][0])})
    for i in range(v):
        for j in range(i, v):
            families.append({"kind": "QnegQ", "pair": (qs[i][0], qs[j][1])})
    total = (u + v) * (u + v + 1) // 2 + v * (v + 1) // 2
    assert len(families) == total
    return CountReport(d, "indefinite", tuple(families), total, u=u, v=v)


def indefinite_pair_oracle(d: int) -> int:
    """Count pairs of GL classes modulo <swap, joint negation> directly, by
    orbit enumeration over the explicit product of class lists."""
    _check_indefinite(d)
    reps = gl_class_reps(d, primitive_only=True)
    labels = [f.triple for f in reps]
    neg = {}
    for f in reps:
        img = next(g for g in reps if equivalent_gl(g, -f))
        neg[f.triple] = img.triple
    seen = set()
    orbits = 0
    for x in labels:
        for y in labels:
            if (x, y) in seen:
                continue
            orbits += 1
            orbit = set()
            stack = [(x, y)]
            while stack:
                p = stack.pop()
                if p in orbit:
                    continue
                orbit.add(p)
                stack.append((p[1], p[0]))
                stack.append((neg[p[0]], neg[p[1]]))
            seen |= orbit
    return orbits


def _check_indefinite(d: int):
    if d <= 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{d} is not a positive discriminant")
    if is_square(d):
        from .errors import SquareDiscriminant
        raise SquareDiscriminant(f"{d} is a perfect square")


# ---------------------------------------------------------------------------
# rank-1 primitive sublattices of a hyperbolic plane


def count_rank1_U(d: int) -> int:
    """Rank-1 primitive sublattices of the hyperbolic plane of discriminant
    d, modulo its isometry group: 1 for d = 2, 2^(tau(d/2)-1) for even d > 2,
    and 0 for odd d (all norms in the plane are even)."""
    if d < 1:
        raise InvalidDiscriminant("rank-1 counting needs d >= 1")
    if d % 2:
        return 0
    if d == 2:
        return 1
    return 2 ** (tau(d // 2) - 1)


def rank1_oracle(d: int) -> int:
    """Primitive vectors (x, y), 2xy = d, modulo negation and the swap."""
    if d < 1:
        raise InvalidDiscriminant("rank-1 counting needs d >= 1")
    if d % 2:
        return 0
    half = d // 2
    count = 0
    for x in range(1, isqrt(half) + 1):
        if half % x == 0:
            y = half // x
            if gcd(x, y) == 1:
                count += 1
    return count


def rank1_orbit_reps(d: int) -> list[tuple[int, int]]:
    if d < 1 or d % 2:
        return []
    half = d // 2
    return [(x, half // x) for x in range(1, isqrt(half) + 1)
            if half % x == 0 and gcd(x, half // x) == 1]
