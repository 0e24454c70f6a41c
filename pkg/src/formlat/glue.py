"""Integral lattices, discriminant groups, gluing, and triples.

An even lattice L with Gram matrix G determines the finite group
A_L = L*/L carrying a quadratic form q into Q/2Z and a bilinear form b into
Q/Z.  A triple (X, Y, phi) packages two even lattices of equal rank and
signature with a q-preserving isomorphism phi: A_Y -> A_X; the graph
{phi(a) + a} glues X + Y(-1) into an even unimodular overlattice.
Conversely, a primitive sublattice M of an even unimodular ambient lattice
yields the triple (M, M_perp(-1), phi(M)) read off from the quotient.

For definite rank-2 lattices the orthogonal groups are finite, so proper
equivalence of triples is decidable by finite search.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, prod

from . import intmat
from .errors import (
    DegenerateRestriction,
    GroupTooLarge,
    IndefiniteUnsupported,
    InvalidRescale,
    NotIsometry,
    NotPrimitive,
    NotUnimodular,
    SearchExhausted,
)
from .forms import BinaryForm, UnimodularMatrix, equivalent_sl

_DIAG_1_M1_U = UnimodularMatrix.of(1, 0, 0, -1)

__all__ = [
    "IntegralLattice",
    "DiscGroup",
    "DiscIsometry",
    "Triple",
    "GluedLattice",
    "u_gram",
    "lattice_from_form",
    "rescale",
    "discriminant",
    "disc_group",
    "isometries",
    "glue",
    "theta",
    "sigma_triple",
    "orth_group",
    "find_isometry",
    "induced_disc_isometry",
    "proper_equivalent",
    "hyperbolic_basis",
    "short_vector_fingerprint",
]

_ISOMETRY_BOUND = 10_000


@dataclass(frozen=True)
class IntegralLattice:
    """Even nondegenerate lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(n)):
            raise ValueError("lattice must be even (even diagonal)")
        if self.det == 0:
            raise ValueError("Gram matrix is degenerate")

    @classmethod
    def of(cls, rows) -> "IntegralLattice":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return intmat.det([list(r) for r in self.gram])

    @property
    def discriminant(self) -> int:
        return (-1) ** (self.rank - 1) * self.det

    def signature(self) -> tuple[int, int]:
        return intmat.inertia(self.gram)

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    @property
    def is_definite(self) -> bool:
        p, n = self.signature()
        return p == 0 or n == 0

    def rescale(self, r) -> "IntegralLattice":
        r = Fraction(r)
        scaled = [[r * x for x in row] for row in self.gram]
        if any(x.denominator != 1 for row in scaled for x in row) or \
           any(int(row[i]) % 2 for i, row in enumerate(scaled)):
            raise InvalidRescale(f"scale {r} does not keep the form even integral")
        return IntegralLattice.of([[int(x) for x in row] for row in scaled])

    def neg(self) -> "IntegralLattice":
        return self.rescale(-1)

    def direct_sum(self, other: "IntegralLattice") -> "IntegralLattice":
        n, m = self.rank, other.rank
        rows = [[self.gram[i][j] if i < n and j < n else
                 other.gram[i - n][j - n] if i >= n and j >= n else 0
                 for j in range(n + m)] for i in range(n + m)]
        return IntegralLattice.of(rows)

    def to_json(self):
        return [list(r) for r in self.gram]

    @classmethod
    def from_json(cls, data) -> "IntegralLattice":
        return cls.of(data)


def u_gram(n: int = 1) -> IntegralLattice:
    """Orthogonal sum of n hyperbolic planes [[0,1],[1,0]]."""
    rows = [[0] * 2 * n for _ in range(2 * n)]
    for i in range(n):
        rows[2 * i][2 * i + 1] = rows[2 * i + 1][2 * i] = 1
    return IntegralLattice.of(rows)


def lattice_from_form(f: BinaryForm) -> IntegralLattice:
    return IntegralLattice.of(f.matrix())


def _form_from_lattice(latt: IntegralLattice) -> BinaryForm:
    g = latt.gram
    return BinaryForm(g[0][0] // 2, g[0][1], g[1][1] // 2)


def rescale(latt: IntegralLattice, r) -> IntegralLattice:
    return latt.rescale(r)


def discriminant(latt: IntegralLattice) -> int:
    return latt.discriminant


# ---------------------------------------------------------------------------
# discriminant groups


@dataclass(frozen=True)
class DiscGroup:
    """Finite quadratic group A = L*/L with q: A -> Q/2Z and b: A -> Q/Z.

    Elements are coordinate tuples relative to generators of the invariant
    factors > 1; ``lifts`` are rational representatives in the basis of L.
    """

    gram: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]
    lifts: tuple[tuple[Fraction, ...], ...]
    q_gens: tuple[Fraction, ...]           # exact values on generator lifts
    b_gens: tuple[tuple[Fraction, ...], ...]
    _u: tuple[tuple[int, ...], ...] = field(repr=False)
    _snf_diag: tuple[int, ...] = field(repr=False)

    @property
    def order_total(self) -> int:
        return prod(self.orders) if self.orders else 1

    @property
    def is_trivial(self) -> bool:
        return not self.orders

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    def generator(self, i: int) -> tuple[int, ...]:
        return tuple(int(i == j) for j in range(len(self.orders)))

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.orders))

    def smul(self, k: int, a) -> tuple[int, ...]:
        return tuple((k * x) % d for x, d in zip(a, self.orders))

    def q_of(self, a) -> Fraction:
        """q(a) mod 2Z, as a Fraction in [0, 2)."""
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            total += a[i] * a[i] * self.q_gens[i]
            for j in range(i + 1, k):
                total += 2 * a[i] * a[j] * self.b_gens[i][j]
        return total % 2

    def b_of(self, a, b) -> Fraction:
        """b(a, b) mod Z, as a Fraction in [0, 1)."""
        total = Fraction(0)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                total += x * y * self.b_gens[i][j]
        return total % 1

    def element_order(self, a) -> int:
        out = 1
        for x, d in zip(a, self.orders):
            out = out * (d // gcd(x, d)) // gcd(out, d // gcd(x, d))
        return out

    def class_of_vector(self, vec) -> tuple[int, ...]:
        """Class of a dual vector given by rational coordinates in L's basis."""
        m = []
        for row in self.gram:
            s = sum(Fraction(x) * Fraction(v) for x, v in zip(row, vec))
            if s.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            m.append(int(s))
        y = intmat.mat_vec([list(r) for r in self._u], m)
        keep = [i for i, d in enumerate(self._snf_diag) if d > 1]
        return tuple(y[i] % self._snf_diag[i] for i in keep)

    def lift_of(self, a) -> tuple[Fraction, ...]:
        n = len(self.gram)
        out = [Fraction(0)] * n
        for coef, lift in zip(a, self.lifts):
            for i in range(n):
                out[i] += coef * lift[i]
        return tuple(out)


def disc_group(latt: IntegralLattice) -> DiscGroup:
    """Discriminant group from the Smith normal form of the Gram matrix."""
    g = [list(r) for r in latt.gram]
    n = len(g)
    s, u, _ = intmat.snf_with_transforms(g)
    for i in range(n):
        if s[i][i] < 0:
            s[i][i] = -s[i][i]
            u[i] = [-x for x in u[i]]
    diag = [s[i][i] for i in range(n)]
    uinv = intmat.invert_unimodular(u)
    ginv = intmat.frac_inverse([[Fraction(x) for x in row] for row in g])
    keep = [i for i, d in enumerate(diag) if d > 1]
    lifts = []
    for i in keep:
        col = [uinv[r][i] for r in range(n)]
        lifts.append(tuple(sum(ginv[r][t] * col[t] for t in range(n))
                           for r in range(n)))
    qs, bmat = [], []
    for w in lifts:
        qs.append(sum(wi * sum(Fraction(g[i][j]) * wj
                               for j, wj in enumerate(w))
                      for i, wi in enumerate(w)))
        row = []
        for w2 in lifts:
            row.append(sum(wi * sum(Fraction(g[i][j]) * w2j
                                    for j, w2j in enumerate(w2))
                           for i, wi in enumerate(w)))
        bmat.append(tuple(row))
    group = DiscGroup(latt.gram, tuple(diag[i] for i in keep), tuple(lifts),
                      tuple(qs), tuple(bmat),
                      tuple(tuple(r) for r in u), tuple(diag))
    assert group.order_total == abs(latt.det)
    return group


@dataclass(frozen=True)
class DiscIsometry:
    """Group isomorphism between discriminant groups preserving q.

    ``images[i]`` is the image of the i-th generator of ``domain`` in the
    generator coordinates of ``codomain``."""

    domain: DiscGroup
    codomain: DiscGroup
    images: tuple[tuple[int, ...], ...]

    def apply(self, a) -> tuple[int, ...]:
        out = self.codomain.zero()
        for coef, img in zip(a, self.images):
            out = self.codomain.add(out, self.codomain.smul(coef, img))
        return out

    def is_homomorphism(self) -> bool:
        return all(self.codomain.smul(d, img) == self.codomain.zero()
                   for d, img in zip(self.domain.orders, self.images))

    def is_bijective(self) -> bool:
        if self.domain.order_total != self.codomain.order_total:
            return False
        seen = {self.apply(a) for a in self.domain.elements()}
        return len(seen) == self.domain.order_total

    def is_q_preserving(self) -> bool:
        k = len(self.domain.orders)
        for i in range(k):
            gi = self.domain.generator(i)
            if self.codomain.q_of(self.images[i]) != self.domain.q_of(gi):
                return False
            for j in range(i + 1, k):
                gj = self.domain.generator(j)
                if self.codomain.b_of(self.images[i], self.images[j]) != \
                   self.domain.b_of(gi, gj):
                    return False
        return True

    def compose(self, other: "DiscIsometry") -> "DiscIsometry":
        """self o other (apply ``other`` first)."""
        imgs = tuple(self.apply(other.images[i])
                     for i in range(len(other.domain.orders)))
        return DiscIsometry(other.domain, self.codomain, imgs)

    def inverse(self) -> "DiscIsometry":
        table = {self.apply(a): a for a in self.domain.elements()}
        imgs = tuple(table[self.codomain.generator(i)]
                     for i in range(len(self.codomain.orders)))
        return DiscIsometry(self.codomain, self.domain, imgs)

    @classmethod
    def identity(cls, group: DiscGroup) -> "DiscIsometry":
        return cls(group, group,
                   tuple(group.generator(i) for i in range(len(group.orders))))

    def to_json(self):
        return [list(img) for img in self.images]


def isometries(a: DiscGroup, b: DiscGroup,
               bound: int = _ISOMETRY_BOUND) -> list[DiscIsometry]:
    """All q-preserving isomorphisms a -> b, by backtracking over images."""
    if a.order_total != b.order_total:
        return []
    if a.order_total > bound:
        raise GroupTooLarge(f"|A| = {a.order_total} exceeds bound {bound}")
    if a.is_trivial:
        return [DiscIsometry(a, b, ())]
    k = len(a.orders)
    gens = [a.generator(i) for i in range(k)]
    candidates = []
    for i in range(k):
        d = a.orders[i]
        qa = a.q_of(gens[i])
        cand = [y for y in b.elements()
                if b.smul(d, y) == b.zero() and b.q_of(y) == qa]
        candidates.append(cand)
    found = []

    def backtrack(i, chosen):
        if i == k:
            iso = DiscIsometry(a, b, tuple(chosen))
            if iso.is_bijective():
                found.append(iso)
            return
        for y in candidates[i]:
            if all(b.b_of(chosen[j], y) == a.b_of(gens[j], gens[i])
                   for j in range(i)):
                backtrack(i + 1, chosen + [y])

    backtrack(0, [])
    return found


# ---------------------------------------------------------------------------
# triples, gluing, and the sublattice correspondence


@dataclass(frozen=True)
class Triple:
    """(X, Y, phi) with phi: A_Y -> A_X a q-preserving isomorphism.

    Equivalently phi is an anti-isometry out of A_{Y(-1)}; this is the
    compatibility that makes the glue of X and Y(-1) even unimodular.
    """

    x: IntegralLattice
    y: IntegralLattice
    phi: DiscIsometry

    def __post_init__(self):
        if self.x.rank != self.y.rank:
            raise ValueError("lattices in a triple must have equal rank")
        if self.x.signature() != self.y.signature():
            raise ValueError("lattices in a triple must have equal signature")
        if self.phi.domain.gram != self.y.gram or \
           self.phi.codomain.gram != self.x.gram:
            raise NotIsometry("phi must map A_Y to A_X")
        if not (self.phi.is_homomorphism() and self.phi.is_bijective()
                and self.phi.is_q_preserving()):
            raise NotIsometry("phi is not a q-preserving isomorphism")

    def to_json(self):
        return {"X": self.x.to_json(), "Y": self.y.to_json(),
                "phi": self.phi.to_json()}

    @classmethod
    def from_json(cls, data) -> "Triple":
        x = IntegralLattice.from_json(data["X"])
        y = IntegralLattice.from_json(data["Y"])
        phi = DiscIsometry(disc_group(y), disc_group(x),
                           tuple(tuple(int(v) for v in img)
                                 for img in data["phi"]))
        return cls(x, y, phi)


def sigma_triple(t: Triple) -> Triple:
    """(X, Y, phi) -> (Y, X, phi^{-1})."""
    return Triple(t.y, t.x, t.phi.inverse())


@dataclass(frozen=True)
class GluedLattice:
    """Result of gluing: the overlattice, its rational basis inside
    X + Y(-1), and the glue index [Gamma : X + Y(-1)]."""

    lattice: IntegralLattice
    basis: tuple[tuple[Fraction, ...], ...]
    index: int

    def to_json(self):
        return {"gram": self.lattice.to_json(),
                "basis": [[str(v) for v in row] for row in self.basis],
                "index": self.index}


def glue(t: Triple) -> GluedLattice:
    """Even unimodular overlattice of X + Y(-1) glued along phi.

    Generated by X + Y(-1) together with the lifts phi(a) + a over the
    generators a of A_Y; the result has |det| = 1 and glue index |A_X|.
    """
    if not t.phi.is_q_preserving():
        raise NotIsometry("phi fails q-preservation")
    ax, ay = t.phi.codomain, t.phi.domain
    m = t.x.rank
    block = t.x.direct_sum(t.y.neg())
    rows = [[Fraction(int(i == j)) for j in range(2 * m)] for i in range(2 * m)]
    for i in range(len(ay.orders)):
        u = ax.lift_of(t.phi.images[i])
        w = ay.lift_of(ay.generator(i))
        rows.append(list(u) + list(w))
    den = 1
    for row in rows:
        for v in row:
            den = den * v.denominator // gcd(den, v.denominator)
    int_rows = [[int(v * den) for v in row] for row in rows]
    hnf = intmat.row_hnf(int_rows)
    assert len(hnf) == 2 * m
    basis = [[Fraction(v, den) for v in row] for row in hnf]
    bg = intmat.mat_mul(basis, [[Fraction(x) for x in row] for row in block.gram])
    gram = intmat.mat_mul(bg, intmat.transpose(basis))
    assert all(v.denominator == 1 for row in gram for v in row), \
        "glue vectors do not pair integrally"
    out = IntegralLattice.of([[int(v) for v in row] for row in gram])
    index = ax.order_total
    assert abs(out.det) == 1, f"glued lattice has |det| {abs(out.det)}"
    assert index * index == abs(block.det)
    return GluedLattice(out, tuple(tuple(r) for r in basis), index)


def theta(ambient: IntegralLattice, coords) -> Triple:
    """Triple (M, M_perp(-1), phi) of a primitive sublattice of an even
    unimodular ambient lattice, with phi read off from the glue group
    ambient / (M + M_perp)."""
    if not ambient.is_unimodular:
        raise NotUnimodular("ambient lattice must be unimodular")
    c = [[int(x) for x in row] for row in coords]
    n, k = ambient.rank, len(c)
    if not intmat.is_primitive_rows(c):
        raise NotPrimitive("coordinates do not span a primitive sublattice")
    g = [list(r) for r in ambient.gram]
    gx = intmat.mat_mul(intmat.mat_mul(c, g), intmat.transpose(c))
    if intmat.det(gx) == 0:
        raise DegenerateRestriction("form degenerates on the sublattice")
    dperp = intmat.integer_kernel(intmat.mat_mul(c, g))
    gperp = intmat.mat_mul(intmat.mat_mul(dperp, g), intmat.transpose(dperp))
    x = IntegralLattice.of(gx)
    y = IntegralLattice.of([[-v for v in row] for row in gperp])
    ax, ay = disc_group(x), disc_group(y)

    gxf = [[Fraction(v) for v in row] for row in gx]
    gpf = [[Fraction(v) for v in row] for row in gperp]

    def decompose(vec):
        gv = [sum(Fraction(g[i][j]) * vec[j] for j in range(n)) for i in range(n)]
        rx = [sum(gv[j] * c[i][j] for j in range(n)) for i in range(k)]
        ry = [sum(gv[j] * dperp[i][j] for j in range(n)) for i in range(n - k)]
        alpha = [row[0] for row in intmat.solve_matrix(gxf, [[v] for v in rx])]
        beta = [row[0] for row in intmat.solve_matrix(gpf, [[v] for v in ry])]
        recon = [sum(alpha[i] * c[i][j] for i in range(k)) +
                 sum(beta[i] * dperp[i][j] for i in range(n - k))
                 for j in range(n)]
        assert recon == [Fraction(v) for v in vec]
        return alpha, beta

    stacked = c + dperp
    gens = intmat.quotient_generators(stacked, n)
    pairs = []
    for vec, order in gens:
        alpha, beta = decompose(vec)
        pairs.append((ay.class_of_vector(beta), ax.class_of_vector(alpha),
                      order))
    table = {}
    for ks in itertools.product(*(range(o) for (_, _, o) in pairs)):
        ycl, xcl = ay.zero(), ax.zero()
        for kk, (yc, xc, _) in zip(ks, pairs):
            ycl = ay.add(ycl, ay.smul(kk, yc))
            xcl = ax.add(xcl, ax.smul(kk, xc))
        table[ycl] = xcl
    assert len(table) == ay.order_total, "glue group does not graph A_Y"
    images = tuple(table[ay.generator(i)] for i in range(len(ay.orders)))
    phi = DiscIsometry(ay, ax, images)
    return Triple(x, y, phi)


# ---------------------------------------------------------------------------
# finite orthogonal groups and proper equivalence (definite rank <= 2)


def _vectors_of_value(f: BinaryForm, target: int) -> list[tuple[int, int]]:
    """All integer (x, y) with f(x, y) = target, f positive definite."""
    d = -f.disc
    out = []
    if target < 0:
        return out
    xb = isqrt(4 * f.c * target // d) + 1
    yb = isqrt(4 * f.a * target // d) + 1
    for x in range(-xb, xb + 1):
        for y in range(-yb, yb + 1):
            if f.value(x, y) == target:
                out.append((x, y))
    return out


def orth_group(latt: IntegralLattice) -> list[tuple[tuple[int, ...], ...]]:
    """All isometries of a definite lattice of rank <= 2, as matrices.

    A matrix ((p, q), (r, s)) acts on coordinate columns; columns are the
    images of the basis vectors."""
    p, nn = latt.signature()
    if p and nn:
        raise IndefiniteUnsupported("orthogonal group enumeration needs a "
                                    "definite lattice")
    if latt.rank > 2:
        raise IndefiniteUnsupported("rank > 2 not supported")
    if latt.rank == 1:
        return [((1,),), ((-1,),)]
    f = _form_from_lattice(latt if p else latt.neg())
    cols1 = _vectors_of_value(f, f.a)
    cols2 = _vectors_of_value(f, f.c)
    out = []
    for v in cols1:
        for w in cols2:
            if 2 * f.a * v[0] * w[0] + f.b * (v[0] * w[1] + v[1] * w[0]) \
               + 2 * f.c * v[1] * w[1] == f.b:
                m = ((v[0], w[0]), (v[1], w[1]))
                if m[0][0] * m[1][1] - m[0][1] * m[1][0] in (1, -1):
                    out.append(m)
    return out


def find_isometry(l1: IntegralLattice, l2: IntegralLattice):
    """A matrix F with F^t G2 F = G1 (an isomorphism l1 -> l2 on coordinate
    columns), or None.  Rank <= 2."""
    if l1.rank != l2.rank:
        return None
    if l1.rank == 1:
        return ((1,),) if l1.gram == l2.gram else None
    f1, f2 = _form_from_lattice(l1), _form_from_lattice(l2)
    if f1.disc != f2.disc:
        return None
    h = equivalent_sl(f1, f2)
    if h is not None:
        hi = h.inverse()
        return hi.rows
    h = equivalent_sl(f1, f2.vee())
    if h is not None:
        hd = h * _DIAG_1_M1_U
        hi = hd.inverse()
        return hi.rows
    return None


def induced_disc_isometry(fmat, lfrom: IntegralLattice,
                          lto: IntegralLattice) -> DiscIsometry:
    """Discriminant-group isomorphism induced by a lattice isometry.

    ``fmat`` maps coordinate columns of lfrom to lto with
    fmat^t G_to fmat = G_from."""
    afrom, ato = disc_group(lfrom), disc_group(lto)
    k = lfrom.rank
    images = []
    for lift in afrom.lifts:
        img = [sum(Fraction(fmat[i][j]) * lift[j] for j in range(k))
               for i in range(k)]
        images.append(ato.class_of_vector(img))
    return DiscIsometry(afrom, ato, tuple(images))


def proper_equivalent(t1: Triple, t2: Triple) -> bool:
    """Proper equivalence of definite rank-2 triples.

    True iff there are isomorphisms f: X1 -> X2 and g: Y1 -> Y2 with
    phi2 = f* o phi1 o (g*)^{-1}; the search composes one isometry with the
    finite orthogonal groups."""
    for latt in (t1.x, t1.y, t2.x, t2.y):
        if latt.rank != 2:
            raise IndefiniteUnsupported("proper equivalence needs rank 2")
        p, n = latt.signature()
        if p and n:
            raise IndefiniteUnsupported("proper equivalence needs definite "
                                        "lattices")
    f0 = find_isometry(t1.x, t2.x)
    g0 = find_isometry(t1.y, t2.y)
    if f0 is None or g0 is None:
        return False
    phi2_images = t2.phi.images
    for u in orth_group(t2.x):
        fmat = intmat.mat_mul([list(r) for r in u], [list(r) for r in f0])
        fstar = induced_disc_isometry(fmat, t1.x, t2.x)
        for w in orth_group(t2.y):
            gmat = intmat.mat_mul([list(r) for r in w], [list(r) for r in g0])
            gstar = induced_disc_isometry(gmat, t1.y, t2.y)
            cand = fstar.compose(t1.phi).compose(gstar.inverse())
            if cand.images == phi2_images:
                return True
    return False


# ---------------------------------------------------------------------------
# recognizing sums of hyperbolic planes


def _greedy_reduce(gram):
    """Unimodular row operations shrinking Gram entries; returns (gram, T)
    with T G T^t = reduced gram.  Heuristic, but effective on lattices that
    are sums of hyperbolic planes."""
    n = len(gram)
    g = [list(r) for r in gram]
    t = intmat.identity(n)

    def weight(m):
        return sum(x * x for row in m for x in row)

    improved = True
    while improved:
        improved = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for step in (1, -1):
                    cand_t = [row[:] for row in t]
                    cand_t[i] = [a + step * b
                                 for a, b in zip(cand_t[i], cand_t[j])]
                    cand_g = [row[:] for row in g]
                    cand_g[i] = [a + step * b
                                 for a, b in zip(cand_g[i], cand_g[j])]
                    for row in cand_g:
                        row[i] += step * row[j]
                    if weight(cand_g) < weight(g):
                        g, t = cand_g, cand_t
                        improved = True
    return g, t


def _find_primitive_isotropic(gram, max_radius: int = 25):
    n = len(gram)
    if n == 2:
        # even unimodular rank 2 of signature (1, 1): the form
        # a x^2 + b xy + c y^2 has discriminant 1 and factors rationally
        a, b = gram[0][0] // 2, gram[0][1]
        if a == 0:
            return [1, 0]
        x, y = 1 - b, 2 * a
        g = gcd(abs(x), abs(y))
        return [x // g, y // g]
    for r in range(1, max_radius + 1):
        for vec in itertools.product(range(-r, r + 1), repeat=n):
            if max(abs(v) for v in vec) != r:
                continue
            if gcd(*[abs(v) for v in vec]) != 1:
                continue
            val = sum(vec[i] * gram[i][j] * vec[j]
                      for i in range(n) for j in range(n))
            if val == 0:
                return list(vec)
    raise SearchExhausted("no primitive isotropic vector in search box")


def hyperbolic_basis(latt: IntegralLattice):
    """Rows B with B G B^t equal to the Gram of u_gram(rank/2).

    Succeeds exactly when the even unimodular lattice splits into hyperbolic
    planes, e.g. always in signature (k, k)."""
    if not latt.is_unimodular:
        raise NotUnimodular("hyperbolic splitting needs a unimodular lattice")
    n = latt.rank
    if n == 0:
        return []
    if n % 2:
        raise ValueError("odd rank cannot split into hyperbolic planes")
    g, pre = _greedy_reduce(latt.gram)
    w0 = _find_primitive_isotropic(g)
    w = intmat.mat_vec(intmat.transpose(pre), w0)
    g = [list(r) for r in latt.gram]
    m = intmat.mat_vec(g, w)
    # unimodularity + primitivity make the pairing functional surjective
    z = _solve_unit_combination(m)
    zn = sum(z[i] * g[i][j] * z[j] for i in range(n) for j in range(n))
    z = [zi - (zn // 2) * wi for zi, wi in zip(z, w)]
    pair_rows = [w, z]
    ker = intmat.integer_kernel(intmat.mat_mul(pair_rows, g))
    sub_gram = intmat.mat_mul(intmat.mat_mul(ker, g), intmat.transpose(ker))
    rest = hyperbolic_basis(IntegralLattice.of(sub_gram))
    lifted = [intmat.mat_vec(intmat.transpose(ker), row) for row in rest] \
        if rest else []
    rows = [w, z] + lifted
    check = intmat.mat_mul(intmat.mat_mul(rows, g), intmat.transpose(rows))
    assert check == [list(r) for r in u_gram(n // 2).gram]
    return rows


def glue_theta_roundtrip(ambient: IntegralLattice, coords):
    """Glue of theta of a primitive sublattice, with the congruence witness.

    Returns (glued, t_rows) where t_rows is an integer unimodular matrix with
    t_rows @ G_ambient @ t_rows^t equal to the glued Gram: the glued lattice
    reproduces the ambient one exactly, by construction."""
    t = theta(ambient, coords)
    glued = glue(t)
    c = [[int(x) for x in row] for row in coords]
    g = [list(r) for r in ambient.gram]
    dperp = intmat.integer_kernel(intmat.mat_mul(c, g))
    stacked = c + dperp
    t_rows = []
    for brow in glued.basis:
        amb = [sum(b * Fraction(stacked[k][j]) for k, b in enumerate(brow))
               for j in range(ambient.rank)]
        assert all(v.denominator == 1 for v in amb)
        t_rows.append([int(v) for v in amb])
    check = intmat.mat_mul(intmat.mat_mul(t_rows, g), intmat.transpose(t_rows))
    assert check == [list(r) for r in glued.lattice.gram]
    assert abs(intmat.det(t_rows)) == 1
    return glued, t_rows


def _solve_unit_combination(m):
    """Integer x with <m, x> = 1 for a vector m with gcd 1."""
    n = len(m)
    g = 0
    coeffs = [0] * n
    for i, mi in enumerate(m):
        if mi == 0:
            continue
        if g == 0:
            g, coeffs[i] = abs(mi), (1 if mi > 0 else -1)
            continue
        # extended gcd of g and mi
        a, b = g, mi
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        coeffs = [x0 * cc for cc in coeffs]
        coeffs[i] = y0
        g = a
    assert g == 1, "functional is not surjective"
    return coeffs


def short_vector_fingerprint(latt: IntegralLattice, radius: int = 3):
    """Multiset of norms over the coefficient box [-radius, radius]^rank.

    Basis-dependent; agrees for two lattices expressed in corresponding
    bases (e.g. after a hyperbolic_basis transform)."""
    g = latt.gram
    n = latt.rank
    counts: dict[int, int] = {}
    for vec in itertools.product(range(-radius, radius + 1), repeat=n):
        val = sum(vec[i] * g[i][j] * vec[j] for i in range(n) for j in range(n))
        counts[val] = counts.get(val, 0) + 1
    return dict(sorted(counts.items()))
