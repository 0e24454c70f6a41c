"""The lattice of 2x2 integer matrices with quadratic form 2 det.

A matrix X pairs with Y by polarization of the determinant,
pairing(X, Y) = det(X+Y) - det X - det Y, so norm(X) = 2 det X and the
lattice is even unimodular of signature (2, 2).  For a pair of binary forms
P, Q of one discriminant, the solutions of

    X^t P = Q X^A        (X^A the adjugate)

form a rank-2 primitive sublattice; this module computes it two independent
ways (a closed-form basis after a concordant transform, and the saturated
integer kernel of the explicit 4x4 coefficient matrix), recovers the form
pair from a sublattice, and provides orthogonal complements and the left and
right SL(2, Z) actions.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import intmat
from .errors import DegenerateInput, NotSameDiscriminant
from .forms import BinaryForm, UnimodularMatrix, apply
from .gauss import make_concordant

__all__ = [
    "Mat2",
    "KernelMatrix",
    "PrimSub",
    "IDENTITY2",
    "DIAG_1_M1",
    "norm",
    "pairing",
    "transpose",
    "adjugate",
    "vee",
    "sigma",
    "xi",
    "lambda_kernel_matrix",
    "closed_form_basis",
    "lambda_sublattice",
    "gram",
    "perp",
    "act",
    "recover_forms",
    "is_primitive_sublattice",
    "box_solutions",
    "find_vector_of_norm",
    "u2_coordinates",
    "GAMMA_E_U2_GRAM",
]


@dataclass(frozen=True)
class Mat2:
    """2x2 integer matrix [[a11, a12], [a21, a22]], an element of the lattice."""

    a11: int
    a12: int
    a21: int
    a22: int

    @property
    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def norm(self) -> int:
        return 2 * self.det

    def flatten(self) -> tuple[int, int, int, int]:
        return (self.a11, self.a12, self.a21, self.a22)

    @classmethod
    def from_flat(cls, v) -> "Mat2":
        return cls(int(v[0]), int(v[1]), int(v[2]), int(v[3]))

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        return cls(int(rows[0][0]), int(rows[0][1]), int(rows[1][0]), int(rows[1][1]))

    def rows(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a11 + o.a11, self.a12 + o.a12,
                    self.a21 + o.a21, self.a22 + o.a22)

    def __sub__(self, o: "Mat2") -> "Mat2":
        return self + (-o)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a11, -self.a12, -self.a21, -self.a22)

    def __rmul__(self, k: int) -> "Mat2":
        return Mat2(k * self.a11, k * self.a12, k * self.a21, k * self.a22)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a11 * o.a11 + self.a12 * o.a21,
                    self.a11 * o.a12 + self.a12 * o.a22,
                    self.a21 * o.a11 + self.a22 * o.a21,
                    self.a21 * o.a12 + self.a22 * o.a22)

    def transpose(self) -> "Mat2":
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def adjugate(self) -> "Mat2":
        return Mat2(self.a22, -self.a12, -self.a21, self.a11)

    def vee(self) -> "Mat2":
        return Mat2(self.a11, -self.a12, -self.a21, self.a22)

    def sigma(self) -> "Mat2":
        return Mat2(self.a11, self.a12, -self.a21, -self.a22)

    def xi(self) -> "Mat2":
        return Mat2(self.a11, -self.a12, self.a21, -self.a22)

    @property
    def is_zero(self) -> bool:
        return self.flatten() == (0, 0, 0, 0)

    def to_json(self):
        return [[self.a11, self.a12], [self.a21, self.a22]]

    @classmethod
    def from_json(cls, data) -> "Mat2":
        return cls.from_rows(data)

    @classmethod
    def from_unimodular(cls, g: UnimodularMatrix) -> "Mat2":
        return cls.from_rows(g.rows)

    def __repr__(self):
        return f"[[{self.a11},{self.a12}],[{self.a21},{self.a22}]]"


IDENTITY2 = Mat2(1, 0, 0, 1)
DIAG_1_M1 = Mat2(1, 0, 0, -1)


def norm(x: Mat2) -> int:
    return x.norm


def pairing(x: Mat2, y: Mat2) -> int:
    """Polarization of det: det(X+Y) - det X - det Y."""
    return x.a11 * y.a22 + y.a11 * x.a22 - x.a12 * y.a21 - y.a12 * x.a21


def transpose(x: Mat2) -> Mat2:
    return x.transpose()


def adjugate(x: Mat2) -> Mat2:
    return x.adjugate()


def vee(x: Mat2) -> Mat2:
    return x.vee()


def sigma(x: Mat2) -> Mat2:
    return x.sigma()


def xi(x: Mat2) -> Mat2:
    """Right multiplication by diag(1, -1); an anti-isometry of the lattice."""
    return x.xi()


def _satisfies_lambda_equation(x: Mat2, p: BinaryForm, q: BinaryForm) -> bool:
    pm = Mat2.from_rows(p.matrix())
    qm = Mat2.from_rows(q.matrix())
    return (x.transpose() @ pm) == (qm @ x.adjugate())


@dataclass(frozen=True)
class KernelMatrix:
    """Coefficient matrix of the linear system X^t P - Q X^A = 0 in the
    flattened coordinates (a11, a12, a21, a22) of X.

    det = -(disc Q - disc P)^2; in particular the system has nonzero
    solutions exactly when the discriminants agree, and then the solution
    space has rank 2.
    """

    rows: tuple[tuple[int, int, int, int], ...]

    @property
    def det(self) -> int:
        return intmat.det([list(r) for r in self.rows])

    def rank(self) -> int:
        return 4 - len(intmat.integer_kernel([list(r) for r in self.rows]))


def lambda_kernel_matrix(p: BinaryForm, q: BinaryForm) -> KernelMatrix:
    """The 4x4 matrix of X^t P = Q X^A."""
    a, b, c = p.triple
    a2, b2, c2 = q.triple
    rows = ((2 * a, 0, b + b2, -2 * a2),
            (b - b2, 2 * a2, 2 * c, 0),
            (0, 2 * a, 2 * c2, b - b2),
            (-2 * c2, b + b2, 0, 2 * c))
    return KernelMatrix(rows)


@dataclass(frozen=True)
class PrimSub:
    """Rank-2 primitive sublattice of the matrix lattice, with ordered basis.

    The Gram form is basis-dependent (the lattice carries no preferred
    orientation); subgroup identity is tested with ``same_subgroup``.
    """

    x1: Mat2
    x2: Mat2

    def __post_init__(self):
        if not intmat.is_primitive_rows(self.coord_matrix()):
            raise DegenerateInput(
                f"({self.x1}, {self.x2}) is not a basis of a primitive "
                "rank-2 sublattice")
        if self.gram().disc == 0:
            raise DegenerateInput("restriction of the form is degenerate")

    def coord_matrix(self):
        return [list(self.x1.flatten()), list(self.x2.flatten())]

    def gram(self) -> BinaryForm:
        return BinaryForm(self.x1.det, pairing(self.x1, self.x2), self.x2.det)

    def subgroup_key(self):
        return intmat.row_hnf(self.coord_matrix())

    def same_subgroup(self, other: "PrimSub") -> bool:
        return self.subgroup_key() == other.subgroup_key()

    def coords_of(self, x: Mat2):
        """Integer coordinates (m, n) with m x1 + n x2 = x, or None."""
        v1, v2, w = self.x1.flatten(), self.x2.flatten(), x.flatten()
        cols = [(i, j) for i in range(4) for j in range(i + 1, 4)
                if v1[i] * v2[j] - v1[j] * v2[i] != 0]
        i, j = cols[0]
        d = v1[i] * v2[j] - v1[j] * v2[i]
        m = Fraction(w[i] * v2[j] - w[j] * v2[i], d)
        n = Fraction(v1[i] * w[j] - v1[j] * w[i], d)
        if m.denominator != 1 or n.denominator != 1:
            return None
        m, n = int(m), int(n)
        if all(m * a + n * b == c for a, b, c in zip(v1, v2, w)):
            return (m, n)
        return None

    def contains(self, x: Mat2) -> bool:
        return self.coords_of(x) is not None

    def map_basis(self, fn) -> "PrimSub":
        return PrimSub(fn(self.x1), fn(self.x2))

    def to_json(self):
        return {"basis": [self.x1.to_json(), self.x2.to_json()]}

    @classmethod
    def from_json(cls, data) -> "PrimSub":
        b1, b2 = data["basis"]
        return cls(Mat2.from_json(b1), Mat2.from_json(b2))


def is_primitive_sublattice(x1: Mat2, x2: Mat2) -> bool:
    """True iff (x1, x2) is a basis of a primitive rank-2 subgroup."""
    return intmat.is_primitive_rows(
        [list(x1.flatten()), list(x2.flatten())])


def closed_form_basis(p: BinaryForm, qv: BinaryForm) -> PrimSub:
    """Basis of the solution lattice for a concordant pair (P, Q^vee).

    With P = [a, b, c], Q^vee = [a', b, c'] concordant and
    lambda = gcd(content P, content Q), the solutions of X^t P = Q X^A are
    spanned by (1/lambda) [[a', -b], [0, a]] and [[0, -c/a'], [1, 0]].
    """
    lam = gcd(p.content, qv.content)
    a, b, c = p.triple
    a2 = qv.a
    assert a2 % lam == 0 and b % lam == 0 and a % lam == 0 and c % a2 == 0
    x1 = Mat2(a2 // lam, -b // lam, 0, a // lam)
    x2 = Mat2(0, -(c // a2), 1, 0)
    return PrimSub(x1, x2)


def _kernel_basis(p: BinaryForm, q: BinaryForm) -> list[Mat2]:
    m = lambda_kernel_matrix(p, q)
    ker = intmat.integer_kernel([list(r) for r in m.rows])
    return [Mat2.from_flat(v) for v in ker]


def lambda_sublattice(p: BinaryForm, q: BinaryForm) -> PrimSub:
    """The rank-2 primitive sublattice {X : X^t P = Q X^A}.

    Computed two independent ways and cross-checked: the closed-form basis of
    a concordant transform of (P, Q^vee) pulled back through the transforms,
    and the saturated integer kernel of the 4x4 coefficient matrix.  The
    returned basis is the pulled-back closed-form one.
    """
    if p.disc != q.disc:
        raise NotSameDiscriminant(
            f"disc {p.disc} != {q.disc}: solution space is zero")
    pair = make_concordant(p, q.vee())
    basis = closed_form_basis(pair.p, pair.q)
    g1 = Mat2.from_unimodular(pair.g1)
    g2 = Mat2.from_unimodular(pair.g2.vee().inverse())
    pulled = basis.map_basis(lambda x: (g1 @ x) @ g2)
    kernel = _kernel_basis(p, q)
    assert len(kernel) == 2
    check = PrimSub(kernel[0], kernel[1])
    assert pulled.same_subgroup(check), (
        f"closed-form route and kernel route disagree for ({p}, {q})")
    assert all(_satisfies_lambda_equation(x, p, q)
               for x in (pulled.x1, pulled.x2))
    return pulled


def gram(m: PrimSub) -> BinaryForm:
    """Gram form [det x1, pairing(x1, x2), det x2] of the stored basis."""
    return m.gram()


def perp(m: PrimSub) -> PrimSub:
    """Orthogonal complement in the matrix lattice, saturated."""
    # pairing(B, X) as a functional of flatten(X) has coefficient vector
    # flatten(adjugate(B)^t)
    rows = [list(m.x1.adjugate().transpose().flatten()),
            list(m.x2.adjugate().transpose().flatten())]
    ker = intmat.integer_kernel(rows)
    assert len(ker) == 2
    out = PrimSub(Mat2.from_flat(ker[0]), Mat2.from_flat(ker[1]))
    assert all(pairing(x, y) == 0
               for x in (m.x1, m.x2) for y in (out.x1, out.x2))
    return out


def xi_action(m: PrimSub) -> PrimSub:
    """The involution M -> perp(xi(M)) induced by the anti-isometry xi."""
    return perp(m.map_basis(xi))


def act(g1: UnimodularMatrix, g2: UnimodularMatrix, m: PrimSub) -> PrimSub:
    """Image of the sublattice under X -> g1 X g2^{-1} (proper g1, g2)."""
    if g1.det != 1 or g2.det != 1:
        raise ValueError("action requires proper unimodular matrices")
    a = Mat2.from_unimodular(g1)
    b = Mat2.from_unimodular(g2.inverse())
    return m.map_basis(lambda x: (a @ x) @ b)


def _frac_mat2(x: Mat2):
    return [[Fraction(x.a11), Fraction(x.a12)],
            [Fraction(x.a21), Fraction(x.a22)]]


def recover_forms(m: PrimSub) -> tuple[BinaryForm, BinaryForm]:
    """The coprime pair (P, Q) with m = lambda_sublattice(P, Q).

    Unique up to overall sign; normalized so the first nonzero coefficient of
    P is positive.  Procedure: for basis-reachable X1, X2 of nonzero norm, the
    symmetric part of the kernel of T -> A^t T A - (det A) T, A = X1 X2^{-1},
    pins P up to scale; Q = X1^t P X1 / det X1; scales are cleared to the
    coprime normalization.
    """
    combos = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))
    nonzero = [x for x in (mm * m.x1 + nn * m.x2 for mm, nn in combos)
               if x.det != 0]

    def independent(u: Mat2, v: Mat2) -> bool:
        a, b = u.flatten(), v.flatten()
        return any(a[i] * b[j] - a[j] * b[i] != 0
                   for i in range(4) for j in range(i + 1, 4))

    pair = next(((u, v) for i, u in enumerate(nonzero)
                 for v in nonzero[i + 1:] if independent(u, v)), None)
    if pair is None:
        raise DegenerateInput("no independent nonzero-norm vectors found")
    x1, x2 = pair
    a_mat = intmat.mat_mul(_frac_mat2(x1), intmat.frac_inverse(_frac_mat2(x2)))
    (a, b), (c, d) = a_mat
    sym = [[-2 * c, a - d], [a - d, 2 * b]]
    if all(v == 0 for row in sym for v in row):
        raise DegenerateInput("basis pair is rationally dependent")
    den = 1
    for row in sym:
        for v in row:
            den = den * v.denominator // gcd(den, v.denominator)
    s = [[int(v * den) for v in row] for row in sym]
    g = gcd(gcd(abs(s[0][0]), abs(s[0][1])), abs(s[1][1]))
    s = [[v // g for v in row] for row in s]
    if s[0][0] % 2 or s[1][1] % 2:
        s = [[2 * v for v in row] for row in s]
    p = BinaryForm(s[0][0] // 2, s[0][1], s[1][1] // 2)
    x1f = _frac_mat2(x1)
    q_mat = intmat.mat_mul(intmat.mat_mul(intmat.transpose(x1f),
                                          [[Fraction(v) for v in row]
                                           for row in p.matrix()]), x1f)
    dx1 = Fraction(x1.det)
    q_triple = (q_mat[0][0] / (2 * dx1), q_mat[0][1] / dx1,
                q_mat[1][1] / (2 * dx1))
    mu = 1
    for v in q_triple:
        mu = mu * v.denominator // gcd(mu, v.denominator)
    p = p.scale(mu)
    q = BinaryForm(*(int(v * mu) for v in q_triple))
    joint = gcd(p.content, q.content)
    p, q = p.divide(joint), q.divide(joint)
    lead = next(v for v in p.triple if v != 0)
    if lead < 0:
        p, q = -p, -q
    assert all(_satisfies_lambda_equation(x, p, q) for x in (m.x1, m.x2))
    return p, q


# ---------------------------------------------------------------------------
# brute-force oracles and the hyperbolic-plane identification


def box_solutions(p: BinaryForm, q: BinaryForm, bound: int) -> list[Mat2]:
    """All X with entries in [-bound, bound] solving X^t P = Q X^A.

    Independent of the lattice machinery: evaluates the four bilinear
    equations on the full coefficient box (vectorized)."""
    rows = lambda_kernel_matrix(p, q).rows
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    a11, a12, a21, a22 = np.meshgrid(r, r, r, r, indexing="ij", sparse=True)
    coords = (a11, a12, a21, a22)
    ok = np.ones((len(r),) * 4, dtype=bool)
    for row in rows:
        acc = sum(int(co) * x for co, x in zip(row, coords) if co != 0)
        ok &= (acc == 0) if not isinstance(acc, int) else (acc == 0)
    idx = np.argwhere(ok)
    return [Mat2(int(i[0]) - bound, int(i[1]) - bound,
                 int(i[2]) - bound, int(i[3]) - bound) for i in idx]


def find_vector_of_norm(m: PrimSub, target: int, bound: int = 40):
    """Search integer combinations of the basis for a vector of given norm."""
    for mm in range(-bound, bound + 1):
        for nn in range(-bound, bound + 1):
            x = mm * m.x1 + nn * m.x2
            if x.norm == target and not x.is_zero:
                return x
    return None


# The matrix lattice is isometric to two hyperbolic planes via the ordered
# basis (E11, E22, E12, -E21): the first two span a hyperbolic plane, as do
# the last two.
GAMMA_E_U2_GRAM = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))


def u2_coordinates(x: Mat2) -> tuple[int, int, int, int]:
    """Coordinates of a matrix in the hyperbolic basis (E11, E22, E12, -E21)."""
    return (x.a11, x.a22, x.a12, -x.a21)
