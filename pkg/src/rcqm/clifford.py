"""Exact 4x4 complex-rational matrix algebra with antilinear bookkeeping.

Operators are (matrix, antilinear) pairs: the flag marks one factor of the
entrywise complex-conjugation operator sitting to the right of the matrix.
Composition therefore twists: (M1, c1) (M2, c2) = (M1 * conj_c1(M2), c1 ^ c2).
Operators that are antilinear on only a subspace (the involution connecting
the canonical and Foldy-Wouthuysen pictures) are sums of flagged terms,
modelled by BlockOperator. Everything here is exact rational arithmetic;
floating point never enters this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class Representation(Enum):
    PauliDirac = "pauli_dirac"
    QuantumMechanical = "quantum_mechanical"


class ComplexRational:
    """Gaussian rational a + b*i with Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRational is immutable")

    def __add__(self, other):
        other = _as_cr(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = _as_cr(other)
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = _as_cr(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def __eq__(self, other):
        other = _as_cr(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return float(self.re) + 1j * float(self.im)

    def __repr__(self):
        return f"ComplexRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return f"{self.re}+{self.im} i"


def _as_cr(x) -> ComplexRational:
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexRational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ComplexRational")


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I_UNIT = ComplexRational(0, 1)


@dataclass(frozen=True)
class MatrixOperator:
    """Square exact-rational matrix with a single antilinearity flag."""

    entries: tuple
    antilinear: bool = False

    @property
    def size(self) -> int:
        return len(self.entries)

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")


@dataclass(frozen=True)
class BlockOperator:
    """Sum of MatrixOperator terms; at most one linear and one antilinear."""

    terms: tuple

    @property
    def size(self) -> int:
        return self.terms[0].size


Operator = MatrixOperator | BlockOperator


def matrix(rows, antilinear=False) -> MatrixOperator:
    """Build a MatrixOperator from ints, Fractions, (re, im) pairs or CRs."""
    ent = []
    for row in rows:
        out = []
        for x in row:
            if isinstance(x, ComplexRational):
                out.append(x)
            elif isinstance(x, tuple):
                out.append(ComplexRational(*x))
            else:
                out.append(ComplexRational(x))
        ent.append(tuple(out))
    return MatrixOperator(tuple(ent), antilinear)


def identity(n=4) -> MatrixOperator:
    return matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zeros(n=4) -> MatrixOperator:
    return matrix([[0] * n for _ in range(n)])


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n))
        for i in range(n)
    )


def _mat_add(a, b):
    n = len(a)
    return tuple(tuple(a[i][j] + b[i][j] for j in range(n)) for i in range(n))


def _mat_conj(a):
    return tuple(tuple(x.conjugate() for x in row) for row in a)


def _mat_scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def _is_zero(a):
    return all(not x for row in a for x in row)


def _terms(op) -> tuple:
    if isinstance(op, BlockOperator):
        return op.terms
    return (op,)


def _normalize(terms, size) -> Operator:
    """Combine like-flag terms; return plain MatrixOperator when possible."""
    lin = zeros(size).entries
    anti = zeros(size).entries
    for t in terms:
        if t.antilinear:
            anti = _mat_add(anti, t.entries)
        else:
            lin = _mat_add(lin, t.entries)
    have_lin, have_anti = not _is_zero(lin), not _is_zero(anti)
    if have_lin and have_anti:
        return BlockOperator(
            (MatrixOperator(lin, False), MatrixOperator(anti, True))
        )
    if have_anti:
        return MatrixOperator(anti, True)
    return MatrixOperator(lin, False)


def compose(a: Operator, b: Operator) -> Operator:
    """Operator product a b with the antilinear twist on the right factor."""
    if a.size != b.size:
        raise ValueError("shape mismatch")
    out = []
    for ta in _terms(a):
        for tb in _terms(b):
            rhs = _mat_conj(tb.entries) if ta.antilinear else tb.entries
            out.append(
                MatrixOperator(_mat_mul(ta.entries, rhs), ta.antilinear ^ tb.antilinear)
            )
    return _normalize(out, a.size)


def add(a: Operator, b: Operator) -> Operator:
    if a.size != b.size:
        raise ValueError("shape mismatch")
    return _normalize(_terms(a) + _terms(b), a.size)


def scale(a: Operator, c) -> Operator:
    c = c if isinstance(c, ComplexRational) else ComplexRational(c)
    out = []
    for t in _terms(a):
        out.append(MatrixOperator(_mat_scale(t.entries, c), t.antilinear))
    return _normalize(out, a.size)


def neg(a: Operator) -> Operator:
    return scale(a, ComplexRational(-1))


def commutator(a: Operator, b: Operator) -> Operator:
    return add(compose(a, b), neg(compose(b, a)))


def anticommutator(a: Operator, b: Operator) -> Operator:
    return add(compose(a, b), compose(b, a))


def equal(a: Operator, b: Operator) -> bool:
    d = add(a, neg(b))
    return all(_is_zero(t.entries) for t in _terms(d))


def apply(op: Operator, vec) -> tuple:
    """Apply to an exact vector; antilinear terms conjugate the input first."""
    vec = tuple(_as_cr(x) if not isinstance(x, ComplexRational) else x for x in vec)
    if op.size != len(vec):
        raise ValueError("shape mismatch")
    out = [ZERO] * len(vec)
    for t in _terms(op):
        v = tuple(x.conjugate() for x in vec) if t.antilinear else vec
        for i, row in enumerate(t.entries):
            out[i] = out[i] + sum((row[j] * v[j] for j in range(len(v))), ZERO)
    return tuple(out)


def as_complex(op: MatrixOperator):
    """Entries as nested lists of python complex; flag must be resolved."""
    if isinstance(op, BlockOperator) or op.antilinear:
        raise ValueError("antilinear operator has no plain complex matrix")
    return [[complex(x) for x in row] for row in op.entries]


def dump_json(op: Operator) -> str:
    """Debug dump: terms as arrays of 'a/b+c/d i' strings."""
    payload = [
        {
            "antilinear": t.antilinear,
            "entries": [[f"{x.re}+{x.im} i" for x in row] for row in t.entries],
        }
        for t in _terms(op)
    ]
    return json.dumps(payload)


# ---------------------------------------------------------------------------
# constant matrices


def pauli(j: int) -> MatrixOperator:
    """Standalone 2x2 Pauli matrix, j in 1..3."""
    if j == 1:
        return matrix([[0, 1], [1, 0]])
    if j == 2:
        return matrix([[0, (0, -1)], [(0, 1), 0]])
    if j == 3:
        return matrix([[1, 0], [0, -1]])
    raise IndexError(f"pauli index {j} out of range 1..3")


def _embed(upper: MatrixOperator, lower: MatrixOperator) -> tuple:
    """4x4 entries from 2x2 diagonal blocks."""
    u, w = upper.entries, lower.entries
    z = ZERO
    return (
        (u[0][0], u[0][1], z, z),
        (u[1][0], u[1][1], z, z),
        (z, z, w[0][0], w[0][1]),
        (z, z, w[1][0], w[1][1]),
    )


def _offdiag(upper_right: MatrixOperator, lower_left: MatrixOperator) -> tuple:
    a, b = upper_right.entries, lower_left.entries
    z = ZERO
    return (
        (z, z, a[0][0], a[0][1]),
        (z, z, a[1][0], a[1][1]),
        (b[0][0], b[0][1], z, z),
        (b[1][0], b[1][1], z, z),
    )


def _gamma_pd(mu: int) -> MatrixOperator:
    i2 = identity(2)
    if mu == 0:
        return MatrixOperator(_embed(i2, scale(i2, -1)))
    if mu in (1, 2, 3):
        s = pauli(mu)
        return MatrixOperator(_offdiag(s, scale(s, -1)))
    if mu == 4:
        g = identity(4)
        for nu in (0, 1, 2, 3):
            g = compose(g, _gamma_pd(nu))
        return g
    raise IndexError(f"gamma index {mu} out of range 0..4")


def gamma(mu: int, rep: Representation) -> MatrixOperator:
    """Dirac matrix; the quantum-mechanical set carries conjugation factors."""
    if mu not in (0, 1, 2, 3, 4):
        raise IndexError(f"gamma index {mu} out of range 0..4")
    if rep is Representation.PauliDirac:
        return _gamma_pd(mu)
    g0 = _gamma_pd(0)
    if mu == 0:
        return g0
    if mu in (1, 3):
        return MatrixOperator(_gamma_pd(mu).entries, antilinear=True)
    # barred gamma 2 and 4 pick up an extra g0 factor
    return MatrixOperator(compose(g0, _gamma_pd(mu)).entries, antilinear=True)


def charge_sign() -> MatrixOperator:
    """Particle/antiparticle sign operator, -gamma^0 = diag(-1,-1,1,1)."""
    return neg(_gamma_pd(0))


def involution_v() -> BlockOperator:
    """Identity on the upper block, complex conjugation on the lower block."""
    z2 = zeros(2)
    i2 = identity(2)
    upper = MatrixOperator(_embed(i2, z2), False)
    lower = MatrixOperator(_embed(z2, i2), True)
    return BlockOperator((upper, lower))


def spin(rep: Representation) -> tuple:
    """Hermitian spin triple (s_23, s_31, s_12) for the doublet.

    Quantum-mechanical family: (1/2) blockdiag(sigma, -conj(sigma)), the
    flags of the conjugation factors cancelling into entrywise conjugation.
    Pauli-Dirac family: (i/4)[gamma^l, gamma^n] on cyclic (j l n).
    """
    if rep is Representation.QuantumMechanical:
        half = ComplexRational(Fraction(1, 2))
        out = []
        for j in (1, 2, 3):
            s = pauli(j)
            lower = scale(MatrixOperator(_mat_conj(s.entries)), -1)
            out.append(scale(MatrixOperator(_embed(s, lower)), half))
        return tuple(out)
    quarter_i = ComplexRational(0, Fraction(1, 4))
    cyc = {1: (2, 3), 2: (3, 1), 3: (1, 2)}
    out = []
    for j in (1, 2, 3):
        l, n = cyc[j]
        out.append(scale(commutator(_gamma_pd(l), _gamma_pd(n)), quarter_i))
    return tuple(out)


_METRIC5 = (1, -1, -1, -1, -1)  # gamma^4 := g0 g1 g2 g3 squares to -1


def verify_clifford(rep: Representation, gammas=None) -> list:
    """Check all 25 (anti)commutation pairs for indices 0..4 exactly.

    Returns the list of violating (mu, nu) pairs; empty on success. A
    custom gamma table may be injected (negative-control hook).
    """
    if gammas is None:
        gammas = [gamma(mu, rep) for mu in range(5)]
    bad = []
    for mu in range(5):
        for nu in range(5):
            want = zeros(4)
            if mu == nu:
                want = scale(identity(4), 2 * _METRIC5[mu])
            got = anticommutator(gammas[mu], gammas[nu])
            if not equal(got, want):
                bad.append((mu, nu))
    return bad
