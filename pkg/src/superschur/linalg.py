"""Exact Z_2-graded sparse linear algebra.

Everything is computed over an exact field: arbitrary-precision rationals
(``QQ``) or a prime field (``GF(p)``).  No floating point appears anywhere.

Conventions
-----------
* A super space of dimension (m|k) has basis indices 0..m+k-1, the first m
  even and the last k odd.
* Operators use the column convention: ``f[(r, c)]`` is the coefficient of
  basis vector ``r`` in the image of basis vector ``c``.
* A homogeneous operator of parity ``p`` satisfies
  ``parity(r) + parity(c) = p (mod 2)`` on every nonzero entry.
* Tensor products of homogeneous operators follow the Koszul rule
  ``(f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w)``.

Elimination is fraction-free over the rationals (rows are kept as primitive
integer vectors) and plain modular arithmetic over GF(p).  Pivoting is by
smallest column index, so all results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import itertools


class ParityError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class InternalCheckError(RuntimeError):
    """Raised when a redundant internal cross-check fails (never a user error)."""


# ---------------------------------------------------------------------------
# fields


class Rationals:
    char = 0
    name = "Q"

    def of(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def pow(self, a, n):
        return a ** n

    def to_json(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, min(p, 1 + int(p ** 0.5) + 1))):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            d = x.denominator % self.p
            if d == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return (x.numerator % self.p) * pow(d, self.p - 2, self.p) % self.p
        if isinstance(x, str):
            return self.of(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def pow(self, a, n):
        return pow(a, n, self.p)

    def to_json(self, a):
        return int(a)

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()

_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


#: default screening prime, a 30-bit prime
SCREEN_PRIME = 1073741789


# ---------------------------------------------------------------------------
# index spaces


@dataclass(frozen=True)
class SuperSpace:
    """Graded space of dimension (m|k): indices 0..m-1 even, m..m+k-1 odd."""

    m: int
    k: int

    @property
    def dim(self):
        return self.m + self.k

    def parity(self, i: int) -> int:
        return 0 if i < self.m else 1

    @property
    def sdim(self) -> int:
        return self.m - self.k

    def __repr__(self):
        return f"({self.m}|{self.k})"


class TensorSpace:
    """Tensor product of super spaces, each factor plain or dual.

    Flat indices use row-major (first factor slowest) mixed-radix encoding.
    Dual factors keep the parity of the underlying space.
    """

    __slots__ = ("factors", "dims", "dim", "_strides", "_partable")

    def __init__(self, factors):
        self.factors = tuple(factors)  # (SuperSpace, is_dual)
        self.dims = tuple(v.dim for v, _ in self.factors)
        dim = 1
        strides = []
        for d in reversed(self.dims):
            strides.append(dim)
            dim *= d
        self._strides = tuple(reversed(strides))
        self.dim = dim
        self._partable = None

    @property
    def parity_table(self) -> bytearray:
        if self._partable is None:
            table = bytearray(1)
            for space, _ in self.factors:
                blk = bytes(space.parity(i) for i in range(space.dim))
                table = bytearray((a + b) & 1 for a in table for b in blk)
            self._partable = table
        return self._partable

    def parity(self, flat: int) -> int:
        return self.parity_table[flat]

    def encode(self, idx) -> int:
        return sum(i * s for i, s in zip(idx, self._strides))

    def decode(self, flat: int):
        out = []
        for d, s in zip(self.dims, self._strides):
            out.append((flat // s) % d)
        return tuple(out)

    def tensor(self, other: "TensorSpace") -> "TensorSpace":
        return TensorSpace(self.factors + other.factors)

    def __eq__(self, other):
        return isinstance(other, TensorSpace) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "*".join(("{}^".format(v) if dual else str(v)) for v, dual in self.factors) or "k"


def space(V: SuperSpace, dual: bool = False) -> TensorSpace:
    return TensorSpace(((V, dual),))


def power(V: SuperSpace, r: int, dual: bool = False) -> TensorSpace:
    return TensorSpace(((V, dual),) * r)


UNIT_SPACE = TensorSpace(())


class SumSpace:
    """Direct sum of index spaces; flat indices are block offsets plus inner."""

    __slots__ = ("blocks", "offsets", "dim")

    def __init__(self, blocks):
        self.blocks = tuple(blocks)
        self.offsets = []
        d = 0
        for b in self.blocks:
            self.offsets.append(d)
            d += b.dim
        self.dim = d

    def parity(self, flat: int) -> int:
        for off, b in zip(reversed(self.offsets), reversed(self.blocks)):
            if flat >= off:
                return b.parity(flat - off)
        raise IndexError(flat)

    def block_of(self, flat: int):
        for i in range(len(self.blocks) - 1, -1, -1):
            if flat >= self.offsets[i]:
                return i, flat - self.offsets[i]
        raise IndexError(flat)

    def __eq__(self, other):
        return isinstance(other, SumSpace) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return " + ".join(map(repr, self.blocks))


class FlatSpace:
    """Ungraded index space (everything declared even); used by module theory."""

    __slots__ = ("dim",)

    def __init__(self, dim: int):
        self.dim = dim

    def parity(self, flat: int) -> int:
        return 0

    def __eq__(self, other):
        return isinstance(other, FlatSpace) and self.dim == other.dim

    def __hash__(self):
        return hash(("flat", self.dim))

    def __repr__(self):
        return f"k^{self.dim}"


# ---------------------------------------------------------------------------
# bilinear forms


class BilinearForm:
    """Non-degenerate gamma-symmetric bilinear form on a super space.

    gamma-symmetry: g[j][i] = (-1)^{[i][j]} g[i][j].  An even form pairs only
    equal parities, an odd form only opposite parities (forcing m = k).
    """

    def __init__(self, space: SuperSpace, gram, parity: str, field=QQ):
        if parity not in ("even", "odd"):
            raise ValueError(parity)
        self.space = space
        self.field = field
        self.gram = tuple(tuple(field.of(x) for x in row) for row in gram)
        self.parity = parity
        self._check()

    @property
    def parity_bit(self) -> int:
        return 0 if self.parity == "even" else 1

    def _check(self):
        n = self.space.dim
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ShapeError("gram matrix size mismatch")
        f, sp, g = self.field, self.space, self.gram
        for i in range(n):
            for j in range(n):
                sign = -1 if (sp.parity(i) and sp.parity(j)) else 1
                if g[j][i] != f.mul(f.of(sign), g[i][j]):
                    raise ValueError("form is not gamma-symmetric")
                if (sp.parity(i) + sp.parity(j)) % 2 != self.parity_bit and not f.is_zero(g[i][j]):
                    raise ParityError("entry violates the declared form parity")
        if self.parity == "odd" and sp.m != sp.k:
            raise ParityError("odd form requires equal even and odd dimensions")
        if _dense_rank(self.gram, f) != n:
            raise ValueError("form is degenerate")

    def inverse_gram(self):
        return _dense_inverse(self.gram, self.field)


def _dense_rank(rows, field):
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if not field.is_zero(mat[r][c])), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][c])
        mat[rank] = [field.mul(inv, x) for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and not field.is_zero(mat[r][c]):
                coef = mat[r][c]
                mat[r] = [field.sub(x, field.mul(coef, y)) for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def _dense_inverse(rows, field):
    n = len(rows)
    mat = [list(r) + [field.one if i == j else field.zero for j in range(n)]
           for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not field.is_zero(mat[r][c])), None)
        if piv is None:
            raise ValueError("matrix not invertible")
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = field.inv(mat[c][c])
        mat[c] = [field.mul(inv, x) for x in mat[c]]
        for r in range(n):
            if r != c and not field.is_zero(mat[r][c]):
                coef = mat[r][c]
                mat[r] = [field.sub(x, field.mul(coef, y)) for x, y in zip(mat[r], mat[c])]
    return tuple(tuple(row[n:]) for row in mat)


def standard_form(kind: str, *, m: int = 0, n2: int = 0, n: int = 0, field=QQ):
    """Standard forms: even(m, 2n) is identity + symplectic, odd(n) swaps blocks.

    Returns (SuperSpace, BilinearForm).
    """
    one, zero = field.one, field.zero
    if kind == "even":
        if n2 % 2:
            raise ValueError("odd part of an even form must have even dimension")
        half = n2 // 2
        V = SuperSpace(m, n2)
        d = V.dim
        gram = [[zero] * d for _ in range(d)]
        for i in range(m):
            gram[i][i] = one
        for i in range(half):
            gram[m + i][m + half + i] = one
            gram[m + half + i][m + i] = field.neg(one)
        return V, BilinearForm(V, gram, "even", field)
    if kind == "odd":
        V = SuperSpace(n, n)
        d = V.dim
        gram = [[zero] * d for _ in range(d)]
        for i in range(n):
            gram[i][n + i] = one
            gram[n + i][i] = one
        return V, BilinearForm(V, gram, "odd", field)
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# sparse operators


class SparseOperator:
    """Sparse linear map between index spaces, entries keyed by (row, col).

    ``parity`` is 0 or 1 for homogeneous operators (checked against the index
    parities) and None for inhomogeneous ones, which are kept as formal sums.
    """

    __slots__ = ("dom", "cod", "entries", "field", "parity")

    def __init__(self, dom, cod, entries, field=QQ, parity=None, check=True):
        self.dom = dom
        self.cod = cod
        self.field = field
        self.entries = {k: v for k, v in entries.items() if not field.is_zero(v)}
        self.parity = parity
        if check and parity is not None:
            for (r, c) in self.entries:
                if (cod.parity(r) + dom.parity(c)) % 2 != parity:
                    raise ParityError(
                        f"entry ({r},{c}) breaks homogeneity of parity {parity}")

    # -- constructors
    @classmethod
    def identity(cls, sp, field=QQ):
        return cls(sp, sp, {(i, i): field.one for i in range(sp.dim)}, field, parity=0, check=False)

    @classmethod
    def zero(cls, dom, cod, field=QQ, parity=0):
        return cls(dom, cod, {}, field, parity=parity, check=False)

    # -- basic algebra
    def __add__(self, other):
        self._same_shape(other)
        f = self.field
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = f.add(ent.get(k, f.zero), v)
        par = self.parity if self.parity == other.parity else None
        if not self.entries:
            par = other.parity
        elif not other.entries:
            par = self.parity
        return SparseOperator(self.dom, self.cod, ent, f, parity=par, check=False)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def scale(self, a):
        f = self.field
        a = f.of(a)
        return SparseOperator(self.dom, self.cod,
                              {k: f.mul(a, v) for k, v in self.entries.items()},
                              f, parity=self.parity, check=False)

    def __neg__(self):
        return self.scale(-1)

    def __matmul__(self, other):
        """Composition self after other."""
        if self.dom != other.cod:
            raise ShapeError(f"cannot compose: {self.dom} != {other.cod}")
        f = self.field
        by_col: dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        ent: dict[tuple, object] = {}
        for (k, c), v in other.entries.items():
            for r, w in by_col.get(k, ()):
                key = (r, c)
                ent[key] = f.add(ent.get(key, f.zero), f.mul(w, v))
        par = None
        if self.parity is not None and other.parity is not None:
            par = (self.parity + other.parity) % 2
        return SparseOperator(other.dom, self.cod, ent, f, parity=par, check=False)

    def _same_shape(self, other):
        if self.dom != other.dom or self.cod != other.cod:
            raise ShapeError("operator shapes differ")

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, SparseOperator) and self.dom == other.dom
                and self.cod == other.cod and self.entries == other.entries)

    def __hash__(self):
        raise TypeError("SparseOperator is not hashable")

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse column vector {index: scalar}."""
        f = self.field
        out: dict[int, object] = {}
        by_col: dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        for c, a in vec.items():
            for r, v in by_col.get(c, ()):
                out[r] = f.add(out.get(r, f.zero), f.mul(v, a))
        return {k: v for k, v in out.items() if not f.is_zero(v)}

    def rows(self) -> dict[int, dict[int, object]]:
        out: dict[int, dict[int, object]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(r, {})[c] = v
        return out

    def transpose(self) -> "SparseOperator":
        """Plain (ungraded) transpose; used by module-theoretic duality."""
        return SparseOperator(self.cod, self.dom,
                              {(c, r): v for (r, c), v in self.entries.items()},
                              self.field, parity=self.parity, check=False)

    def parity_split(self):
        """Split into (even, odd) homogeneous parts."""
        ev, od = {}, {}
        for (r, c), v in self.entries.items():
            if (self.cod.parity(r) + self.dom.parity(c)) % 2 == 0:
                ev[(r, c)] = v
            else:
                od[(r, c)] = v
        return (SparseOperator(self.dom, self.cod, ev, self.field, parity=0, check=False),
                SparseOperator(self.dom, self.cod, od, self.field, parity=1, check=False))

    def supercommutator(self, other) -> "SparseOperator":
        """[self, other] = self other - (-1)^{|self||other|} other self."""
        if self.parity is None or other.parity is None:
            raise ParityError("supercommutator needs homogeneous operators")
        sign = -1 if (self.parity and other.parity) else 1
        return (self @ other) - (other @ self).scale(sign)

    def nnz(self):
        return len(self.entries)

    def __repr__(self):
        return f"<op {self.dom}->{self.cod} nnz={len(self.entries)} parity={self.parity}>"


def tensor_operator(f: SparseOperator, g: SparseOperator) -> SparseOperator:
    """Koszul-signed tensor product of homogeneous operators."""
    if f.parity is None or g.parity is None:
        raise ParityError("tensor product requires homogeneous operators")
    if f.field is not g.field:
        raise ShapeError("operators over different fields")
    fld = f.field
    dom = f.dom.tensor(g.dom)
    cod = f.cod.tensor(g.cod)
    gd, gc = g.dom.dim, g.cod.dim
    ent = {}
    neg = fld.neg
    for (r1, c1), v1 in f.entries.items():
        sgn = g.parity and f.dom.parity(c1)
        for (r2, c2), v2 in g.entries.items():
            val = fld.mul(v1, v2)
            ent[(r1 * gc + r2, c1 * gd + c2)] = neg(val) if sgn else val
    return SparseOperator(dom, cod, ent, fld,
                          parity=(f.parity + g.parity) % 2, check=False)


def braiding_operator(V: SuperSpace, W: SuperSpace, field=QQ) -> SparseOperator:
    """gamma_{V,W}: v (x) w -> (-1)^{|v||w|} w (x) v."""
    dom = TensorSpace(((V, False), (W, False)))
    cod = TensorSpace(((W, False), (V, False)))
    one, mone = field.one, field.neg(field.one)
    ent = {}
    for i in range(V.dim):
        pi = V.parity(i)
        for j in range(W.dim):
            sgn = pi and W.parity(j)
            ent[(j * V.dim + i, i * W.dim + j)] = mone if sgn else one
    return SparseOperator(dom, cod, ent, field, parity=0, check=False)


def permutation_operator(sp: TensorSpace, perm, field=QQ) -> SparseOperator:
    """Signed permutation operator sending slot i of the domain to slot perm[i].

    The sign on a basis tensor is the Koszul sign of reordering its factors:
    (-1) for every pair of odd factors whose order is reversed.
    """
    n = len(sp.factors)
    if sorted(perm) != list(range(n)):
        raise ShapeError("not a permutation")
    cod = TensorSpace(tuple(sp.factors[i] for i in _inverse_perm(perm)))
    ent = {}
    one = field.one
    for flat in range(sp.dim):
        idx = sp.decode(flat)
        pars = [sp.factors[i][0].parity(idx[i]) for i in range(n)]
        sign = 1
        for a in range(n):
            if not pars[a]:
                continue
            for b in range(a + 1, n):
                if pars[b] and perm[a] > perm[b]:
                    sign = -sign
        tgt = [0] * n
        for i in range(n):
            tgt[perm[i]] = idx[i]
        ent[(cod.encode(tgt), flat)] = one if sign == 1 else field.neg(one)
    return SparseOperator(sp, cod, ent, field, parity=0, check=False)


def _inverse_perm(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


# ---------------------------------------------------------------------------
# elimination

class Eliminator:
    """Incremental sparse row echelon with deterministic min-column pivoting.

    Over Q the rows are stored as primitive integer vectors and combined
    fraction-free; over GF(p) rows are normalised to leading coefficient 1.
    """

    def __init__(self, field=QQ):
        self.field = field
        self.modp = isinstance(field, PrimeField)
        self.pivots: dict[int, dict[int, int]] = {}
        self.rank = 0

    def _intify(self, row: dict) -> dict[int, int]:
        if self.modp:
            p = self.field.p
            return {c: v % p for c, v in row.items() if v % p}
        lcm = 1
        for v in row.values():
            if not isinstance(v, Fraction):
                v = Fraction(v)
            d = v.denominator
            lcm = lcm // gcd(lcm, d) * d
        out = {}
        for c, v in row.items():
            v = Fraction(v) if not isinstance(v, Fraction) else v
            n = v.numerator * (lcm // v.denominator)
            if n:
                out[c] = n
        return out

    @staticmethod
    def _primitive(row: dict[int, int], lead: int) -> dict[int, int]:
        g = 0
        for v in row.values():
            g = gcd(g, v)
            if g == 1:
                break
        if row[lead] < 0:
            g = -g
        if g not in (0, 1):
            return {c: v // g for c, v in row.items()}
        return row

    def insert(self, row: dict) -> int | None:
        """Reduce a row against the pivots; returns new pivot column or None."""
        row = self._intify(row)
        if self.modp:
            p = self.field.p
            while row:
                c = min(row)
                piv = self.pivots.get(c)
                if piv is None:
                    inv = pow(row[c], p - 2, p)
                    row = {k: v * inv % p for k, v in row.items()}
                    self.pivots[c] = row
                    self.rank += 1
                    return c
                coef = row[c]
                for k, v in piv.items():
                    w = (row.get(k, 0) - coef * v) % p
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
            return None
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                row = self._primitive(row, c)
                self.pivots[c] = row
                self.rank += 1
                return c
            a, b = piv[c], row[c]
            new = {}
            for k, v in row.items():
                new[k] = a * v
            for k, v in piv.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            row = new
        return None

    def reduce_vector(self, row: dict) -> dict:
        """Return the residue of a vector modulo the current row span (over Q:
        up to scaling, which is enough for membership tests)."""
        row = self._intify(row)
        if self.modp:
            p = self.field.p
            while row:
                c = min(row)
                piv = self.pivots.get(c)
                if piv is None:
                    break
                coef = row[c]
                for k, v in piv.items():
                    w = (row.get(k, 0) - coef * v) % p
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
            return row
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                break
            a, b = piv[c], row[c]
            new = {k: a * v for k, v in row.items()}
            for k, v in piv.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            row = new
        return row

    def contains(self, row: dict) -> bool:
        return not self.reduce_vector(row)

    def kernel_vectors(self, ncols: int, columns=None) -> list[dict]:
        """Kernel of the stacked row matrix, one vector per free column.

        ``columns`` may list the active column labels (default ``range(ncols)``).
        Vectors are returned over the field, keyed by column label, in
        increasing free-column order.
        """
        cols = list(columns) if columns is not None else list(range(ncols))
        f = self.field
        piv_cols = sorted(self.pivots, reverse=True)
        out = []
        for free in cols:
            if free in self.pivots:
                continue
            vec = {free: f.one}
            for c in piv_cols:
                if c >= free:
                    continue
                row = self.pivots[c]
                s = f.zero
                for k, v in row.items():
                    if k != c and k in vec:
                        s = f.add(s, f.mul(f.of(v), vec[k]))
                if not f.is_zero(s):
                    vec[c] = f.neg(f.mul(s, f.inv(f.of(row[c]))))
            out.append(vec)
        return out


def kernel_basis(ops, *, dom=None, field=None, screen_prime=None) -> list[dict]:
    """Exact basis of the joint kernel of operators sharing a domain.

    Returns sparse column vectors {index: scalar}.  With ``screen_prime`` set
    (rationals only), the rank is first computed modulo that prime and the two
    ranks are compared; a mismatch raises InternalCheckError.
    """
    ops = list(ops)
    if ops:
        dom = ops[0].dom
        field = ops[0].field
        for op in ops[1:]:
            if op.dom != dom:
                raise ShapeError("operators do not share a column space")
    elif dom is None or field is None:
        raise ShapeError("empty operator list needs explicit dom and field")

    def rows():
        for op in ops:
            for r, row in sorted(op.rows().items()):
                yield row

    elim = Eliminator(field)
    for row in rows():
        elim.insert(row)
    if screen_prime is not None and not isinstance(field, PrimeField):
        gfp = GF(screen_prime)
        selim = Eliminator(gfp)
        for row in rows():
            selim.insert({c: gfp.of(v) for c, v in row.items()})
        if selim.rank != elim.rank:
            raise InternalCheckError(
                f"screened rank {selim.rank} != exact rank {elim.rank}")
    return elim.kernel_vectors(dom.dim)


def rank_of_rows(rows, field) -> int:
    elim = Eliminator(field)
    for row in rows:
        elim.insert(row)
    return elim.rank


def operator_rank(op: SparseOperator) -> int:
    return rank_of_rows(op.rows().values(), op.field)


# ---------------------------------------------------------------------------
# operator span / subalgebra closure


def _flatten(op: SparseOperator, dim: int) -> dict[int, object]:
    return {r * dim + c: v for (r, c), v in op.entries.items()}


class OperatorSpan:
    """Echelonised span of operators on a common space."""

    def __init__(self, sp, field):
        self.space = sp
        self.field = field
        self.elim = Eliminator(field)
        self.basis: list[SparseOperator] = []

    def add(self, op: SparseOperator) -> bool:
        if self.elim.insert(_flatten(op, self.space.dim)) is not None:
            self.basis.append(op)
            return True
        return False

    def contains(self, op: SparseOperator) -> bool:
        return self.elim.contains(_flatten(op, self.space.dim))

    @property
    def dim(self):
        return len(self.basis)


def generated_subalgebra(gens, *, sp=None, field=None) -> list[SparseOperator]:
    """Basis of the smallest unital operator algebra containing ``gens``.

    Closure by left multiplication with the generators, which reaches every
    word; deterministic FIFO order.
    """
    gens = list(gens)
    if gens:
        sp = gens[0].dom
        field = gens[0].field
    elif sp is None or field is None:
        raise ShapeError("empty generator list needs explicit space and field")
    for g in gens:
        if g.dom != sp or g.cod != sp:
            raise ShapeError("generators must be square on a common space")
    span = OperatorSpan(sp, field)
    span.add(SparseOperator.identity(sp, field))
    queue = [op for op in gens if span.add(op)]
    while queue:
        w = queue.pop(0)
        for g in gens:
            prod = g @ w
            if span.add(prod):
                queue.append(prod)
    return span.basis
