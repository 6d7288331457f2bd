"""Classical matrix Lie superalgebras and their tensor actions.

gl(V) is spanned by matrix units; osp(V) and pe(V) are carved out of gl(V)
by solving the linear form-invariance system

    <X v, w> + (-1)^{|X||v|} <v, X w> = 0

for an even resp. odd form, and q(V) by supercommutation with a fixed odd
involution.  All bases are homogeneous, echelonised and deterministic.

Tensor powers carry the super-Leibniz action: X acts in each slot with a
Koszul sign (-1)^{|X| * (parity left of the slot)}.  Dual slots carry the
negative super-transpose, the unique convention under which the evaluation
W (x) V -> k is invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
import itertools

from .linalg import (QQ, SuperSpace, BilinearForm, TensorSpace, SparseOperator,
                     Eliminator, ParityError, ShapeError, space, power, UNIT_SPACE)


@dataclass
class MatrixSuperLieAlgebra:
    kind: str
    space: SuperSpace
    basis: list
    field: object
    form: BilinearForm | None = None
    q: SparseOperator | None = None

    @property
    def dim(self):
        return len(self.basis)


@dataclass
class ComponentExtras:
    """Finite component representatives: the even-part reflection sigma and
    the parity point g = diag((-1)^{[i]})."""
    sigma: SparseOperator | None
    parity_element: SparseOperator | None
    flags: list = dfield(default_factory=list)


def standard_odd_involution(n: int, field=QQ) -> SparseOperator:
    """q(e_i) = e_{i+n}, q(e_{n+i}) = e_i on (n|n); odd, squares to id."""
    V = SuperSpace(n, n)
    sp = space(V)
    ent = {}
    for i in range(n):
        ent[(n + i, i)] = field.one
        ent[(i, n + i)] = field.one
    return SparseOperator(sp, sp, ent, field, parity=1)


def _matrix_units(V: SuperSpace, field):
    sp = space(V)
    out = []
    for a in range(V.dim):
        for b in range(V.dim):
            par = (V.parity(a) + V.parity(b)) % 2
            out.append(SparseOperator(sp, sp, {(a, b): field.one}, field, parity=par))
    return out


def _solve_entry_system(V, field, parity, equation_rows):
    """Solve a linear system on matrix entries of fixed operator parity.

    ``equation_rows`` yields dicts keyed by entry index a*dim+b.  Returns the
    solution basis as homogeneous operators, deterministic order.
    """
    d = V.dim
    sector = [a * d + b for a in range(d) for b in range(d)
              if (V.parity(a) + V.parity(b)) % 2 == parity]
    elim = Eliminator(field)
    for row in equation_rows:
        elim.insert(row)
    sp = space(V)
    ops = []
    for vec in elim.kernel_vectors(d * d, columns=sector):
        ent = {(k // d, k % d): v for k, v in vec.items()}
        ops.append(SparseOperator(sp, sp, ent, field, parity=parity))
    return ops


def lie_basis(kind: str, V: SuperSpace, form: BilinearForm | None = None,
              q: SparseOperator | None = None, field=QQ) -> MatrixSuperLieAlgebra:
    """Basis of gl(V), osp(V), pe(V) or q(V) as operators on V."""
    kind = kind.lower()
    d = V.dim
    if kind == "gl":
        return MatrixSuperLieAlgebra(kind, V, _matrix_units(V, field), field)

    if kind in ("osp", "pe"):
        if form is None:
            raise ValueError(f"{kind} requires a bilinear form")
        want = "even" if kind == "osp" else "odd"
        if form.parity != want:
            raise ParityError(f"{kind} needs an {want} form, got {form.parity}")
        g = form.gram
        basis = []
        for px in (0, 1):
            def rows():
                # <X e_c, e_d> + (-1)^{|X|[c]} <e_c, X e_d> = 0
                for c in range(d):
                    sgn = -1 if (px and V.parity(c)) else 1
                    for dd in range(d):
                        row = {}
                        for a in range(d):
                            if (V.parity(a) + V.parity(c)) % 2 != px:
                                continue
                            if not field.is_zero(g[a][dd]):
                                key = a * d + c
                                row[key] = field.add(row.get(key, field.zero), g[a][dd])
                        for a in range(d):
                            if (V.parity(a) + V.parity(dd)) % 2 != px:
                                continue
                            if not field.is_zero(g[c][a]):
                                key = a * d + dd
                                val = field.mul(field.of(sgn), g[c][a])
                                row[key] = field.add(row.get(key, field.zero), val)
                        if row:
                            yield row
            basis.extend(_solve_entry_system(V, field, px, rows()))
        return MatrixSuperLieAlgebra(kind, V, basis, field, form=form)

    if kind == "q":
        if q is None:
            raise ValueError("q requires an odd involution")
        if (q @ q) != SparseOperator.identity(q.dom, field) or q.parity != 1:
            raise ValueError("q must be an odd involution with q^2 = id")
        basis = []
        for px in (0, 1):
            sgn = -1 if px else 1

            def rows():
                # X q - (-1)^{|X|} q X = 0, entrywise
                for r in range(d):
                    for c in range(d):
                        row = {}
                        for k in range(d):
                            v = q.entries.get((k, c))
                            if v is not None and (V.parity(r) + V.parity(k)) % 2 == px:
                                key = r * d + k
                                row[key] = field.add(row.get(key, field.zero), v)
                            w = q.entries.get((r, k))
                            if w is not None and (V.parity(k) + V.parity(c)) % 2 == px:
                                key = k * d + c
                                val = field.mul(field.of(-sgn), w)
                                row[key] = field.add(row.get(key, field.zero), val)
                        if row:
                            yield row
            basis.extend(_solve_entry_system(V, field, px, rows()))
        return MatrixSuperLieAlgebra(kind, V, basis, field, q=q)

    raise ValueError(f"unknown kind {kind!r}")


def dual_operator(X: SparseOperator) -> SparseOperator:
    """Negative super-transpose: (X^W)_{ab} = -(-1)^{|X|[b]} X_{ba}.

    This is the infinitesimal dual action; it makes ev: W (x) V -> k
    invariant.
    """
    if X.parity is None:
        raise ParityError("dual action needs a homogeneous operator")
    V = X.dom.factors[0][0]
    sp = space(V, dual=True)
    f = X.field
    ent = {}
    for (b, a), v in X.entries.items():
        sgn = -1 if (X.parity and V.parity(b)) else 1
        ent[(a, b)] = f.neg(v) if sgn == 1 else v
    return SparseOperator(sp, sp, ent, f, parity=X.parity)


def derivation_action(X: SparseOperator, sp: TensorSpace) -> SparseOperator:
    """Super-Leibniz action of X on a tensor word of plain and dual slots."""
    if X.parity is None:
        raise ParityError("derivation of an inhomogeneous operator")
    f = X.field
    if len(sp.factors) == 0:
        return SparseOperator.zero(UNIT_SPACE, UNIT_SPACE, f, parity=X.parity)
    V = X.dom.factors[0][0]
    Xw = dual_operator(X)
    dims = sp.dims
    n = len(dims)
    strides = [1] * n
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    ent: dict = {}
    for slot, (Vs, dual) in enumerate(sp.factors):
        if Vs != V:
            raise ShapeError("tensor word over a different super space")
        op = Xw if dual else X
        others = [i for i in range(n) if i != slot]
        for combo in itertools.product(*(range(dims[i]) for i in others)):
            left_par = 0
            if X.parity:
                for i, idx in zip(others, combo):
                    if i < slot:
                        left_par ^= sp.factors[i][0].parity(idx)
            base = sum(idx * strides[i] for i, idx in zip(others, combo))
            for (r, c), v in op.entries.items():
                key = (base + r * strides[slot], base + c * strides[slot])
                val = f.neg(v) if left_par else v
                ent[key] = f.add(ent.get(key, f.zero), val)
    return SparseOperator(sp, sp, ent, f, parity=X.parity, check=False)


def tensor_derivation(X: SparseOperator, r: int) -> SparseOperator:
    """Action of X on V^{(x) r}; the zero operator on k when r = 0."""
    V = X.dom.factors[0][0]
    return derivation_action(X, power(V, r))


def mixed_action(X: SparseOperator, r: int, s: int) -> SparseOperator:
    """Action of X on V^{(x) r} (x) W^{(x) s} with W = V*."""
    V = X.dom.factors[0][0]
    sp = TensorSpace(((V, False),) * r + ((V, True),) * s)
    return derivation_action(X, sp)


def component_extras(kind: str, V: SuperSpace, form: BilinearForm | None = None,
                     field=QQ) -> ComponentExtras:
    """Reflection sigma (osp, determinant -1 on the even part) and the parity
    point g = diag((-1)^{[i]})."""
    kind = kind.lower()
    sp = space(V)
    flags = []
    g = SparseOperator(sp, sp,
                       {(i, i): (field.neg(field.one) if V.parity(i) else field.one)
                        for i in range(V.dim)}, field, parity=0)
    if kind == "pe":
        # the periplectic parity point needs a square root of -1
        return ComponentExtras(None, None, ["pe parity point not rational; omitted"])
    if kind != "osp":
        return ComponentExtras(None, g, flags)
    if V.m == 0:
        flags.append("m = 0: even part has no reflection, sigma omitted")
        sigma = None
    else:
        ent = {(i, i): field.one for i in range(V.dim)}
        ent[(0, 0)] = field.neg(field.one)
        sigma = SparseOperator(sp, sp, ent, field, parity=0)
        if form is not None:
            _check_isometry(sigma, form)
    return ComponentExtras(sigma, g, flags)


def _check_isometry(g: SparseOperator, form: BilinearForm):
    f = g.field
    d = form.space.dim
    gram = form.gram
    cols = {c: g.apply({c: f.one}) for c in range(d)}
    for i in range(d):
        for j in range(d):
            s = f.zero
            for a, va in cols[i].items():
                for b, vb in cols[j].items():
                    s = f.add(s, f.mul(f.mul(va, vb), gram[a][b]))
            if s != gram[i][j]:
                raise ShapeError("operator does not preserve the form")
