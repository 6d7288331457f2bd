"""Monoidal interpretation of diagrams on tensor powers.

A diagram is evaluated as the composite

    (id (x) caps) o (signed slot permutation) o (id (x) cups)

for a fixed planar arrangement: cup legs are created to the right of the
inputs, cap legs are moved to the right of the outputs, both in the order
the arcs appear in the canonical pair list.  The permutation carries the
Koszul sign of reordering the slots, and the cap/cup blocks are built with
:func:`tensor_operator`, so odd turn-backs (periplectic flavour) pick up
their interchange signs automatically.  For the even flavours any other
arrangement would give the same operator; for the periplectic flavour this
fixed sweep *is* the normalisation that pins the diagram-composition signs,
which are then solved from multiplicativity and cached.

Flavours:

* ``osp``: even form, cap = gram matrix, cup = inverse gram.
* ``gl``: oriented words, cap over (^, v) is the evaluation, the other
  turn-backs are its braiding transports.
* ``pe``: odd form, cap = gram, cup = inverse gram twisted by the parity
  sign (the unique coform satisfying the zigzag identity).
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

from .linalg import (QQ, SuperSpace, BilinearForm, TensorSpace, SumSpace,
                     SparseOperator, tensor_operator, permutation_operator,
                     ParityError, ShapeError, InternalCheckError, space, power,
                     UNIT_SPACE, standard_form)
from .diagrams import (BrauerDiagram, WalledDiagram, BOTTOM, TOP,
                       build_algebra, DiagramAlgebra)


class InterpContext:
    """Evaluation data for one flavour on a fixed super space."""

    def __init__(self, flavor: str, V: SuperSpace, form: BilinearForm | None = None,
                 field=QQ):
        flavor = flavor.lower()
        if flavor not in ("osp", "gl", "pe"):
            raise ValueError(flavor)
        self.flavor = flavor
        self.V = V
        self.form = form
        self.field = field
        self.sdim = field.of(V.sdim)
        d = V.dim
        f = field
        if flavor in ("osp", "pe"):
            want = "even" if flavor == "osp" else "odd"
            if form is None or form.parity != want:
                raise ParityError(f"{flavor} needs an {want} form")
            par = form.parity_bit
            g = form.gram
            ginv = form.inverse_gram()
            dom2 = TensorSpace(((V, False), (V, False)))
            cap = {(0, i * d + j): g[i][j] for i in range(d) for j in range(d)
                   if not f.is_zero(g[i][j])}
            self._caps = {(False, False): SparseOperator(
                dom2, UNIT_SPACE, cap, f, parity=par)}
            cup = {}
            for k in range(d):
                for l in range(d):
                    v = ginv[k][l]
                    if par:
                        v = f.neg(v) if V.parity(l) else v
                    if not f.is_zero(v):
                        cup[(k * d + l, 0)] = v
            self._cups = {(False, False): SparseOperator(
                UNIT_SPACE, dom2, cup, f, parity=par)}
        else:
            one, neg = f.one, f.neg
            vw = TensorSpace(((V, False), (V, True)))
            wv = TensorSpace(((V, True), (V, False)))
            self._caps = {
                (True, False): SparseOperator(
                    wv, UNIT_SPACE,
                    {(0, i * d + i): one for i in range(d)}, f, parity=0),
                (False, True): SparseOperator(
                    vw, UNIT_SPACE,
                    {(0, i * d + i): (neg(one) if V.parity(i) else one)
                     for i in range(d)}, f, parity=0),
            }
            self._cups = {
                (False, True): SparseOperator(
                    UNIT_SPACE, vw,
                    {(i * d + i, 0): one for i in range(d)}, f, parity=0),
                (True, False): SparseOperator(
                    UNIT_SPACE, wv,
                    {(i * d + i, 0): (neg(one) if V.parity(i) else one)
                     for i in range(d)}, f, parity=0),
            }

    def cap(self, du1: bool, du2: bool) -> SparseOperator:
        return self._caps[(du1, du2)]

    def cup(self, du1: bool, du2: bool) -> SparseOperator:
        return self._cups[(du1, du2)]

    def object_space(self, obj) -> TensorSpace:
        """[j] -> V^{(x) j}; an orientation word -> the matching mixed product."""
        if isinstance(obj, int):
            return power(self.V, obj)
        return TensorSpace(tuple((self.V, o == "^") for o in obj))

    def __repr__(self):
        return f"<interp {self.flavor} on {self.V}>"


def cap_operator(ctx: InterpContext) -> SparseOperator:
    if ctx.flavor == "gl":
        return ctx.cap(True, False)
    return ctx.cap(False, False)


def cup_operator(ctx: InterpContext) -> SparseOperator:
    if ctx.flavor == "gl":
        return ctx.cup(False, True)
    return ctx.cup(False, False)


def _classify(d):
    throughs, caps, cups = [], [], []
    for (s1, a), (s2, b) in d.pairs:
        if s1 == BOTTOM and s2 == TOP:
            throughs.append((a, b))
        elif s1 == TOP and s2 == TOP:
            cups.append((a, b))
        elif s1 == BOTTOM and s2 == BOTTOM:
            caps.append((a, b))
        else:
            throughs.append((b, a))
    return throughs, sorted(caps), sorted(cups)


def _words(d, ctx):
    if isinstance(d, WalledDiagram):
        if ctx.flavor != "gl":
            raise ShapeError("walled diagrams interpret in the gl flavour")
        bot = tuple((ctx.V, o == "^") for o in d.bottom_word)
        top = tuple((ctx.V, o == "^") for o in d.top_word)
    elif isinstance(d, BrauerDiagram):
        if ctx.flavor == "gl":
            raise ShapeError("plain Brauer diagrams need the osp or pe flavour")
        bot = ((ctx.V, False),) * d.bottom
        top = ((ctx.V, False),) * d.top
    else:
        raise TypeError(d)
    return bot, top


def _chain(ops, unit_side_dom: bool, field):
    out = SparseOperator.identity(UNIT_SPACE, field)
    for op in ops:
        out = tensor_operator(out, op)
    return out


def interpret(d, ctx: InterpContext) -> SparseOperator:
    """The operator of a diagram, by direct enumeration of arc assignments."""
    f = ctx.field
    bot, top = _words(d, ctx)
    throughs, caps, cups = _classify(d)
    cup_ops = [ctx.cup(top[b1][1], top[b2][1]) for b1, b2 in cups]
    cap_ops = [ctx.cap(bot[a1][1], bot[a2][1]) for a1, a2 in caps]
    cup_t = _chain(cup_ops, True, f)
    cap_c = _chain(cap_ops, False, f)

    i, k = len(bot), len(top)
    # permutation: mid = inputs ++ cup legs  ->  target = outputs ++ cap legs
    pi = [None] * (i + 2 * len(cups))
    for a, b in throughs:
        pi[a] = b
    for ci, (a1, a2) in enumerate(caps):
        pi[a1] = k + 2 * ci
        pi[a2] = k + 2 * ci + 1
    for ti, (b1, b2) in enumerate(cups):
        pi[i + 2 * ti] = b1
        pi[i + 2 * ti + 1] = b2
    mid_factors = bot + tuple(x for b1, b2 in cups for x in (top[b1], top[b2]))
    parities = [sp.parity for sp, _ in mid_factors]

    dom = TensorSpace(bot)
    cod = TensorSpace(top)
    Vd = ctx.V.dim
    Vpar = [ctx.V.parity(x) for x in range(Vd)]
    n = len(pi)
    out_parity = (cap_c.parity + cup_t.parity) % 2
    entries = {}
    neg, mul = f.neg, f.mul
    through_ranges = [range(Vd)] * len(throughs)

    cup_items = sorted(cup_t.entries.items()) or [((0, 0), f.one)]
    cap_items = sorted(cap_c.entries.items()) or [((0, 0), f.one)]
    cup_space = cup_t.cod
    cap_space = cap_c.dom

    for (cupflat, _), ucoeff in cup_items:
        cupvals = cup_space.decode(cupflat) if cups else ()
        for (_, capflat), ccoeff in cap_items:
            capvals = cap_space.decode(capflat) if caps else ()
            base = mul(ucoeff, ccoeff)
            for tv in itertools.product(*through_ranges):
                J = [0] * i
                K = [0] * k
                for (a, b), x in zip(throughs, tv):
                    J[a] = x
                    K[b] = x
                for ci, (a1, a2) in enumerate(caps):
                    J[a1] = capvals[2 * ci]
                    J[a2] = capvals[2 * ci + 1]
                for ti, (b1, b2) in enumerate(cups):
                    K[b1] = cupvals[2 * ti]
                    K[b2] = cupvals[2 * ti + 1]
                mid = J + list(cupvals)
                pars = [parities[p](mid[p]) for p in range(n)]
                sign = 1
                for p in range(n):
                    if pars[p]:
                        for q in range(p + 1, n):
                            if pars[q] and pi[p] > pi[q]:
                                sign = -sign
                if cup_t.parity and sum(Vpar[x] for x in J) % 2:
                    sign = -sign
                if cap_c.parity and sum(Vpar[x] for x in K) % 2:
                    sign = -sign
                val = base if sign == 1 else neg(base)
                entries[(cod.encode(K), dom.encode(J))] = val
    return SparseOperator(dom, cod, entries, f, parity=out_parity, check=False)


def interpret_layered(d, ctx: InterpContext) -> SparseOperator:
    """Reference evaluation by explicit operator layers (tests only)."""
    f = ctx.field
    bot, top = _words(d, ctx)
    throughs, caps, cups = _classify(d)
    cup_t = _chain([ctx.cup(top[b1][1], top[b2][1]) for b1, b2 in cups], True, f)
    cap_c = _chain([ctx.cap(bot[a1][1], bot[a2][1]) for a1, a2 in caps], False, f)
    i, k = len(bot), len(top)
    pi = [None] * (i + 2 * len(cups))
    for a, b in throughs:
        pi[a] = b
    for ci, (a1, a2) in enumerate(caps):
        pi[a1], pi[a2] = k + 2 * ci, k + 2 * ci + 1
    for ti, (b1, b2) in enumerate(cups):
        pi[i + 2 * ti], pi[i + 2 * ti + 1] = b1, b2
    B = tensor_operator(SparseOperator.identity(TensorSpace(bot), f), cup_t)
    P = permutation_operator(B.cod, pi, f)
    A = tensor_operator(SparseOperator.identity(TensorSpace(top), f), cap_c)
    return A @ P @ B


# ---------------------------------------------------------------------------
# periplectic composition signs


class PeriplecticSignSolver:
    """Sign of a loop-free concatenation in the periplectic category.

    The sign is whatever scalar makes interpretation multiplicative for the
    standard odd form at large enough rank; it is solved once per diagram
    pair and cached.  A non-unit scalar means the interpretation itself is
    broken, hence the internal error.
    """

    def __init__(self):
        self._ctx: dict[int, InterpContext] = {}
        self.cache: dict = {}

    def context(self, n: int) -> InterpContext:
        if n not in self._ctx:
            V, form = standard_form("odd", n=n)
            self._ctx[n] = InterpContext("pe", V, form)
        return self._ctx[n]

    def __call__(self, upper: BrauerDiagram, lower: BrauerDiagram,
                 result: BrauerDiagram) -> int:
        key = (upper, lower)
        if key in self.cache:
            return self.cache[key]
        dots = lower.bottom + lower.top + upper.top
        ctx = self.context(max(1, (dots + 1) // 2))
        prod = interpret(upper, ctx) @ interpret(lower, ctx)
        target = interpret(result, ctx)
        if prod.is_zero() or target.is_zero():
            raise InternalCheckError("degenerate periplectic interpretation")
        kmin = min(target.entries)
        f = ctx.field
        num = prod.entries.get(kmin)
        if num is None:
            raise InternalCheckError("support mismatch in periplectic product")
        ratio = f.mul(num, f.inv(target.entries[kmin]))
        if ratio == f.one:
            sign = 1
        elif ratio == f.neg(f.one):
            sign = -1
        else:
            raise InternalCheckError(f"periplectic scalar {ratio} is not a sign")
        if target.scale(ratio).entries != prod.entries:
            raise InternalCheckError("periplectic product is not proportional")
        self.cache[key] = sign
        return sign


_pe_solver: PeriplecticSignSolver | None = None


def periplectic_sign_solver() -> PeriplecticSignSolver:
    global _pe_solver
    if _pe_solver is None:
        _pe_solver = PeriplecticSignSolver()
    return _pe_solver


def periplectic_algebra(r: int, field=QQ, truncated: bool = False) -> DiagramAlgebra:
    kind = "periplecticc" if truncated else "periplectic"
    return build_algebra(kind, field, r=r, sign_solver=periplectic_sign_solver())


# ---------------------------------------------------------------------------
# modules


@dataclass
class RepModule:
    """A carrier space with named generator actions (diagram images or Lie
    derivations); the raw input of every commutant computation."""

    carrier: object
    generators: list
    algebra: DiagramAlgebra | None = None
    gen_blocks: list | None = None  # (src_obj, dst_obj) per generator
    parities: list | None = None
    label: str = ""

    @property
    def dim(self):
        return self.carrier.dim

    def gen_parities(self):
        if self.parities is not None:
            return self.parities
        return [op.parity for op in self.generators]


_FLAVOR_OF_KIND = {
    "brauer": "osp", "brauerc": "osp",
    "walled": "gl", "walledc": "gl",
    "periplectic": "pe", "periplecticc": "pe",
}


def algebra_action(A: DiagramAlgebra, ctx: InterpContext) -> RepModule:
    """Interpret every basis diagram of A on the direct sum of its objects.

    The result is an algebra homomorphism (checked in the test suite against
    the multiplication table).
    """
    want = _FLAVOR_OF_KIND[A.kind]
    if ctx.flavor != want:
        raise ShapeError(f"{A.kind} needs the {want} flavour, got {ctx.flavor}")
    if A.delta is not None and A.delta != ctx.sdim:
        raise ShapeError(f"algebra delta {A.delta} != sdim {ctx.sdim}")
    blocks = [ctx.object_space(obj) for obj in A.objects]
    single = len(blocks) == 1
    carrier = blocks[0] if single else SumSpace(blocks)
    offs = [0] if single else carrier.offsets
    gens, gblocks = [], []
    for (si, di, diag) in A.basis:
        op = interpret(diag, ctx)
        if single:
            emb = op
        else:
            ent = {(r + offs[di], c + offs[si]): v for (r, c), v in op.entries.items()}
            emb = SparseOperator(carrier, carrier, ent, ctx.field,
                                 parity=op.parity, check=False)
        gens.append(emb)
        gblocks.append((si, di))
    return RepModule(carrier, gens, algebra=A, gen_blocks=gblocks,
                     label=f"{A.kind}(r={A.params.get('r')}) on {ctx.V}")


def tensor_power_module(g, r: int) -> RepModule:
    """V^{(x) r} as a module over a matrix Lie superalgebra."""
    from .supergroups import tensor_derivation
    sp = power(g.space, r)
    return RepModule(sp, [tensor_derivation(X, r) for X in g.basis],
                     label=f"{g.kind} on V^{r}")
