import random
from fractions import Fraction

import pytest

from superschur.linalg import (QQ, SuperSpace, SparseOperator, Eliminator,
                               braiding_operator, tensor_operator, standard_form,
                               space, power, UNIT_SPACE, ShapeError, TensorSpace)
from superschur.diagrams import (BrauerDiagram, WalledDiagram, enumerate_diagrams,
                                 enumerate_walled, identity_diagram, compose,
                                 compose_walled, compose_periplectic, tensor_diagram,
                                 star, build_algebra, BOTTOM, TOP)
from superschur.interp import (InterpContext, interpret, interpret_layered,
                               cap_operator, cup_operator, algebra_action,
                               periplectic_sign_solver)
from superschur.supergroups import lie_basis, derivation_action

E2 = BrauerDiagram.make(2, 2, [((BOTTOM, 0), (BOTTOM, 1)), ((TOP, 0), (TOP, 1))])
X2 = BrauerDiagram.make(2, 2, [((BOTTOM, 0), (TOP, 1)), ((BOTTOM, 1), (TOP, 0))])


def osp_ctx(m, n2):
    V, form = standard_form("even", m=m, n2=n2)
    return InterpContext("osp", V, form)


def pe_ctx(n):
    V, form = standard_form("odd", n=n)
    return InterpContext("pe", V, form)


# -- cap / cup ---------------------------------------------------------------

def test_cap_cup_sdim_even_1_0():
    ctx = osp_ctx(1, 0)
    assert (cap_operator(ctx) @ cup_operator(ctx)).entries == {(0, 0): Fraction(1)}


def test_cap_cup_sdim_even_0_2():
    # derived oracle: the matrix product cap . cup equals sdim = -2
    ctx = osp_ctx(0, 2)
    assert (cap_operator(ctx) @ cup_operator(ctx)).entries == {(0, 0): Fraction(-2)}


def test_cap_cup_zero_odd_form():
    ctx = pe_ctx(1)
    assert (cap_operator(ctx) @ cup_operator(ctx)).is_zero()
    ctx = pe_ctx(3)
    assert (cap_operator(ctx) @ cup_operator(ctx)).is_zero()


def zigzags(ctx):
    cap, cup = cap_operator(ctx), cup_operator(ctx)
    idv = SparseOperator.identity(space(ctx.V), ctx.field)
    z1 = tensor_operator(cap, idv) @ tensor_operator(idv, cup)
    z2 = tensor_operator(idv, cap) @ tensor_operator(cup, idv)
    return z1, z2, idv


def test_zigzags_even_form():
    for ctx in (osp_ctx(2, 4), osp_ctx(1, 2), osp_ctx(3, 0)):
        z1, z2, idv = zigzags(ctx)
        assert z1 == idv and z2 == idv


def test_zigzags_odd_form_second_gets_minus():
    for ctx in (pe_ctx(1), pe_ctx(2)):
        z1, z2, idv = zigzags(ctx)
        assert z1 == idv and z2 == idv.scale(-1)


def test_gl_zigzags():
    V = SuperSpace(2, 1)
    ctx = InterpContext("gl", V)
    capWV, cupVW = ctx.cap(True, False), ctx.cup(False, True)
    capVW, cupWV = ctx.cap(False, True), ctx.cup(True, False)
    idv = SparseOperator.identity(space(V))
    idw = SparseOperator.identity(space(V, dual=True))
    assert tensor_operator(idv, capWV) @ tensor_operator(cupVW, idv) == idv
    assert tensor_operator(capWV, idw) @ tensor_operator(idw, cupVW) == idw
    assert tensor_operator(capVW, idv) @ tensor_operator(idv, cupWV) == idv
    assert tensor_operator(idw, capVW) @ tensor_operator(cupWV, idw) == idw


# -- interpret ---------------------------------------------------------------

def test_identity_and_crossing():
    ctx = osp_ctx(2, 4)
    assert interpret(identity_diagram(3), ctx) == SparseOperator.identity(power(ctx.V, 3))
    assert interpret(X2, ctx) == braiding_operator(ctx.V, ctx.V)


def test_e_squares_to_sdim_e():
    ctx = osp_ctx(2, 4)
    e = interpret(E2, ctx)
    assert e @ e == e.scale(Fraction(-2))


def test_layered_decomposition_agreement():
    # fixed-sweep evaluation == explicit layer composition, all flavours
    shapes = [(2, 2), (3, 1), (1, 3), (4, 2), (2, 0), (0, 4), (3, 3)]
    for ctx in (osp_ctx(2, 2), pe_ctx(2)):
        for i, k in shapes:
            for d in enumerate_diagrams(i, k)[:5]:
                assert interpret(d, ctx) == interpret_layered(d, ctx)
    ctx = InterpContext("gl", SuperSpace(1, 1))
    words = [("v", "^"), ("v", "v", "^"), ("^", "v"), ("v", "^", "v", "^"), ()]
    for wb in words:
        for wt in words:
            for d in enumerate_walled(wb, wt)[:5]:
                assert interpret(d, ctx) == interpret_layered(d, ctx)


def test_flavor_mismatch_rejected():
    ctx = osp_ctx(1, 2)
    with pytest.raises(ShapeError):
        interpret(enumerate_walled(("v", "^"), ("v", "^"))[0], ctx)
    glctx = InterpContext("gl", SuperSpace(1, 1))
    with pytest.raises(ShapeError):
        interpret(E2, glctx)


def _random_composable(rng, shapes, flavor_diagrams):
    i, j, k = rng.choice(shapes)
    return rng.choice(flavor_diagrams(j, k)), rng.choice(flavor_diagrams(i, j))


def test_functoriality_osp():
    rng = random.Random(42)
    ctx = osp_ctx(2, 4)
    shapes = [(2, 2, 2), (1, 3, 1), (2, 4, 2), (0, 2, 0), (3, 1, 3), (0, 2, 4)]
    for _ in range(40):
        du, dl = _random_composable(rng, shapes, enumerate_diagrams)
        c, res = compose(du, dl, Fraction(-2))
        assert interpret(du, ctx) @ interpret(dl, ctx) == interpret(res, ctx).scale(c)


def test_functoriality_gl():
    rng = random.Random(43)
    V = SuperSpace(2, 1)
    ctx = InterpContext("gl", V)
    words = [("v", "^"), ("v", "v", "^", "^"), (), ("v", "^", "v", "^")]
    for _ in range(40):
        wi, wj, wk = (rng.choice(words) for _ in range(3))
        us, ls = enumerate_walled(wj, wk), enumerate_walled(wi, wj)
        if not us or not ls:
            continue
        du, dl = rng.choice(us), rng.choice(ls)
        c, res = compose_walled(du, dl, Fraction(1))
        assert interpret(du, ctx) @ interpret(dl, ctx) == interpret(res, ctx).scale(c)


def test_functoriality_pe_including_loops():
    rng = random.Random(44)
    ctx = pe_ctx(3)
    solver = periplectic_sign_solver()
    shapes = [(2, 2, 2), (1, 3, 1), (2, 4, 2), (0, 2, 0)]
    seen_zero = False
    for _ in range(40):
        du, dl = _random_composable(rng, shapes, enumerate_diagrams)
        c, res = compose_periplectic(du, dl, solver)
        lhs = interpret(du, ctx) @ interpret(dl, ctx)
        if res is None:
            seen_zero = True
            assert lhs.is_zero()
        else:
            assert lhs == interpret(res, ctx).scale(c)
    assert seen_zero


def test_monoidality_even_flavors():
    rng = random.Random(45)
    ctx = osp_ctx(2, 2)
    pool = enumerate_diagrams(2, 2) + enumerate_diagrams(1, 1) + \
        enumerate_diagrams(2, 0) + enumerate_diagrams(0, 2)
    for _ in range(30):
        d1, d2 = rng.choice(pool), rng.choice(pool)
        assert interpret(tensor_diagram(d1, d2), ctx) == \
            tensor_operator(interpret(d1, ctx), interpret(d2, ctx))
    glctx = InterpContext("gl", SuperSpace(1, 1))
    wpool = enumerate_walled(("v", "^"), ("v", "^")) + \
        enumerate_walled(("v", "^"), ()) + enumerate_walled((), ("v", "^"))
    for _ in range(30):
        d1, d2 = rng.choice(wpool), rng.choice(wpool)
        assert interpret(tensor_diagram(d1, d2), glctx) == \
            tensor_operator(interpret(d1, glctx), interpret(d2, glctx))


def test_monoidality_pe_up_to_interchange_sign():
    # the fixed sweep pins periplectic juxtaposition up to the interchange
    # sign; with a permutation factor it is exact
    rng = random.Random(46)
    ctx = pe_ctx(3)
    pool = enumerate_diagrams(2, 2) + enumerate_diagrams(2, 0) + enumerate_diagrams(0, 2)
    perms = [d for d in enumerate_diagrams(2, 2) if d.through_count == 2]
    for _ in range(30):
        d1, d2 = rng.choice(pool), rng.choice(pool)
        lhs = interpret(tensor_diagram(d1, d2), ctx)
        rhs = tensor_operator(interpret(d1, ctx), interpret(d2, ctx))
        assert lhs == rhs or lhs == rhs.scale(-1)
    for _ in range(20):
        p, d = rng.choice(perms), rng.choice(pool)
        for d1, d2 in ((p, d), (d, p)):
            lhs = interpret(tensor_diagram(d1, d2), ctx)
            rhs = tensor_operator(interpret(d1, ctx), interpret(d2, ctx))
            assert lhs == rhs


# -- equivariance ------------------------------------------------------------

def test_equivariance_osp():
    ctx = osp_ctx(2, 4)
    g = lie_basis("osp", ctx.V, form=ctx.form)
    sp = power(ctx.V, 2)
    diag_ops = [interpret(d, ctx) for d in enumerate_diagrams(2, 2)]
    for D in g.basis:
        der = derivation_action(D, sp)
        for op in diag_ops:
            assert op.supercommutator(der).is_zero()


def test_equivariance_gl():
    V = SuperSpace(2, 1)
    ctx = InterpContext("gl", V)
    g = lie_basis("gl", V)
    sp = TensorSpace(((V, False), (V, True)))
    diag_ops = [interpret(d, ctx) for d in enumerate_walled(("v", "^"), ("v", "^"))]
    for D in g.basis:
        der = derivation_action(D, sp)
        for op in diag_ops:
            assert op.supercommutator(der).is_zero()


def test_equivariance_pe():
    ctx = pe_ctx(2)
    g = lie_basis("pe", ctx.V, form=ctx.form)
    sp = power(ctx.V, 2)
    diag_ops = [interpret(d, ctx) for d in enumerate_diagrams(2, 2)]
    for D in g.basis:
        der = derivation_action(D, sp)
        for op in diag_ops:
            assert op.supercommutator(der).is_zero()


# -- star-adjoint compatibility ----------------------------------------------

def parallel_pairing(ctx, r):
    d = BrauerDiagram.make(2 * r, 0, [((BOTTOM, x), (BOTTOM, x + r)) for x in range(r)])
    return interpret(d, ctx)


def test_star_is_form_adjoint_osp():
    ctx = osp_ctx(2, 2)
    for i, k in [(2, 2), (1, 3), (3, 1), (2, 0), (0, 2), (1, 1)]:
        Bi = parallel_pairing(ctx, i) if i else SparseOperator.identity(UNIT_SPACE)
        Bk = parallel_pairing(ctx, k) if k else SparseOperator.identity(UNIT_SPACE)
        idi = SparseOperator.identity(power(ctx.V, i)) if i else SparseOperator.identity(UNIT_SPACE)
        idk = SparseOperator.identity(power(ctx.V, k)) if k else SparseOperator.identity(UNIT_SPACE)
        for d in enumerate_diagrams(i, k)[:5]:
            f = interpret(d, ctx)
            fs = interpret(star(d), ctx)
            assert Bk @ tensor_operator(f, idk) == Bi @ tensor_operator(idi, fs)


# -- periplectic golden signs --------------------------------------------------

def test_periplectic_golden_signs():
    solver = periplectic_sign_solver()
    c, res = compose_periplectic(E2, E2, solver)
    assert c == 0 and res is None
    c, res = compose_periplectic(X2, X2, solver)
    assert c == 1 and res == identity_diagram(2)
    # right-hook zigzag: (id (x) cap) o (cup (x) id) = -id, pinned
    hook_u = BrauerDiagram.make(3, 1, [((BOTTOM, 1), (BOTTOM, 2)), ((BOTTOM, 0), (TOP, 0))])
    hook_l = BrauerDiagram.make(1, 3, [((TOP, 0), (TOP, 1)), ((BOTTOM, 0), (TOP, 2))])
    c, res = compose_periplectic(hook_u, hook_l, solver)
    assert c == -1 and res == identity_diagram(1)


def test_periplectic_algebra_builds():
    from superschur.interp import periplectic_algebra
    A = periplectic_algebra(2)
    assert A.dim == 3
    i_e = next(i for i, (_, _, d) in enumerate(A.basis) if d == E2)
    assert A.product(i_e, i_e) == []
    Ac = periplectic_algebra(2, truncated=True)
    assert Ac.dim == 6


# -- algebra actions -----------------------------------------------------------

def test_action_brauer1_image():
    ctx = osp_ctx(2, 4)
    A = build_algebra("brauer", QQ, r=1, delta=Fraction(-2))
    M = algebra_action(A, ctx)
    assert len(M.generators) == 1
    assert M.generators[0] == SparseOperator.identity(space(ctx.V))


def test_action_brauer2_on_trivial_space():
    # V = (1|0), delta = 1: rank of the 3 -> 1 action map is 1, kernel 2
    ctx = osp_ctx(1, 0)
    A = build_algebra("brauer", QQ, r=2, delta=Fraction(1))
    M = algebra_action(A, ctx)
    elim = Eliminator(QQ)
    n = M.dim
    rank = 0
    for op in M.generators:
        if elim.insert({r * n + c: v for (r, c), v in op.entries.items()}) is not None:
            rank += 1
    assert rank == 1 and A.dim - rank == 2


def test_action_homomorphism_T2_exhaustive():
    ctx = osp_ctx(2, 4)
    A = build_algebra("brauerc", QQ, r=2, delta=Fraction(-2))
    M = algebra_action(A, ctx)
    assert M.dim == 37
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = M.generators[i] @ M.generators[j]
            rhs = SparseOperator.zero(M.carrier, M.carrier)
            for coeff, k in A.product(i, j):
                rhs = rhs + M.generators[k].scale(coeff)
            assert lhs.entries == rhs.entries


def test_action_delta_mismatch_rejected():
    ctx = osp_ctx(2, 4)
    A = build_algebra("brauer", QQ, r=2, delta=Fraction(5))
    with pytest.raises(ShapeError):
        algebra_action(A, ctx)


def test_action_kind_flavor_mismatch():
    ctx = pe_ctx(2)
    A = build_algebra("brauer", QQ, r=2, delta=Fraction(0))
    with pytest.raises(ShapeError):
        algebra_action(A, ctx)
