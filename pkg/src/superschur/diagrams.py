"""Brauer, walled Brauer and periplectic Brauer diagram combinatorics.

A diagram from i bottom dots to k top dots is a perfect matching of all
i+k dots.  Dots are encoded as pairs (side, index) with side 0 for bottom
and 1 for top, zero-based; the text notation uses B1..Bi and T1..Tk.
Composition stacks ``lower`` under ``upper`` and evaluates each closed loop
at the parameter (at 0, with signs, in the periplectic case).

Walled diagrams carry orientation words in the alphabet {v, ^}; an arc may
join opposite orientations on the same line or equal orientations across
lines.

Algebras are assembled over all ordered pairs of objects ([r] only, or the
whole truncation set {[r], [r-2], ...}); multiplication tables are computed
lazily per product and can be persisted through :mod:`superschur.cache`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
import re

from .linalg import QQ, ShapeError, InternalCheckError

BOTTOM, TOP = 0, 1


@dataclass(frozen=True)
class BrauerDiagram:
    bottom: int
    top: int
    pairs: tuple  # sorted tuple of sorted ((side, idx), (side, idx)) pairs

    @staticmethod
    def make(bottom: int, top: int, pairs) -> "BrauerDiagram":
        norm = tuple(sorted(tuple(sorted(p)) for p in pairs))
        dots = [d for p in norm for d in p]
        if sorted(dots) != sorted([(BOTTOM, a) for a in range(bottom)] +
                                  [(TOP, b) for b in range(top)]):
            raise ShapeError("pairs are not a perfect matching of the dots")
        return BrauerDiagram(bottom, top, norm)

    @property
    def through_count(self) -> int:
        return sum(1 for (d1, d2) in self.pairs if d1[0] != d2[0])

    @property
    def caps(self):
        return tuple(p for p in self.pairs if p[0][0] == BOTTOM and p[1][0] == BOTTOM)

    @property
    def cups(self):
        return tuple(p for p in self.pairs if p[0][0] == TOP and p[1][0] == TOP)

    def __str__(self):
        return format_diagram(self)


@dataclass(frozen=True)
class WalledDiagram:
    bottom_word: tuple  # letters 'v' / '^'
    top_word: tuple
    pairs: tuple

    @staticmethod
    def make(bottom_word, top_word, pairs) -> "WalledDiagram":
        bw, tw = tuple(bottom_word), tuple(top_word)
        norm = tuple(sorted(tuple(sorted(p)) for p in pairs))
        dots = [d for p in norm for d in p]
        if sorted(dots) != sorted([(BOTTOM, a) for a in range(len(bw))] +
                                  [(TOP, b) for b in range(len(tw))]):
            raise ShapeError("pairs are not a perfect matching of the dots")
        d = WalledDiagram(bw, tw, norm)
        for p in norm:
            if not d._allowed(*p):
                raise ShapeError(f"pair {p} violates orientation compatibility")
        return d

    def orientation(self, dot):
        side, idx = dot
        return self.bottom_word[idx] if side == BOTTOM else self.top_word[idx]

    def _allowed(self, d1, d2):
        same_side = d1[0] == d2[0]
        same_orient = self.orientation(d1) == self.orientation(d2)
        return same_orient != same_side

    @property
    def through_count(self) -> int:
        return sum(1 for (d1, d2) in self.pairs if d1[0] != d2[0])

    def __str__(self):
        return format_diagram(self)


# ---------------------------------------------------------------------------
# enumeration


def _matchings(dots, allowed):
    if not dots:
        yield []
        return
    first, rest = dots[0], dots[1:]
    for i, other in enumerate(rest):
        if allowed(first, other):
            for m in _matchings(rest[:i] + rest[i + 1:], allowed):
                yield [(first, other)] + m


def enumerate_diagrams(i: int, k: int) -> list[BrauerDiagram]:
    """All (i,k)-Brauer diagrams, (i+k-1)!! of them when i+k is even."""
    if (i + k) % 2:
        return []
    dots = [(BOTTOM, a) for a in range(i)] + [(TOP, b) for b in range(k)]
    return [BrauerDiagram.make(i, k, m) for m in _matchings(dots, lambda a, b: True)]


def enumerate_walled(bottom_word, top_word) -> list[WalledDiagram]:
    bw, tw = tuple(bottom_word), tuple(top_word)
    dots = [(BOTTOM, a) for a in range(len(bw))] + [(TOP, b) for b in range(len(tw))]

    def orient(dot):
        side, idx = dot
        return bw[idx] if side == BOTTOM else tw[idx]

    def allowed(d1, d2):
        return (orient(d1) == orient(d2)) != (d1[0] == d2[0])

    return [WalledDiagram.make(bw, tw, m) for m in _matchings(dots, allowed)]


def identity_diagram(n: int) -> BrauerDiagram:
    return BrauerDiagram.make(n, n, [((BOTTOM, a), (TOP, a)) for a in range(n)])


def identity_walled(word) -> WalledDiagram:
    w = tuple(word)
    return WalledDiagram.make(w, w, [((BOTTOM, a), (TOP, a)) for a in range(len(w))])


def double_factorial(n: int) -> int:
    return reduce(lambda a, b: a * b, range(n, 0, -2), 1)


# ---------------------------------------------------------------------------
# diagram operations


def tensor_diagram(d1, d2):
    """Horizontal juxtaposition; d2's dots are shifted past d1's."""
    if isinstance(d1, WalledDiagram) != isinstance(d2, WalledDiagram):
        raise ShapeError("cannot mix walled and plain diagrams")

    def shift(dot):
        side, idx = dot
        return (side, idx + (d1.bottom if side == BOTTOM else d1.top)) \
            if isinstance(d1, BrauerDiagram) else \
            (side, idx + (len(d1.bottom_word) if side == BOTTOM else len(d1.top_word)))

    pairs = list(d1.pairs) + [(shift(a), shift(b)) for a, b in d2.pairs]
    if isinstance(d1, BrauerDiagram):
        return BrauerDiagram.make(d1.bottom + d2.bottom, d1.top + d2.top, pairs)
    return WalledDiagram.make(d1.bottom_word + d2.bottom_word,
                              d1.top_word + d2.top_word, pairs)


def star(d):
    """Reflection in a horizontal line: bottoms and tops swap."""
    flip = lambda dot: (1 - dot[0], dot[1])
    pairs = [(flip(a), flip(b)) for a, b in d.pairs]
    if isinstance(d, BrauerDiagram):
        return BrauerDiagram.make(d.top, d.bottom, pairs)
    return WalledDiagram.make(d.top_word, d.bottom_word, pairs)


def _trace(upper, lower, mid: int):
    """Concatenate; return (#loops, result pairs on the outer boundary)."""
    adj: dict = {}

    def link(x, y):
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)

    for (s1, a), (s2, b) in lower.pairs:
        link(("L", a) if s1 == BOTTOM else ("M", a),
             ("L", b) if s2 == BOTTOM else ("M", b))
    for (s1, a), (s2, b) in upper.pairs:
        link(("M", a) if s1 == BOTTOM else ("U", a),
             ("M", b) if s2 == BOTTOM else ("U", b))

    visited = set()
    pairs = []
    boundary = [("L", a) for a in range(_bottom_size(lower))] + \
               [("U", b) for b in range(_top_size(upper))]
    for start in boundary:
        if start in visited:
            continue
        visited.add(start)
        prev, cur = start, adj[start][0]
        while cur[0] == "M":
            visited.add(cur)
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:  # a doubled edge M-M traversed back
                nxt = [prev]
            prev, cur = cur, nxt[0]
        visited.add(cur)
        pairs.append((start, cur))

    loops = 0
    for m in range(mid):
        node = ("M", m)
        if node in visited:
            continue
        loops += 1
        visited.add(node)
        prev, cur = node, adj[node][0]
        while cur != node:
            visited.add(cur)
            nxt = [x for x in adj[cur] if x != prev]
            prev, cur = cur, (nxt[0] if nxt else prev)

    out = []
    for a, b in pairs:
        conv = lambda x: (BOTTOM, x[1]) if x[0] == "L" else (TOP, x[1])
        out.append((conv(a), conv(b)))
    # each boundary pair is found twice (once from each end)
    ded = sorted(set(tuple(sorted(p)) for p in out))
    return loops, ded


def _bottom_size(d):
    return d.bottom if isinstance(d, BrauerDiagram) else len(d.bottom_word)


def _top_size(d):
    return d.top if isinstance(d, BrauerDiagram) else len(d.top_word)


def compose(upper: BrauerDiagram, lower: BrauerDiagram, delta, field=QQ):
    """upper after lower; returns (delta^loops, diagram)."""
    if upper.bottom != lower.top:
        raise ShapeError(f"object mismatch: [{upper.bottom}] vs [{lower.top}]")
    loops, pairs = _trace(upper, lower, upper.bottom)
    coeff = field.pow(field.of(delta), loops)
    return coeff, BrauerDiagram.make(lower.bottom, upper.top, pairs)


def compose_walled(upper: WalledDiagram, lower: WalledDiagram, delta, field=QQ):
    if upper.bottom_word != lower.top_word:
        raise ShapeError("word mismatch")
    loops, pairs = _trace(upper, lower, len(upper.bottom_word))
    coeff = field.pow(field.of(delta), loops)
    return coeff, WalledDiagram.make(lower.bottom_word, upper.top_word, pairs)


def compose_periplectic(upper: BrauerDiagram, lower: BrauerDiagram,
                        sign_solver, field=QQ):
    """Signed concatenation with loops evaluated at 0.

    The sign of a loop-free concatenation is whatever scalar makes the tensor
    interpretation multiplicative; ``sign_solver(upper, lower, result)`` must
    provide it (see superschur.interp.periplectic_sign).  Returns
    (coeff, diagram) with diagram None when a loop closes.
    """
    if upper.bottom != lower.top:
        raise ShapeError(f"object mismatch: [{upper.bottom}] vs [{lower.top}]")
    loops, pairs = _trace(upper, lower, upper.bottom)
    if loops:
        return field.zero, None
    result = BrauerDiagram.make(lower.bottom, upper.top, pairs)
    sign = sign_solver(upper, lower, result)
    if sign not in (1, -1):
        raise InternalCheckError(f"periplectic sign solver returned {sign}")
    return field.of(sign), result


# ---------------------------------------------------------------------------
# text and JSON notation


def format_diagram(d) -> str:
    def name(dot):
        side, idx = dot
        return f"{'B' if side == BOTTOM else 'T'}{idx + 1}"

    return ", ".join(f"{name(a)}-{name(b)}" for a, b in d.pairs)


_DOT_RE = re.compile(r"^([BT])(\d+)$")


def parse_diagram(text: str, bottom: int | None = None,
                  top: int | None = None) -> BrauerDiagram:
    """Parse 'B1-T1, B2-B3, T2-T3' style pair lists ('->' also accepted)."""
    pairs = []
    maxb = maxt = 0
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        ends = [e.strip() for e in re.split(r"->|-", chunk) if e.strip()]
        if len(ends) != 2:
            raise ValueError(f"cannot parse pair {chunk!r}")
        dots = []
        for e in ends:
            m = _DOT_RE.match(e)
            if not m:
                raise ValueError(f"bad dot name {e!r}")
            side = BOTTOM if m.group(1) == "B" else TOP
            idx = int(m.group(2)) - 1
            if side == BOTTOM:
                maxb = max(maxb, idx + 1)
            else:
                maxt = max(maxt, idx + 1)
            dots.append((side, idx))
        pairs.append(tuple(dots))
    return BrauerDiagram.make(bottom if bottom is not None else maxb,
                              top if top is not None else maxt, pairs)


def diagram_to_json(d, coeff=None) -> dict:
    def name(dot):
        return f"{'B' if dot[0] == BOTTOM else 'T'}{dot[1] + 1}"

    out = {"bottom": _bottom_size(d), "top": _top_size(d),
           "pairs": [[name(a), name(b)] for a, b in d.pairs]}
    if isinstance(d, WalledDiagram):
        out["bottom_word"] = "".join(d.bottom_word)
        out["top_word"] = "".join(d.top_word)
    if coeff is not None:
        out["coeff"] = str(coeff)
    return out


# ---------------------------------------------------------------------------
# algebras


def truncation_objects(r: int) -> list[int]:
    """[J(r)] = {r, r-2, ..., 1 or 0}."""
    return list(range(r, -1, -2))


def walled_objects(r: int, s: int) -> list[tuple]:
    return [("v",) * (r - j) + ("^",) * (s - j) for j in range(min(r, s) + 1)]


class DiagramAlgebra:
    """A diagram category on finitely many objects, seen as a unital algebra.

    ``basis`` lists morphisms (src_obj, dst_obj, diagram) over all ordered
    object pairs; products are delta^loops times a basis diagram (0, with a
    sign and loops evaluated at 0, for the periplectic kinds) and are cached
    per pair.
    """

    def __init__(self, kind, field, objects, basis, delta=None, params=None,
                 sign_solver=None):
        self.kind = kind
        self.field = field
        self.objects = list(objects)
        self.basis = list(basis)  # (src_idx, dst_idx, diagram)
        self.delta = delta
        self.params = dict(params or {})
        self.sign_solver = sign_solver
        self.index = {(s, d, diag): i for i, (s, d, diag) in enumerate(self.basis)}
        self._table: dict = {}
        self.idempotents = []
        for oi, obj in enumerate(self.objects):
            ident = identity_walled(obj) if isinstance(obj, tuple) else identity_diagram(obj)
            self.idempotents.append(self.index[(oi, oi, ident)])

    @property
    def dim(self):
        return len(self.basis)

    @property
    def is_periplectic(self):
        return self.kind.startswith("periplectic")

    @property
    def is_walled(self):
        return self.kind.startswith("walled")

    def product(self, i: int, j: int):
        """basis[i] * basis[j] as a list [(coeff, index)] (empty when zero)."""
        key = (i, j)
        if key in self._table:
            return self._table[key]
        s1, d1, diag1 = self.basis[i]
        s2, d2, diag2 = self.basis[j]
        if d2 != s1:
            out = []
        elif self.is_periplectic:
            coeff, res = compose_periplectic(diag1, diag2, self.sign_solver, self.field)
            out = [] if res is None or self.field.is_zero(coeff) else \
                [(coeff, self.index[(s2, d1, res)])]
        elif self.is_walled:
            coeff, res = compose_walled(diag1, diag2, self.delta, self.field)
            out = [] if self.field.is_zero(coeff) else [(coeff, self.index[(s2, d1, res)])]
        else:
            coeff, res = compose(diag1, diag2, self.delta, self.field)
            out = [] if self.field.is_zero(coeff) else [(coeff, self.index[(s2, d1, res)])]
        self._table[key] = out
        return out

    def full_table(self):
        for i in range(self.dim):
            for j in range(self.dim):
                self.product(i, j)
        return self._table

    def star_index(self, i: int) -> int:
        s, d, diag = self.basis[i]
        return self.index[(d, s, star(diag))]

    def multiply_elements(self, x: dict, y: dict) -> dict:
        """Product of elements given as {basis_index: coeff}."""
        f = self.field
        out: dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                for coeff, k in self.product(i, j):
                    out[k] = f.add(out.get(k, f.zero), f.mul(f.mul(a, b), coeff))
        return {k: v for k, v in out.items() if not f.is_zero(v)}

    def unit(self) -> dict:
        return {i: self.field.one for i in self.idempotents}

    def describe(self):
        return {"kind": self.kind, "dim": self.dim,
                "objects": [("".join(o) if isinstance(o, tuple) else o) for o in self.objects],
                "params": {k: (self.field.to_json(v) if k == "delta" else v)
                           for k, v in self.params.items()}}


def build_algebra(kind: str, field=QQ, r: int = 0, s: int = 0, delta=None,
                  sign_solver=None) -> DiagramAlgebra:
    """Assemble a diagram algebra.

    kinds: brauer, brauerc, walled, walledc, periplectic, periplecticc.
    For brauer/walled kinds delta must be a field scalar; periplectic kinds
    need a sign solver (interp.periplectic_sign) instead.
    """
    kind = kind.lower()
    params = {"r": r}
    if kind in ("brauer", "brauerc", "periplectic", "periplecticc"):
        objs = [r] if kind in ("brauer", "periplectic") else truncation_objects(r)
        basis = []
        for si, so in enumerate(objs):
            for di, dobj in enumerate(objs):
                for diag in enumerate_diagrams(so, dobj):
                    basis.append((si, di, diag))
        if kind.startswith("periplectic"):
            if sign_solver is None:
                raise ValueError("periplectic kinds require a sign solver")
            return DiagramAlgebra(kind, field, objs, basis, params=params,
                                  sign_solver=sign_solver)
        if delta is None:
            raise ValueError("delta required")
        params["delta"] = field.of(delta)
        return DiagramAlgebra(kind, field, objs, basis, delta=field.of(delta),
                              params=params)
    if kind in ("walled", "walledc"):
        if delta is None:
            raise ValueError("delta required")
        params.update(s=s, delta=field.of(delta))
        objs = [("v",) * r + ("^",) * s] if kind == "walled" else walled_objects(r, s)
        basis = []
        for si, so in enumerate(objs):
            for di, dobj in enumerate(objs):
                for diag in enumerate_walled(so, dobj):
                    basis.append((si, di, diag))
        return DiagramAlgebra(kind, field, objs, basis, delta=field.of(delta),
                              params=params)
    raise ValueError(f"unknown kind {kind!r}")
