"""
Twisted complexes over the two-core category, and their calculus.

A complex is an ordered list of summands (vertex, position) -- position t
stands for the core Q_vertex[-t], so the shift X -> X[1] lowers every
position by one -- together with a differential delta indexed by ordered
summand pairs. Each entry is a combination of basis morphisms whose internal
degree d is pinned by the slot: d - (pos(a) - pos(b)) = 1, so p-entries
connect equal positions, q-entries drop n-2, top-class entries drop n-1,
and unit entries climb exactly one position (those appear in cones, and
Gaussian elimination removes them again).

Being a twisted complex means the entry digraph is acyclic (the differential
is strictly triangular in some ordering of the summands) and the matrix
square of delta vanishes under composition; with all higher products zero
that square is the entire Maurer-Cartan equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .category import Category, CategoryParams, category_for
from .linalg import Matrix, candidate_coefficients

Combo = dict  # {basis name: field element}, zero coefficients never stored


@dataclass(frozen=True, order=True)
class Summand:
    vertex: int
    position: int

    def __repr__(self):
        return f"Q{self.vertex}@{self.position}"


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree", "triangularity", "maurer-cartan", "reach"
    slot: tuple[int, int] | None
    message: str


class TwistedComplex:
    """Summands plus a strictly triangular degree-1 differential."""

    __slots__ = ("params", "summands", "delta")

    def __init__(self, params: CategoryParams, summands: Sequence[Summand], delta=None):
        self.params = params
        self.summands = tuple(summands)
        element = params.field.element
        clean = {}
        for (i, j), combo in (delta or {}).items():
            kept = {}
            for name, c in combo.items():
                value = element(c) if isinstance(c, str) else c
                if value:
                    kept[name] = value
            if kept:
                clean[(i, j)] = kept
        self.delta = clean

    # -- basics ------------------------------------------------------------------

    @property
    def category(self) -> Category:
        return category_for(self.params)

    def __len__(self):
        return len(self.summands)

    @property
    def is_empty(self) -> bool:
        return not self.summands

    def __repr__(self):
        arrows = ", ".join(f"{i}->{j}:{'+'.join(sorted(c))}" for (i, j), c in sorted(self.delta.items()))
        return f"TwistedComplex({list(self.summands)}; {arrows})"

    def summand_multiset(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((s.vertex, s.position) for s in self.summands))

    def positions(self) -> list[int]:
        return [s.position for s in self.summands]

    def min_position(self) -> int:
        if self.is_empty:
            return 0
        return min(self.positions())

    def profile(self) -> tuple[dict[int, int], dict[int, int]]:
        """Multiplicity per position for vertex 0 (U) and vertex 1 (V)."""
        u: dict[int, int] = {}
        v: dict[int, int] = {}
        for s in self.summands:
            side = u if s.vertex == 0 else v
            side[s.position] = side.get(s.position, 0) + 1
        return u, v

    def entry_degree(self, i: int, j: int) -> int:
        return self.summands[i].position - self.summands[j].position + 1


def single_core(params: CategoryParams, vertex: int, position: int = 0) -> TwistedComplex:
    return TwistedComplex(params, [Summand(vertex, position)])


def empty_complex(params: CategoryParams) -> TwistedComplex:
    return TwistedComplex(params, [])


# -- combo helpers ------------------------------------------------------------------


def combo_add(field, a: Combo, b: Combo, scale=None) -> Combo:
    """a + scale*b (scale defaults to 1), dropping zeros."""
    out = dict(a)
    for name, c in b.items():
        term = field.mul(scale, c) if scale is not None else c
        acc = field.add(out.get(name, field.zero), term)
        if acc:
            out[name] = acc
        else:
            out.pop(name, None)
    return out


def combo_neg(field, a: Combo) -> Combo:
    return {name: field.neg(c) for name, c in a.items()}


# -- validation ----------------------------------------------------------------------


def validate(c: TwistedComplex) -> list[Violation]:
    """All invariant violations; an empty list means the complex is well-formed."""
    cat = c.category
    n = c.params.n
    out: list[Violation] = []
    for (i, j), combo in sorted(c.delta.items()):
        if not (0 <= i < len(c)) or not (0 <= j < len(c)):
            # Nothing else is meaningful with dangling indices.
            return [Violation("degree", (i, j), "entry indexes a missing summand")]
        if i == j:
            out.append(Violation("triangularity", (i, j), "self-loop entry"))
            continue
        a, b = c.summands[i], c.summands[j]
        want = c.entry_degree(i, j)
        for name in sorted(combo):
            m = cat.by_name.get(name)
            if m is None or m.source != a.vertex or m.target != b.vertex:
                out.append(Violation("degree", (i, j), f"{name} is not a morphism Q{a.vertex} -> Q{b.vertex}"))
            elif m.degree != want:
                out.append(Violation(
                    "degree", (i, j),
                    f"{name} has degree {m.degree}, slot {a}->{b} needs degree {want} for a total degree of 1"))

    cycle = _find_cycle(len(c), c.delta.keys())
    if cycle:
        out.append(Violation("triangularity", None, "entry digraph has a cycle: " + " -> ".join(map(str, cycle))))

    # Top-class entries must stay n-1 positions above the bottom of the complex.
    if not c.is_empty:
        floor = c.min_position() + n - 1
        for (i, j), combo in sorted(c.delta.items()):
            if any(name in ("f0", "f1") for name in combo) and c.summands[i].position < floor:
                out.append(Violation("reach", (i, j), f"top-class entry leaves position {c.summands[i].position}, "
                                                      f"below minimum+n-1 = {floor}"))

    out.extend(maurer_cartan_defects(c))
    return out


def _find_cycle(size: int, edges: Iterable[tuple[int, int]]) -> list[int] | None:
    adj: dict[int, list[int]] = {}
    for i, j in edges:
        adj.setdefault(i, []).append(j)
    color = [0] * size  # 0 unseen, 1 on stack, 2 done
    parent: dict[int, int] = {}
    for start in range(size):
        if color[start]:
            continue
        stack = [(start, iter(adj.get(start, ())))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    cycle = [nxt, node]
                    cur = node
                    while cur != nxt:
                        cur = parent[cur]
                        cycle.append(cur)
                    cycle.reverse()
                    return cycle
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(adj.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return None


def maurer_cartan_defects(c: TwistedComplex) -> list[Violation]:
    """Nonzero slots of the matrix square of delta under composition."""
    cat = c.category
    field = c.params.field
    by_source: dict[int, list[tuple[int, Combo]]] = {}
    for (i, j), combo in c.delta.items():
        by_source.setdefault(i, []).append((j, combo))
    square: dict[tuple[int, int], Combo] = {}
    for (i, j), first in c.delta.items():
        for k, second in by_source.get(j, ()):
            term = cat.compose(second, first)
            if term:
                square[(i, k)] = combo_add(field, square.get((i, k), {}), term)
    out = []
    for (i, k), combo in sorted(square.items()):
        if combo:
            shown = " + ".join(f"{field.format(c_)}*{name}" for name, c_ in sorted(combo.items()))
            out.append(Violation("maurer-cartan", (i, k), f"delta^2 at {c.summands[i]}->{c.summands[k]} is {shown}"))
    return out


def require_valid(c: TwistedComplex, what: str = "complex") -> None:
    bad = validate(c)
    if bad:
        raise ComplexError(f"{what} fails validation: " + "; ".join(v.message for v in bad[:4]))


# -- structural operations ----------------------------------------------------------


def shift(c: TwistedComplex, k: int) -> TwistedComplex:
    """The shift c[k]: every position decreases by k, entries unchanged."""
    return TwistedComplex(c.params, [Summand(s.vertex, s.position - k) for s in c.summands], c.delta)


def shift_normalized(c: TwistedComplex) -> tuple[TwistedComplex, int]:
    """Shift so the lowest occupied position is 0; returns (complex, applied shift)."""
    if c.is_empty:
        return c, 0
    k = c.min_position()
    return shift(c, k), k


def direct_sum(c: TwistedComplex, d: TwistedComplex) -> TwistedComplex:
    assert c.params == d.params, "direct_sum needs matching category parameters"
    off = len(c)
    delta = dict(c.delta)
    for (i, j), combo in d.delta.items():
        delta[(i + off, j + off)] = combo
    return TwistedComplex(c.params, list(c.summands) + list(d.summands), delta)


def canonical_order(c: TwistedComplex) -> TwistedComplex:
    """Reindex summands into (position desc, vertex asc, old index) order."""
    perm = sorted(range(len(c)), key=lambda i: (-c.summands[i].position, c.summands[i].vertex, i))
    where = {old: new for new, old in enumerate(perm)}
    delta = {(where[i], where[j]): combo for (i, j), combo in c.delta.items()}
    return TwistedComplex(c.params, [c.summands[i] for i in perm], delta)


# -- morphisms and hom complexes ------------------------------------------------------

Gen = tuple[int, int, str]  # (source summand, target summand, basis name)


@dataclass
class Morphism:
    """A degree-homogeneous morphism of twisted complexes, as slot combos."""

    source: TwistedComplex
    target: TwistedComplex
    degree: int
    comps: dict[tuple[int, int], Combo] = dc_field(default_factory=dict)

    def differential(self) -> "Morphism":
        """D(f) = delta_target . f - (-1)^deg f . delta_source."""
        field = self.source.params.field
        cat = self.source.category
        sign_flip = self.degree % 2 == 0  # subtract when degree is even
        out: dict[tuple[int, int], Combo] = {}

        def accum(slot, combo, negate):
            if not combo:
                return
            add = combo_neg(field, combo) if negate else combo
            acc = combo_add(field, out.get(slot, {}), add)
            if acc:
                out[slot] = acc
            else:
                out.pop(slot, None)

        tgt_by_source: dict[int, list[tuple[int, Combo]]] = {}
        for (j, j2), combo in self.target.delta.items():
            tgt_by_source.setdefault(j, []).append((j2, combo))
        for (i, j), fc in self.comps.items():
            for j2, dc_ in tgt_by_source.get(j, ()):
                accum((i, j2), cat.compose(dc_, fc), negate=False)
        src_by_target: dict[int, list[tuple[int, Combo]]] = {}
        for (i2, i), combo in self.source.delta.items():
            src_by_target.setdefault(i, []).append((i2, combo))
        for (i, j), fc in self.comps.items():
            for i2, dc_ in src_by_target.get(i, ()):
                accum((i2, j), cat.compose(fc, dc_), negate=sign_flip)
        return Morphism(self.source, self.target, self.degree + 1, out)

    def is_closed(self) -> bool:
        return not self.differential().comps


def zero_morphism(c: TwistedComplex, d: TwistedComplex, degree: int = 0) -> Morphism:
    return Morphism(c, d, degree, {})


class HomComplex:
    """
    The chain complex of graded morphisms between two twisted complexes.

    Generators in total degree g are triples (i, j, basis name) with
    deg(basis) - pos(i) + pos(j) = g; the differential is
    D(f) = delta_d . f - (-1)^g f . delta_c, checked to square to zero.
    """

    def __init__(self, c: TwistedComplex, d: TwistedComplex, check: bool = True):
        assert c.params == d.params, "hom complex needs matching category parameters"
        self.source = c
        self.target = d
        self.params = c.params
        field = c.params.field
        cat = c.category

        components: dict[int, list[Gen]] = {}
        for i, a in enumerate(c.summands):
            for j, b in enumerate(d.summands):
                for m in cat.morphism_space(a.vertex, b.vertex):
                    g = m.degree - a.position + b.position
                    components.setdefault(g, []).append((i, j, m.name))
        self.components = {g: tuple(gens) for g, gens in sorted(components.items())}
        self.index = {gen: (g, k) for g, gens in self.components.items() for k, gen in enumerate(gens)}

        self.differentials: dict[int, Matrix] = {}
        for g, gens in self.components.items():
            nxt = self.components.get(g + 1, ())
            rows = len(nxt)
            mat = [[field.zero] * len(gens) for _ in range(rows)]
            for col, gen in enumerate(gens):
                image = self._apply_d(cat, field, gen, g)
                for out_gen, coeff in image.items():
                    slot = self.index.get(out_gen)
                    if slot is None:
                        raise ComplexError(f"hom differential leaves the graded module at {out_gen}")
                    mat[slot[1]][col] = coeff
            self.differentials[g] = Matrix(field, mat, cols=len(gens))
        if check:
            self._check_square_zero()

    def _apply_d(self, cat, field, gen: Gen, g: int) -> dict[Gen, object]:
        i, j, name = gen
        out: dict[Gen, object] = {}

        def accum(i2, j2, combo, negate):
            for nm, coeff in combo.items():
                key = (i2, j2, nm)
                term = field.neg(coeff) if negate else coeff
                acc = field.add(out.get(key, field.zero), term)
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)

        one = {name: field.one}
        for (jj, j2), combo in self.target.delta.items():
            if jj == j:
                accum(i, j2, cat.compose(combo, one), negate=False)
        negate = g % 2 == 0  # the sign -(-1)^g
        for (i2, ii), combo in self.source.delta.items():
            if ii == i:
                accum(i2, j, cat.compose(one, combo), negate=negate)
        return out

    def _check_square_zero(self):
        for g, mat in self.differentials.items():
            nxt = self.differentials.get(g + 1)
            if nxt is None or mat.rows == 0 or nxt.rows == 0:
                continue
            if not nxt.mul(mat).is_zero():
                raise ComplexError(f"hom-complex differential fails D.D = 0 at degree {g}")

    def dimensions(self) -> dict[int, int]:
        return {g: len(gens) for g, gens in self.components.items()}

    def cohomology_ranks(self) -> dict[int, int]:
        ranks: dict[int, int] = {}
        rank_of = {g: m.rank() for g, m in self.differentials.items()}
        for g, gens in self.components.items():
            r = len(gens) - rank_of.get(g, 0) - rank_of.get(g - 1, 0)
            if r:
                ranks[g] = r
        return ranks

    def cocycle_representatives(self) -> dict[int, list[list]]:
        """
        A deterministic cocycle basis of cohomology per degree: extend an
        echelonized coboundary basis by kernel vectors, newest first.
        """
        field = self.params.field
        reps: dict[int, list[list]] = {}
        for g, gens in self.components.items():
            dim = len(gens)
            if dim == 0:
                continue
            span_rows: list[list] = []
            below = self.differentials.get(g - 1)
            if below is not None and below.rows:
                for col in range(below.cols):
                    vec = [below.entries[r][col] for r in range(below.rows)]
                    _row_reduce_insert(field, span_rows, vec)
            chosen = []
            kernel = self.differentials[g].kernel_basis() if g in self.differentials else []
            for vec in kernel:
                if _row_reduce_insert(field, span_rows, vec):
                    chosen.append(vec)
            if chosen:
                reps[g] = chosen
        return reps


def _row_reduce_insert(field, rows: list[list], vec: list) -> bool:
    """Reduce vec against echelon rows; insert and report True if independent."""
    v = list(vec)
    for row in rows:
        piv = next((k for k, x in enumerate(row) if x), None)
        if piv is not None and v[piv]:
            factor = field.mul(v[piv], field.inv(row[piv]))
            v = [field.sub(a, field.mul(factor, b)) for a, b in zip(v, row)]
    piv = next((k for k, x in enumerate(v) if x), None)
    if piv is None:
        return False
    rows.append(v)
    return True


def hom_complex(c: TwistedComplex, d: TwistedComplex, check: bool = True) -> HomComplex:
    return HomComplex(c, d, check=check)


def hf_ranks(c: TwistedComplex, d: TwistedComplex) -> dict[int, int]:
    """Degreewise cohomology ranks of the hom complex from c to d."""
    return hom_complex(c, d, check=False).cohomology_ranks()


def total_rank(ranks: dict[int, int]) -> int:
    return sum(ranks.values())


# -- cone ------------------------------------------------------------------------------


def cone(f: Morphism) -> TwistedComplex:
    """
    The mapping cone of a closed degree-0 morphism: source summands dropped
    one position (differential negated, the sign the shifted block absorbs),
    then target summands, with f in the lower-left block.
    """
    if f.degree != 0:
        raise ComplexError(f"cone needs a degree-0 morphism, got degree {f.degree}")
    if f.source.params != f.target.params:
        raise ComplexError("cone needs matching category parameters on both sides")
    dfail = f.differential().comps
    if dfail:
        raise ComplexError(f"cone needs a closed morphism; D(f) is nonzero at slots {sorted(dfail)}")
    c, d = f.source, f.target
    field = c.params.field
    summands = [Summand(s.vertex, s.position - 1) for s in c.summands] + list(d.summands)
    off = len(c)
    delta: dict[tuple[int, int], Combo] = {}
    for (i, j), combo in c.delta.items():
        delta[(i, j)] = combo_neg(field, combo)
    for (i, j), combo in f.comps.items():
        delta[(i, off + j)] = dict(combo)
    for (i, j), combo in d.delta.items():
        delta[(off + i, off + j)] = dict(combo)
    return TwistedComplex(c.params, summands, delta)


# -- Gaussian-elimination minimal model -----------------------------------------------


def minimize(c: TwistedComplex) -> TwistedComplex:
    """
    Cancel unit-labeled entries until none remain; the quasi-isomorphism type
    is preserved and the result carries no identity arrows. Idempotent.
    """
    field = c.params.field
    cat = c.category
    unit_names = {"e0", "e1"}
    alive = set(range(len(c)))
    delta: dict[tuple[int, int], Combo] = {k: dict(v) for k, v in c.delta.items()}

    while True:
        pick = None
        for (a, b) in sorted(delta):
            combo = delta[(a, b)]
            lam = next((combo[u] for u in unit_names if combo.get(u)), None)
            if lam is not None:
                pick = (a, b, lam)
                break
        if pick is None:
            break
        a, b, lam = pick
        lam_inv = field.inv(lam)
        into_b = [(x, combo) for (x, y), combo in delta.items() if y == b and x != a]
        out_of_a = [(y, combo) for (x, y), combo in delta.items() if x == a and y != b]
        for x, xb in into_b:
            for y, ay in out_of_a:
                corr = cat.compose(ay, xb)
                if not corr:
                    continue
                updated = combo_add(field, delta.get((x, y), {}), corr, scale=field.neg(lam_inv))
                if updated:
                    delta[(x, y)] = updated
                else:
                    delta.pop((x, y), None)
        alive.discard(a)
        alive.discard(b)
        for key in [k for k in delta if a in k or b in k]:
            del delta[key]

    order = sorted(alive, key=lambda i: (-c.summands[i].position, c.summands[i].vertex, i))
    where = {old: new for new, old in enumerate(order)}
    new_delta = {(where[i], where[j]): combo for (i, j), combo in delta.items()}
    return TwistedComplex(c.params, [c.summands[i] for i in order], new_delta)


# -- quasi-isomorphism oracle -----------------------------------------------------------

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


def equivalent(c: TwistedComplex, d: TwistedComplex, seed: int = 0) -> str:
    """
    Sound three-valued quasi-isomorphism test: minimize both, compare summand
    multisets, then search the space of closed degree-0 maps for one whose
    cone minimizes to the empty complex. Never returns a wrong yes/no.
    """
    cm = minimize(c)
    dm = minimize(d)
    if cm.summand_multiset() != dm.summand_multiset():
        return NO
    if cm.is_empty:
        return YES

    hom = hom_complex(cm, dm, check=False)
    gens0 = hom.components.get(0, ())
    d0 = hom.differentials.get(0)
    if d0 is None or not gens0:
        return INCONCLUSIVE
    kernel = d0.kernel_basis()
    if not kernel:
        return INCONCLUSIVE

    field = c.params.field
    size = len(cm)
    unit_names = {"e0", "e1"}
    eblocks = []
    for vec in kernel:
        rows = [[field.zero] * size for _ in range(size)]
        for idx, (i, j, name) in enumerate(gens0):
            if name in unit_names and vec[idx]:
                rows[j][i] = field.add(rows[j][i], vec[idx])
        eblocks.append(Matrix(field, rows, cols=size))

    zero = Matrix.zeros(field, size, size)
    for coeffs in candidate_coefficients(field, len(kernel), seed):
        block = zero
        for cf, eb in zip(coeffs, eblocks):
            if cf:
                block = block.add(eb.scale(cf))
        if not block.det_nonzero():
            continue
        comps: dict[tuple[int, int], Combo] = {}
        for k, cf in enumerate(coeffs):
            if not cf:
                continue
            for idx, (i, j, name) in enumerate(gens0):
                val = kernel[k][idx]
                if not val:
                    continue
                slot = comps.setdefault((i, j), {})
                acc = field.add(slot.get(name, field.zero), field.mul(cf, val))
                if acc:
                    slot[name] = acc
                else:
                    slot.pop(name, None)
        candidate = Morphism(cm, dm, 0, {k: v for k, v in comps.items() if v})
        if minimize(cone(candidate)).is_empty:
            return YES
    return INCONCLUSIVE
