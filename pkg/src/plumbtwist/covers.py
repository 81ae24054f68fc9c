"""
Cover specialization, indecomposable splitting, fibre-rank discrimination,
and the Betti feasibility inequality.

Passing to a cover of one core is modeled purely by its algebraic shadow:
every differential entry labeled by that core's top class is pulled back
from the fundamental class, hence dies -- outright for an infinite cover,
and because the characteristic divides the index for a finite one. Orbit
comparison of the resulting pieces is replaced by the fibre-rank
discriminator: pair a complex against a cotangent fibre of one core, where
only unit-labeled entries act (the top class acts trivially on the fibre,
and the cross-core generators pair only with their own core).

The feasibility checker settles, over the positive integers, whether
dimV * (beta - 2) <= -2 has a solution with dimV >= 2, where beta is the sum
of the interior Betti numbers of the non-spherical core; beta >= 2 is
impossible, so only sphere-like (beta = 0) and one-interior-class (beta = 1)
cohomologies admit a categorical twist.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    Summand,
    TwistedComplex,
    hf_ranks,
    minimize,
    require_valid,
    single_core,
    total_rank,
    validate,
)
from .linalg import Matrix
from .normalizer import admissible


class CoverError(ValueError):
    pass


INFINITE = "infinite"


@dataclass(frozen=True)
class CoverSpec:
    """A connected cover of one core: finite of the given index, or infinite."""

    covered_vertex: int
    index: int | str = INFINITE

    def __post_init__(self):
        if self.covered_vertex not in (0, 1):
            raise CoverError(f"covered_vertex must be 0 or 1, got {self.covered_vertex}")
        if self.index != INFINITE and (not isinstance(self.index, int) or self.index < 1):
            raise CoverError(f"index must be a positive integer or '{INFINITE}', got {self.index!r}")

    def compatible_with(self, characteristic: int) -> bool:
        if self.index == INFINITE:
            return True
        return characteristic != 0 and self.index % characteristic == 0

    def check(self, characteristic: int) -> None:
        if not self.compatible_with(characteristic):
            raise CoverError(
                f"a finite cover of index {self.index} needs the characteristic to divide it; got {characteristic}")


def specialize(c: TwistedComplex, cover: CoverSpec) -> TwistedComplex:
    """Delete every top-class entry of the covered vertex; summands unchanged."""
    require_valid(c, "specialize input")
    cover.check(c.params.field.characteristic)
    dead = "f0" if cover.covered_vertex == 0 else "f1"
    delta = {}
    for slot, combo in c.delta.items():
        kept = {name: coeff for name, coeff in combo.items() if name != dead}
        if kept:
            delta[slot] = kept
    out = TwistedComplex(c.params, c.summands, delta)
    require_valid(out, "specialized complex")
    return out


def decompose(c: TwistedComplex) -> list[TwistedComplex]:
    """
    Minimize, then split into connected components of the summand graph whose
    edges are nonzero entries; the direct sum of the pieces is the minimized
    input. Over a field this is the splitting into indecomposables whenever
    the pieces are connected with unit degree-0 endomorphisms.
    """
    require_valid(c, "decompose input")
    m = minimize(c)
    if m.is_empty:
        return []
    parent = list(range(len(m)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in m.delta:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for k in range(len(m)):
        groups.setdefault(find(k), []).append(k)
    pieces = []
    for members in groups.values():
        members.sort()
        where = {old: new for new, old in enumerate(members)}
        delta = {
            (where[i], where[j]): combo
            for (i, j), combo in m.delta.items()
            if i in where and j in where
        }
        pieces.append(TwistedComplex(m.params, [m.summands[k] for k in members], delta))
    pieces.sort(key=lambda piece: min((s.position, s.vertex) for s in piece.summands))
    return pieces


def fibre_rank(c: TwistedComplex, vertex: int) -> dict[int, int]:
    """
    Cohomology ranks of the pairing with a cotangent fibre of Q_vertex: one
    generator per vertex summand at its position, only unit entries act.
    """
    require_valid(c, "fibre_rank input")
    field = c.params.field
    unit = "e0" if vertex == 0 else "e1"
    picked = [k for k, s in enumerate(c.summands) if s.vertex == vertex]
    where = {k: i for i, k in enumerate(picked)}
    by_degree: dict[int, list[int]] = {}
    for k in picked:
        by_degree.setdefault(c.summands[k].position, []).append(k)
    mats: dict[int, Matrix] = {}
    for t, gens in sorted(by_degree.items()):
        nxt = by_degree.get(t + 1, [])
        rows = [[c.delta.get((i, j), {}).get(unit, field.zero) for i in gens] for j in nxt]
        mats[t] = Matrix(field, rows, cols=len(gens))
    ranks: dict[int, int] = {}
    rank_of = {t: m.rank() for t, m in mats.items()}
    for t, gens in by_degree.items():
        r = len(gens) - rank_of.get(t, 0) - rank_of.get(t - 1, 0)
        if r:
            ranks[t] = r
    return ranks


def fibre_total(c: TwistedComplex, vertex: int) -> int:
    return total_rank(fibre_rank(c, vertex))


# -- Betti feasibility ------------------------------------------------------------------


@dataclass(frozen=True)
class BettiVector:
    numbers: tuple[int, ...]

    def __post_init__(self):
        b = self.numbers
        if len(b) < 2:
            raise CoverError("a Betti vector needs at least degrees 0 and n")
        if any((not isinstance(v, int)) or v < 0 for v in b):
            raise CoverError("Betti numbers must be nonnegative integers")
        if b[0] != 1 or b[-1] != 1:
            raise CoverError(f"need b^0 = b^n = 1, got b^0={b[0]}, b^n={b[-1]}")

    @property
    def n(self) -> int:
        return len(self.numbers) - 1

    @property
    def beta(self) -> int:
        return sum(self.numbers[1:-1])


@dataclass(frozen=True)
class FeasibilityReport:
    betti: tuple[int, ...]
    beta: int
    feasible: bool
    min_dimv: int | None
    boundary_ranks: int | None  # rank of each outer kernel/cokernel slot: dimV - 1 - beta
    annotation: str

    def to_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "beta": self.beta,
            "feasible": self.feasible,
            "min_dimv": self.min_dimv,
            "boundary_ranks": self.boundary_ranks,
            "annotation": self.annotation,
        }


MAX_DIMV_SCAN = 64  # dimV*(beta-2) is monotone in dimV; tiny scan keeps it obvious


def truncation_feasibility(betti: BettiVector | tuple[int, ...]) -> FeasibilityReport:
    """
    Decide whether dimV * (beta - 2) <= -2 admits an integer solution
    dimV >= 2; report the smallest solution and the forced outer slot ranks.
    """
    if not isinstance(betti, BettiVector):
        betti = BettiVector(tuple(betti))
    beta = betti.beta
    min_dimv = next((d for d in range(2, MAX_DIMV_SCAN) if d * (beta - 2) <= -2), None)
    feasible = min_dimv is not None
    if beta == 0:
        note = "sphere-like interior cohomology: the twist is the known spherical one"
    elif feasible:
        note = "one interior class: the inequality is saturated at dimV = 2"
    else:
        note = "interior rank >= 2 makes the acyclicity inequality unsatisfiable"
    return FeasibilityReport(
        betti=betti.numbers,
        beta=beta,
        feasible=feasible,
        min_dimv=min_dimv,
        boundary_ranks=(min_dimv - 1 - beta) if feasible else None,
        annotation=note,
    )


# -- rank bookkeeping on one-sphere complexes --------------------------------------------


@dataclass(frozen=True)
class BoundaryRankReport:
    hf_against_core: dict[int, int]
    total_rank: int
    total_rank_is_two: bool
    end_multiplicities: tuple[int, int]
    ends_are_simple: bool

    @property
    def ok(self) -> bool:
        return self.total_rank_is_two and self.ends_are_simple

    def to_dict(self) -> dict:
        return {
            "hf_against_core": {str(k): v for k, v in sorted(self.hf_against_core.items())},
            "total_rank": self.total_rank,
            "total_rank_is_two": self.total_rank_is_two,
            "end_multiplicities": list(self.end_multiplicities),
            "ends_are_simple": self.ends_are_simple,
        }


def boundary_rank_check(c: TwistedComplex) -> BoundaryRankReport:
    """
    For a complex with exactly one sphere (vertex 1) summand: the vertex-0
    part must pair with the core Q0 in total rank 2 and be simple (unit
    multiplicity) at both of its outer positions.
    """
    require_valid(c, "boundary_rank_check input")
    spheres = [k for k, s in enumerate(c.summands) if s.vertex == 1]
    if len(spheres) != 1:
        raise CoverError(f"boundary_rank_check needs exactly one sphere summand, found {len(spheres)}")
    if not admissible(c).ok:
        raise CoverError("boundary_rank_check needs an admissible complex")
    zeros = [k for k, s in enumerate(c.summands) if s.vertex == 0]
    if not zeros:
        raise CoverError("no vertex-0 summands to check")
    where = {old: new for new, old in enumerate(zeros)}
    sub_delta = {
        (where[i], where[j]): combo
        for (i, j), combo in c.delta.items()
        if i in where and j in where
    }
    part = TwistedComplex(c.params, [c.summands[k] for k in zeros], sub_delta)
    bad = validate(part)
    if bad:
        raise CoverError("the vertex-0 part is not itself a twisted complex: " + bad[0].message)
    ranks = hf_ranks(part, single_core(c.params, 0))
    total = total_rank(ranks)
    positions = [s.position for s in part.summands]
    lo, hi = min(positions), max(positions)
    ends = (positions.count(lo), positions.count(hi))
    return BoundaryRankReport(
        hf_against_core=ranks,
        total_rank=total,
        total_rank_is_two=total == 2,
        end_multiplicities=ends,
        ends_are_simple=ends == (1, 1),
    )
