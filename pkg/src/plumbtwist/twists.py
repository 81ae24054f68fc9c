"""
Twist functors along the two cores, braid words, and relation checking.

The positive twist along Q_i is the cone of the evaluation morphism
HF(Q_i, c) ⊗ Q_i -> c, built from deterministic cocycle representatives and
minimized. The inverse twist is the cone of co-evaluation into
HF(c, Q_i)^dual ⊗ Q_i, shifted down by one: with our cone convention
(source block at position-1) that extra shift is exactly what makes
twist followed by inverse twist land on the identity on the nose rather
than up to shift; the pair is verified against each other in the tests.

Braid words are free words in the four letters {s0, S0, s1, S1}
(lowercase = positive twist); no reduction is ever assumed, cancellation is
an emergent property the tests observe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .category import CategoryParams, ParameterError, make_params
from .complexes import (
    Morphism,
    Summand,
    TwistedComplex,
    cone,
    equivalent,
    hom_complex,
    minimize,
    require_valid,
    shift,
    single_core,
    YES,
)


@dataclass(frozen=True)
class BraidLetter:
    vertex: int  # 0 or 1
    power: int  # +1 or -1

    def __post_init__(self):
        if self.vertex not in (0, 1) or self.power not in (1, -1):
            raise ValueError(f"bad braid letter ({self.vertex}, {self.power})")

    def inverse(self) -> "BraidLetter":
        return BraidLetter(self.vertex, -self.power)

    def __str__(self):
        return ("s" if self.power == 1 else "S") + str(self.vertex)


BraidWord = tuple[BraidLetter, ...]

LETTERS = (BraidLetter(0, 1), BraidLetter(0, -1), BraidLetter(1, 1), BraidLetter(1, -1))


def parse_word(text: str) -> BraidWord:
    """Parse 's0 S1 s1' style words; tokens are s/S followed by the vertex."""
    letters = []
    for token in text.split():
        if len(token) != 2 or token[0] not in "sS" or token[1] not in "01":
            raise ValueError(f"bad braid letter {token!r}; expected one of s0 S0 s1 S1")
        letters.append(BraidLetter(int(token[1]), 1 if token[0] == "s" else -1))
    return tuple(letters)


def word_to_string(word: BraidWord) -> str:
    return " ".join(str(letter) for letter in word)


def invert_word(word: BraidWord) -> BraidWord:
    return tuple(letter.inverse() for letter in reversed(word))


# -- the twist functors -----------------------------------------------------------------


def twist(c: TwistedComplex, vertex: int, power: int = 1) -> TwistedComplex:
    """Apply the twist along Q_vertex (power=+1) or its inverse (power=-1)."""
    require_valid(c, "twist input")
    if power == 1:
        return _positive_twist(c, vertex)
    if power == -1:
        return _inverse_twist(c, vertex)
    raise ValueError(f"twist power must be +1 or -1, got {power}")


def _positive_twist(c: TwistedComplex, vertex: int) -> TwistedComplex:
    core = single_core(c.params, vertex)
    hom = hom_complex(core, c, check=False)
    reps = hom.cocycle_representatives()
    source_summands: list[Summand] = []
    ev_comps: dict[tuple[int, int], dict] = {}
    for g in sorted(reps):
        for vec in reps[g]:
            src_index = len(source_summands)
            source_summands.append(Summand(vertex, g))
            for idx, (_, j, name) in enumerate(hom.components[g]):
                if vec[idx]:
                    slot = ev_comps.setdefault((src_index, j), {})
                    slot[name] = vec[idx]
    source = TwistedComplex(c.params, source_summands)
    evaluation = Morphism(source, c, 0, ev_comps)
    return minimize(cone(evaluation))


def _inverse_twist(c: TwistedComplex, vertex: int) -> TwistedComplex:
    core = single_core(c.params, vertex)
    hom = hom_complex(c, core, check=False)
    reps = hom.cocycle_representatives()
    target_summands: list[Summand] = []
    coev_comps: dict[tuple[int, int], dict] = {}
    for g in sorted(reps):
        for vec in reps[g]:
            tgt_index = len(target_summands)
            target_summands.append(Summand(vertex, -g))
            for idx, (i, _, name) in enumerate(hom.components[g]):
                if vec[idx]:
                    slot = coev_comps.setdefault((i, tgt_index), {})
                    slot[name] = vec[idx]
    target = TwistedComplex(c.params, target_summands)
    coevaluation = Morphism(c, target, 0, coev_comps)
    return minimize(shift(cone(coevaluation), -1))


def apply_letter(letter: BraidLetter, c: TwistedComplex) -> TwistedComplex:
    return twist(c, letter.vertex, letter.power)


def apply_braid(word, c: TwistedComplex) -> TwistedComplex:
    """Left-to-right fold of twist over the word; output is minimized."""
    if isinstance(word, str):
        word = parse_word(word)
    out = minimize(c)
    for letter in word:
        out = apply_letter(letter, out)
    return out


def check_braid_relation(c: TwistedComplex, seed: int = 0) -> str:
    """equivalent(T0 T1 T0 (c), T1 T0 T1 (c)) as a yes/no/inconclusive verdict."""
    require_valid(c, "braid relation input")
    left = apply_braid(parse_word("s0 s1 s0"), c)
    right = apply_braid(parse_word("s1 s0 s1"), c)
    return equivalent(left, right, seed=seed)


# -- orbit search -----------------------------------------------------------------------


class SearchExhausted(RuntimeError):
    """The bounded orbit search ran dry; at desk scale this falsifies the
    expectation that the two cores lie in one braid orbit, so shout."""


def core_orbit_witness(n: int, characteristic: int = 32003, max_length: int = 4) -> tuple[BraidWord, int]:
    """
    A braid word w and shift s with apply_braid(w, Q0) equivalent to Q1[s],
    found by breadth-first search over words of length <= max_length.
    """
    try:
        params = make_params(n, characteristic)
    except ParameterError:
        raise
    q0 = single_core(params, 0)
    for length in range(1, max_length + 1):
        for letters in itertools.product(LETTERS, repeat=length):
            result = apply_braid(letters, q0)
            if len(result) == 1 and result.summands[0].vertex == 1:
                s = -result.summands[0].position
                target = single_core(params, 1, result.summands[0].position)
                if equivalent(result, target) == YES:
                    return tuple(letters), s
    raise SearchExhausted(
        f"no braid word of length <= {max_length} carries Q0 to a shifted Q1 at n={n}; "
        "this contradicts the expected single-orbit picture and needs investigation")
