"""
Exact scalar and matrix arithmetic over a prime field or the rationals.

Scalars are plain Python objects: ints in [0, p) for characteristic p, and
fractions.Fraction for characteristic 0. A Field instance owns the arithmetic,
so values stay cheap to hash and copy. Matrices are dense; everything in this
engine lives at desk scale (well under 10^3 summands), so no sparsity games.

Elimination over a prime field runs on numpy int64 internally: with the
default p = 32003 we have p^2 < 2^63, so a multiply-accumulate step never
overflows and every intermediate is reduced mod p. Characteristic 0 uses
Fraction rows in pure Python. Both paths are exact; there is no floating
point anywhere in this package.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


DEFAULT_PRIME = 32003


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """A prime field F_p (characteristic p) or the rationals (characteristic 0)."""

    characteristic: int = DEFAULT_PRIME

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not is_prime(c):
            raise FieldError(f"characteristic must be 0 or prime, got {c}")

    # -- element construction ------------------------------------------------

    def element(self, value) -> int | Fraction:
        """Coerce an int, Fraction or 'num/den' string into a field element."""
        if isinstance(value, str):
            if "/" in value:
                num, den = value.split("/", 1)
                value = Fraction(int(num), int(den))
            else:
                value = int(value)
        if self.characteristic == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.characteristic == 0:
                raise FieldError(f"{value} has no image in F_{self.characteristic}")
            return (value.numerator * pow(value.denominator, -1, self.characteristic)) % self.characteristic
        return int(value) % self.characteristic

    def format(self, value) -> str:
        """Render an element as a decimal string, 'num/den' over the rationals."""
        if self.characteristic == 0:
            f = Fraction(value)
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return str(value % self.characteristic)

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    # -- arithmetic ----------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return (a * b) % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverting zero field element")
        if self.characteristic == 0:
            return Fraction(1) / Fraction(a)
        return pow(int(a), -1, self.characteristic)

    def random_element(self, rng: random.Random):
        if self.characteristic:
            return rng.randrange(self.characteristic)
        return Fraction(rng.randrange(-9, 10))

    def all_elements(self) -> list:
        """Every element; only sensible for small prime fields."""
        if self.characteristic == 0:
            raise FieldError("the rationals cannot be enumerated")
        return list(range(self.characteristic))


class Matrix:
    """A dense rows x cols matrix over a Field. Values are immutable by convention."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence], cols: int | None = None):
        self.field = field
        self.entries = tuple(tuple(field.element(v) for v in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else (cols or 0)
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged rows")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field: Field, size: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(size)] for i in range(size)])

    # -- basics ----------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.entries == other.entries
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash((self.field, self.entries, self.cols))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in row) for row in self.entries)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        return all(not v for row in self.entries for v in row)

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.field, [[] for _ in range(self.cols)] if self.cols else [], cols=0)
        return Matrix(self.field, list(zip(*self.entries)), cols=self.rows)

    def add(self, other: "Matrix") -> "Matrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.element(c)
        return Matrix(f, [[f.mul(c, v) for v in row] for row in self.entries])

    def mul(self, other: "Matrix") -> "Matrix":
        assert self.cols == other.rows, "shape mismatch"
        f = self.field
        if f.characteristic:
            p = f.characteristic
            a = np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)
            b = np.array(other.entries, dtype=np.int64).reshape(other.rows, other.cols)
            # Split the inner dimension so each partial sum stays below 2^63.
            out = np.zeros((self.rows, other.cols), dtype=np.int64)
            step = max(1, (1 << 62) // max(1, (p - 1) * (p - 1)))
            for k0 in range(0, self.cols, step):
                out = (out + a[:, k0:k0 + step] @ b[k0:k0 + step, :]) % p
            return Matrix(f, out.tolist())
        ot = list(zip(*other.entries)) if other.entries else []
        return Matrix(f, [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in ot] for row in self.entries])

    def apply(self, vec: Sequence) -> list:
        """Matrix times column vector."""
        f = self.field
        v = [f.element(x) for x in vec]
        assert len(v) == self.cols
        out = []
        for row in self.entries:
            acc = f.zero
            for a, b in zip(row, v):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return out

    # -- elimination -------------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and the pivot column list."""
        f = self.field
        if self.rows == 0 or self.cols == 0:
            return self, []
        if f.characteristic:
            arr = np.array(self.entries, dtype=np.int64)
            red, pivots = _rref_modp(arr, f.characteristic)
            return Matrix(f, red.tolist()), pivots
        red, pivots = _rref_fraction([list(r) for r in self.entries])
        return Matrix(f, red), pivots

    def rank(self) -> int:
        """Row rank over the field."""
        return len(self.rref()[1])

    def kernel_basis(self) -> list[list]:
        """A basis of the right kernel {x : Mx = 0}; size = cols - rank."""
        f = self.field
        red, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for j in free:
            vec = [f.zero] * self.cols
            vec[j] = f.one
            for r, pc in enumerate(pivots):
                vec[pc] = f.neg(red.entries[r][j])
            basis.append(vec)
        return basis

    def solve(self, b: Sequence) -> list | None:
        """Some x with Mx = b, or None when the system is inconsistent."""
        f = self.field
        b = [f.element(v) for v in b]
        assert len(b) == self.rows, "right-hand side length must equal rows"
        aug = Matrix(f, [list(row) + [bv] for row, bv in zip(self.entries, b)] if self.rows else [])
        if self.rows == 0:
            return [f.zero] * self.cols
        red, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [f.zero] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = red.entries[r][self.cols]
        return x

    def det_nonzero(self) -> bool:
        """Whether a square matrix is invertible."""
        assert self.rows == self.cols
        return self.rank() == self.rows


def _rref_modp(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.mod(arr, p)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rref_fraction(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [v - factor * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


# -- affine families of square matrices -------------------------------------------

SAMPLE_BUDGET = 32  # seeded points tried before declaring none
SMALL_FIELD_BOUND = 33  # fields with fewer elements get the exhaustive fallback


def candidate_coefficients(field: Field, count: int, seed: int) -> Iterable[tuple]:
    """
    Deterministic stream of coefficient tuples for an affine matrix family.

    Starts with the all-ones point and the standard unit vectors (the common
    winners), then seeded random points up to SAMPLE_BUDGET; over fields with
    fewer than SMALL_FIELD_BOUND elements it finishes by exhausting a
    2-parameter sub-family.
    """
    if count == 0:
        yield ()
        return
    seen = set()

    def emit(t):
        if t not in seen:
            seen.add(t)
            return True
        return False

    one, zero = field.one, field.zero
    first = [tuple([one] * count)]
    for i in range(count):
        vec = [zero] * count
        vec[i] = one
        first.append(tuple(vec))
    budget = SAMPLE_BUDGET
    for t in first:
        if budget <= 0:
            break
        if emit(t):
            budget -= 1
            yield t
    rng = random.Random(seed)
    while budget > 0:
        t = tuple(field.random_element(rng) for _ in range(count))
        budget -= 1
        if emit(t):
            yield t
    if field.characteristic and field.characteristic < SMALL_FIELD_BOUND:
        elements = field.all_elements()
        for a in elements:
            for b in elements:
                vec = [zero] * count
                vec[0] = a
                if count > 1:
                    vec[1] = b
                t = tuple(vec)
                if emit(t):
                    yield t


def generic_invertible(basepoint: Matrix, directions: Sequence[Matrix], seed: int = 0) -> Matrix | None:
    """
    Search the affine family basepoint + sum(c_i * directions[i]) for an
    invertible member; deterministic for a fixed seed. Returns None when the
    sampling budget (plus the small-field exhaustion) finds nothing.
    """
    assert basepoint.rows == basepoint.cols
    for coeffs in candidate_coefficients(basepoint.field, len(directions), seed):
        m = basepoint
        for c, d in zip(coeffs, directions):
            if c:
                m = m.add(d.scale(c))
        if m.rows == 0 or m.det_nonzero():
            return m
    return None
