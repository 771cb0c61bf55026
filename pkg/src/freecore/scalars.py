"""Exact arithmetic for eigenvalue ratios.

Positive rationals are stdlib fractions.  A finitely generated
multiplicative subgroup of the positive rationals is stored as an integer
lattice of prime exponent vectors with a Hermite reduced basis, so group
equality, membership, rank and enumeration are exact integer questions.
No floating point enters at any stage.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian

from .errors import FactorBoundExceeded, NonPositiveRatio, RatioOutsideGroup

DEFAULT_PRIME_BOUND = 10**6
PRIME_BOUND_ENV = "FREECORE_PRIME_BOUND"


def prime_bound() -> int:
    """Trial division bound, overridable through the environment."""
    raw = os.environ.get(PRIME_BOUND_ENV)
    if raw is None:
        return DEFAULT_PRIME_BOUND
    try:
        value = int(raw)
    except ValueError:
        raise FactorBoundExceeded(
            f"{PRIME_BOUND_ENV} must be an integer, got {raw!r}"
        ) from None
    return max(2, value)


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' into an exact fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise NonPositiveRatio(f"not a rational: {text!r}") from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _factor_natural(n: int, bound: int, exps: dict[int, int], sign: int) -> None:
    for p in (2, 3):
        while n % p == 0:
            exps[p] = exps.get(p, 0) + sign
            n //= p
    d = 5
    while d * d <= n:
        if d > bound:
            raise FactorBoundExceeded(
                f"cannot factor {n} by trial division up to {bound}; "
                f"raise {PRIME_BOUND_ENV} for larger primes"
            )
        for cand in (d, d + 2):
            while n % cand == 0:
                exps[cand] = exps.get(cand, 0) + sign
                n //= cand
        d += 6
    if n > 1:
        # no divisor up to sqrt(n), so the cofactor is prime
        exps[n] = exps.get(n, 0) + sign


def factor_positive(value: Fraction, bound: int | None = None) -> dict[int, int]:
    """Prime exponent map of a positive rational."""
    value = Fraction(value)
    if value <= 0:
        raise NonPositiveRatio(f"ratio must be positive, got {value}")
    if bound is None:
        bound = prime_bound()
    exps: dict[int, int] = {}
    _factor_natural(value.numerator, bound, exps, +1)
    _factor_natural(value.denominator, bound, exps, -1)
    return {p: e for p, e in exps.items() if e != 0}


def _leading(row: tuple[int, ...] | list[int]) -> int:
    for i, v in enumerate(row):
        if v != 0:
            return i
    return -1


def hermite_basis(vectors: list[list[int]], width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical Hermite reduced basis of the lattice spanned by vectors.

    Row echelon with strictly increasing pivot columns, positive pivots,
    and entries above each pivot reduced into [0, pivot).  Uniqueness of
    this form is what makes group equality a tuple comparison.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < width:
        active = [r for r in rows if r[col] != 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            small = active[0]
            for r in active[1:]:
                q = r[col] // small[col]
                for i in range(col, width):
                    r[i] -= q * small[i]
            active = [r for r in rows if r[col] != 0]
        if active:
            pivot = active[0]
            rows.remove(pivot)
            basis.append(pivot)
        rows = [r for r in rows if any(r)]
        col += 1
    for row in basis:
        if row[_leading(row)] < 0:
            for i in range(width):
                row[i] = -row[i]
    # reduce above-pivot entries in increasing pivot order: later rows
    # vanish on earlier pivot columns, so finished columns stay reduced
    for idx in range(len(basis)):
        row = basis[idx]
        lead = _leading(row)
        for upper in basis[:idx]:
            q = upper[lead] // row[lead]
            if q:
                for i in range(width):
                    upper[i] -= q * row[i]
    return tuple(tuple(r) for r in basis)


def _reduce_against(vec: list[int], basis: tuple[tuple[int, ...], ...]) -> list[int] | None:
    """Reduce vec by the echelon basis; None when a pivot fails to divide."""
    vec = list(vec)
    for row in basis:
        lead = _leading(row)
        if vec[lead] == 0:
            continue
        q, rem = divmod(vec[lead], row[lead])
        if rem != 0:
            return None
        for i in range(len(vec)):
            vec[i] -= q * row[i]
    return vec


@dataclass(frozen=True)
class GroupElement:
    """Element of a multiplicative subgroup, as prime exponents."""

    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def value(self) -> Fraction:
        out = Fraction(1)
        for p, e in zip(self.primes, self.exponents):
            out *= Fraction(p) ** e
        return out

    @property
    def is_identity(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def exponent_map(self) -> dict[str, int]:
        return {str(p): e for p, e in zip(self.primes, self.exponents) if e != 0}

    def inverse(self) -> "GroupElement":
        return GroupElement(self.primes, tuple(-e for e in self.exponents))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.primes != other.primes:
            raise ValueError("elements of different ambient prime lists")
        return GroupElement(
            self.primes, tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.primes, tuple(k * e for e in self.exponents))

    def __str__(self) -> str:
        return format_rational(self.value)


@dataclass(frozen=True)
class MultGroup:
    """Finitely generated multiplicative subgroup of the positive rationals."""

    primes: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def trivial(cls) -> "MultGroup":
        return cls((), ())

    @classmethod
    def from_ratios(cls, ratios, bound: int | None = None) -> "MultGroup":
        """Group generated by the given positive rationals."""
        factored = [factor_positive(Fraction(r), bound) for r in ratios]
        primes = sorted({p for f in factored for p in f})
        vectors = [[f.get(p, 0) for p in primes] for f in factored]
        basis = hermite_basis(vectors, len(primes))
        used = [i for i in range(len(primes)) if any(row[i] for row in basis)]
        primes = tuple(primes[i] for i in used)
        basis = tuple(tuple(row[i] for i in used) for row in basis)
        return cls(primes, basis)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_trivial(self) -> bool:
        return not self.basis

    def generator_values(self) -> list[Fraction]:
        return [GroupElement(self.primes, row).value for row in self.basis]

    def identity(self) -> GroupElement:
        return GroupElement(self.primes, (0,) * len(self.primes))

    def _vector_of(self, value: Fraction) -> list[int] | None:
        """Exponent vector over self.primes, or None if other primes occur."""
        value = Fraction(value)
        if value <= 0:
            raise NonPositiveRatio(f"ratio must be positive, got {value}")
        num, den = value.numerator, value.denominator
        vec = []
        for p in self.primes:
            e = 0
            while num % p == 0:
                num //= p
                e += 1
            while den % p == 0:
                den //= p
                e -= 1
            vec.append(e)
        if num != 1 or den != 1:
            return None
        return vec

    def contains(self, value) -> bool:
        if isinstance(value, GroupElement):
            value = value.value
        vec = self._vector_of(Fraction(value))
        if vec is None:
            return False
        reduced = _reduce_against(vec, self.basis)
        return reduced is not None and not any(reduced)

    def __contains__(self, value) -> bool:
        return self.contains(value)

    def contains_group(self, other: "MultGroup") -> bool:
        return all(self.contains(v) for v in other.generator_values())

    def element_of(self, value) -> GroupElement:
        """The given rational as an element of this group."""
        value = Fraction(value)
        if not self.contains(value):
            raise RatioOutsideGroup(
                f"{format_rational(value)} is not in the group generated by "
                f"{[format_rational(v) for v in self.generator_values()]}"
            )
        vec = self._vector_of(value)
        assert vec is not None
        return GroupElement(self.primes, tuple(vec))

    def merged(self, other: "MultGroup") -> "MultGroup":
        return MultGroup.from_ratios(self.generator_values() + other.generator_values())

    def enumerate_elements(self, height: int) -> list[GroupElement]:
        """All elements with basis coordinates bounded by height in max norm.

        Sorted by (max norm, lexicographic coordinates), so the identity
        comes first and the listing is deterministic and inversion closed.
        """
        if height < 0:
            raise ValueError("height must be nonnegative")
        if self.rank == 0:
            return [self.identity()]
        coords = sorted(
            _cartesian(range(-height, height + 1), repeat=self.rank),
            key=lambda c: (max(abs(x) for x in c), c),
        )
        out = []
        for c in coords:
            exps = [0] * len(self.primes)
            for k, row in zip(c, self.basis):
                for i, v in enumerate(row):
                    exps[i] += k * v
            out.append(GroupElement(self.primes, tuple(exps)))
        return out

    def cyclic_generator(self) -> Fraction | None:
        """The generator in (0,1) when the group is infinite cyclic."""
        if self.rank != 1:
            return None
        value = GroupElement(self.primes, self.basis[0]).value
        return value if value < 1 else 1 / value

    def describe(self) -> dict:
        return {
            "primes": list(self.primes),
            "basis": [list(r) for r in self.basis],
            "rank": self.rank,
            "generators": [format_rational(v) for v in self.generator_values()],
        }

    def __str__(self) -> str:
        if self.is_trivial:
            return "{1}"
        gens = ", ".join(format_rational(v) for v in self.generator_values())
        return f"<{gens}>"
