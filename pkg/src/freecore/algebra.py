"""State-weighted algebra descriptions.

An input algebra is a countable direct sum of summands, each carrying the
state mass it receives.  Finite matrix blocks carry exact eigenvalue lists
for the density of the state; everything else is a symbolic kind with a
convention for its modular behavior.  An optional geometric tail rule
finitely presents one infinite family of two by two blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonPositiveRatio, SpecInvalid
from .scalars import MultGroup, format_rational


class Infinity:
    """Symbolic infinite value; compares above every fraction."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("freecore-infinity")

    def __gt__(self, other):
        return not isinstance(other, Infinity)

    def __lt__(self, other):
        return False

    def __ge__(self, other):
        return True

    def __le__(self, other):
        return isinstance(other, Infinity)


INFINITE = Infinity()


def _require_positive(value: Fraction, what: str) -> Fraction:
    value = Fraction(value)
    if value <= 0:
        raise NonPositiveRatio(f"{what} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class MatrixBlock:
    """Finite type I factor block with the state's eigenvalue list."""

    size: int
    eigenvalues: tuple[Fraction, ...]

    kind = "matrix"

    def __post_init__(self):
        if self.size < 1:
            raise SpecInvalid(f"matrix block size must be >= 1, got {self.size}")
        object.__setattr__(
            self, "eigenvalues", tuple(Fraction(e) for e in self.eigenvalues)
        )
        if len(self.eigenvalues) != self.size:
            raise SpecInvalid(
                f"matrix block of size {self.size} needs {self.size} eigenvalues, "
                f"got {len(self.eigenvalues)}"
            )
        for e in self.eigenvalues:
            _require_positive(e, "eigenvalue")

    @property
    def weight(self) -> Fraction:
        return sum(self.eigenvalues, Fraction(0))

    @property
    def dimension(self) -> int:
        return self.size * self.size

    @property
    def tracial(self) -> bool:
        return len(set(self.eigenvalues)) == 1

    def ratio_set(self) -> set[Fraction]:
        return {a / b for a in self.eigenvalues for b in self.eigenvalues}

    def describe(self) -> str:
        eigs = ", ".join(format_rational(e) for e in self.eigenvalues)
        return f"M{self.size}({eigs})"


@dataclass(frozen=True)
class HyperfiniteDiffuse:
    """Diffuse hyperfinite summand; carries its trace by convention."""

    weight: Fraction
    finite: bool = True

    kind = "diffuse"

    def __post_init__(self):
        object.__setattr__(self, "weight", _require_positive(self.weight, "weight"))

    dimension = INFINITE
    tracial = True

    def ratio_set(self) -> set[Fraction]:
        return {Fraction(1)}

    def describe(self) -> str:
        return "R" if self.finite else "R0,1"


@dataclass(frozen=True)
class FreeGroupFactor:
    """Interpolated free group factor, possibly amplified."""

    weight: Fraction
    param: Fraction | Infinity
    amplification: Fraction = Fraction(1)

    kind = "free_group"

    def __post_init__(self):
        object.__setattr__(self, "weight", _require_positive(self.weight, "weight"))
        object.__setattr__(
            self, "amplification", _require_positive(self.amplification, "amplification")
        )
        if not isinstance(self.param, Infinity):
            p = Fraction(self.param)
            if p <= 1:
                raise SpecInvalid(
                    f"free group parameter must lie in (1, inf], got {format_rational(p)}"
                )
            object.__setattr__(self, "param", p)

    dimension = INFINITE
    tracial = True

    def ratio_set(self) -> set[Fraction]:
        return {Fraction(1)}

    def describe(self) -> str:
        p = "inf" if isinstance(self.param, Infinity) else format_rational(self.param)
        if self.amplification != 1:
            return f"L(F_{p})^{format_rational(self.amplification)}"
        return f"L(F_{p})"


@dataclass(frozen=True)
class AbstractII1:
    """Opaque tracial factor known only by name."""

    weight: Fraction
    label: str = "N"

    kind = "abstract_ii1"

    def __post_init__(self):
        object.__setattr__(self, "weight", _require_positive(self.weight, "weight"))

    dimension = INFINITE
    tracial = True

    def ratio_set(self) -> set[Fraction]:
        return {Fraction(1)}

    def describe(self) -> str:
        return self.label


@dataclass(frozen=True)
class FullIIIWithCore:
    """Full type III factor with extremal almost periodic state.

    Carries the multiplicative group generated by its modular point
    spectrum and the promise that its discrete core is an infinite
    amplification of the infinitely generated free group factor.
    """

    weight: Fraction
    sd_group: MultGroup
    label: str = "M"

    kind = "full_iii"

    def __post_init__(self):
        object.__setattr__(self, "weight", _require_positive(self.weight, "weight"))
        if self.sd_group.is_trivial:
            raise SpecInvalid(
                "a full type III summand needs a nontrivial point spectrum group"
            )

    dimension = INFINITE
    tracial = False

    def ratio_set(self) -> set[Fraction]:
        out = {Fraction(1)}
        for v in self.sd_group.generator_values():
            out.add(v)
            out.add(1 / v)
        return out

    def describe(self) -> str:
        return f"{self.label}[{self.sd_group}]"


Summand = MatrixBlock | HyperfiniteDiffuse | FreeGroupFactor | AbstractII1 | FullIIIWithCore


@dataclass(frozen=True)
class GeometricMatrixTail:
    """Infinite family of two by two blocks, finitely presented.

    Block k (k >= 1) receives weight total*(1-base)*base^(k-1) and
    eigenvalues proportional to (1, g_k), where g_k runs through the
    elements of ratio_group inside (0,1) in enumeration order.  With
    base = 1/2 and full tail weight this is the classical geometric
    family whose k-th block has mass 2^-k.
    """

    ratio_group: MultGroup
    weight_base: Fraction = Fraction(1, 2)
    size: int = 2

    kind = "matrix_tail"

    def __post_init__(self):
        base = Fraction(self.weight_base)
        if not 0 < base < 1:
            raise SpecInvalid(f"tail weight base must lie in (0,1), got {base}")
        object.__setattr__(self, "weight_base", base)
        if self.size != 2:
            raise SpecInvalid("only two by two tail families are supported")
        if self.ratio_group.is_trivial:
            raise SpecInvalid("tail ratio group must be nontrivial")

    def ratio_values(self, count: int) -> list[Fraction]:
        """First count elements of the ratio group inside (0,1)."""
        out: list[Fraction] = []
        seen: set[Fraction] = set()
        height = 1
        while len(out) < count:
            for elem in self.ratio_group.enumerate_elements(height):
                v = elem.value
                if v < 1 and v not in seen:
                    seen.add(v)
                    out.append(v)
                    if len(out) == count:
                        break
            height += 1
        return out

    def block_weight(self, k: int, total: Fraction) -> Fraction:
        return total * (1 - self.weight_base) * self.weight_base ** (k - 1)

    def materialize(self, depth: int, total: Fraction) -> list[MatrixBlock]:
        ratios = self.ratio_values(depth)
        blocks = []
        for k in range(1, depth + 1):
            w = self.block_weight(k, total)
            g = ratios[k - 1]
            blocks.append(MatrixBlock(2, (w / (1 + g), w * g / (1 + g))))
        return blocks

    def remainder(self, depth: int, total: Fraction) -> Fraction:
        return total * self.weight_base**depth


@dataclass(frozen=True)
class ProjectionRef:
    """Reference to a projection inside a spec.

    diagonal=None points at the whole summand unit; otherwise it names a
    half open range [start, stop) of eigenvalue slots of a matrix block.
    """

    summand: int
    diagonal: tuple[int, int] | None = None


@dataclass(frozen=True)
class AlgebraSpec:
    """A countable direct sum with state weights summing to one."""

    name: str
    summands: tuple[Summand, ...] = ()
    tail: GeometricMatrixTail | None = None

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        self.validate()

    def validate(self) -> None:
        if not self.summands and self.tail is None:
            raise SpecInvalid(f"algebra {self.name!r} has no summands")
        for s in self.summands:
            if isinstance(s, HyperfiniteDiffuse) and not s.finite:
                raise SpecInvalid(
                    "state-weighted inputs cannot contain a semifinite diffuse summand"
                )
        total = sum((s.weight for s in self.summands), Fraction(0))
        if self.tail is None:
            if total != 1:
                raise SpecInvalid(
                    f"summand weights of {self.name!r} sum to "
                    f"{format_rational(total)}, expected 1"
                )
        else:
            if total >= 1:
                raise SpecInvalid(
                    f"prefix weights of {self.name!r} leave no mass for the tail"
                )
        if self.dimension() == 1:
            raise SpecInvalid(f"algebra {self.name!r} is one dimensional")

    def tail_total(self) -> Fraction:
        if self.tail is None:
            return Fraction(0)
        return 1 - sum((s.weight for s in self.summands), Fraction(0))

    def dimension(self) -> int | Infinity:
        if self.tail is not None:
            return INFINITE
        dim = 0
        for s in self.summands:
            if s.dimension is INFINITE:
                return INFINITE
            dim += s.dimension
        return dim

    @property
    def tracial(self) -> bool:
        return self.tail is None and all(s.tracial for s in self.summands)

    def atomic_type_i(self) -> bool:
        """All mass lives on finite matrix blocks."""
        blocks_only = all(isinstance(s, MatrixBlock) for s in self.summands)
        return blocks_only and (self.tail is None or self.tail.kind == "matrix_tail")

    def scalar_summands(self) -> list[tuple[int, Fraction]]:
        """Size one central summands as (index, weight) pairs."""
        return [
            (i, s.weight)
            for i, s in enumerate(self.summands)
            if isinstance(s, MatrixBlock) and s.size == 1
        ]

    def materialized_blocks(self, depth: int) -> list[MatrixBlock]:
        """Matrix blocks of the spec with the tail expanded to depth."""
        blocks = [s for s in self.summands if isinstance(s, MatrixBlock)]
        if self.tail is not None:
            blocks.extend(self.tail.materialize(depth, self.tail_total()))
        return blocks

    def trace_of(self, ref: ProjectionRef) -> Fraction:
        if not 0 <= ref.summand < len(self.summands):
            raise SpecInvalid(f"no summand with index {ref.summand}")
        s = self.summands[ref.summand]
        if ref.diagonal is None:
            return s.weight
        if not isinstance(s, MatrixBlock):
            raise SpecInvalid("diagonal ranges only make sense for matrix blocks")
        start, stop = ref.diagonal
        if not 0 <= start < stop <= s.size:
            raise SpecInvalid(f"diagonal range {ref.diagonal} out of bounds")
        return sum(s.eigenvalues[start:stop], Fraction(0))

    def describe(self) -> str:
        parts = [s.describe() for s in self.summands]
        if self.tail is not None:
            parts.append(f"tail<{self.tail.ratio_group}>")
        return f"{self.name} = " + (" (+) ".join(parts) if parts else "0")
