"""Modular data of a pair of weighted algebras.

The multiplicative group generated by all eigenvalue ratios of the two
states determines the type of the diffuse part and the periodicity of
its modular flow.  Everything here is exact: the group is an integer
lattice and periods are kept symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraSpec
from .errors import Dim22Rejected
from .scalars import MultGroup, format_rational


def is_tracial(spec: AlgebraSpec) -> bool:
    """True when every summand carries its normalized trace."""
    return spec.tracial


def point_spectrum_ratios(spec: AlgebraSpec, depth: int = 6) -> set[Fraction]:
    """Eigenvalue ratios of the state, inversion closed and containing 1.

    For a tail family the contribution is exact regardless of depth: the
    ratios occurring in the family generate the tail's whole ratio group,
    so its generators (and inverses) are returned directly.
    """
    out = {Fraction(1)}
    for s in spec.summands:
        out |= s.ratio_set()
    if spec.tail is not None:
        for v in spec.tail.ratio_group.generator_values():
            out.add(v)
            out.add(1 / v)
    return out


def sd_invariant(spec1: AlgebraSpec, spec2: AlgebraSpec) -> MultGroup:
    """Multiplicative group generated by both states' ratio spectra."""
    ratios = point_spectrum_ratios(spec1) | point_spectrum_ratios(spec2)
    return MultGroup.from_ratios(sorted(ratios))


@dataclass(frozen=True)
class TSet:
    """Symbolic description of the modular period group.

    kind is one of 'full_line' (trivial ratio group, tracial flow),
    'cyclic' (rank one: the periods are integer multiples of
    2*pi/|ln lam|), or 'trivial' (rank two or more: no nonzero period).
    """

    kind: str
    lam: Fraction | None = None

    def describe(self) -> str:
        if self.kind == "full_line":
            return "R (every t is a period)"
        if self.kind == "cyclic":
            return f"(2*pi/|ln({format_rational(self.lam)})|) * Z"
        return "{0}"


def t_set(group: MultGroup) -> TSet:
    if group.is_trivial:
        return TSet("full_line")
    lam = group.cyclic_generator()
    if lam is not None:
        return TSet("cyclic", lam)
    return TSet("trivial")


@dataclass(frozen=True)
class FactorType:
    """Type of the diffuse factor part of a free product pair."""

    kind: str  # 'II1', 'III_lambda', 'III_1'
    lam: Fraction | None = None

    def describe(self) -> str:
        if self.kind == "II1":
            return "II_1"
        if self.kind == "III_lambda":
            return f"III_{format_rational(self.lam)}"
        return "III_1"


def classify_diffuse_type(spec1: AlgebraSpec, spec2: AlgebraSpec) -> FactorType:
    """Type of the diffuse part from the ratio group of the pair."""
    if spec1.dimension() == 2 and spec2.dimension() == 2:
        raise Dim22Rejected(
            "both algebras are two dimensional; this pairing is excluded"
        )
    group = sd_invariant(spec1, spec2)
    if group.is_trivial:
        return FactorType("II1")
    lam = group.cyclic_generator()
    if lam is not None:
        return FactorType("III_lambda", lam)
    return FactorType("III_1")
