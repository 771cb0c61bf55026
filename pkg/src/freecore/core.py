"""Discrete core of a free product pair.

The core is the crossed product by the point modular spectrum group.
Over the label algebra it splits as an amalgamated free product of the
per-input cores, the canonical trace restricts to labels as
Tr(e_gamma) = 1/gamma, and translating labels scales that trace by the
inverse of the translating element.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    INFINITE,
    AbstractII1,
    AlgebraSpec,
    FullIIIWithCore,
    FreeGroupFactor,
    GeometricMatrixTail,
    HyperfiniteDiffuse,
    MatrixBlock,
)
from .errors import SpecInvalid, SubgroupNotContained, TrivialGamma
from .freeprod import FreeProductResult, free_product
from .modular import point_spectrum_ratios
from .scalars import GroupElement, MultGroup, format_rational
from .structure import (
    AmalgamatedFreeProduct,
    Amplify,
    Atom,
    CrossedProduct,
    Diffuse,
    DirectSum,
    FreeGroup,
    GammaDirectSum,
    LabelAlgebra,
    Opaque,
    StructureExpr,
)


@dataclass(frozen=True)
class CoreLabels:
    """The label algebra: one minimal projection e_gamma per group element."""

    group: MultGroup

    def trace_of(self, label: GroupElement | Fraction) -> Fraction:
        if not isinstance(label, GroupElement):
            label = self.group.element_of(label)
        return 1 / label.value

    def labels(self, height: int) -> list[GroupElement]:
        return self.group.enumerate_elements(height)

    def render(self) -> str:
        return f"ℓ∞(Γ), Γ = {self.group}"


@dataclass(frozen=True)
class DualAction:
    """Label translation by a fixed group element.

    Composing with the label trace scales it by 1/gamma exactly:
    trace(apply(e)) == trace_scale * trace(e).
    """

    gamma: GroupElement
    group: MultGroup

    def apply(self, label: GroupElement | Fraction) -> GroupElement:
        if not isinstance(label, GroupElement):
            label = self.group.element_of(label)
        return self.gamma * label

    @property
    def trace_scale(self) -> Fraction:
        return 1 / self.gamma.value


def dual_action(group: MultGroup, gamma) -> DualAction:
    return DualAction(group.element_of(gamma), group)


@dataclass(frozen=True)
class TransportConstituent:
    """One f_kj (x) delta_label piece of a transported projection."""

    block: int  # 1-based block index
    slot: int  # 1-based eigenvalue slot within the block
    label: GroupElement
    trace: Fraction


@dataclass(frozen=True)
class TransportResult:
    """A minimal label projection rewritten inside an atomic input's core."""

    gamma: GroupElement
    constituents: tuple[TransportConstituent, ...]
    total: Fraction
    expected: Fraction  # 1/gamma
    remainder: Fraction  # mass sitting beyond the materialized tail depth

    def conservation_defect(self) -> Fraction:
        return self.expected - self.total - self.remainder


def transport_atomic(
    spec: AlgebraSpec,
    gamma,
    group: MultGroup | None = None,
    height: int = 6,
) -> TransportResult:
    """Rewrite e_gamma through an atomic type I input.

    Each block contributes one constituent per eigenvalue slot; the slot
    with eigenvalue lam = c * r (c the block's top eigenvalue) lands on
    the label r^{-1} gamma with trace c * r / gamma.  For finite specs
    the constituents sum to exactly 1/gamma; a geometric tail leaves the
    stated remainder, and total + remainder == 1/gamma still holds.
    """
    if not spec.atomic_type_i():
        raise SpecInvalid(f"{spec.name!r} is not atomic of type I")
    if group is None:
        group = MultGroup.from_ratios(sorted(point_spectrum_ratios(spec)))
    g = group.element_of(gamma.value if isinstance(gamma, GroupElement) else gamma)
    constituents = []
    for k, block in enumerate(spec.materialized_blocks(height), start=1):
        eigs = block.eigenvalues
        if any(eigs[i] < eigs[i + 1] for i in range(len(eigs) - 1)):
            raise SpecInvalid(
                f"block {k} eigenvalues must be sorted in decreasing order"
            )
        c = eigs[0]
        for j, lam in enumerate(eigs, start=1):
            ratio = group.element_of(lam / c)
            label = ratio.inverse() * g
            constituents.append(
                TransportConstituent(k, j, label, c * ratio.value / g.value)
            )
    total = sum((p.trace for p in constituents), Fraction(0))
    remainder = Fraction(0)
    if spec.tail is not None:
        remainder = spec.tail.remainder(height, spec.tail_total()) / g.value
    return TransportResult(g, tuple(constituents), total, 1 / g.value, remainder)


@dataclass(frozen=True)
class FixedPointCorner:
    """Central decomposition of a full factor summand's core."""

    subgroup: MultGroup
    entries: tuple[tuple[GroupElement, StructureExpr], ...]
    expr: StructureExpr


def fixed_point_corner(
    summand: FullIIIWithCore, ambient: MultGroup, height: int = 3
) -> FixedPointCorner:
    """Corner decomposition of a full factor's core inside the ambient group.

    The summand's own ratio subgroup must embed in the ambient group;
    each of its elements indexes an amplification of L(F_inf) whose
    amplification constant depends on the label.
    """
    if not ambient.contains_group(summand.sd_group):
        raise SubgroupNotContained(
            f"the ratio subgroup of {summand.label!r} does not embed in "
            "the ambient group"
        )
    corner = Amplify("t(γ)", FreeGroup(param=INFINITE))
    entries = tuple(
        (g, Amplify(f"t({format_rational(g.value)})", FreeGroup(param=INFINITE)))
        for g in summand.sd_group.enumerate_elements(height)
    )
    return FixedPointCorner(
        summand.sd_group,
        entries,
        GammaDirectSum(summand.sd_group, corner, per_label=True),
    )


#: kinds whose core structure the calculus resolves completely
CLOSED_KINDS = frozenset({"matrix", "diffuse", "free_group", "full_iii"})


@dataclass(frozen=True)
class CoreComponent:
    side: int  # 1 or 2
    index: int  # summand position, -1 for a tail family
    source: str
    shape: str
    expr: StructureExpr
    transportable: bool


def _component(
    side: int, index: int, summand, group: MultGroup, height: int
) -> CoreComponent:
    if isinstance(summand, GeometricMatrixTail):
        return CoreComponent(
            side,
            index,
            f"tail<{summand.ratio_group}>",
            "hyperfinite_semifinite",
            CrossedProduct("geometric block family", group),
            transportable=True,
        )
    if isinstance(summand, MatrixBlock):
        expr: StructureExpr
        if summand.tracial:
            expr = GammaDirectSum(group, Opaque(label=summand.describe()))
        else:
            expr = CrossedProduct(summand.describe(), group)
        return CoreComponent(
            side, index, summand.describe(), "hyperfinite_semifinite", expr, True
        )
    if isinstance(summand, HyperfiniteDiffuse):
        return CoreComponent(
            side,
            index,
            summand.describe(),
            "hyperfinite_semifinite",
            GammaDirectSum(group, Diffuse()),
            transportable=False,
        )
    if isinstance(summand, FreeGroupFactor):
        leaf: StructureExpr = FreeGroup(param=summand.param)
        if summand.amplification != 1:
            leaf = Amplify(summand.amplification, leaf)
        return CoreComponent(
            side,
            index,
            summand.describe(),
            "tensor_with_labels",
            GammaDirectSum(group, leaf),
            transportable=False,
        )
    if isinstance(summand, AbstractII1):
        return CoreComponent(
            side,
            index,
            summand.describe(),
            "tensor_with_labels",
            GammaDirectSum(group, Opaque(label=summand.label)),
            transportable=False,
        )
    assert isinstance(summand, FullIIIWithCore)
    corner = fixed_point_corner(summand, group, height)
    return CoreComponent(
        side,
        index,
        summand.describe(),
        "amplified_free_group_sum",
        corner.expr,
        transportable=False,
    )


@dataclass(frozen=True)
class CoreDecomposition:
    pair: FreeProductResult
    group: MultGroup
    labels: CoreLabels
    components: tuple[CoreComponent, ...]
    expr: AmalgamatedFreeProduct
    central_atoms: StructureExpr | None  # countably many finite part copies
    diffuse_core: StructureExpr | None  # resolved class of the diffuse part's core
    notes: tuple[str, ...]
    flags: dict


def build_core(
    spec1: AlgebraSpec, spec2: AlgebraSpec, height: int = 3
) -> CoreDecomposition:
    """Decompose the core of a free product pair over its label algebra."""
    fp = free_product(spec1, spec2)
    group = fp.sd
    if group.is_trivial:
        raise TrivialGamma(
            "both states are traces, so the point spectrum group is trivial "
            "and the core is the algebra itself"
        )
    labels = CoreLabels(group)
    components = []
    for side, spec in ((1, spec1), (2, spec2)):
        for index, summand in enumerate(spec.summands):
            components.append(_component(side, index, summand, group, height))
        if spec.tail is not None:
            components.append(_component(side, -1, spec.tail, group, height))
    expr = AmalgamatedFreeProduct(
        base=LabelAlgebra(group),
        factors=(
            CrossedProduct(spec1.name, group),
            CrossedProduct(spec2.name, group),
        ),
    )
    central_atoms = None
    if fp.m_d:
        central_atoms = GammaDirectSum(
            group, DirectSum(tuple(Atom(c) for c in fp.m_d))
        )
    kinds = {s.kind for s in spec1.summands} | {s.kind for s in spec2.summands}
    notes = [
        "label traces Tr(e_γ) = 1/γ sum divergently over the whole group",
        "translating labels by γ scales the trace by 1/γ",
    ]
    diffuse_core = None
    if kinds <= CLOSED_KINDS:
        diffuse_core = FreeGroup(param=INFINITE, semifinite=True)
        notes.append(
            "the diffuse part's core is an amplification of L(F_∞); "
            "its fundamental group forces the infinite parameter"
        )
    else:
        notes.append(
            "an opaque tracial factor is present; the diffuse part's core "
            "is resolved by the centralizer pipeline instead"
        )
    flags = {
        "label_trace_sum_diverges": True,
        "dual_action_scales_trace": True,
        "central_atom_copies_countable": fp.m_d != (),
    }
    return CoreDecomposition(
        fp,
        group,
        labels,
        tuple(components),
        expr,
        central_atoms,
        diffuse_core,
        tuple(notes),
        flags,
    )
