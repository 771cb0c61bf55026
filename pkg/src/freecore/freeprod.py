"""Structure of a free product pair.

Splits the free product into its finite dimensional part (scalar atom
pairs) and a diffuse part, classifies the diffuse part's type from the
ratio group, and records the scalar strip reduction that realizes the
diffuse part as a corner of a simpler pair.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraSpec, MatrixBlock, ProjectionRef
from .errors import Dim22Rejected, NotScalarSummand, UnsupportedStructure
from .fdim import FdimValue, finite_free_product, scalar_atom_rule
from .modular import FactorType, TSet, classify_diffuse_type, sd_invariant, t_set
from .scalars import MultGroup, format_rational
from .structure import Atom, DirectSum, FreeGroup, Opaque, StructureExpr


def _block_eigenvalues(spec: AlgebraSpec, threshold: Fraction) -> list[Fraction]:
    """Eigenvalues of all size >= 2 blocks exceeding threshold, tail included."""
    out = [
        lam
        for s in spec.summands
        if isinstance(s, MatrixBlock) and s.size >= 2
        for lam in s.eigenvalues
        if lam > threshold
    ]
    if spec.tail is not None:
        total = spec.tail_total()
        k = 1
        while spec.tail.block_weight(k, total) > threshold:
            for b in spec.tail.materialize(k, total)[k - 1 :]:
                out.extend(lam for lam in b.eigenvalues if lam > threshold)
            k += 1
    return out


def _reject_scalar_block_pairs(spec_a: AlgebraSpec, spec_b: AlgebraSpec) -> None:
    scalars = [w for _, w in spec_a.scalar_summands()]
    if not scalars:
        return
    alpha = max(scalars)
    for lam in _block_eigenvalues(spec_b, 1 - alpha):
        raise UnsupportedStructure(
            f"a scalar summand of mass {format_rational(alpha)} against a "
            f"matrix block eigenvalue {format_rational(lam)} would leave a "
            "matrix atom; that finite part rule is not implemented"
        )


@dataclass(frozen=True)
class StripReduction:
    """One scalar strip step: the pair whose corner carries the diffuse part."""

    side: int  # 1 or 2: which input hosts the stripped atom
    projection: ProjectionRef
    stripped_weight: Fraction
    delta: Fraction  # inverse mass of the complement
    reduced_spec: AlgebraSpec  # the hosting algebra minus the atom, renormalized
    corner_pair: tuple[AlgebraSpec, AlgebraSpec]  # two point algebra vs other input
    steps: tuple[str, ...]

    def ratio_sets_match(self, spec1: AlgebraSpec, spec2: AlgebraSpec) -> bool:
        """Ratio group preservation, checkable exactly."""
        return sd_invariant(spec1, spec2) == sd_invariant(
            self.reduced_spec, self.corner_pair[0]
        ).merged(sd_invariant(self.corner_pair[1], self.corner_pair[1]))


def strip_reduction(
    spec1: AlgebraSpec, spec2: AlgebraSpec, side: int, ref: ProjectionRef
) -> StripReduction:
    """Strip a scalar central summand off one factor.

    The free product is then a corner of the simpler pair: the hosting
    algebra without the atom (weights rescaled by delta), freely joined
    with the corner of (two point algebra) * (other input) under the
    complement projection.  The second member of corner_pair is that
    inner pair's nontrivial side.
    """
    if side not in (1, 2):
        raise NotScalarSummand(f"side must be 1 or 2, got {side}")
    host = spec1 if side == 1 else spec2
    other = spec2 if side == 1 else spec1
    if ref.diagonal is not None:
        raise NotScalarSummand("a diagonal range is not a central summand")
    if not 0 <= ref.summand < len(host.summands):
        raise NotScalarSummand(f"no summand with index {ref.summand} in {host.name!r}")
    target = host.summands[ref.summand]
    if not (isinstance(target, MatrixBlock) and target.size == 1):
        raise NotScalarSummand(
            f"summand {ref.summand} of {host.name!r} is {target.describe()}, "
            "not a one dimensional central summand"
        )
    w = target.weight
    if w >= 1 or len(host.summands) == 1 and host.tail is None:
        raise NotScalarSummand("cannot strip the whole unit")
    delta = 1 / (1 - w)

    def rescale(s):
        if isinstance(s, MatrixBlock):
            return MatrixBlock(s.size, tuple(e * delta for e in s.eigenvalues))
        return dataclasses.replace(s, weight=s.weight * delta)

    remaining = tuple(
        rescale(s) for i, s in enumerate(host.summands) if i != ref.summand
    )
    reduced = AlgebraSpec(f"{host.name} stripped", remaining, host.tail)
    two_point = AlgebraSpec(
        f"{host.name} atom split",
        (MatrixBlock(1, (w,)), MatrixBlock(1, (1 - w,))),
    )
    steps = (
        f"strip scalar summand {ref.summand} of input {side} "
        f"(mass {format_rational(w)}), rescale by delta = {format_rational(delta)}",
        f"inner pair: two point algebra ({format_rational(w)}, "
        f"{format_rational(1 - w)}) freely joined with {other.name!r}",
        "corner of the inner pair under the complement is stably "
        "isomorphic to the diffuse part",
    )
    return StripReduction(side, ref, w, delta, reduced, (two_point, other), steps)


@dataclass(frozen=True)
class FreeProductResult:
    """Finite part, diffuse type and modular data of a free product."""

    spec1: AlgebraSpec
    spec2: AlgebraSpec
    m_d: tuple[Fraction, ...]
    m_c_weight: Fraction
    m_c_type: FactorType
    sd: MultGroup
    t: TSet
    expr: StructureExpr
    m_c_param: FdimValue | None  # free group parameter when tracial and finite
    reduction: StripReduction | None
    flags: dict

    @property
    def reduction_trace(self) -> tuple[str, ...]:
        return self.reduction.steps if self.reduction else ()


def _hosting_choice(
    spec1: AlgebraSpec, spec2: AlgebraSpec
) -> tuple[int, int, Fraction] | None:
    """Which scalar summand dominates the finite part: (side, index, mass).

    All qualifying atom pairs share a scalar summand on one side; when
    both sides work (a single pair) the heavier atom hosts, side 1 on a
    tie.  Deterministic by construction.
    """
    s1 = spec1.scalar_summands()
    s2 = spec2.scalar_summands()
    pairs = [
        (i, j, a, b) for i, a in s1 for j, b in s2 if a + b > 1
    ]
    if not pairs:
        return None
    left = {i for i, _, _, _ in pairs}
    right = {j for _, j, _, _ in pairs}
    candidates = []
    if len(left) == 1:
        i = next(iter(left))
        candidates.append((1, i, dict(s1)[i]))
    if len(right) == 1:
        j = next(iter(right))
        candidates.append((2, j, dict(s2)[j]))
    assert candidates, "atom pairs cannot straddle both sides"
    return max(candidates, key=lambda c: (c[2], -c[0]))


def free_product(spec1: AlgebraSpec, spec2: AlgebraSpec) -> FreeProductResult:
    """Split a free product into finite and diffuse parts and classify."""
    if spec1.dimension() == 2 and spec2.dimension() == 2:
        raise Dim22Rejected(
            "both algebras are two dimensional; this pairing is excluded"
        )
    _reject_scalar_block_pairs(spec1, spec2)
    _reject_scalar_block_pairs(spec2, spec1)
    scalars1 = [w for _, w in spec1.scalar_summands()]
    scalars2 = [w for _, w in spec2.scalar_summands()]
    if scalars1 and scalars2:
        m_d = tuple(scalar_atom_rule(scalars1, scalars2))
    else:
        m_d = ()
    m_c_weight = 1 - sum(m_d, Fraction(0))
    sd = sd_invariant(spec1, spec2)
    kind = classify_diffuse_type(spec1, spec2)
    param: FdimValue | None = None
    if spec1.tracial and spec2.tracial:
        try:
            param = finite_free_product(spec1, spec2).param
        except UnsupportedStructure:
            param = None
    entries: list[StructureExpr] = [Atom(c) for c in m_d]
    if param is not None:
        diffuse: StructureExpr = FreeGroup(param=param, weight=m_c_weight)
    else:
        diffuse = Opaque(
            label=f"diffuse part (type {kind.describe()})", weight=m_c_weight
        )
    expr = DirectSum(tuple(entries + [diffuse])) if entries else diffuse
    reduction = None
    host = _hosting_choice(spec1, spec2)
    if host is not None:
        side, index, _ = host
        reduction = strip_reduction(spec1, spec2, side, ProjectionRef(index))
    flags = {
        "diffuse_part_full": True,
        "ultrapower_relative_commutant_trivial": True,
    }
    return FreeProductResult(
        spec1, spec2, m_d, m_c_weight, kind, sd, t_set(sd), expr, param, reduction, flags
    )
