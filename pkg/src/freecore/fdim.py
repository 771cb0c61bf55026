"""Free dimension calculus for tracial inputs.

The free dimension of a weighted direct sum is

    1 - sum(w_i^2) + sum(w_i^2 * u_i)

over its summands, where w_i is the state mass of summand i and u_i its
unit-normalized free dimension (0 for a scalar, 1 - 1/n^2 for an n by n
block, 1 for a diffuse hyperfinite piece, r for a free group factor).
It is additive over free products, which pins down the parameter of the
diffuse part of any finite free product, and rescales under compression
by t through r -> 1 + (r - 1)/t^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    INFINITE,
    AlgebraSpec,
    FreeGroupFactor,
    HyperfiniteDiffuse,
    Infinity,
    MatrixBlock,
)
from .errors import Dim22Rejected, SpecInvalid, UnsupportedStructure
from .structure import Atom, DirectSum, Diffuse, FreeGroup, StructureExpr
from .scalars import format_rational

FdimValue = Fraction | Infinity


def compress_param(param: FdimValue, t: Fraction) -> FdimValue:
    """Free group parameter after compression or amplification by t."""
    t = Fraction(t)
    if t <= 0:
        raise SpecInvalid(f"compression factor must be positive, got {t}")
    if isinstance(param, Infinity):
        return INFINITE
    return 1 + (Fraction(param) - 1) / (t * t)


def _unit_fdim(summand) -> FdimValue:
    if isinstance(summand, MatrixBlock):
        return 1 - Fraction(1, summand.size * summand.size)
    if isinstance(summand, HyperfiniteDiffuse):
        return Fraction(1)
    if isinstance(summand, FreeGroupFactor):
        return compress_param(summand.param, summand.amplification)
    raise UnsupportedStructure(
        f"free dimension is defined here only for matrix blocks, diffuse "
        f"hyperfinite pieces and free group factors, not {summand.kind}"
    )


def fdim(spec: AlgebraSpec) -> FdimValue:
    """Free dimension of a tracial spec of restricted kinds."""
    if spec.tail is not None:
        raise UnsupportedStructure("free dimension of an infinite tail family")
    if not spec.tracial:
        raise UnsupportedStructure(
            f"free dimension needs a tracial state, {spec.name!r} is not tracial"
        )
    out = Fraction(1)
    for s in spec.summands:
        u = _unit_fdim(s)
        if isinstance(u, Infinity):
            return INFINITE
        w = s.weight
        out += w * w * (u - 1)
    return out


def fdim_of_expression(expr: StructureExpr) -> FdimValue:
    """Free dimension of a canonical direct sum of supported leaves."""
    entries = expr.entries if isinstance(expr, DirectSum) else (expr,)
    out = Fraction(1)
    for e in entries:
        if isinstance(e, Atom):
            u: FdimValue = Fraction(0)
        elif isinstance(e, Diffuse) and e.finite:
            u = Fraction(1)
        elif isinstance(e, FreeGroup) and not e.semifinite:
            u = e.param
        else:
            raise UnsupportedStructure(f"no free dimension for {e.render()}")
        if isinstance(u, Infinity):
            return INFINITE
        w = e.weight
        if w is None or isinstance(w, Infinity):
            raise UnsupportedStructure("free dimension needs finite exact weights")
        out += w * w * (u - 1)
    return out


def scalar_atom_rule(
    weights1: list[Fraction], weights2: list[Fraction]
) -> list[Fraction]:
    """Atoms of the free product coming from scalar central summands.

    Every pair of one dimensional central summands whose masses exceed 1
    jointly leaves an atom of mass alpha + beta - 1.  The output is
    sorted in decreasing order.
    """
    w1 = [Fraction(w) for w in weights1]
    w2 = [Fraction(w) for w in weights2]
    for w in w1 + w2:
        if not 0 < w < 1:
            raise SpecInvalid(
                f"scalar summand masses must lie in (0,1), got {format_rational(w)}"
            )
    atoms = [a + b - 1 for a in w1 for b in w2 if a + b > 1]
    return sorted(atoms, reverse=True)


@dataclass(frozen=True)
class FiniteFreeProduct:
    """Structure of a free product of tracial finite-kind algebras."""

    atoms: tuple[Fraction, ...]
    diffuse_weight: Fraction
    param: FdimValue
    expr: StructureExpr


def _reject_block_pairings(scalars: list[Fraction], other: AlgebraSpec) -> None:
    # a scalar atom paired against a larger block's minimal projection
    # would leave a matrix summand; that rule is out of implemented scope
    for alpha in scalars:
        for s in other.summands:
            if isinstance(s, MatrixBlock) and s.size >= 2:
                for lam in s.eigenvalues:
                    if alpha + lam > 1:
                        raise UnsupportedStructure(
                            "a scalar summand of mass "
                            f"{format_rational(alpha)} against a size "
                            f"{s.size} block eigenvalue {format_rational(lam)} "
                            "would produce a matrix atom; not implemented"
                        )


def finite_free_product(spec1: AlgebraSpec, spec2: AlgebraSpec) -> FiniteFreeProduct:
    """Free product structure via atom rule plus free dimension balance."""
    for spec in (spec1, spec2):
        if spec.tail is not None or not spec.tracial:
            raise UnsupportedStructure(
                f"finite free product needs tracial finite-kind inputs; "
                f"{spec.name!r} does not qualify"
            )
        for s in spec.summands:
            _unit_fdim(s)  # raises on unsupported kinds
    if spec1.dimension() == 2 and spec2.dimension() == 2:
        raise Dim22Rejected(
            "both algebras are two dimensional; this pairing is excluded"
        )
    scalars1 = [w for _, w in spec1.scalar_summands()]
    scalars2 = [w for _, w in spec2.scalar_summands()]
    _reject_block_pairings(scalars1, spec2)
    _reject_block_pairings(scalars2, spec1)
    atoms = tuple(scalar_atom_rule(scalars1, scalars2)) if scalars1 and scalars2 else ()
    w = 1 - sum(atoms, Fraction(0))
    assert w > 0
    f1, f2 = fdim(spec1), fdim(spec2)
    if isinstance(f1, Infinity) or isinstance(f2, Infinity):
        param: FdimValue = INFINITE
    else:
        atom_sq = sum((c * c for c in atoms), Fraction(0))
        param = (f1 + f2 - 1 + atom_sq + w * w) / (w * w)
        if param <= 1:
            raise UnsupportedStructure(
                f"free dimension balance gives parameter {param}; the diffuse "
                "part is not an interpolated free group factor here"
            )
    entries: list[StructureExpr] = [Atom(c) for c in atoms]
    entries.append(FreeGroup(param=param, weight=w))
    expr: StructureExpr = DirectSum(tuple(entries)) if atoms else entries[0]
    return FiniteFreeProduct(atoms, w, param, expr)
