"""Symbolic structure expressions.

Results of the engine are trees built from a small set of constructors:
leaves for scalar atoms, hyperfinite pieces, free group factors and
opaque named factors, and nodes for direct sums, free products,
amalgamated free products, amplifications and compressed corners.
Divergent label-indexed free products stay symbolic and expand on
demand to a chosen enumeration height.

Weights are exact fractions (or the symbolic infinity for semifinite
pieces, or None when a node is purely symbolic).  Rendering is plain
text with a little unicode; machine form is nested dicts of strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import INFINITE, Infinity
from .errors import SpecInvalid
from .scalars import MultGroup, format_rational

Weight = Fraction | Infinity | None


def _fmt(value) -> str:
    if isinstance(value, Infinity):
        return "∞"
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def _machine(value):
    if isinstance(value, Infinity):
        return "inf"
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


class StructureExpr:
    """Base class; concrete nodes are frozen dataclasses below."""

    def render(self) -> str:
        raise NotImplementedError

    def machine_form(self) -> dict:
        raise NotImplementedError

    def _atomic_render(self) -> str:
        """Rendering wrapped in parentheses when visually composite."""
        return self.render()


@dataclass(frozen=True)
class Atom(StructureExpr):
    """One dimensional central summand."""

    weight: Fraction

    def render(self):
        return f"ℂ[{_fmt(self.weight)}]"

    def machine_form(self):
        return {"node": "atom", "weight": _machine(self.weight)}


@dataclass(frozen=True)
class Diffuse(StructureExpr):
    """Diffuse hyperfinite leaf; finite=False marks the semifinite one."""

    weight: Weight = Fraction(1)
    finite: bool = True

    def render(self):
        return "R" if self.finite else "R(semifinite)"

    def machine_form(self):
        return {"node": "diffuse", "finite": self.finite, "weight": _machine(self.weight)}


@dataclass(frozen=True)
class FreeGroup(StructureExpr):
    """Interpolated free group factor leaf.

    semifinite=True stands for the infinite amplification, the factor
    tensored with all bounded operators.
    """

    param: Fraction | Infinity
    weight: Weight = Fraction(1)
    semifinite: bool = False

    def render(self):
        base = f"L(F_{_fmt(self.param)})"
        return base + (" ⊗ B(ℓ²)" if self.semifinite else "")

    def machine_form(self):
        return {
            "node": "free_group",
            "param": _machine(self.param),
            "semifinite": self.semifinite,
            "weight": _machine(self.weight),
        }


@dataclass(frozen=True)
class Opaque(StructureExpr):
    """Named factor known only symbolically, possibly amplified."""

    label: str
    amplification: Fraction | str = Fraction(1)
    weight: Weight = Fraction(1)

    def render(self):
        if self.amplification == 1:
            return self.label
        return f"({self.label})^{_fmt(self.amplification)}"

    def machine_form(self):
        return {
            "node": "opaque",
            "label": self.label,
            "amplification": _machine(self.amplification),
            "weight": _machine(self.weight),
        }


@dataclass(frozen=True)
class CentralizerSymbol(StructureExpr):
    """Centralizer of a named state, kept symbolic."""

    label: str
    weight: Weight = Fraction(1)

    def render(self):
        return f"({self.label})_φ"

    def machine_form(self):
        return {"node": "centralizer", "label": self.label}


@dataclass(frozen=True)
class LabelAlgebra(StructureExpr):
    """Bounded sequences over the ratio group, the common base algebra."""

    group: MultGroup

    def render(self):
        return f"ℓ∞(Γ), Γ = {self.group}"

    def machine_form(self):
        return {"node": "labels", "group": self.group.describe()}


@dataclass(frozen=True)
class CrossedProduct(StructureExpr):
    """A named algebra crossed by the dual of the ratio group."""

    label: str
    group: MultGroup

    def render(self):
        return f"{self.label} ⋊ G"

    def machine_form(self):
        return {"node": "crossed", "label": self.label, "group": self.group.describe()}


@dataclass(frozen=True)
class DirectSum(StructureExpr):
    entries: tuple[StructureExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def weight(self) -> Weight:
        total = Fraction(0)
        for e in self.entries:
            w = getattr(e, "weight", None)
            if w is None:
                return None
            if isinstance(w, Infinity):
                return INFINITE
            total += w
        return total

    def render(self):
        return " ⊕ ".join(e.render() for e in self.entries)

    def machine_form(self):
        return {"node": "direct_sum", "entries": [e.machine_form() for e in self.entries]}

    def _atomic_render(self):
        return f"({self.render()})"


@dataclass(frozen=True)
class FreeProduct(StructureExpr):
    factors: tuple[StructureExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def render(self):
        return " ⋆ ".join(f._atomic_render() for f in self.factors)

    def machine_form(self):
        return {"node": "free_product", "factors": [f.machine_form() for f in self.factors]}

    def _atomic_render(self):
        return f"({self.render()})"


@dataclass(frozen=True)
class AmalgamatedFreeProduct(StructureExpr):
    base: StructureExpr
    factors: tuple[StructureExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def render(self):
        inner = " ⋆ ".join(f._atomic_render() for f in self.factors)
        return f"{inner} amalgamated over {self.base.render()}"

    def machine_form(self):
        return {
            "node": "amalgamated_free_product",
            "base": self.base.machine_form(),
            "factors": [f.machine_form() for f in self.factors],
        }


@dataclass(frozen=True)
class Amplify(StructureExpr):
    """Amplification (or compression) of the inner algebra.

    factor may be an exact fraction, the symbolic infinity (tensoring
    with all bounded operators), or a symbolic string label.
    """

    factor: Fraction | Infinity | str
    inner: StructureExpr

    def render(self):
        if isinstance(self.factor, Infinity):
            return f"{self.inner._atomic_render()} ⊗ B(ℓ²)"
        return f"{self.inner._atomic_render()}^{_fmt(self.factor)}"

    def machine_form(self):
        return {
            "node": "amplify",
            "factor": _machine(self.factor),
            "inner": self.inner.machine_form(),
        }


@dataclass(frozen=True)
class CompressedPiece(StructureExpr):
    """The inner algebra carried by a projection of relative trace t.

    As a free product factor this is the direct sum of the compressed
    piece (mass trace) and a scalar complement (mass 1 - trace).
    """

    trace: Fraction
    inner: StructureExpr

    def __post_init__(self):
        if not 0 < self.trace <= 1:
            raise SpecInvalid(
                f"compressed piece trace must lie in (0, 1], got {_fmt(self.trace)}"
            )

    def render(self):
        return f"[{_fmt(self.trace)}, {self.inner.render()}]"

    def machine_form(self):
        return {
            "node": "compressed",
            "trace": _machine(self.trace),
            "inner": self.inner.machine_form(),
        }


@dataclass(frozen=True)
class GammaFreeProduct(StructureExpr):
    """Free product indexed by the whole ratio group, kept symbolic."""

    group: MultGroup
    inner: StructureExpr

    def render(self):
        return f"⋆_{{γ∈Γ}}({self.inner.render()})^γ"

    def machine_form(self):
        return {
            "node": "gamma_free_product",
            "group": self.group.describe(),
            "inner": self.inner.machine_form(),
        }

    def expand(self, height: int) -> FreeProduct:
        """Truncated expansion over the enumerated group elements."""
        factors = tuple(
            Amplify(g.value, self.inner) for g in self.group.enumerate_elements(height)
        )
        return FreeProduct(factors)

    def exponents(self, height: int) -> list[Fraction]:
        return [g.value for g in self.group.enumerate_elements(height)]


@dataclass(frozen=True)
class GammaDirectSum(StructureExpr):
    """Countable direct sum indexed by the ratio group, kept symbolic.

    per_label=True marks entries whose isomorphism class depends on the
    label (rendered with a ^γ amplification marker).
    """

    group: MultGroup
    inner: StructureExpr
    per_label: bool = False

    def render(self):
        marker = "^γ" if self.per_label else ""
        return f"⊕_{{γ∈Γ}}({self.inner.render()}){marker}"

    def machine_form(self):
        return {
            "node": "gamma_direct_sum",
            "group": self.group.describe(),
            "inner": self.inner.machine_form(),
            "per_label": self.per_label,
        }

    def expand(self, height: int) -> DirectSum:
        """Truncated expansion over the enumerated group elements."""
        return DirectSum(
            tuple(self.inner for _ in self.group.enumerate_elements(height))
        )
