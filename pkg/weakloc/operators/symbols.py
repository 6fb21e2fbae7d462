"""Bounded symbols u: X -> C and their string descriptors."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from weakloc.core.errors import OperatorError
from weakloc.geometry.grids import SampledDomain
from weakloc.geometry.spaces import MetricMeasureSpace, as_coords


class SymbolClass(str, Enum):
    BOUNDED_ONLY = "BoundedOnly"
    COMPACT_SUPPORT = "CompactSupport"
    LP = "Lp"
    RADIAL = "Radial"


SymbolFn = Callable[[np.ndarray, Optional[MetricMeasureSpace]], np.ndarray]


@dataclass(frozen=True)
class Symbol:
    """
    A bounded function on the index space.

    ``fn(X, space)`` evaluates on (n, 2) coordinates. ``radial_profile``, when
    set, gives u as a function of the Euclidean modulus |z| and enables the
    one-dimensional quadrature path on the disc; ``breakpoints`` are radii
    where that profile jumps.
    """
    descriptor: str
    class_tag: SymbolClass
    fn: SymbolFn = field(compare=False)
    sup_norm: float = 1.0
    param: Optional[float] = None
    radial_profile: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    breakpoints: Tuple[float, ...] = ()
    is_real: bool = True

    def eval(self, nodes, space: Optional[MetricMeasureSpace] = None) -> np.ndarray:
        X = as_coords(nodes)
        values = np.asarray(self.fn(X, space))
        if values.shape != (len(X),):
            raise OperatorError(f"symbol {self.descriptor} returned shape {values.shape}")
        return values if not self.is_real else values.real.astype(float)

    def sup_on(self, domain: SampledDomain) -> float:
        """Largest |u| over the nodes of a sampled domain."""
        return float(np.abs(self.eval(domain.nodes, domain.space)).max())

    def conjugate(self) -> "Symbol":
        if self.is_real:
            return self
        base = self.fn
        profile = self.radial_profile
        return replace(
            self,
            descriptor=f"conj({self.descriptor})",
            fn=lambda X, space: np.conj(base(X, space)),
            radial_profile=None if profile is None else (lambda r: np.conj(profile(r))),
        )

    def abs_squared(self) -> "Symbol":
        base = self.fn
        profile = self.radial_profile
        return replace(
            self,
            descriptor=f"|{self.descriptor}|^2",
            fn=lambda X, space: np.abs(base(X, space)) ** 2,
            sup_norm=self.sup_norm ** 2,
            radial_profile=None if profile is None else (lambda r: np.abs(profile(r)) ** 2),
            is_real=True,
        )

    def describe(self) -> Dict[str, object]:
        return {
            "symbol": self.descriptor,
            "class": self.class_tag.value,
            "sup_norm": self.sup_norm,
            "param": self.param,
        }


def _modulus2(X: np.ndarray) -> np.ndarray:
    return X[:, 0] ** 2 + X[:, 1] ** 2


def constant_symbol(value: float = 1.0) -> Symbol:
    return Symbol(
        descriptor="constant" if value == 1.0 else f"constant:{value:g}",
        class_tag=SymbolClass.BOUNDED_ONLY,
        fn=lambda X, space: np.full(len(X), float(value)),
        sup_norm=abs(float(value)),
        param=float(value),
        radial_profile=lambda r: np.full(np.shape(r), float(value)),
    )


def indicator_symbol(half_width: float = 1.0) -> Symbol:
    """Indicator of the square [-h, h]^2 in the raw coordinates."""
    if not half_width > 0:
        raise OperatorError(f"indicator half-width must be positive, got {half_width}")
    hw = float(half_width)
    return Symbol(
        descriptor=f"indicator:{hw:g}",
        class_tag=SymbolClass.COMPACT_SUPPORT,
        fn=lambda X, space: ((np.abs(X[:, 0]) <= hw) & (np.abs(X[:, 1]) <= hw)).astype(float),
        param=hw,
    )


def lp_symbol(s: float = 1.0) -> Symbol:
    """(1 + |z|^2)^(-s); in L^p for every p > 1/s."""
    if not s > 0:
        raise OperatorError(f"lp decay exponent must be positive, got {s}")
    return Symbol(
        descriptor=f"lp:{s:g}",
        class_tag=SymbolClass.LP,
        fn=lambda X, space: (1.0 + _modulus2(X)) ** (-s),
        param=float(s),
        radial_profile=lambda r: (1.0 + np.asarray(r) ** 2) ** (-s),
    )


def oscillatory_symbol(freq: float = 1.0) -> Symbol:
    """cos(2 pi freq x): bounded, no decay."""
    return Symbol(
        descriptor=f"oscillatory:{freq:g}",
        class_tag=SymbolClass.BOUNDED_ONLY,
        fn=lambda X, space: np.cos(2.0 * np.pi * freq * X[:, 0]),
        param=float(freq),
    )


def ball_symbol(radius: float = 0.75) -> Symbol:
    """Indicator of the metric ball D(e, radius) around the basepoint."""
    if not radius > 0:
        raise OperatorError(f"ball radius must be positive, got {radius}")

    def fn(X, space):
        if space is None:
            raise OperatorError("ball symbols need the space to measure distances")
        return (space.basepoint_distance(X) <= radius + 1e-12).astype(float)

    return Symbol(
        descriptor=f"ball:{radius:g}",
        class_tag=SymbolClass.COMPACT_SUPPORT,
        fn=fn,
        param=float(radius),
    )


def radial_r2_symbol() -> Symbol:
    """|z|^2."""
    return Symbol(
        descriptor="radial:r2",
        class_tag=SymbolClass.RADIAL,
        fn=lambda X, space: _modulus2(X),
        radial_profile=lambda r: np.asarray(r) ** 2,
    )


def disc_symbol(radius: float) -> Symbol:
    """Indicator of |z| <= radius."""
    if not 0 < radius < 1:
        raise OperatorError(f"disc radius must lie in (0, 1), got {radius}")
    return Symbol(
        descriptor=f"disc:{radius:g}",
        class_tag=SymbolClass.RADIAL,
        fn=lambda X, space: (_modulus2(X) <= radius ** 2).astype(float),
        param=float(radius),
        radial_profile=lambda r: (np.asarray(r) <= radius).astype(float),
        breakpoints=(float(radius),),
    )


def conj_symbol() -> Symbol:
    """z-bar on the disc."""
    return Symbol(
        descriptor="conj",
        class_tag=SymbolClass.BOUNDED_ONLY,
        fn=lambda X, space: X[:, 0] - 1j * X[:, 1],
        is_real=False,
    )


def gaussian_symbol(scale: float = 1.0) -> Symbol:
    """exp(-|z|^2 / scale^2)."""
    if not scale > 0:
        raise OperatorError(f"gaussian scale must be positive, got {scale}")
    return Symbol(
        descriptor=f"gaussian:{scale:g}",
        class_tag=SymbolClass.LP,
        fn=lambda X, space: np.exp(-_modulus2(X) / scale ** 2),
        param=float(scale),
        radial_profile=lambda r: np.exp(-np.asarray(r) ** 2 / scale ** 2),
    )


def parse_symbol(descriptor: str) -> Symbol:
    """
    Parse a symbol descriptor.

    Accepted forms: ``constant``, ``indicator[:half_width]``, ``lp[:s]``,
    ``oscillatory[:freq]``, ``ball[:radius]``, ``radial:r2``,
    ``disc:radius``, ``conj``, ``gaussian[:scale]``.
    """
    name, _, arg = descriptor.strip().partition(":")
    name = name.lower()

    if name == "radial":
        if arg != "r2":
            raise OperatorError(f"unknown radial symbol {descriptor!r}")
        return radial_r2_symbol()

    try:
        value = float(arg) if arg else None
    except ValueError as exc:
        raise OperatorError(f"bad symbol parameter in {descriptor!r}") from exc

    if name == "constant":
        return constant_symbol(1.0 if value is None else value)
    if name == "indicator":
        return indicator_symbol(1.0 if value is None else value)
    if name == "lp":
        return lp_symbol(1.0 if value is None else value)
    if name == "oscillatory":
        return oscillatory_symbol(1.0 if value is None else value)
    if name == "ball":
        return ball_symbol(0.75 if value is None else value)
    if name == "disc":
        if value is None:
            raise OperatorError("disc symbols need a radius, e.g. disc:0.5")
        return disc_symbol(value)
    if name == "conj":
        return conj_symbol()
    if name == "gaussian":
        return gaussian_symbol(1.0 if value is None else value)
    raise OperatorError(f"unknown symbol {descriptor!r}")
