"""Positive weights p: X -> (0, inf) for weak localization."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from weakloc.core.errors import LocalizationError
from weakloc.geometry.spaces import as_coords


class WeightTag(str, Enum):
    CONSTANT = "Constant"
    POWER_AFFINE = "PowerAffine"
    POWER_DISC = "PowerDisc"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class Weight:
    """
    A weight function evaluated on node coordinates.

    PowerAffine(delta) is p(a, b) = a^(1/2 - delta) on the affine group;
    PowerDisc(alpha) is p(z) = (1 - |z|^2)^alpha on the disc.
    """
    tag: WeightTag
    param: float = 1.0
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    label: str = ""

    @classmethod
    def constant(cls, value: float = 1.0) -> "Weight":
        if not value > 0:
            raise LocalizationError(f"constant weight must be positive, got {value}")
        return cls(WeightTag.CONSTANT, float(value))

    @classmethod
    def power_affine(cls, delta: float) -> "Weight":
        if not 0 < delta < 0.5:
            raise LocalizationError(f"delta must lie in (0, 1/2), got {delta}")
        return cls(WeightTag.POWER_AFFINE, float(delta))

    @classmethod
    def power_disc(cls, alpha: float = 0.5) -> "Weight":
        if not 0 < alpha < 1:
            raise LocalizationError(f"alpha must lie in (0, 1), got {alpha}")
        return cls(WeightTag.POWER_DISC, float(alpha))

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray], np.ndarray], label: str = "custom") -> "Weight":
        return cls(WeightTag.CUSTOM, 1.0, fn, label)

    def eval(self, nodes) -> np.ndarray:
        X = as_coords(nodes)
        if self.tag is WeightTag.CONSTANT:
            values = np.full(len(X), self.param)
        elif self.tag is WeightTag.POWER_AFFINE:
            values = X[:, 0] ** (0.5 - self.param)
        elif self.tag is WeightTag.POWER_DISC:
            values = (1.0 - X[:, 0] ** 2 - X[:, 1] ** 2) ** self.param
        else:
            values = np.asarray(self.fn(X), dtype=float)
        if values.shape != (len(X),) or not np.all(values > 0) or not np.all(np.isfinite(values)):
            raise LocalizationError(f"weight {self.describe()['weight']} is not positive and finite on the nodes")
        return values

    def scaled(self, factor: float) -> "Weight":
        """lambda * p as a custom weight."""
        base = self
        return Weight.custom(lambda X: factor * base.eval(X), label=f"{factor:g}*{self.describe()['weight']}")

    def describe(self) -> Dict[str, object]:
        if self.tag is WeightTag.CONSTANT:
            name = "const" if self.param == 1.0 else f"const:{self.param:g}"
        elif self.tag is WeightTag.POWER_AFFINE:
            name = f"power-affine:{self.param:g}"
        elif self.tag is WeightTag.POWER_DISC:
            name = f"power-disc:{self.param:g}"
        else:
            name = self.label
        return {"weight": name, "tag": self.tag.value, "param": self.param}


def parse_weight(descriptor: str) -> Weight:
    """
    Parse a weight descriptor.

    Accepted forms: ``const``, ``const:<c>``, ``power-affine:<delta>``,
    ``power-disc:<alpha>``.
    """
    name, _, arg = descriptor.strip().partition(":")
    name = name.lower()
    try:
        value = float(arg) if arg else None
    except ValueError as exc:
        raise LocalizationError(f"bad weight parameter in {descriptor!r}") from exc
    if name in ("const", "constant"):
        return Weight.constant(1.0 if value is None else value)
    if name == "power-affine":
        return Weight.power_affine(0.1 if value is None else value)
    if name == "power-disc":
        return Weight.power_disc(0.5 if value is None else value)
    raise LocalizationError(f"unknown weight {descriptor!r}")
