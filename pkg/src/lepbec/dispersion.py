"""One-particle energies h(p) for isotropic free particles.

Two families are supported: the power law ``h(p) = |p|**s`` (with the
particle mass normalised to 1/2 when ``s == 2``) and the massive
relativistic form ``h(p) = c*sqrt(|p|**2 + m**2 c**2) - m c**2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

POWER = "power"
RELATIVISTIC = "relativistic"


@dataclass(frozen=True)
class DispersionRelation:
    """Isotropic dispersion law in ``d`` spatial dimensions.

    Use :meth:`power_law` or :meth:`relativistic` rather than the raw
    constructor.
    """

    kind: str
    d: int
    s: float = 2.0
    m: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if self.kind == POWER:
            if not self.s >= 1:
                raise ValueError(f"power-law exponent must satisfy s >= 1, got {self.s}")
        elif self.kind == RELATIVISTIC:
            if self.m < 0 or not self.c > 0:
                raise ValueError("relativistic dispersion needs m >= 0 and c > 0")
        else:
            raise ValueError(f"unknown dispersion kind {self.kind!r}")

    @classmethod
    def power_law(cls, s: float, d: int) -> "DispersionRelation":
        return cls(POWER, d, s=float(s))

    @classmethod
    def relativistic(cls, m: float, c: float, d: int) -> "DispersionRelation":
        return cls(RELATIVISTIC, d, m=float(m), c=float(c))

    # -- evaluation -------------------------------------------------------

    def radial(self, r):
        """Energy as a function of ``r = |p|`` (vectorised)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("radius must be non-negative")
        if self.kind == POWER:
            out = r**self.s
        else:
            mc = self.m * self.c
            # rationalised form avoids cancellation for r << mc
            out = self.c * r * r / (np.sqrt(r * r + mc * mc) + mc) if mc > 0 else self.c * r
        return out if out.ndim else float(out)

    def evaluate(self, p):
        """Energy at momentum ``p``; the last axis of ``p`` has length ``d``."""
        p = np.asarray(p, dtype=float)
        if p.ndim == 0 or p.shape[-1] != self.d:
            raise DimensionMismatch(f"momentum must have trailing dimension {self.d}, got shape {p.shape}")
        return self.radial(np.sqrt(np.sum(p * p, axis=-1)))

    def inverse_radial(self, x):
        """Radius ``r >= 0`` with ``h(r) = x``; ``x`` must be non-negative."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("energy must be non-negative")
        if self.kind == POWER:
            out = x ** (1.0 / self.s)
        else:
            mc = self.m * self.c
            y = x / self.c
            # (y + mc)^2 - (mc)^2 = y (y + 2 mc)
            out = np.sqrt(y * (y + 2.0 * mc))
        return out if out.ndim else float(out)

    def radial_derivative(self, r):
        """dh/dr as a function of the radius."""
        r = np.asarray(r, dtype=float)
        if self.kind == POWER:
            out = self.s * r ** (self.s - 1.0)
        else:
            mc = self.m * self.c
            out = self.c * r / np.sqrt(r * r + mc * mc) if mc > 0 else np.full_like(r, self.c)
        return out if out.ndim else float(out)

    # -- capability queries ----------------------------------------------

    def is_smooth(self) -> bool:
        """Whether ``h`` is C-infinity on all of momentum space.

        Needed before multiplying a smooth test function by ``exp(i h t)``.
        """
        if self.kind == POWER:
            return float(self.s).is_integer() and int(self.s) % 2 == 0
        return self.m > 0

    def gradient_vanishes_at_origin(self) -> bool:
        """Whether ``grad h(0)`` exists and equals zero."""
        if self.kind == POWER:
            return self.s > 1
        return self.m > 0

    def to_config(self) -> dict:
        if self.kind == POWER:
            return {"kind": POWER, "s": self.s}
        return {"kind": RELATIVISTIC, "m": self.m, "c": self.c}
