"""Records shared by the phase-space routines."""
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ..constants import DEFAULT_CONSTANTS

__all__ = ["PhaseSpacePoint", "StarPair", "PhaseSpaceField", "PROVENANCES"]

PROVENANCES = ("quadrature", "closed_form", "residue_series")


@dataclass(frozen=True)
class PhaseSpacePoint:
    x: float
    p: float

    def __post_init__(self):
        # x and p may also be broadcastable arrays (grid evaluation)
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.p))):
            raise ValueError("phase-space point must be finite")


@dataclass(frozen=True)
class StarPair:
    """Energies of the left and right states, E_I = hbar^2 k_I^2 / 2m."""

    k_L: float
    k_R: float
    E_L: float
    E_R: float

    @classmethod
    def from_wavenumbers(cls, k_L, k_R, consts=DEFAULT_CONSTANTS):
        return cls(k_L=k_L, k_R=k_R, E_L=consts.energy(k_L), E_R=consts.energy(k_R))

    def __post_init__(self):
        for k, E in ((self.k_L, self.E_L), (self.k_R, self.E_R)):
            if not k > 0:
                raise ValueError("wavenumbers must be positive")
            if not math.isfinite(E) or E < 0:
                raise ValueError("continuum energies must be finite and non-negative")


@dataclass
class PhaseSpaceField:
    """Wigner-function samples on an x-by-p lattice.

    ``values[i, j]`` belongs to ``(xs[i], ps[j])``.  Continuum fields carry
    a free global constant, stated in ``normalization_note``.
    """

    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray
    provenance: str
    normalization_note: str = "defined up to one global constant"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ps = np.asarray(self.ps, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.xs.size, self.ps.size):
            raise ValueError("values must have shape (len(xs), len(ps))")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def to_csv(self, path=None):
        """Rows ``x,p,re,im,provenance`` in x-major order, '%.17g' floats, LF endings."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "p", "re", "im", "provenance"])
        for i, x in enumerate(self.xs):
            for j, p in enumerate(self.ps):
                v = self.values[i, j]
                w.writerow(["%.17g" % x, "%.17g" % p, "%.17g" % v.real, "%.17g" % v.imag, self.provenance])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text
