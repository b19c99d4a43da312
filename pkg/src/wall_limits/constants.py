"""Unit system shared by every module.

All routines work in units where the caller supplies hbar and the particle
mass; the defaults hbar = m = 1 make energies equal to k**2 / 2.  To restore
SI units pass the physical values: wavenumbers stay in 1/m, energies come out
in J and times in s.
"""
from dataclasses import dataclass

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError(f"hbar and mass must be positive, got {self.hbar}, {self.mass}")

    def energy(self, k):
        """Kinetic energy hbar**2 k**2 / 2m of wavenumber ``k``."""
        return self.hbar ** 2 * k ** 2 / (2.0 * self.mass)

    def wavenumber(self, energy):
        """Inverse of :meth:`energy` for ``energy >= 0``."""
        return (2.0 * self.mass * energy) ** 0.5 / self.hbar


DEFAULT_CONSTANTS = PhysicalConstants()
