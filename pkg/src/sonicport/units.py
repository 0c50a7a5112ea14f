from dataclasses import dataclass


@dataclass(frozen=True)
class UnitSystem:
    """Values of hbar, k_B and the particle mass in a chosen unit system."""

    name: str = "natural"
    hbar: float = 1.0
    boltzmann: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for field in ("hbar", "boltzmann", "mass"):
            if not getattr(self, field) > 0:
                raise ValueError(f"{field} must be strictly positive")

    @property
    def temperature_unit(self):
        return "K" if self.name == "SI" else "natural"

    @property
    def rate_unit(self):
        return "1/s" if self.name == "SI" else "1/time"


NATURAL = UnitSystem()
# CODATA 2018 exact values; mass is a placeholder (1 kg) since only hbar/m enters.
SI = UnitSystem("SI", hbar=1.054571817e-34, boltzmann=1.380649e-23, mass=1.0)


def by_name(name):
    try:
        return {"natural": NATURAL, "SI": SI}[name]
    except KeyError:
        raise ValueError(f"unknown unit system {name!r}; expected 'natural' or 'SI'") from None
