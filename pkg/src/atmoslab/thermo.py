"""Ideal-gas constants and equation-of-state relations.

Working variables are the Exner pressure pi = (p/p_ref)^(R/cp) and the
mass-weighted potential temperature P = rho*Theta.  All relations here are
pure functions of scalars or numpy arrays.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GasConstants:
    """Dry-air constants plus gravity and the (constant) Coriolis parameter.

    Defaults give R/cp close to 2/7; every value can be overridden from the
    run configuration.
    """

    R: float = 287.4          # gas constant [J kg^-1 K^-1]
    c_p: float = 1004.9       # specific heat, constant pressure [J kg^-1 K^-1]
    p_ref: float = 1.0e5      # reference pressure [Pa]
    g: float = 9.81           # gravity [m s^-2]
    f: float = 0.0            # Coriolis parameter [s^-1]

    def __post_init__(self):
        if self.R <= 0.0 or self.c_p <= self.R:
            raise ValueError("need 0 < R < c_p")
        if self.p_ref <= 0.0:
            raise ValueError("p_ref must be positive")
        if self.g < 0.0:
            raise ValueError("g must be non-negative")

    @property
    def c_v(self) -> float:
        return self.c_p - self.R

    @property
    def gamma(self) -> float:
        return self.c_p / self.c_v


def exner_from_p(p, c: GasConstants):
    """Exner pressure pi = (p/p_ref)^(R/cp).  Requires p > 0."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0):
        raise ValueError("pressure must be positive")
    return (p / c.p_ref) ** (c.R / c.c_p)


def p_from_exner(pi, c: GasConstants):
    """Inverse of :func:`exner_from_p`."""
    pi = np.asarray(pi, dtype=float)
    if np.any(pi <= 0.0):
        raise ValueError("Exner pressure must be positive")
    return c.p_ref * pi ** (c.c_p / c.R)


def bigP_from_pi(pi, c: GasConstants):
    """Mass-weighted potential temperature P(pi) = (p_ref/R) pi^(cv/R)."""
    pi = np.asarray(pi, dtype=float)
    if np.any(pi <= 0.0):
        raise ValueError("Exner pressure must be positive")
    return (c.p_ref / c.R) * pi ** (c.c_v / c.R)


def pi_from_bigP(P, c: GasConstants):
    """Inverse of :func:`bigP_from_pi`: pi = (R P / p_ref)^(R/cv)."""
    P = np.asarray(P, dtype=float)
    if np.any(P <= 0.0):
        raise ValueError("P must be positive")
    return (c.R * P / c.p_ref) ** (c.R / c.c_v)


def dP_dpi_from_P(P, c: GasConstants):
    """dP/dpi expressed through P itself: (cv/R) P (R P / p_ref)^(-R/cv).

    Single power evaluation; used on whole fields in the implicit solve.
    """
    P = np.asarray(P, dtype=float)
    if np.any(P <= 0.0):
        raise ValueError("P must be positive")
    return (c.c_v / c.R) * P * (c.R * P / c.p_ref) ** (-c.R / c.c_v)


def dP_dpi(pi, c: GasConstants):
    """Derivative dP/dpi = (p_ref/R)(cv/R) pi^(cv/R - 1); positive for pi > 0."""
    pi = np.asarray(pi, dtype=float)
    if np.any(pi <= 0.0):
        raise ValueError("Exner pressure must be positive")
    return (c.p_ref / c.R) * (c.c_v / c.R) * pi ** (c.c_v / c.R - 1.0)


def sound_speed(T, c: GasConstants):
    """Speed of sound sqrt(gamma R T).  Requires T > 0."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0.0):
        raise ValueError("temperature must be positive")
    return np.sqrt(c.gamma * c.R * T)
