"""Quintic van der Pol-Duffing oscillator toolkit."""

from ._core import (
    Equilibrium,
    LimitCycle,
    Params,
    QvdpError,
    State,
    classify_forced,
    classify_region,
    critical_mus,
    disk_project,
    field,
    find_equilibria,
    find_limit_cycle,
    hamiltonian,
    homoclinic_curve,
    homoclinic_orbit,
    hopf_curve,
    hopf_normal_form,
    infinity_equilibria,
    jacobian,
    melnikov_compare,
    nonexistence_certificates,
    stroboscopic,
    trajectory,
)

__all__ = [
    "Equilibrium",
    "LimitCycle",
    "Params",
    "QvdpError",
    "State",
    "classify_forced",
    "classify_region",
    "critical_mus",
    "disk_project",
    "field",
    "find_equilibria",
    "find_limit_cycle",
    "hamiltonian",
    "homoclinic_curve",
    "homoclinic_orbit",
    "hopf_curve",
    "hopf_normal_form",
    "infinity_equilibria",
    "jacobian",
    "melnikov_compare",
    "nonexistence_certificates",
    "stroboscopic",
    "trajectory",
]
