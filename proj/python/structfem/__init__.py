# Copyright the structfem authors.
# SPDX-License-Identifier: Apache-2.0
"""Cochain-projection finite elements for first-order Lagrangian field theories."""

from ._core import (
    CovariantProblem,
    HamiltonianSystem,
    LagrangianDensity,
    PhaseState,
    RegularRegion,
    StructfemError,
    TensorMesh2D,
    build_tensor_mesh,
    cartan_form,
    cartan_form_integral,
    classify_region,
    first_variation_basis,
    full_region,
    multisymplectic_residual,
    noether_check,
    nonlinear_wave_poisson,
    rectangle_region,
    shift_symmetric_wave,
    so2_pair,
)

__all__ = [
    "CovariantProblem",
    "HamiltonianSystem",
    "LagrangianDensity",
    "PhaseState",
    "RegularRegion",
    "StructfemError",
    "TensorMesh2D",
    "build_tensor_mesh",
    "cartan_form",
    "cartan_form_integral",
    "classify_region",
    "first_variation_basis",
    "full_region",
    "multisymplectic_residual",
    "noether_check",
    "nonlinear_wave_poisson",
    "rectangle_region",
    "shift_symmetric_wave",
    "so2_pair",
]
