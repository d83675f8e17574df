// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace structfem {

// Base class for every error raised by the library. The kind string is the
// stable machine-readable name; what() carries the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message);
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define STRUCTFEM_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

// mesh
STRUCTFEM_DECLARE_ERROR(DegenerateRange)
STRUCTFEM_DECLARE_ERROR(NotRegular)
STRUCTFEM_DECLARE_ERROR(SpaceMismatch)
// feec
STRUCTFEM_DECLARE_ERROR(MissingSpace)
STRUCTFEM_DECLARE_ERROR(QuadratureInsufficient)
STRUCTFEM_DECLARE_ERROR(PointOutsideMesh)
// lagrangian
STRUCTFEM_DECLARE_ERROR(InconsistentDerivatives)
// covariant
STRUCTFEM_DECLARE_ERROR(NoConvergence)
STRUCTFEM_DECLARE_ERROR(SingularJacobian)
STRUCTFEM_DECLARE_ERROR(InvalidArgument)
// structures
STRUCTFEM_DECLARE_ERROR(NotASolution)
STRUCTFEM_DECLARE_ERROR(SingularInteriorBlock)
STRUCTFEM_DECLARE_ERROR(NotEquivariant)
STRUCTFEM_DECLARE_ERROR(MeshNotNested)
// canonical
STRUCTFEM_DECLARE_ERROR(InsufficientSamples)
STRUCTFEM_DECLARE_ERROR(SingularMass)
STRUCTFEM_DECLARE_ERROR(LegendreInversionFailed)
STRUCTFEM_DECLARE_ERROR(BasisMismatch)

#undef STRUCTFEM_DECLARE_ERROR

}  // namespace structfem
