// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/errors.hpp"

#include <utility>

namespace structfem {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

}  // namespace structfem
