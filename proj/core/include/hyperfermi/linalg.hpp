#pragma once

#include <vector>

#include "hyperfermi/rational.hpp"

namespace hyperfermi {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
Rational determinant(RationalMatrix a);

}  // namespace hyperfermi
