#include "hyperfermi/scalar.hpp"

#include <cstdio>
#include <stdexcept>

namespace hyperfermi {

std::string to_string(CoefficientMode mode) {
  return mode == CoefficientMode::exact ? "exact" : "float";
}

CoefficientMode parse_mode(std::string_view text) {
  if (text == "exact") return CoefficientMode::exact;
  if (text == "float" || text == "float64") return CoefficientMode::float64;
  throw std::invalid_argument("unknown coefficient mode '" + std::string(text) + "'");
}

std::string ScalarTraits<double>::str(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", r);
  return buf;
}

}  // namespace hyperfermi
