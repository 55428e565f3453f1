#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "hyperfermi/rational.hpp"

namespace hyperfermi {

/// Coefficient ring of an algebra context. Every element of a context uses
/// the same mode.
enum class CoefficientMode { exact, float64 };

std::string to_string(CoefficientMode mode);
CoefficientMode parse_mode(std::string_view text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr CoefficientMode mode = CoefficientMode::exact;
  static Rational from_rational(const Rational& r) { return r; }
  static double to_double(const Rational& r) { return hyperfermi::to_double(r); }
  static Rational abs(const Rational& r) { return ::abs(r); }
  static bool is_zero(const Rational& r) { return sgn(r) == 0; }
  static std::string str(const Rational& r) { return to_string(r); }
};

template <>
struct ScalarTraits<double> {
  static constexpr CoefficientMode mode = CoefficientMode::float64;
  static double from_rational(const Rational& r) { return hyperfermi::to_double(r); }
  static double to_double(double r) { return r; }
  static double abs(double r) { return std::fabs(r); }
  static bool is_zero(double r) { return r == 0.0; }
  static std::string str(double r);
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::mode; };

}  // namespace hyperfermi
