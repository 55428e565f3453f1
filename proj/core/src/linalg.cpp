#include "hyperfermi/linalg.hpp"

#include <utility>

#include "hyperfermi/errors.hpp"

namespace hyperfermi {

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw UsageError("determinant needs a square matrix");
  }
  if (n == 0) return 1;
  int sign = 1;
  Rational prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a[p][k]) == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  Rational d = a[n - 1][n - 1];
  return sign < 0 ? Rational(-d) : d;
}

}  // namespace hyperfermi
