#include "fourierml/finite_diff.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fourierml {

namespace {

struct Stencil {
  // value ~ sum coeff[j] * f(offset[j] * h) / h^n, error O(h^2)
  std::vector<double> coeffs;
  std::vector<int> offsets;
};

Stencil central_stencil(int n) {
  switch (n) {
    case 1: return {{-0.5, 0.5}, {-1, 1}};
    case 2: return {{1.0, -2.0, 1.0}, {-1, 0, 1}};
    case 3: return {{-0.5, 1.0, -1.0, 0.5}, {-2, -1, 1, 2}};
    case 4: return {{1.0, -4.0, 6.0, -4.0, 1.0}, {-2, -1, 0, 1, 2}};
    case 5: return {{-0.5, 2.0, -2.5, 2.5, -2.0, 0.5}, {-3, -2, -1, 1, 2, 3}};
    case 6: return {{1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0}, {-3, -2, -1, 0, 1, 2, 3}};
    case 7:
      return {{-0.5, 3.0, -7.0, 7.0, -7.0, 7.0, -3.0, 0.5}, {-4, -3, -2, -1, 1, 2, 3, 4}};
    case 8:
      return {{1.0, -8.0, 28.0, -56.0, 70.0, -56.0, 28.0, -8.0, 1.0},
              {-4, -3, -2, -1, 0, 1, 2, 3, 4}};
    default:
      throw std::invalid_argument("derivative_at_zero: order must be in [1, 8]");
  }
}

}  // namespace

DerivativeResult derivative_at_zero(int order,
                                    const std::function<std::complex<double>(double)>& f,
                                    double base_step, int levels) {
  if (order < 1 || order > 8) {
    throw std::invalid_argument("derivative_at_zero: order must be in [1, 8]");
  }
  if (!(base_step > 0.0)) {
    throw std::invalid_argument("derivative_at_zero: base_step must be positive");
  }
  if (levels < 2) levels = 2;

  const Stencil st = central_stencil(order);

  auto raw = [&](double h) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < st.coeffs.size(); ++j) {
      acc += st.coeffs[j] * f(st.offsets[j] * h);
    }
    return acc / std::pow(h, order);
  };

  std::vector<std::vector<std::complex<double>>> tab(
      levels, std::vector<std::complex<double>>(levels));
  double h = base_step;
  for (int i = 0; i < levels; ++i, h *= 0.5) tab[i][0] = raw(h);

  std::complex<double> best = tab[levels - 1][0];
  double best_err = std::numeric_limits<double>::infinity();
  for (int j = 1; j < levels; ++j) {
    const double factor = std::pow(4.0, j);
    for (int i = j; i < levels; ++i) {
      tab[i][j] = (factor * tab[i][j - 1] - tab[i - 1][j - 1]) / (factor - 1.0);
      const double est = std::max(std::abs(tab[i][j] - tab[i][j - 1]),
                                  std::abs(tab[i][j] - tab[i - 1][j - 1]));
      if (est < best_err) {
        best_err = est;
        best = tab[i][j];
      }
    }
  }
  return {best, best_err};
}

}  // namespace fourierml
