#ifndef SPDCLAB_QUADRATURE_HPP
#define SPDCLAB_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>

namespace spdc {

// Adaptive Simpson integration. The relative tolerance is part of the public
// contract of the operations built on top of this (see lineshape.hpp), so the
// recursion keeps refining until the local Richardson estimate satisfies it.
namespace detail {

template <typename F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm,
                             double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integrates f over [a, b] to the requested relative tolerance (with an
// absolute floor abs_tol for integrals near zero).
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol, double abs_tol = 1e-300) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // First pass with the coarse estimate setting the error scale. For sharply
  // peaked integrands (a narrow line in a wide window) that estimate can be
  // off by orders of magnitude, so rerun with the scale taken from the first
  // result whenever the two disagree badly.
  double scale = std::max(std::abs(whole), abs_tol);
  double result =
      detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
  const double better = std::max(std::abs(result), abs_tol);
  if (better < 0.5 * scale || better > 2.0 * scale) {
    result =
        detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, rel_tol * better, 48);
  }
  return result;
}

}  // namespace spdc

#endif
