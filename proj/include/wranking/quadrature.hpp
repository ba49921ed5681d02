#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace wranking {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double m, double fm, double b, double fb, double whole, double tol,
                    int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with Richardson correction.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

/// Adaptive Simpson forced to restart at every cut inside (a, b), so jumps
/// and kinks of the integrand at known points cost nothing. The tolerance is
/// spread evenly over the pieces. Piece endpoints are sampled one ulp
/// inside, so a step at a cut is seen from the correct side.
template <class F>
double piecewise_simpson(F&& f, double a, double b, std::span<const double> cuts, double tol = 1e-12) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts{a};
  for (double c : cuts)
    if (c > a && c < b) pts.push_back(c);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double piece_tol = tol / static_cast<double>(pts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1], m = 0.5 * (lo + hi);
    const double flo = f(std::nextafter(lo, hi)), fm = f(m), fhi = f(std::nextafter(hi, lo));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::simpson_step(f, lo, flo, m, fm, hi, fhi, whole, piece_tol, 40);
  }
  return total;
}

}  // namespace wranking
