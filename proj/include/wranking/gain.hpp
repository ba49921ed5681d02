#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wranking {

enum class GainKind {
  kSimpleExp,    // h(x) = min{1, e^(x - 1/2)}
  kHalfExp,      // h(x) = min{1, e^x / 2}
  kAdversarial,  // g(x, y) = e^(x - 1), ignores the arrival time
  kTable,        // piecewise-linear h through user breakpoints
};

/// The gain-sharing function g(y_v, y_u): the fraction of w_v kept by offline
/// vertex v when it is matched to an online vertex arriving at time y_u.
///
/// Every kind except kAdversarial is built from a non-decreasing
/// h: [0,1] → [0,1] with h' ≤ h via g(x, y) = (h(x) + 1 - h(y)) / 2.
/// Kinks of h are stored exactly so integrators can split there.
class GainSpec {
 public:
  static GainSpec simple_exp();
  static GainSpec half_exp();
  static GainSpec adversarial();

  /// Piecewise-linear h through (breakpoints[i], values[i]). Breakpoints must
  /// start at 0, end at 1 and increase strictly; values must lie in [0,1] and
  /// not decrease; every segment's slope must not exceed h at its left end
  /// (that is h' ≤ h). Throws ValidationError otherwise.
  static GainSpec table(std::vector<double> breakpoints, std::vector<double> values);
  /// Like table() but skips the h' ≤ h check. Diagnostics only: the bound
  /// and threshold machinery assumes h' ≤ h.
  static GainSpec table_unchecked(std::vector<double> breakpoints, std::vector<double> values);

  GainKind kind() const noexcept { return kind_; }
  bool h_based() const noexcept { return kind_ != GainKind::kAdversarial; }
  std::string name() const;

  // Unchecked evaluators; callers guarantee arguments in [0,1]. h, dh and
  // h_integral throw std::logic_error for the adversarial kind.
  double h(double x) const;
  /// Right derivative of h (left derivative at x = 1).
  double dh(double x) const;
  /// Left derivative of h (right derivative at x = 0).
  double dh_left(double x) const;
  /// ∫_a^b h(x) dx in closed form.
  double h_integral(double a, double b) const;

  double g(double x, double y) const { return combine(key(x), key(y)); }

  /// Fraction of w_v that the online endpoint keeps, 1 - g(y_v, y_u). For
  /// h-based kinds this is g(y_u, y_v).
  double online_share(double y_u, double y_v) const;

  /// ∫_a^b g(x, y) dx in closed form.
  double g_integral(double a, double b, double y) const;

  /// Per-rank cache: g(x, y) == combine(key(x), key(y)) bit for bit.
  double key(double x) const;
  double combine(double key_x, double key_y) const noexcept {
    if (kind_ == GainKind::kAdversarial) return key_x;
    return 0.5 * (1.0 + (key_x - key_y));
  }

  /// Interior points of (0,1) where h (or g in either argument) is not smooth.
  std::span<const double> kinks() const noexcept { return kinks_; }

  /// Smallest x with h(x) = 1, if h saturates.
  std::optional<double> saturation() const;

  /// Points in smooth pieces of h where h'(x) = slope.
  std::vector<double> stationary_points(double slope) const;

  const std::vector<double>& table_breakpoints() const noexcept { return table_x_; }
  const std::vector<double>& table_values() const noexcept { return table_y_; }

 private:
  GainSpec(GainKind kind, std::vector<double> kinks);
  static GainSpec make_table(std::vector<double> breakpoints, std::vector<double> values,
                             bool check_derivative);
  std::size_t table_segment(double x) const;
  double primitive(double x) const;

  GainKind kind_;
  std::vector<double> kinks_;
  std::vector<double> table_x_;
  std::vector<double> table_y_;
  std::vector<double> table_cumulative_;
};

/// h(x) with a range check on x. Throws std::domain_error outside [0,1].
double eval_h(const GainSpec& spec, double x);
/// g(x, y) with range checks. Throws std::domain_error outside [0,1].
double eval_g(const GainSpec& spec, double x, double y);

struct PartialClaimReport {
  double max_violation = 0.0;  // max over the grid of (g - 1) - ∂g/∂y, floored at 0
  double worst_x = 0.0;
  double worst_y = 0.0;
  std::size_t points_checked = 0;
};

/// Checks ∂g(x,y)/∂y ≥ g(x,y) - 1 on a grid_n × grid_n grid over [0,1]² by
/// finite differences: central away from kinks, one-sided on each side of a
/// kink. Requires an h-based spec and grid_n ≥ 2.
PartialClaimReport check_partial_claim(const GainSpec& spec, std::size_t grid_n);

/// Parses "simple-exp", "half-exp" or "adversarial".
std::optional<GainSpec> builtin_gain(std::string_view name);

}  // namespace wranking
