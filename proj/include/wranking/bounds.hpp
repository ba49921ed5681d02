#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wranking/gain.hpp"

namespace wranking {

enum class BoundKind { kSimple, kImproved };

const char* to_string(BoundKind kind);
std::optional<BoundKind> parse_bound_kind(std::string_view name);

struct BoundPoint {
  double tau = 0.0;
  double gamma = 0.0;
  double value = 0.0;
};

// Wherever a bound charges the online endpoint, its share is
// spec.online_share(y_u, y_v); for h-based specs that is g(y_u, y_v).

/// (1-τ)(1-γ) + ∫_0^γ g(x,τ) dx + ∫_0^τ share(x,γ) dx
double simple_bound(const GainSpec& spec, double tau, double gamma);

/// The bracket minimized per x in the improved bound:
/// share(x,θ) + ∫_0^θ g(y,x) dy + ∫_θ^γ g(y,τ) dy.
double improved_inner(const GainSpec& spec, double tau, double gamma, double x, double theta);

struct InnerMinimum {
  double theta = 0.0;
  double value = 0.0;
};

/// min over θ ∈ [0, γ] of improved_inner. Candidates are 0, γ, the kinks of h
/// and the stationary points h'(θ) = h(τ) - h(x); table specs also scan a
/// 512-point grid with golden-section refinement.
InnerMinimum improved_inner_min(const GainSpec& spec, double tau, double gamma, double x);

/// (1-τ)(1-γ) + (1-τ)∫_0^γ g(x,τ) dx + ∫_0^τ min_θ improved_inner dx
double improved_bound(const GainSpec& spec, double tau, double gamma);

double evaluate_bound(const GainSpec& spec, BoundKind kind, double tau, double gamma);

/// Values on the (grid × grid) lattice {i/(grid-1)}², τ-major.
std::vector<BoundPoint> bound_heatmap(const GainSpec& spec, BoundKind kind, std::size_t grid = 256);
void write_heatmap_csv(std::ostream& out, std::span<const BoundPoint> points);

/// Lattice scan followed by alternating golden-section refinement of τ and γ
/// to 1e-6 inside one lattice cell around the best point. Deterministic.
BoundPoint minimize_bound(const GainSpec& spec, BoundKind kind, std::size_t grid = 256);

/// Root of h(τ) = 2τ, bracketed by [0, saturation of h].
double tau_star(const GainSpec& spec);

/// Root in [τ*, saturation s] of the τ-derivative of the relaxed improved
/// bound at γ = s:  -(1-s) - (s/2)h'(τ) + (s/2)τh'(τ) + h(τ)/2.
double tau_zero(const GainSpec& spec);

/// Closed-form relaxed improved bound at γ = s (the saturation point) used to
/// cross-check tau_zero: (1-τ)(1-s) + (s/2)(1-h(τ)) + (s/2)τh(τ) + 1/4
/// + ((1-s)/2)∫_0^τ h.
double relaxed_bound_at_saturation(const GainSpec& spec, double tau);

/// Piecewise-constant or piecewise-linear function on [0,1].
class PiecewiseProfile {
 public:
  enum class Shape { kStep, kLinear };

  static PiecewiseProfile constant(double value);
  /// Value `values[i]` on [knots[i], knots[i+1]); the last piece is closed.
  /// knots run from 0 to 1 strictly increasing; values.size() + 1 == knots.size().
  static PiecewiseProfile step(std::vector<double> knots, std::vector<double> values);
  /// Linear interpolation through (knots[i], values[i]).
  static PiecewiseProfile linear(std::vector<double> knots, std::vector<double> values);

  double operator()(double y) const;
  /// Limit from the left; equals operator() for linear profiles.
  double left_limit(double y) const;

  Shape shape() const noexcept { return shape_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// sup{y : f(y) ≤ x} for a non-decreasing profile; 0 if f(0) > x, 1 if
  /// f never exceeds x.
  double generalized_inverse(double x) const;

 private:
  PiecewiseProfile(Shape shape, std::vector<double> knots, std::vector<double> values);

  Shape shape_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

struct StepProfiles {
  PiecewiseProfile theta = PiecewiseProfile::constant(1.0);
  PiecewiseProfile beta = PiecewiseProfile::constant(0.0);
};

/// Throws ValidationError unless 0 ≤ β ≤ θ ≤ 1 everywhere and β is
/// non-decreasing.
void validate_profiles(const StepProfiles& profiles);

/// θ = γ̂ on [0, τ̂) and 1 after; β = 0 on [0, τ̂) and γ̂ after.
StepProfiles step_profiles_at(double tau_hat, double gamma_hat);

/// f(y_u) = (1-θ+β)·share(y_u,θ) + θ - β + ∫_0^β G + ∫_θ^1 G with
/// G(y) = g(y, β⁻¹(y)), β⁻¹ = 1 on [γ, 1] and g(·, 1) = 0 (also for the
/// online share at θ = 1). Validates the profiles.
double conclusion_integrand(const GainSpec& spec, const StepProfiles& profiles, double y_u);

/// ∫_0^1 f(y_u) dy_u, split at every profile knot and kink of h.
double conclusion_integral(const GainSpec& spec, const StepProfiles& profiles);

}  // namespace wranking
