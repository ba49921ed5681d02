#include "wranking/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "wranking/instance.hpp"
#include "wranking/quadrature.hpp"

namespace wranking {

namespace {

constexpr double kQuadTol = 1e-13;
constexpr double kInvPhi = 0.6180339887498948482;

template <class F>
double golden_min(F&& f, double lo, double hi, double tol, double* fmin = nullptr) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  if (fmin != nullptr) *fmin = f(x);
  return x;
}

template <class F>
double bisect_root(F&& f, double lo, double hi, double tol = 1e-12) {
  const bool lo_positive = f(lo) > 0.0;
  if (lo_positive == (f(hi) > 0.0) && f(hi) != 0.0) throw std::invalid_argument("root is not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_unit(double tau, double gamma) {
  if (!(tau >= 0.0 && tau <= 1.0 && gamma >= 0.0 && gamma <= 1.0))
    throw std::domain_error("tau and gamma must lie in [0,1]");
}

double saturation_or_throw(const GainSpec& spec) {
  if (!spec.h_based()) throw std::invalid_argument("needs an h-based gain spec");
  const auto s = spec.saturation();
  if (!s) throw std::invalid_argument("h never reaches 1");
  return *s;
}

}  // namespace

const char* to_string(BoundKind kind) { return kind == BoundKind::kSimple ? "simple" : "improved"; }

std::optional<BoundKind> parse_bound_kind(std::string_view name) {
  if (name == "simple") return BoundKind::kSimple;
  if (name == "improved") return BoundKind::kImproved;
  return std::nullopt;
}

double simple_bound(const GainSpec& spec, double tau, double gamma) {
  check_unit(tau, gamma);
  const auto cuts = spec.kinks();
  const double v_part = piecewise_simpson([&](double x) { return spec.g(x, tau); }, 0.0, gamma, cuts, kQuadTol);
  const double u_part =
      piecewise_simpson([&](double x) { return spec.online_share(x, gamma); }, 0.0, tau, cuts, kQuadTol);
  return (1.0 - tau) * (1.0 - gamma) + v_part + u_part;
}

double improved_inner(const GainSpec& spec, double tau, double gamma, double x, double theta) {
  return spec.online_share(x, theta) + spec.g_integral(0.0, theta, x) + spec.g_integral(theta, gamma, tau);
}

InnerMinimum improved_inner_min(const GainSpec& spec, double tau, double gamma, double x) {
  InnerMinimum best{0.0, improved_inner(spec, tau, gamma, x, 0.0)};
  auto consider = [&](double theta) {
    if (!(theta >= 0.0 && theta <= gamma)) return;
    const double v = improved_inner(spec, tau, gamma, x, theta);
    if (v < best.value) best = {theta, v};
  };
  consider(gamma);
  for (double k : spec.kinks()) consider(k);
  if (spec.h_based())
    for (double s : spec.stationary_points(spec.h(tau) - spec.h(x))) consider(s);
  if (spec.kind() == GainKind::kTable && gamma > 0.0) {
    constexpr std::size_t kGrid = 512;
    std::size_t arg = 0;
    double arg_value = improved_inner(spec, tau, gamma, x, 0.0);
    for (std::size_t i = 1; i <= kGrid; ++i) {
      const double theta = gamma * static_cast<double>(i) / kGrid;
      const double v = improved_inner(spec, tau, gamma, x, theta);
      if (v < arg_value) {
        arg = i;
        arg_value = v;
      }
    }
    consider(gamma * static_cast<double>(arg) / kGrid);
    const double lo = gamma * static_cast<double>(arg == 0 ? 0 : arg - 1) / kGrid;
    const double hi = gamma * static_cast<double>(std::min(arg + 1, kGrid)) / kGrid;
    consider(golden_min([&](double t) { return improved_inner(spec, tau, gamma, x, t); }, lo, hi, 1e-12));
  }
  return best;
}

double improved_bound(const GainSpec& spec, double tau, double gamma) {
  check_unit(tau, gamma);
  const auto cuts = spec.kinks();
  const double v_part =
      (1.0 - tau) * piecewise_simpson([&](double x) { return spec.g(x, tau); }, 0.0, gamma, cuts, kQuadTol);
  const double u_part = piecewise_simpson(
      [&](double x) { return improved_inner_min(spec, tau, gamma, x).value; }, 0.0, tau, cuts, kQuadTol);
  return (1.0 - tau) * (1.0 - gamma) + v_part + u_part;
}

double evaluate_bound(const GainSpec& spec, BoundKind kind, double tau, double gamma) {
  return kind == BoundKind::kSimple ? simple_bound(spec, tau, gamma) : improved_bound(spec, tau, gamma);
}

std::vector<BoundPoint> bound_heatmap(const GainSpec& spec, BoundKind kind, std::size_t grid) {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  std::vector<BoundPoint> out;
  out.reserve(grid * grid);
  const double step = 1.0 / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    const double tau = i + 1 == grid ? 1.0 : static_cast<double>(i) * step;
    for (std::size_t j = 0; j < grid; ++j) {
      const double gamma = j + 1 == grid ? 1.0 : static_cast<double>(j) * step;
      out.push_back({tau, gamma, evaluate_bound(spec, kind, tau, gamma)});
    }
  }
  return out;
}

void write_heatmap_csv(std::ostream& out, std::span<const BoundPoint> points) {
  out << "tau,gamma,value\n" << std::setprecision(17);
  for (const auto& p : points) out << p.tau << ',' << p.gamma << ',' << p.value << '\n';
}

BoundPoint minimize_bound(const GainSpec& spec, BoundKind kind, std::size_t grid) {
  const auto lattice = bound_heatmap(spec, kind, grid);
  BoundPoint best = lattice.front();
  for (const auto& p : lattice)
    if (p.value < best.value) best = p;

  const double cell = 1.0 / static_cast<double>(grid - 1);
  const double tau_lo = clamp01(best.tau - cell), tau_hi = clamp01(best.tau + cell);
  const double gamma_lo = clamp01(best.gamma - cell), gamma_hi = clamp01(best.gamma + cell);
  BoundPoint cur = best;
  for (int round = 0; round < 60; ++round) {
    const BoundPoint prev = cur;
    double v = 0.0;
    const double t = golden_min([&](double x) { return evaluate_bound(spec, kind, x, cur.gamma); }, tau_lo,
                                tau_hi, 1e-7, &v);
    if (v < cur.value) cur = {t, cur.gamma, v};
    const double g = golden_min([&](double y) { return evaluate_bound(spec, kind, cur.tau, y); }, gamma_lo,
                                gamma_hi, 1e-7, &v);
    if (v < cur.value) cur = {cur.tau, g, v};
    if (std::abs(cur.tau - prev.tau) < 1e-6 && std::abs(cur.gamma - prev.gamma) < 1e-6) break;
  }
  return cur.value < best.value ? cur : best;
}

double tau_star(const GainSpec& spec) {
  const double s = saturation_or_throw(spec);
  return bisect_root([&](double t) { return spec.h(t) - 2.0 * t; }, 0.0, s);
}

double tau_zero(const GainSpec& spec) {
  const double s = saturation_or_throw(spec);
  const double lo = tau_star(spec);
  // h' is taken from the left so the bracket end at s sees the exponential
  // piece rather than the flat part.
  auto d = [&](double t) {
    const double dh = spec.dh_left(t);
    return -(1.0 - s) - 0.5 * s * dh + 0.5 * s * t * dh + 0.5 * spec.h(t);
  };
  return bisect_root(d, lo, s);
}

double relaxed_bound_at_saturation(const GainSpec& spec, double tau) {
  const double s = saturation_or_throw(spec);
  const double h = spec.h(tau);
  return (1.0 - tau) * (1.0 - s) + 0.5 * s * (1.0 - h) + 0.5 * s * tau * h + 0.25 +
         0.5 * (1.0 - s) * spec.h_integral(0.0, tau);
}

PiecewiseProfile::PiecewiseProfile(Shape shape, std::vector<double> knots, std::vector<double> values)
    : shape_(shape), knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.front() != 0.0 || knots_.back() != 1.0)
    throw ValidationError("profile knots must run from 0 to 1");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw ValidationError("profile knots must increase strictly");
  const std::size_t want = shape_ == Shape::kStep ? knots_.size() - 1 : knots_.size();
  if (values_.size() != want) throw ValidationError("profile has the wrong number of values");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("profile value is not finite");
}

PiecewiseProfile PiecewiseProfile::constant(double value) { return step({0.0, 1.0}, {value}); }

PiecewiseProfile PiecewiseProfile::step(std::vector<double> knots, std::vector<double> values) {
  return PiecewiseProfile(Shape::kStep, std::move(knots), std::move(values));
}

PiecewiseProfile PiecewiseProfile::linear(std::vector<double> knots, std::vector<double> values) {
  return PiecewiseProfile(Shape::kLinear, std::move(knots), std::move(values));
}

double PiecewiseProfile::operator()(double y) const {
  // Index of the piece [knots[i], knots[i+1]) holding y.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  i = std::min(i, knots_.size() - 2);
  if (shape_ == Shape::kStep) return values_[i];
  const double t = (y - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

double PiecewiseProfile::left_limit(double y) const {
  if (shape_ == Shape::kLinear || y <= 0.0) return (*this)(y);
  auto it = std::lower_bound(knots_.begin(), knots_.end(), y);
  const auto i = static_cast<std::size_t>(it - knots_.begin());
  return values_[std::min(i, values_.size()) - 1];
}

double PiecewiseProfile::generalized_inverse(double x) const {
  if (shape_ == Shape::kStep) {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] > x) return knots_[i];
    return 1.0;
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (values_[j] <= x) continue;
    if (j == 0) return 0.0;
    const double t = (x - values_[j - 1]) / (values_[j] - values_[j - 1]);
    return knots_[j - 1] + t * (knots_[j] - knots_[j - 1]);
  }
  return 1.0;
}

void validate_profiles(const StepProfiles& p) {
  std::vector<double> pts = p.theta.knots();
  pts.insert(pts.end(), p.beta.knots().begin(), p.beta.knots().end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double prev_beta = -1.0;
  for (double y : pts) {
    // Both profiles are linear between consecutive points of `pts`, so the
    // one-sided values there decide every pointwise inequality.
    for (int side = 0; side < 2; ++side) {
      if (side == 0 && y == 0.0) continue;
      const double b = side == 0 ? p.beta.left_limit(y) : p.beta(y);
      const double t = side == 0 ? p.theta.left_limit(y) : p.theta(y);
      if (!(b >= 0.0)) throw ValidationError("beta below 0 at y=" + std::to_string(y));
      if (!(t <= 1.0)) throw ValidationError("theta above 1 at y=" + std::to_string(y));
      if (!(b <= t)) throw ValidationError("beta exceeds theta at y=" + std::to_string(y));
      if (b < prev_beta) throw ValidationError("beta decreases at y=" + std::to_string(y));
      prev_beta = b;
    }
  }
}

StepProfiles step_profiles_at(double tau_hat, double gamma_hat) {
  check_unit(tau_hat, gamma_hat);
  StepProfiles p;
  if (tau_hat <= 0.0) {
    p.theta = PiecewiseProfile::constant(1.0);
    p.beta = PiecewiseProfile::constant(gamma_hat);
  } else if (tau_hat >= 1.0) {
    p.theta = PiecewiseProfile::constant(gamma_hat);
    p.beta = PiecewiseProfile::constant(0.0);
  } else {
    p.theta = PiecewiseProfile::step({0.0, tau_hat, 1.0}, {gamma_hat, 1.0});
    p.beta = PiecewiseProfile::step({0.0, tau_hat, 1.0}, {0.0, gamma_hat});
  }
  return p;
}

namespace {

class ConclusionEvaluator {
 public:
  ConclusionEvaluator(const GainSpec& spec, const StepProfiles& p) : spec_(spec), p_(p), gamma_(p.beta(1.0)) {
    validate_profiles(p);
    // G jumps or kinks where β⁻¹ does: at β's levels, at γ and at kinks of h.
    nodes_ = {0.0, 1.0, gamma_};
    nodes_.insert(nodes_.end(), p.beta.values().begin(), p.beta.values().end());
    nodes_.insert(nodes_.end(), spec.kinks().begin(), spec.kinks().end());
    std::erase_if(nodes_, [](double y) { return y < 0.0 || y > 1.0; });
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    cumulative_.assign(nodes_.size(), 0.0);
    const std::vector<double> none;
    for (std::size_t k = 1; k < nodes_.size(); ++k)
      cumulative_[k] = cumulative_[k - 1] + piecewise_simpson(g_at_inverse(), nodes_[k - 1], nodes_[k], none, kQuadTol);
  }

  double operator()(double y_u) const {
    const double theta = p_.theta(y_u), beta = p_.beta(y_u);
    const double share = theta >= 1.0 ? 0.0 : spec_.online_share(y_u, theta);
    return (1.0 - theta + beta) * share + theta - beta + cumulative(beta) + cumulative(1.0) - cumulative(theta);
  }

  std::vector<double> cuts() const {
    std::vector<double> c = p_.theta.knots();
    c.insert(c.end(), p_.beta.knots().begin(), p_.beta.knots().end());
    c.insert(c.end(), spec_.kinks().begin(), spec_.kinks().end());
    return c;
  }

 private:
  std::function<double(double)> g_at_inverse() const {
    return [this](double y) {
      if (y >= gamma_) return 0.0;
      const double inv = p_.beta.generalized_inverse(y);
      return inv >= 1.0 ? 0.0 : spec_.g(y, inv);
    };
  }

  // ∫_0^t G.
  double cumulative(double t) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (nodes_[k] == t) return cumulative_[k];
    return cumulative_[k] + adaptive_simpson(g_at_inverse(), nodes_[k], t, kQuadTol);
  }

  const GainSpec& spec_;
  const StepProfiles& p_;
  double gamma_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

}  // namespace

double conclusion_integrand(const GainSpec& spec, const StepProfiles& profiles, double y_u) {
  return ConclusionEvaluator(spec, profiles)(y_u);
}

double conclusion_integral(const GainSpec& spec, const StepProfiles& profiles) {
  const ConclusionEvaluator f(spec, profiles);
  const auto cuts = f.cuts();
  return piecewise_simpson(f, 0.0, 1.0, cuts, 1e-11);
}

}  // namespace wranking
