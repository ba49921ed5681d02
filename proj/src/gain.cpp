#include "wranking/gain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wranking/instance.hpp"

namespace wranking {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_h(const GainSpec& spec) {
  if (!spec.h_based()) throw std::logic_error("gain spec '" + spec.name() + "' has no h");
}

}  // namespace

GainSpec::GainSpec(GainKind kind, std::vector<double> kinks) : kind_(kind), kinks_(std::move(kinks)) {}

GainSpec GainSpec::simple_exp() { return GainSpec(GainKind::kSimpleExp, {0.5}); }
GainSpec GainSpec::half_exp() { return GainSpec(GainKind::kHalfExp, {kLn2}); }
GainSpec GainSpec::adversarial() { return GainSpec(GainKind::kAdversarial, {}); }

GainSpec GainSpec::table(std::vector<double> breakpoints, std::vector<double> values) {
  return make_table(std::move(breakpoints), std::move(values), true);
}

GainSpec GainSpec::table_unchecked(std::vector<double> breakpoints, std::vector<double> values) {
  return make_table(std::move(breakpoints), std::move(values), false);
}

GainSpec GainSpec::make_table(std::vector<double> xs, std::vector<double> ys, bool check_derivative) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw ValidationError("table needs at least two breakpoints and one value per breakpoint");
  if (xs.front() != 0.0 || xs.back() != 1.0) throw ValidationError("table breakpoints must span [0,1]");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] >= 0.0 && ys[i] <= 1.0)) throw ValidationError("table value outside [0,1]");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw ValidationError("table breakpoints must increase strictly");
    if (i > 0 && ys[i] < ys[i - 1]) throw ValidationError("table values must be non-decreasing");
  }
  if (check_derivative) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
      if (slope > ys[i] + 1e-12) {
        throw ValidationError("table violates h' <= h on segment starting at " + std::to_string(xs[i]));
      }
    }
  }
  std::vector<double> kinks(xs.begin() + 1, xs.end() - 1);
  GainSpec spec(GainKind::kTable, std::move(kinks));
  spec.table_cumulative_.assign(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    spec.table_cumulative_[i] =
        spec.table_cumulative_[i - 1] + 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
  }
  spec.table_x_ = std::move(xs);
  spec.table_y_ = std::move(ys);
  return spec;
}

std::string GainSpec::name() const {
  switch (kind_) {
    case GainKind::kSimpleExp: return "simple-exp";
    case GainKind::kHalfExp: return "half-exp";
    case GainKind::kAdversarial: return "adversarial";
    case GainKind::kTable: return "table";
  }
  return "unknown";
}

std::size_t GainSpec::table_segment(double x) const {
  auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - table_x_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, table_x_.size() - 2);
}

double GainSpec::h(double x) const {
  switch (kind_) {
    case GainKind::kSimpleExp: return x < 0.5 ? std::exp(x - 0.5) : 1.0;
    case GainKind::kHalfExp: return x < kLn2 ? 0.5 * std::exp(x) : 1.0;
    case GainKind::kTable: {
      const std::size_t i = table_segment(x);
      const double t = (x - table_x_[i]) / (table_x_[i + 1] - table_x_[i]);
      return table_y_[i] + t * (table_y_[i + 1] - table_y_[i]);
    }
    case GainKind::kAdversarial: break;
  }
  require_h(*this);
  return 0.0;
}

double GainSpec::dh(double x) const {
  switch (kind_) {
    case GainKind::kSimpleExp: return x < 0.5 ? std::exp(x - 0.5) : 0.0;
    case GainKind::kHalfExp: return x < kLn2 ? 0.5 * std::exp(x) : 0.0;
    case GainKind::kTable: {
      const std::size_t i = table_segment(x);
      return (table_y_[i + 1] - table_y_[i]) / (table_x_[i + 1] - table_x_[i]);
    }
    case GainKind::kAdversarial: break;
  }
  require_h(*this);
  return 0.0;
}

double GainSpec::dh_left(double x) const {
  switch (kind_) {
    case GainKind::kSimpleExp: return x <= 0.5 ? std::exp(x - 0.5) : 0.0;
    case GainKind::kHalfExp: return x <= kLn2 ? 0.5 * std::exp(x) : 0.0;
    case GainKind::kTable: {
      if (x <= 0.0) return dh(0.0);
      auto it = std::lower_bound(table_x_.begin(), table_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(it - table_x_.begin());
      i = std::clamp<std::size_t>(i, 1, table_x_.size() - 1);
      return (table_y_[i] - table_y_[i - 1]) / (table_x_[i] - table_x_[i - 1]);
    }
    case GainKind::kAdversarial: break;
  }
  require_h(*this);
  return 0.0;
}

double GainSpec::primitive(double x) const {
  switch (kind_) {
    case GainKind::kSimpleExp:
      if (x <= 0.5) return std::exp(x - 0.5) - std::exp(-0.5);
      return (1.0 - std::exp(-0.5)) + (x - 0.5);
    case GainKind::kHalfExp:
      if (x <= kLn2) return 0.5 * std::expm1(x);
      return 0.5 + (x - kLn2);
    case GainKind::kTable: {
      const std::size_t i = table_segment(x);
      const double dx = x - table_x_[i];
      return table_cumulative_[i] + 0.5 * (table_y_[i] + h(x)) * dx;
    }
    case GainKind::kAdversarial: break;
  }
  require_h(*this);
  return 0.0;
}

double GainSpec::h_integral(double a, double b) const { return primitive(b) - primitive(a); }

double GainSpec::key(double x) const {
  if (kind_ == GainKind::kAdversarial) return std::exp(x - 1.0);
  return h(x);
}

double GainSpec::online_share(double y_u, double y_v) const {
  if (kind_ == GainKind::kAdversarial) return 1.0 - std::exp(y_v - 1.0);
  return g(y_u, y_v);
}

double GainSpec::g_integral(double a, double b, double y) const {
  if (kind_ == GainKind::kAdversarial) return std::exp(b - 1.0) - std::exp(a - 1.0);
  return 0.5 * ((b - a) * (1.0 - h(y)) + h_integral(a, b));
}

std::optional<double> GainSpec::saturation() const {
  switch (kind_) {
    case GainKind::kSimpleExp: return 0.5;
    case GainKind::kHalfExp: return kLn2;
    case GainKind::kTable:
      for (std::size_t i = 0; i < table_x_.size(); ++i)
        if (table_y_[i] >= 1.0) return table_x_[i];
      return std::nullopt;
    case GainKind::kAdversarial: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> GainSpec::stationary_points(double slope) const {
  std::vector<double> out;
  if (slope <= 0.0) return out;
  switch (kind_) {
    case GainKind::kSimpleExp: {
      const double x = std::log(slope) + 0.5;
      if (x >= 0.0 && x < 0.5) out.push_back(x);
      break;
    }
    case GainKind::kHalfExp: {
      const double x = std::log(2.0 * slope);
      if (x >= 0.0 && x < kLn2) out.push_back(x);
      break;
    }
    default: break;
  }
  return out;
}

double eval_h(const GainSpec& spec, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("h argument outside [0,1]");
  return spec.h(x);
}

double eval_g(const GainSpec& spec, double x, double y) {
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
    throw std::domain_error("g argument outside [0,1]");
  return spec.g(x, y);
}

PartialClaimReport check_partial_claim(const GainSpec& spec, std::size_t grid_n) {
  require_h(spec);
  if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
  constexpr double kStep = 1e-7;
  const auto kinks = spec.kinks();
  auto kink_in_open = [&](double a, double b) {
    return std::any_of(kinks.begin(), kinks.end(), [&](double k) { return k > a && k < b; });
  };
  auto is_kink = [&](double y) {
    return std::any_of(kinks.begin(), kinks.end(), [&](double k) { return k == y; });
  };

  PartialClaimReport report;
  const double denom = static_cast<double>(grid_n - 1);
  for (std::size_t j = 0; j < grid_n; ++j) {
    const double y = static_cast<double>(j) / denom;
    const bool left_ok = y - kStep >= 0.0 && !kink_in_open(y - kStep, y);
    const bool right_ok = y + kStep <= 1.0 && !kink_in_open(y, y + kStep);
    for (std::size_t i = 0; i < grid_n; ++i) {
      const double x = static_cast<double>(i) / denom;
      const double gxy = spec.g(x, y);
      std::vector<double> slopes;
      if (left_ok && right_ok && !is_kink(y)) {
        slopes.push_back((spec.g(x, y + kStep) - spec.g(x, y - kStep)) / (2 * kStep));
      } else {
        if (left_ok) slopes.push_back((gxy - spec.g(x, y - kStep)) / kStep);
        if (right_ok) slopes.push_back((spec.g(x, y + kStep) - gxy) / kStep);
      }
      for (double d : slopes) {
        const double violation = (gxy - 1.0) - d;
        ++report.points_checked;
        if (violation > report.max_violation) {
          report.max_violation = violation;
          report.worst_x = x;
          report.worst_y = y;
        }
      }
    }
  }
  return report;
}

std::optional<GainSpec> builtin_gain(std::string_view name) {
  if (name == "simple-exp") return GainSpec::simple_exp();
  if (name == "half-exp") return GainSpec::half_exp();
  if (name == "adversarial") return GainSpec::adversarial();
  return std::nullopt;
}

}  // namespace wranking
