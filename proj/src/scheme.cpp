#include "wmce/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wmce/errors.hpp"
#include "wmce/paths.hpp"

namespace wmce {

namespace {

constexpr double kGridTolerance = 1e-9;

// Grid multiple check tolerant to the representation error of decimal inputs.
bool near_integer(double x, double& rounded) {
  rounded = std::round(x);
  return std::abs(x - rounded) <= kGridTolerance * std::max(1.0, std::abs(x));
}

constexpr std::uint64_t kMaxRefinedPoints = std::uint64_t{1} << 26;

}  // namespace

void validate_scheme(const SamplingScheme& scheme) {
  if (const auto* d = std::get_if<DiscreteScheme>(&scheme)) {
    if (d->n < 1) throw ValidationError("discrete scheme requires n >= 1");
    return;
  }
  const auto& c = std::get<ContinuousScheme>(scheme);
  if (!(std::isfinite(c.horizon) && c.horizon > 0.0)) {
    throw ValidationError("continuous scheme requires T > 0");
  }
  if (!(c.step > 0.0 && c.step <= c.horizon)) {
    throw ValidationError("continuous scheme requires 0 < h <= T");
  }
  if (!(c.burn_in >= 0.0 && c.burn_in < c.horizon)) {
    throw ValidationError("continuous scheme requires 0 <= delta < T");
  }
  if (!(c.resolve_step >= 0.0) || !std::isfinite(c.resolve_step)) {
    throw ValidationError("continuous scheme requires resolve_step >= 0");
  }
  double steps = 0;
  if (!near_integer(c.horizon / c.step, steps)) {
    throw ValidationError("continuous scheme requires T to be a multiple of h");
  }
  double delta_steps = 0;
  if (!near_integer(c.burn_in / c.step, delta_steps)) {
    throw ValidationError("continuous scheme requires delta to be a multiple of h");
  }
  if (steps - delta_steps < 1.0) {
    throw ValidationError("continuous scheme needs at least 2 grid points in [delta, T]");
  }
}

bool is_discrete(const SamplingScheme& scheme) noexcept {
  return std::holds_alternative<DiscreteScheme>(scheme);
}

std::size_t continuous_steps(const ContinuousScheme& scheme) {
  return static_cast<std::size_t>(std::llround(scheme.horizon / scheme.step));
}

std::size_t burn_in_index(const ContinuousScheme& scheme) {
  return static_cast<std::size_t>(std::llround(scheme.burn_in / scheme.step));
}

std::vector<double> observation_grid(const SamplingScheme& scheme) {
  validate_scheme(scheme);
  std::vector<double> grid;
  if (const auto* d = std::get_if<DiscreteScheme>(&scheme)) {
    grid.resize(d->n);
    for (std::size_t i = 0; i < d->n; ++i) grid[i] = static_cast<double>(i + 1);
    return grid;
  }
  const auto& c = std::get<ContinuousScheme>(scheme);
  const std::size_t steps = continuous_steps(c);
  grid.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = c.step * static_cast<double>(i);
  grid.back() = c.horizon;
  return grid;
}

std::vector<std::uint32_t> refinement_factors(const SamplingScheme& scheme,
                                              const SpectralModel& model,
                                              std::size_t coordinates) {
  std::vector<std::uint32_t> factors(coordinates, 1);
  const auto* c = std::get_if<ContinuousScheme>(&scheme);
  if (c == nullptr || c->resolve_step == 0.0) return factors;
  const std::uint64_t steps = continuous_steps(*c);
  for (std::size_t k = 0; k < coordinates; ++k) {
    const double q = std::ceil(model.theta(k) * c->step / c->resolve_step - 1e-12);
    if (q * static_cast<double>(steps) > static_cast<double>(kMaxRefinedPoints)) {
      std::ostringstream os;
      os << "resolve_step " << c->resolve_step << " would need " << q * steps
         << " points for coordinate " << k + 1 << "; increase resolve_step";
      throw ValidationError(os.str());
    }
    factors[k] = static_cast<std::uint32_t>(std::max(1.0, q));
  }
  return factors;
}

std::string describe(const SamplingScheme& scheme) {
  std::ostringstream os;
  if (const auto* d = std::get_if<DiscreteScheme>(&scheme)) {
    os << "discrete(n=" << d->n << ")";
  } else {
    const auto& c = std::get<ContinuousScheme>(scheme);
    os << "continuous(T=" << format_double(c.horizon) << ",h=" << format_double(c.step)
       << ",delta=" << format_double(c.burn_in);
    if (c.resolve_step > 0) os << ",resolve_step=" << format_double(c.resolve_step);
    os << ")";
  }
  return os.str();
}

}  // namespace wmce
