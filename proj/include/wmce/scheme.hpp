#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wmce/spectral_model.hpp"

namespace wmce {

/// Observations at t = 1, 2, ..., n (unit step).
struct DiscreteScheme {
  std::size_t n = 1;
  bool operator==(const DiscreteScheme&) const = default;
};

/// Observations over [0, horizon] on an equispaced grid of resolution `step`.
/// The time average runs over [burn_in, horizon].
///
/// `resolve_step` > 0 subdivides each step for coordinate k into
/// ceil(theta_k * step / resolve_step) pieces so that every coordinate is
/// observed at least once per `resolve_step` units of its own dilated time.
/// 0 keeps the base grid for every coordinate.
struct ContinuousScheme {
  double horizon = 1.0;
  double step = 0.01;
  double burn_in = 0.0;
  double resolve_step = 0.0;
  bool operator==(const ContinuousScheme&) const = default;
};

using SamplingScheme = std::variant<DiscreteScheme, ContinuousScheme>;

void validate_scheme(const SamplingScheme& scheme);

bool is_discrete(const SamplingScheme& scheme) noexcept;

/// Base grid: {1..n} or {0, h, ..., T}.
std::vector<double> observation_grid(const SamplingScheme& scheme);

/// Number of base steps of the continuous grid, round(T/h).
std::size_t continuous_steps(const ContinuousScheme& scheme);

/// Index of the burn-in point on the base grid.
std::size_t burn_in_index(const ContinuousScheme& scheme);

/// Per-coordinate subdivision factors for the first `coordinates` rows.
std::vector<std::uint32_t> refinement_factors(const SamplingScheme& scheme,
                                              const SpectralModel& model,
                                              std::size_t coordinates);

std::string describe(const SamplingScheme& scheme);

}  // namespace wmce
