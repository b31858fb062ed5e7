#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wmce/spectral_model.hpp"

namespace wmce {

inline constexpr double kDefaultAutocovTolerance = 1e-10;

/// H * Gamma(2H): the stationary variance of the canonical fOU process.
double hurst_variance_constant(double hurst);

/// Autocovariance r(t) of the stationary solution of dz = -z dt + dB^H.
///
/// Evaluated from the spectral representation
///   r(t) = Gamma(2H+1) sin(pi H) / pi * int_0^inf cos(t x) x^(1-2H) / (1+x^2) dx
/// with a double-exponential Fourier quadrature. r(0) = H Gamma(2H) and the
/// H = 1/2 case e^{-|t|}/2 are returned in closed form. r is even, so negative
/// lags are accepted.
///
/// Throws QuadratureError when the achieved absolute error exceeds `tol`.
double canonical_autocov(double hurst, double t, double tol = kDefaultAutocovTolerance);

/// r_k(t) = sigma_k^2 (alpha theta_k)^(-2H) r(alpha theta_k t).
double coordinate_autocov(const SpectralModel& model, std::size_t k, double t,
                          double tol = kDefaultAutocovTolerance);

/// Stationary variance r_k(0).
double coordinate_variance(const SpectralModel& model, std::size_t k);

/// Canonical autocovariance sampled at a set of (canonical-time) lags.
struct AutocovTable {
  double hurst;
  std::vector<double> lags;
  std::vector<double> values;

  static AutocovTable build(double hurst, std::vector<double> lags,
                            double tol = kDefaultAutocovTolerance);

  /// Lags alpha theta_k * i for i = 0..count-1, i.e. unit time steps of coordinate k.
  static AutocovTable for_coordinate(const SpectralModel& model, std::size_t k,
                                     std::size_t count, double step = 1.0,
                                     double tol = kDefaultAutocovTolerance);
};

}  // namespace wmce
