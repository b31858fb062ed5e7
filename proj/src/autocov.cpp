#include "wmce/autocov.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wmce/errors.hpp"

namespace wmce {

namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw ValidationError("hurst must lie in open interval (0,1)");
  }
}

// The integrator precomputes its node tables lazily; one per thread avoids
// sharing that mutable cache.
boost::math::quadrature::ooura_fourier_cos<double>& fourier_cos_integrator() {
  thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-13, 8);
  return integrator;
}

}  // namespace

double hurst_variance_constant(double hurst) {
  check_hurst(hurst);
  return hurst * std::tgamma(2.0 * hurst);
}

double canonical_autocov(double hurst, double t, double tol) {
  check_hurst(hurst);
  if (!(tol > 0.0)) throw ValidationError("canonical_autocov: tol must be positive");
  if (!std::isfinite(t)) throw ValidationError("canonical_autocov: lag must be finite");
  t = std::abs(t);
  if (t == 0.0) return hurst_variance_constant(hurst);
  if (hurst == 0.5) return 0.5 * std::exp(-t);

  const double exponent = 1.0 - 2.0 * hurst;
  auto density = [exponent](double x) { return std::pow(x, exponent) / (1.0 + x * x); };
  const auto [integral, relative_error] = fourier_cos_integrator().integrate(density, t);
  const double prefactor =
      std::tgamma(2.0 * hurst + 1.0) * std::sin(std::numbers::pi * hurst) / std::numbers::pi;
  const double value = prefactor * integral;
  const double achieved = std::abs(value) * relative_error;
  if (!std::isfinite(value) || !(achieved <= tol)) {
    std::ostringstream os;
    os << "canonical_autocov(H=" << hurst << ", t=" << t << ") did not reach tolerance " << tol
       << " (achieved " << achieved << ")";
    throw QuadratureError(os.str(), achieved);
  }
  return value;
}

double coordinate_variance(const SpectralModel& model, std::size_t k) {
  const double h = model.hurst();
  const double speed = model.alpha() * model.theta(k) + model.nu(k);
  const double s = model.sigma(k);
  return s * s * std::pow(speed, -2.0 * h) * hurst_variance_constant(h);
}

double coordinate_autocov(const SpectralModel& model, std::size_t k, double t, double tol) {
  const double h = model.hurst();
  const double speed = model.alpha() * model.theta(k) + model.nu(k);
  const double s = model.sigma(k);
  const double scale = s * s * std::pow(speed, -2.0 * h);
  // The tolerance is absolute on r_k, so rescale it to canonical units.
  return scale * canonical_autocov(h, speed * t, tol / scale);
}

AutocovTable AutocovTable::build(double hurst, std::vector<double> lags, double tol) {
  AutocovTable table{hurst, std::move(lags), {}};
  table.values.reserve(table.lags.size());
  for (double lag : table.lags) {
    if (lag < 0.0) throw ValidationError("AutocovTable lags must be nonnegative");
    table.values.push_back(canonical_autocov(hurst, lag, tol));
  }
  return table;
}

AutocovTable AutocovTable::for_coordinate(const SpectralModel& model, std::size_t k,
                                          std::size_t count, double step, double tol) {
  const double speed = model.alpha() * model.theta(k) + model.nu(k);
  std::vector<double> lags(count);
  for (std::size_t i = 0; i < count; ++i) lags[i] = speed * step * static_cast<double>(i);
  return build(model.hurst(), std::move(lags), tol);
}

}  // namespace wmce
