#include "wmce/sampler.hpp"

#include <fftw3.h>

#include <boost/random/normal_distribution.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "wmce/autocov.hpp"
#include "wmce/errors.hpp"

namespace wmce {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

constexpr double kEquispacedTolerance = 1e-9;

bool equispaced(const std::vector<double>& times) {
  if (times.size() < 3) return true;
  const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - step) > kEquispacedTolerance * step) return false;
  }
  return true;
}

// Eigenvalues of the 2(m-1) circulant whose first row mirrors `first_row`.
// The DCT-I of the first row is exactly that spectrum.
std::vector<double> circulant_spectrum(const std::vector<double>& first_row) {
  std::vector<double> in = first_row;
  std::vector<double> out(first_row.size());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(in.size()), in.data(), out.data(), FFTW_REDFT00,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::string row_context(std::size_t k) {
  return "coordinate " + std::to_string(k + 1);
}

}  // namespace

std::string to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::Auto:
      return "auto";
    case SamplerMethod::Circulant:
      return "circulant";
    case SamplerMethod::Cholesky:
      return "cholesky";
  }
  return "unknown";
}

SamplerMethod sampler_method_from_string(const std::string& name) {
  if (name == "auto") return SamplerMethod::Auto;
  if (name == "circulant") return SamplerMethod::Circulant;
  if (name == "cholesky") return SamplerMethod::Cholesky;
  throw ValidationError("unknown sampler method '" + name + "' (expected auto, circulant, cholesky)");
}

struct StationarySampler::Impl {
  struct Row {
    SamplerMethod method = SamplerMethod::Cholesky;
    std::size_t length = 0;
    // Circulant: amplitude per frequency 0..M/2, already divided by sqrt(M)
    // (and by sqrt(2) for interior frequencies).
    std::vector<double> amplitude;
    fftw_plan_s* plan = nullptr;  // owned by `plans`
    // Cholesky: lower factor.
    Eigen::MatrixXd lower;
  };

  std::vector<double> grid;
  std::vector<std::uint32_t> refinement;
  std::vector<Row> rows;
  std::map<std::size_t, PlanHandle> plans;  // keyed by circulant size M

  fftw_plan_s* plan_for(std::size_t circulant_size) {
    auto it = plans.find(circulant_size);
    if (it != plans.end()) return it->second.get();
    std::vector<std::complex<double>> in(circulant_size / 2 + 1);
    std::vector<double> out(circulant_size);
    fftw_plan plan;
    {
      std::lock_guard lock(fftw_planner_mutex());
      plan = fftw_plan_dft_c2r_1d(static_cast<int>(circulant_size),
                                  reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (plan == nullptr) throw NumericError("FFTW could not create a plan");
    return plans.emplace(circulant_size, PlanHandle(plan)).first->second.get();
  }

  bool try_circulant(Row& row, const std::vector<double>& first_row) {
    const std::size_t m = first_row.size();
    const std::size_t circulant_size = 2 * (m - 1);
    std::vector<double> spectrum = circulant_spectrum(first_row);
    const double largest = *std::max_element(spectrum.begin(), spectrum.end());
    for (double& lambda : spectrum) {
      if (lambda < -kCirculantClampThreshold * largest) return false;
      lambda = std::max(lambda, 0.0);
    }
    row.amplitude.resize(m);
    const double scale = 1.0 / static_cast<double>(circulant_size);
    for (std::size_t j = 0; j < m; ++j) {
      const bool edge = j == 0 || j == m - 1;
      row.amplitude[j] = std::sqrt(spectrum[j] * scale * (edge ? 1.0 : 0.5));
    }
    row.plan = plan_for(circulant_size);
    row.method = SamplerMethod::Circulant;
    return true;
  }

  void cholesky(Row& row, const Eigen::MatrixXd& cov, std::size_t k) {
    const std::size_t m = static_cast<std::size_t>(cov.rows());
    const double mean_diag = cov.diagonal().mean();
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    double jitter = kJitterStart;
    while (llt.info() != Eigen::Success && jitter <= kJitterMax * (1 + 1e-9)) {
      Eigen::MatrixXd shifted = cov;
      shifted.diagonal().array() += jitter * mean_diag;
      llt.compute(shifted);
      jitter *= 10.0;
    }
    if (llt.info() != Eigen::Success) {
      std::ostringstream os;
      os << "Cholesky factorization failed for " << row_context(k) << " on " << m
         << " grid points even with relative jitter " << kJitterMax;
      throw NumericError(os.str());
    }
    row.lower = llt.matrixL();
    row.method = SamplerMethod::Cholesky;
  }
};

StationarySampler::StationarySampler(const SpectralModel& model, std::vector<double> grid,
                                     std::size_t coordinates, SamplerMethod method,
                                     std::vector<std::uint32_t> refinement)
    : impl_(std::make_unique<Impl>()) {
  if (coordinates == 0 || coordinates > model.size()) {
    throw ValidationError("sampler: coordinate count must lie in 1..model size");
  }
  if (refinement.empty()) refinement.assign(coordinates, 1);
  if (refinement.size() != coordinates) {
    throw ValidationError("sampler: refinement factors must match the coordinate count");
  }
  impl_->grid = std::move(grid);
  impl_->refinement = std::move(refinement);
  {
    CoordinatePaths shape;
    shape.grid = impl_->grid;
    shape.refinement = impl_->refinement;
    shape.rows.resize(coordinates);
    for (std::size_t k = 0; k < coordinates; ++k) {
      shape.rows[k].resize(refined_length(shape.grid.size(), shape.refinement[k]));
    }
    shape.validate();
  }

  impl_->rows.resize(coordinates);
  CoordinatePaths times_source{impl_->grid, {}, impl_->refinement, true};
  times_source.rows.resize(coordinates);
  for (std::size_t k = 0; k < coordinates; ++k) {
    auto& row = impl_->rows[k];
    const std::vector<double> times = times_source.row_grid(k);
    const std::size_t m = times.size();
    row.length = m;

    if (m == 1) {
      row.lower = Eigen::MatrixXd::Constant(1, 1, std::sqrt(coordinate_variance(model, k)));
      row.method = SamplerMethod::Cholesky;
      continue;
    }

    const bool regular = equispaced(times);
    if (method == SamplerMethod::Circulant && !regular) {
      throw ValidationError("circulant sampling requires an equispaced grid (" + row_context(k) +
                            ")");
    }

    std::vector<double> first_row;
    if (regular) {
      const double dt = (times.back() - times.front()) / static_cast<double>(m - 1);
      first_row.resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        first_row[j] = coordinate_autocov(model, k, dt * static_cast<double>(j));
      }
      if (method != SamplerMethod::Cholesky && impl_->try_circulant(row, first_row)) continue;
      if (method == SamplerMethod::Circulant) {
        throw NumericError("circulant embedding is not nonnegative definite for " +
                           row_context(k) + "; use the auto or cholesky method");
      }
    }

    if (m > kCholeskyMaxPoints) {
      std::ostringstream os;
      os << "dense Cholesky sampling of " << m << " points for " << row_context(k)
         << " exceeds the limit of " << kCholeskyMaxPoints;
      throw NumericError(os.str());
    }
    Eigen::MatrixXd cov(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double c = regular ? first_row[i - j]
                                 : coordinate_autocov(model, k, times[i] - times[j]);
        cov(i, j) = c;
        cov(j, i) = c;
      }
    }
    impl_->cholesky(row, cov, k);
  }
}

StationarySampler::~StationarySampler() = default;
StationarySampler::StationarySampler(StationarySampler&&) noexcept = default;
StationarySampler& StationarySampler::operator=(StationarySampler&&) noexcept = default;

std::size_t StationarySampler::coordinates() const noexcept { return impl_->rows.size(); }
const std::vector<double>& StationarySampler::grid() const noexcept { return impl_->grid; }
const std::vector<std::uint32_t>& StationarySampler::refinement() const noexcept {
  return impl_->refinement;
}

SamplerMethod StationarySampler::method_used(std::size_t k) const {
  return impl_->rows.at(k).method;
}

void StationarySampler::sample_row(std::size_t k, RngPolicy::Engine& engine,
                                   std::vector<double>& out) const {
  const auto& row = impl_->rows.at(k);
  boost::random::normal_distribution<double> normal;
  out.resize(row.length);
  if (row.method == SamplerMethod::Cholesky) {
    Eigen::VectorXd xi(static_cast<Eigen::Index>(row.length));
    for (auto& v : xi) v = normal(engine);
    Eigen::Map<Eigen::VectorXd> result(out.data(), static_cast<Eigen::Index>(row.length));
    result.noalias() = row.lower.triangularView<Eigen::Lower>() * xi;
    return;
  }
  const std::size_t m = row.length;
  const std::size_t circulant_size = 2 * (m - 1);
  thread_local std::vector<std::complex<double>> spectrum;
  thread_local std::vector<double> field;
  spectrum.resize(m);
  field.resize(circulant_size);
  spectrum[0] = {row.amplitude[0] * normal(engine), 0.0};
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double re = normal(engine);
    const double im = normal(engine);
    spectrum[j] = {row.amplitude[j] * re, row.amplitude[j] * im};
  }
  spectrum[m - 1] = {row.amplitude[m - 1] * normal(engine), 0.0};
  fftw_execute_dft_c2r(row.plan, reinterpret_cast<fftw_complex*>(spectrum.data()), field.data());
  std::copy_n(field.begin(), m, out.begin());
}

CoordinatePaths StationarySampler::sample(const RngPolicy& rng,
                                          std::uint64_t replication) const {
  CoordinatePaths paths;
  paths.grid = impl_->grid;
  paths.refinement = impl_->refinement;
  paths.stationary = true;
  paths.rows.resize(coordinates());
  for (std::size_t k = 0; k < coordinates(); ++k) {
    auto engine = rng.stream(replication, k, StreamPurpose::Path);
    sample_row(k, engine, paths.rows[k]);
  }
  return paths;
}

CoordinatePaths sample_stationary_paths(const SpectralModel& model,
                                        const std::vector<double>& grid, const RngPolicy& rng,
                                        SamplerMethod method, std::uint64_t replication) {
  return StationarySampler(model, grid, model.size(), method).sample(rng, replication);
}

struct NonstationarySampler::Impl {
  InitialCondition init;
  std::vector<double> grid;
  std::vector<std::uint32_t> refinement;
  std::vector<double> speeds;
  bool prepended = false;  // 0 added in front of the grid to reach z_k(0)
  std::unique_ptr<StationarySampler> stationary;
};

NonstationarySampler::NonstationarySampler(const SpectralModel& model, InitialCondition init,
                                           std::vector<double> grid, std::size_t coordinates,
                                           SamplerMethod method,
                                           std::vector<std::uint32_t> refinement)
    : impl_(std::make_unique<Impl>()) {
  validate_initial_condition(init, model);
  if (grid.empty()) throw ValidationError("sampler: grid must contain at least one point");
  if (grid.front() < 0.0) {
    throw ValidationError("non-stationary sampling needs grid times >= 0 (time since start)");
  }
  if (refinement.empty()) refinement.assign(std::max<std::size_t>(coordinates, 1), 1);
  impl_->init = std::move(init);
  impl_->grid = grid;
  impl_->refinement = refinement;

  if (is_stationary(impl_->init)) {
    impl_->stationary = std::make_unique<StationarySampler>(model, std::move(grid), coordinates,
                                                            method, std::move(refinement));
    return;
  }
  if (grid.front() > 0.0) {
    grid.insert(grid.begin(), 0.0);
    impl_->prepended = true;
  }
  impl_->speeds.resize(coordinates);
  for (std::size_t k = 0; k < coordinates; ++k) {
    impl_->speeds[k] = model.alpha() * model.theta(k) + model.nu(k);
  }
  impl_->stationary = std::make_unique<StationarySampler>(model, std::move(grid), coordinates,
                                                          method, std::move(refinement));
}

NonstationarySampler::~NonstationarySampler() = default;
NonstationarySampler::NonstationarySampler(NonstationarySampler&&) noexcept = default;
NonstationarySampler& NonstationarySampler::operator=(NonstationarySampler&&) noexcept = default;

CoordinatePaths NonstationarySampler::sample(const RngPolicy& rng,
                                             std::uint64_t replication) const {
  if (is_stationary(impl_->init)) return impl_->stationary->sample(rng, replication);

  CoordinatePaths z = impl_->stationary->sample(rng, replication);
  CoordinatePaths x;
  x.grid = impl_->grid;
  x.refinement = impl_->refinement;
  x.stationary = false;
  x.rows.resize(z.coordinates());
  for (std::size_t k = 0; k < z.coordinates(); ++k) {
    double start = 0.0;
    if (const auto* d = std::get_if<DeterministicInit>(&impl_->init)) {
      start = d->values.at(k);
    } else if (const auto* g = std::get_if<GaussianIidInit>(&impl_->init)) {
      auto engine = rng.stream(replication, k, StreamPurpose::InitialCondition);
      start = g->mean + g->std * boost::random::normal_distribution<double>()(engine);
    }
    const std::vector<double> times = z.row_grid(k);
    const auto& zrow = z.rows[k];
    const double z0 = zrow.front();
    const std::size_t skip = impl_->prepended ? z.refinement[k] : 0;
    auto& xrow = x.rows[k];
    xrow.resize(zrow.size() - skip);
    for (std::size_t j = skip; j < zrow.size(); ++j) {
      const double decay = std::exp(-impl_->speeds[k] * times[j]);
      xrow[j - skip] = (zrow[j] - decay * z0) + decay * start;
    }
  }
  return x;
}

CoordinatePaths sample_nonstationary_paths(const SpectralModel& model,
                                           const InitialCondition& init,
                                           const std::vector<double>& grid,
                                           const RngPolicy& rng, SamplerMethod method,
                                           std::uint64_t replication) {
  return NonstationarySampler(model, init, grid, model.size(), method).sample(rng, replication);
}

}  // namespace wmce
