#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wmce/paths.hpp"
#include "wmce/rng.hpp"
#include "wmce/spectral_model.hpp"

namespace wmce {

enum class SamplerMethod { Auto, Circulant, Cholesky };

std::string to_string(SamplerMethod method);
SamplerMethod sampler_method_from_string(const std::string& name);

/// Negative circulant eigenvalues above -threshold * max eigenvalue are clamped to 0.
inline constexpr double kCirculantClampThreshold = 1e-10;
inline constexpr double kJitterStart = 1e-12;
inline constexpr double kJitterMax = 1e-8;
/// Dense factorizations beyond this many grid points are refused.
inline constexpr std::size_t kCholeskyMaxPoints = 4096;

/// Exact Gaussian sampler for the stationary coordinates on a fixed grid.
///
/// Construction does all the per-model work (autocovariance tables, circulant
/// spectra or Cholesky factors); `sample` only draws normals and transforms
/// them, so one instance serves every replication of an experiment and may be
/// shared across threads.
class StationarySampler {
 public:
  /// `refinement` gives per-row subdivision factors (empty means all 1).
  /// Rows are prepared for the first `coordinates` eigenpairs of `model`.
  StationarySampler(const SpectralModel& model, std::vector<double> grid,
                    std::size_t coordinates, SamplerMethod method = SamplerMethod::Auto,
                    std::vector<std::uint32_t> refinement = {});
  ~StationarySampler();
  StationarySampler(StationarySampler&&) noexcept;
  StationarySampler& operator=(StationarySampler&&) noexcept;

  std::size_t coordinates() const noexcept;
  const std::vector<double>& grid() const noexcept;
  const std::vector<std::uint32_t>& refinement() const noexcept;

  /// Method actually used for row k (never Auto).
  SamplerMethod method_used(std::size_t k) const;

  /// One draw of every row, each from its own (replication, k, Path) stream.
  CoordinatePaths sample(const RngPolicy& rng, std::uint64_t replication) const;

  /// One draw of row k into `out` (resized as needed).
  void sample_row(std::size_t k, RngPolicy::Engine& engine, std::vector<double>& out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Stationary paths for coordinates 1..model.size() on `grid`.
CoordinatePaths sample_stationary_paths(const SpectralModel& model,
                                        const std::vector<double>& grid, const RngPolicy& rng,
                                        SamplerMethod method = SamplerMethod::Auto,
                                        std::uint64_t replication = 0);

/// Paths started from `init` via
///   x_k(t) = z_k(t) - e^{-lambda_k t} z_k(0) + e^{-lambda_k t} x_k(0),
/// lambda_k = alpha theta_k + nu_k, with z stationary and x_k(0) independent of z.
/// Grid times are measured from the initial instant, so they must be >= 0.
/// A stationary init reproduces StationarySampler output bit for bit.
class NonstationarySampler {
 public:
  NonstationarySampler(const SpectralModel& model, InitialCondition init,
                       std::vector<double> grid, std::size_t coordinates,
                       SamplerMethod method = SamplerMethod::Auto,
                       std::vector<std::uint32_t> refinement = {});
  ~NonstationarySampler();
  NonstationarySampler(NonstationarySampler&&) noexcept;
  NonstationarySampler& operator=(NonstationarySampler&&) noexcept;

  CoordinatePaths sample(const RngPolicy& rng, std::uint64_t replication) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CoordinatePaths sample_nonstationary_paths(const SpectralModel& model,
                                           const InitialCondition& init,
                                           const std::vector<double>& grid,
                                           const RngPolicy& rng,
                                           SamplerMethod method = SamplerMethod::Auto,
                                           std::uint64_t replication = 0);

}  // namespace wmce
