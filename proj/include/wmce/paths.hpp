#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wmce {

/// Simulated (or observed) coordinate trajectories.
///
/// Row k holds coordinate k+1 on the base grid subdivided `refinement[k]`
/// times: (grid.size() - 1) * refinement[k] + 1 equispaced-within-step values.
/// With all factors 1 the rows form an N x grid.size() matrix.
struct CoordinatePaths {
  std::vector<double> grid;
  std::vector<std::vector<double>> rows;
  std::vector<std::uint32_t> refinement;
  bool stationary = true;

  std::size_t coordinates() const noexcept { return rows.size(); }
  std::size_t grid_size() const noexcept { return grid.size(); }

  /// Value of coordinate k at base grid index i.
  double at(std::size_t k, std::size_t i) const { return rows[k][i * refinement[k]]; }

  /// Time points of row k.
  std::vector<double> row_grid(std::size_t k) const;

  /// Throws ValidationError when dimensions or grid ordering are inconsistent.
  void validate() const;

  bool operator==(const CoordinatePaths&) const = default;
};

/// Expected length of a row with the given subdivision factor.
std::size_t refined_length(std::size_t grid_size, std::uint32_t factor) noexcept;

/// CSV with header `t,z_1,...,z_N`, one line per base grid point, values in
/// shortest round-trip form. Refined rows contribute their base-grid values only.
void write_paths_csv(const CoordinatePaths& paths, std::ostream& out);
CoordinatePaths read_paths_csv(std::istream& in);

/// Little-endian binary dump:
///   char[8]  magic "WMCEPTH1"
///   u64      N (rows), u64 m (base grid length), u64 flags (bit 0: stationary)
///   f64[m]   base grid
///   u32[N]   refinement factors
///   f64[...] row-major values, row k has (m-1)*refinement[k]+1 entries
void write_paths_binary(const CoordinatePaths& paths, std::ostream& out);
CoordinatePaths read_paths_binary(std::istream& in);

/// Dispatches on extension: `.csv` or anything else as binary.
void save_paths(const CoordinatePaths& paths, const std::filesystem::path& file);
CoordinatePaths load_paths(const std::filesystem::path& file);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace wmce
