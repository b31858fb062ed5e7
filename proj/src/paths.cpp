#include "wmce/paths.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wmce/errors.hpp"

namespace wmce {

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'M', 'C', 'E', 'P', 'T', 'H', '1'};

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return value;
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  const T le = to_little_endian(value);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ValidationError("paths binary: unexpected end of file");
  return to_little_endian(value);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string& text) {
  double value = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("paths csv: cannot parse number '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::size_t refined_length(std::size_t grid_size, std::uint32_t factor) noexcept {
  return grid_size == 0 ? 0 : (grid_size - 1) * factor + 1;
}

std::vector<double> CoordinatePaths::row_grid(std::size_t k) const {
  const std::uint32_t q = refinement.at(k);
  std::vector<double> times(refined_length(grid.size(), q));
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dt = (grid[i + 1] - grid[i]) / q;
    for (std::uint32_t j = 0; j < q; ++j) times[i * q + j] = grid[i] + dt * j;
  }
  if (!grid.empty()) times.back() = grid.back();
  return times;
}

void CoordinatePaths::validate() const {
  if (grid.empty()) throw ValidationError("paths: grid must contain at least one point");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ValidationError("paths: grid must be strictly increasing");
  }
  if (refinement.size() != rows.size()) {
    throw ValidationError("paths: refinement factors must match the number of rows");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (refinement[k] == 0) throw ValidationError("paths: refinement factors must be >= 1");
    if (rows[k].size() != refined_length(grid.size(), refinement[k])) {
      std::ostringstream os;
      os << "paths: row " << k + 1 << " has " << rows[k].size() << " values, expected "
         << refined_length(grid.size(), refinement[k]);
      throw ValidationError(os.str());
    }
  }
}

void write_paths_csv(const CoordinatePaths& paths, std::ostream& out) {
  paths.validate();
  out << "t";
  for (std::size_t k = 0; k < paths.coordinates(); ++k) out << ",z_" << k + 1;
  out << "\r\n";
  for (std::size_t i = 0; i < paths.grid_size(); ++i) {
    out << format_double(paths.grid[i]);
    for (std::size_t k = 0; k < paths.coordinates(); ++k) {
      out << ',' << format_double(paths.at(k, i));
    }
    out << "\r\n";
  }
}

CoordinatePaths read_paths_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("paths csv: missing header");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "t") {
    throw ValidationError("paths csv: header must start with 't'");
  }
  const std::size_t n = header.size() - 1;
  CoordinatePaths paths;
  paths.rows.assign(n, {});
  paths.refinement.assign(n, 1);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ValidationError("paths csv: row width does not match header");
    }
    paths.grid.push_back(parse_double(fields[0]));
    for (std::size_t k = 0; k < n; ++k) paths.rows[k].push_back(parse_double(fields[k + 1]));
  }
  paths.validate();
  return paths;
}

void write_paths_binary(const CoordinatePaths& paths, std::ostream& out) {
  paths.validate();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint64_t>(out, paths.coordinates());
  put<std::uint64_t>(out, paths.grid_size());
  put<std::uint64_t>(out, paths.stationary ? 1u : 0u);
  for (double t : paths.grid) put<double>(out, t);
  for (std::uint32_t q : paths.refinement) put<std::uint32_t>(out, q);
  for (const auto& row : paths.rows) {
    for (double v : row) put<double>(out, v);
  }
}

CoordinatePaths read_paths_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ValidationError("paths binary: bad magic");
  const auto n = get<std::uint64_t>(in);
  const auto m = get<std::uint64_t>(in);
  const auto flags = get<std::uint64_t>(in);
  if (m == 0 || m > (std::uint64_t{1} << 32) || n > (std::uint64_t{1} << 32)) {
    throw ValidationError("paths binary: implausible dimensions");
  }
  CoordinatePaths paths;
  paths.stationary = (flags & 1u) != 0;
  paths.grid.resize(m);
  for (auto& t : paths.grid) t = get<double>(in);
  paths.refinement.resize(n);
  for (auto& q : paths.refinement) q = get<std::uint32_t>(in);
  paths.rows.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (paths.refinement[k] == 0) throw ValidationError("paths binary: zero refinement factor");
    paths.rows[k].resize(refined_length(m, paths.refinement[k]));
    for (auto& v : paths.rows[k]) v = get<double>(in);
  }
  paths.validate();
  return paths;
}

void save_paths(const CoordinatePaths& paths, const std::filesystem::path& file) {
  const bool csv = file.extension() == ".csv";
  std::ofstream out(file, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw ValidationError("cannot open " + file.string() + " for writing");
  if (csv) {
    write_paths_csv(paths, out);
  } else {
    write_paths_binary(paths, out);
  }
  if (!out) throw ValidationError("failed writing " + file.string());
}

CoordinatePaths load_paths(const std::filesystem::path& file) {
  const bool csv = file.extension() == ".csv";
  std::ifstream in(file, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  return csv ? read_paths_csv(in) : read_paths_binary(in);
}

}  // namespace wmce
