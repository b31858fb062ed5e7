#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wmce {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& file);

/// Files produced by one run. Every file goes through `write`, so the
/// manifest can list it with its hash and a failed run can remove it.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path out_dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  /// Writes `content` to dir/name (binary mode) and records it.
  void write(const std::string& name, std::string_view content);

  /// Records a file that was written by other means.
  void record(const std::string& name);

  /// Writes manifest.json with `meta` plus a "files" array of
  /// {path, sha256, bytes}, sorted by path.
  void write_manifest(nlohmann::json meta) const;

  /// Deletes every recorded file and the manifest.
  void remove_all() noexcept;

  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

}  // namespace wmce
