#include "wmce/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <memory>

#include "wmce/errors.hpp"

namespace wmce {

namespace {

std::string hex(const unsigned char* bytes, unsigned int length) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kDigits[bytes[i] >> 4];
    out += kDigits[bytes[i] & 0x0f];
  }
  return out;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 computation failed");
  }
  return hex(digest.data(), length);
}

std::string sha256_file(const std::filesystem::path& file) { return sha256_hex(read_file(file)); }

OutputSet::OutputSet(std::filesystem::path out_dir) : dir_(std::move(out_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw ValidationError("cannot create output directory " + dir_.string());
  }
}

void OutputSet::write(const std::string& name, std::string_view content) {
  const auto path = dir_ / name;
  record(name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError("failed writing " + path.string());
}

void OutputSet::record(const std::string& name) {
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void OutputSet::write_manifest(nlohmann::json meta) const {
  std::vector<std::string> sorted = files_;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::json list = nlohmann::json::array();
  for (const auto& name : sorted) {
    const std::string content = read_file(dir_ / name);
    list.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }
  meta["files"] = std::move(list);
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write manifest.json");
  out << meta.dump(2) << '\n';
}

void OutputSet::remove_all() noexcept {
  std::error_code ec;
  for (const auto& name : files_) std::filesystem::remove(dir_ / name, ec);
  std::filesystem::remove(dir_ / "manifest.json", ec);
}

}  // namespace wmce
