#include "io.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ubcost/types.hpp"

namespace ubcost::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

fs::path temp_sibling(const fs::path& path) {
  return path.parent_path() / ("." + path.filename().string() + ".tmp");
}

void write_plain(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  ensure_dir(path.parent_path());
  const auto tmp = temp_sibling(path);
  write_plain(tmp, bytes);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

StagedOutputs::StagedOutputs(fs::path dir) : dir_(std::move(dir)) { ensure_dir(dir_); }

StagedOutputs::~StagedOutputs() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& t : temps_) fs::remove(t, ec);
}

void StagedOutputs::stage(const std::string& name, std::string_view bytes) {
  const auto tmp = temp_sibling(dir_ / name);
  write_plain(tmp, bytes);
  names_.push_back(name);
  temps_.push_back(tmp);
}

void StagedOutputs::commit() {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps_[i], dir_ / names_[i], ec);
    if (ec) throw IoError("cannot move output into place: " + (dir_ / names_[i]).string());
  }
  committed_ = true;
}

}  // namespace ubcost::io
