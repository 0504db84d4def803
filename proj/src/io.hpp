#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ubcost::io {

/// Whole file as bytes; throws IoError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string sha256_hex(std::string_view bytes);

/// Collects output files as temporaries and publishes them together on
/// commit(). Uncommitted temporaries are removed on destruction, so a
/// failed run leaves no partial output behind.
class StagedOutputs {
 public:
  explicit StagedOutputs(std::filesystem::path dir);
  ~StagedOutputs();
  StagedOutputs(const StagedOutputs&) = delete;
  StagedOutputs& operator=(const StagedOutputs&) = delete;

  void stage(const std::string& name, std::string_view bytes);
  /// Renames every staged file into place, in staging order.
  void commit();
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
  std::vector<std::filesystem::path> temps_;
  bool committed_ = false;
};

}  // namespace ubcost::io
