#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ubcost::cli {

inline constexpr std::string_view kEngineVersion = "0.1.0";

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;
inline constexpr int kIoFailure = 2;

struct Options {
  std::filesystem::path data_dir;
  std::filesystem::path cost_book;  // overrides <data>/costbook.yaml
  std::vector<std::filesystem::path> scenarios;
  std::string baseline;  // sweep: baseline scenario name, default the first
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::filesystem::path sim_config;
  std::filesystem::path lookup_dir;
  std::filesystem::path cache_dir;  // falls back to $UBCOST_CACHE_DIR
  bool emit_deciles = false;
  bool wall_clock_timestamp = false;
};

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err);
int cmd_lookup(const Options& o, std::ostream& out, std::ostream& err);
int cmd_run(const Options& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err);

/// Parses arguments and dispatches to a subcommand.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Every key of every input file, as printed by --help.
std::string config_reference();

}  // namespace ubcost::cli
