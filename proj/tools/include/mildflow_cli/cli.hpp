#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mildflow::cli {

struct Options {
  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> substeps;
  std::optional<std::size_t> modes;
  bool quiet = false;
};

/// Runs one of solve, burgers, props, admissibility, bcs.
/// Exit codes: 0 all pass, 2 property failure, 1 usage or configuration error.
int run(const std::string& command, const Options& opts);

/// argv front end used by the executable.
int main(int argc, char** argv);

}  // namespace mildflow::cli
