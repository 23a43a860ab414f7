#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace unifinsler {

// One experiment id per acceptance check; CI maps the ids to CLI commands
// mechanically. The seed fully determines every random draw, so CSV bodies
// are byte-identical across runs (timestamps live in a metadata sidecar).
struct RunConfig {
  std::string experiment_id;
  std::uint64_t seed = 7;
  std::string out_dir = ".";
};

struct CriterionOutcome {
  int criterion = 0;  // acceptance criterion number, 1..11
  std::string id;     // experiment id that produced it
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

const std::vector<std::string>& experiment_ids();

// Runs one experiment, writes its CSV artifacts and summary under
// cfg.out_dir, and returns the per-criterion outcomes. Unknown ids throw
// ConfigError.
std::vector<CriterionOutcome> run_experiment(const RunConfig& cfg);

// Every experiment in sequence (the full acceptance surface).
std::vector<CriterionOutcome> run_all_experiments(std::uint64_t seed,
                                                  const std::string& out_dir);

}  // namespace unifinsler
