#ifndef TOA_RUNNER_HPP
#define TOA_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "toa/config.hpp"

namespace toa {

struct RunResult {
    std::string output_path;
    std::size_t rows = 0;
};

// Executes a scenario and writes its CSV artifact under out_dir. The output
// is byte-deterministic for a fixed config and build: floats are serialized
// with 17 significant digits, all sweeps use order-independent accumulation,
// and NaN/Inf abort with numeric_error instead of being emitted.
RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       std::ostream& log);

}  // namespace toa

#endif
