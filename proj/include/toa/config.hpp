#ifndef TOA_CONFIG_HPP
#define TOA_CONFIG_HPP

#include <string>
#include <vector>

#include "toa/common.hpp"
#include "toa/packets.hpp"

namespace toa {

enum class ScenarioKind {
    density,
    currents,
    means,
    negative_flux,
    semiclassical,
    barrier,
    wigner_check,
};

const char* scenario_name(ScenarioKind kind);
ScenarioKind parse_scenario(const std::string& name);  // throws config_error

enum class BarrierModelKind { delta, rectangular };

// Fully resolved scenario configuration. Parsed from a flat key-value text
// with [component] sections; unknown or out-of-scenario keys are rejected
// with line numbers.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::density;

    PhysicalConstants constants;
    WavePacketSpec packet;

    double detector_x = 0.0;
    double tau_min = 0.0;
    double tau_max = 0.0;
    int tau_count = 0;

    // scenario-specific fields
    double tau = 0.0;                          // semiclassical
    std::vector<double> hbar_scales;           // semiclassical
    std::vector<double> tau_values;            // wigner_check
    double margin = defaults::negative_flux_margin;  // negative_flux
    BarrierModelKind barrier_model = BarrierModelKind::delta;
    double barrier_strength = 0.0;
    double barrier_height = 0.0;
    double barrier_width = 0.0;

    // tolerance overrides
    double p_tol = defaults::p_tol;
    double norm_tol = defaults::norm_tol;
    double edge_tol = defaults::edge_tol;
    double tail_tol = defaults::tail_tol;

    std::string output;  // output file name; default "<scenario>.csv"
};

// Parses and validates; `source` names the origin for error messages.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);

// Canonical ready-to-run config text for a scenario kind.
std::string demo_config(ScenarioKind kind);

}  // namespace toa

#endif
