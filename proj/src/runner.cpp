#include "toa/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "toa/asymptotics.hpp"
#include "toa/errors.hpp"
#include "toa/observables.hpp"
#include "toa/oscquad.hpp"
#include "toa/scattering.hpp"

namespace toa {

namespace {

// 17 significant digits guarantee exact double round-trips.
std::string fmt(double v) {
    if (!std::isfinite(v)) throw numeric_error("refusing to serialize a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_int(long v) { return std::to_string(v); }

class CsvWriter {
public:
    void header(const std::string& line) { header_.push_back(line); }
    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void row(const std::vector<double>& values) {
        std::string line;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) line += ',';
            line += fmt(values[i]);
        }
        rows_.push_back(std::move(line));
    }
    void text_row(const std::string& line) { rows_.push_back(line); }

    std::size_t row_count() const { return rows_.size(); }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);  // binary keeps \n endings everywhere
        if (!out) throw io_error("cannot open output file '" + path + "'");
        for (const std::string& h : header_) out << "# " << h << "\n";
        std::string cols;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) cols += ',';
            cols += columns_[i];
        }
        out << cols << "\n";
        for (const std::string& r : rows_) out << r << "\n";
        if (!out) throw io_error("failed writing output file '" + path + "'");
    }

private:
    std::vector<std::string> header_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

void echo_config(CsvWriter& csv, const ScenarioConfig& cfg) {
    csv.header(std::string("scenario = ") + scenario_name(cfg.scenario));
    csv.header("hbar = " + fmt(cfg.constants.hbar));
    csv.header("mass = " + fmt(cfg.constants.mass));
    csv.header(std::string("direction = ") +
               (cfg.packet.direction == Direction::plus ? "+1" : "-1"));
    csv.header("detector_x = " + fmt(cfg.detector_x));
    for (const GaussianComponent& g : cfg.packet.components) {
        csv.header("component: weight = " + fmt(g.weight) + ", center = " + fmt(g.center) +
                   ", spread = " + fmt(g.spread) + ", origin = " + fmt(g.origin));
    }
    switch (cfg.scenario) {
        case ScenarioKind::semiclassical: {
            csv.header("tau = " + fmt(cfg.tau));
            std::string scales;
            for (std::size_t i = 0; i < cfg.hbar_scales.size(); ++i) {
                if (i) scales += ", ";
                scales += fmt(cfg.hbar_scales[i]);
            }
            csv.header("hbar_scales = " + scales);
            break;
        }
        case ScenarioKind::wigner_check: {
            std::string taus;
            for (std::size_t i = 0; i < cfg.tau_values.size(); ++i) {
                if (i) taus += ", ";
                taus += fmt(cfg.tau_values[i]);
            }
            csv.header("tau_values = " + taus);
            break;
        }
        case ScenarioKind::negative_flux:
            csv.header("margin = " + fmt(cfg.margin));
            [[fallthrough]];
        default:
            csv.header("tau_min = " + fmt(cfg.tau_min));
            csv.header("tau_max = " + fmt(cfg.tau_max));
            csv.header("tau_count = " + fmt_int(cfg.tau_count));
            break;
    }
    if (cfg.scenario == ScenarioKind::barrier) {
        if (cfg.barrier_model == BarrierModelKind::delta) {
            csv.header("barrier_model = delta");
            csv.header("barrier_strength = " + fmt(cfg.barrier_strength));
        } else {
            csv.header("barrier_model = rectangular");
            csv.header("barrier_height = " + fmt(cfg.barrier_height));
            csv.header("barrier_width = " + fmt(cfg.barrier_width));
        }
    }
    csv.header("p_tol = " + fmt(cfg.p_tol));
    csv.header("norm_tol = " + fmt(cfg.norm_tol));
    csv.header("edge_tol = " + fmt(cfg.edge_tol));
    csv.header("tail_tol = " + fmt(cfg.tail_tol));
}

double window_tau_max(const ScenarioConfig& cfg) {
    return std::max(std::abs(cfg.tau_min), std::abs(cfg.tau_max));
}

MomentumAmplitude build_checked(const ScenarioConfig& cfg, const MomentumGrid& grid) {
    MomentumAmplitude a = build_amplitude(cfg.packet, grid, cfg.constants);
    const double norm = discrete_norm(a);
    if (std::abs(norm - 1.0) > cfg.norm_tol) {
        throw numeric_error("packet norm " + fmt(norm) + " violates norm_tol " +
                            fmt(cfg.norm_tol));
    }
    return a;
}

TwoPacketParams two_packet_params(const ScenarioConfig& cfg) {
    const GaussianComponent& c1 = cfg.packet.components[0];
    const GaussianComponent& c2 = cfg.packet.components[1];
    const double norm = std::sqrt(c1.weight * c1.weight + c2.weight * c2.weight);
    TwoPacketParams params;
    params.alpha1 = c1.weight / norm;
    params.alpha2 = c2.weight / norm;
    params.p1 = c1.center;
    params.p2 = c2.center;
    params.delta_p = c1.spread;
    params.x0 = c1.origin;
    params.constants = cfg.constants;
    return params;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                       std::ostream& log) {
    namespace fs = std::filesystem;
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory '" + dir.string() + "'");
    const std::string path = (dir / cfg.output).string();

    CsvWriter csv;
    echo_config(csv, cfg);

    switch (cfg.scenario) {
        case ScenarioKind::density: {
            const MomentumGrid grid =
                choose_grid(cfg.packet, window_tau_max(cfg), cfg.detector_x, cfg.constants);
            const MomentumAmplitude a = build_checked(cfg, grid);
            const ArrivalDistribution d =
                arrival_distribution(a, cfg.tau_min, cfg.tau_max, cfg.tau_count, cfg.detector_x);
            csv.header("grid_n = " + fmt_int(grid.n));
            csv.header("window_integral = " + fmt(d.integral));
            csv.header("window_tail = " + fmt(d.tail));
            csv.columns({"tau", "re_amplitude", "im_amplitude", "density"});
            for (std::size_t i = 0; i < d.tau_nodes.size(); ++i) {
                csv.row({d.tau_nodes[i], d.amplitudes[i].real(), d.amplitudes[i].imag(),
                         d.densities[i]});
            }
            break;
        }
        case ScenarioKind::currents: {
            const MomentumGrid grid =
                choose_grid(cfg.packet, window_tau_max(cfg), cfg.detector_x, cfg.constants);
            const MomentumAmplitude a = build_checked(cfg, grid);
            const CurrentSeries s =
                current_series(a, cfg.tau_min, cfg.tau_max, cfg.tau_count, cfg.detector_x);
            csv.header("grid_n = " + fmt_int(grid.n));
            csv.columns({"tau", "j", "j_plus"});
            for (std::size_t i = 0; i < s.tau_nodes.size(); ++i) {
                csv.row({s.tau_nodes[i], s.j_values[i], s.jplus_values[i]});
            }
            break;
        }
        case ScenarioKind::means: {
            const MomentumGrid grid =
                choose_grid(cfg.packet, window_tau_max(cfg), cfg.detector_x, cfg.constants);
            const MomentumAmplitude a = build_checked(cfg, grid);
            const ArrivalDistribution d =
                arrival_distribution(a, cfg.tau_min, cfg.tau_max, cfg.tau_count, cfg.detector_x);
            const double spectral = mean_time_spectral(d, cfg.p_tol);
            const double current = mean_time_current(a, cfg.tau_min, cfg.tau_max, cfg.tau_count,
                                                     cfg.detector_x, cfg.p_tol, cfg.edge_tol);
            const double ab = mean_time_ab_operator(a, cfg.detector_x, nullptr, cfg.edge_tol);
            const double grt = mean_time_grt_operator(a, cfg.detector_x, nullptr, cfg.edge_tol);
            csv.header("grid_n = " + fmt_int(grid.n));
            csv.columns({"route", "value", "deviation_from_spectral"});
            auto emit = [&](const char* route, double v) {
                csv.text_row(std::string(route) + "," + fmt(v) + "," + fmt(v - spectral));
            };
            emit("spectral", spectral);
            emit("current", current);
            emit("aharonov_bohm", ab);
            emit("grot_rovelli_tate", grt);
            break;
        }
        case ScenarioKind::negative_flux: {
            const TwoPacketParams params = two_packet_params(cfg);
            const NegativeFluxDiagnostics diag = negative_flux_condition(params, cfg.margin);
            const MomentumGrid grid =
                choose_grid(cfg.packet, window_tau_max(cfg), cfg.detector_x, cfg.constants);
            const MomentumAmplitude a = build_checked(cfg, grid);

            csv.header("grid_n = " + fmt_int(grid.n));
            csv.header("ratio1 = " + fmt(diag.ratio1));
            csv.header("ratio2 = " + fmt(diag.ratio2));
            csv.header(std::string("condition_satisfied = ") +
                       (diag.satisfied ? "true" : "false"));
            csv.header("min_current_estimate = " + fmt(diag.min_current_estimate));
            csv.header("interference_period = " + fmt(interference_period(params)));

            const CurrentSeries s =
                current_series(a, cfg.tau_min, cfg.tau_max, cfg.tau_count, cfg.detector_x);
            csv.columns({"tau", "j_asym", "jplus_asym", "j_exact", "jplus_exact"});
            for (std::size_t i = 0; i < s.tau_nodes.size(); ++i) {
                const double tau = s.tau_nodes[i];
                csv.row({tau, asym_current(params, tau, cfg.detector_x),
                         asym_positive_current(params, tau, cfg.detector_x), s.j_values[i],
                         s.jplus_values[i]});
            }
            break;
        }
        case ScenarioKind::semiclassical: {
            PhysicalConstants sizing = cfg.constants;
            sizing.hbar *= cfg.hbar_scales.back();  // finest oscillation of the scan
            const MomentumGrid grid =
                choose_grid(cfg.packet, std::abs(cfg.tau), cfg.detector_x, sizing);
            const MomentumAmplitude a = build_checked(cfg, grid);
            const std::vector<SemiclassicalPoint> scan =
                semiclassical_scan(a, cfg.tau, cfg.detector_x, cfg.hbar_scales);
            csv.header("grid_n = " + fmt_int(grid.n));
            csv.columns({"scale", "exact_density", "asym_density", "abs_error"});
            for (const SemiclassicalPoint& row : scan) {
                if (!row.ok) {
                    csv.header("scale " + fmt(row.scale) + " skipped: " + row.note);
                    continue;
                }
                csv.row({row.scale, row.exact_density, row.asym_density, row.abs_error});
            }
            break;
        }
        case ScenarioKind::barrier: {
            const MomentumGrid grid =
                choose_grid(cfg.packet, window_tau_max(cfg), cfg.detector_x, cfg.constants);
            const MomentumAmplitude incoming = build_checked(cfg, grid);
            const TransmissionModel model =
                cfg.barrier_model == BarrierModelKind::delta
                    ? delta_barrier(cfg.barrier_strength, cfg.constants)
                    : rectangular_barrier(cfg.barrier_height, cfg.barrier_width, cfg.constants);
            const TransmitResult tr = transmit(incoming, model);

            double unitarity_dev = 0.0;
            for (double q : grid.nodes) {
                const double one =
                    std::norm(model.transmission(q)) + std::norm(model.reflection(q));
                unitarity_dev = std::max(unitarity_dev, std::abs(one - 1.0));
            }
            const ArrivalDistribution d = arrival_distribution(
                tr.state, cfg.tau_min, cfg.tau_max, cfg.tau_count, cfg.detector_x);

            csv.header("grid_n = " + fmt_int(grid.n));
            csv.header("transmitted_norm = " + fmt(tr.transmitted_norm));
            csv.header("max_unitarity_deviation = " + fmt(unitarity_dev));
            csv.header("window_integral = " + fmt(d.integral));
            csv.columns({"tau", "re_amplitude", "im_amplitude", "density"});
            for (std::size_t i = 0; i < d.tau_nodes.size(); ++i) {
                csv.row({d.tau_nodes[i], d.amplitudes[i].real(), d.amplitudes[i].imag(),
                         d.densities[i]});
            }
            break;
        }
        case ScenarioKind::wigner_check: {
            double tau_max = 0.0;
            for (double t : cfg.tau_values) tau_max = std::max(tau_max, std::abs(t));
            const MomentumGrid grid =
                choose_grid(cfg.packet, tau_max, cfg.detector_x, cfg.constants);
            const MomentumAmplitude a = build_checked(cfg, grid);
            csv.header("grid_n = " + fmt_int(grid.n));
            csv.columns({"tau", "current_direct", "current_wigner", "abs_diff"});
            for (double tau : cfg.tau_values) {
                const double direct = current_expectation(a, tau, cfg.detector_x);
                const double wigner = wigner_current_check(a, tau, cfg.detector_x);
                csv.row({tau, direct, wigner, std::abs(direct - wigner)});
            }
            break;
        }
    }

    csv.write(path);
    log << "wrote " << path << " (" << csv.row_count() << " rows)\n";
    return {path, csv.row_count()};
}

}  // namespace toa
