// config.hpp -- flat key=value run configuration shared by the CLI
// subcommands. Unknown keys are rejected before any computation. MHz values
// are converted to rad/ns here; the core never sees MHz.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmt/tmf.hpp"

namespace tmt {

struct RunConfig {
    // TMF model
    std::string tmf_model = "rabi";      // rabi | tabulated
    double omega_c_mhz = 31.5;           // nu_c; Omega_c = 2 pi nu_c (rad/ns after 1e-3)
    double gamma13_per_ns = 0.003;
    double gamma12_per_ns = 0.003;
    std::string tmf_path;                // CSV for tabulated

    // Grid
    double t_start_ns = 0.0;
    double dt_ns = 10.0;
    int n_bins = 64;

    // Measurement campaign
    std::vector<double> detunings_mhz = {-10, -5, 0, 3, 8, 13, 18, 23};
    std::string angular_convention = "2pi";  // 2pi | direct
    double eta = 1.0;
    std::optional<std::int64_t> n_samples;   // nullopt == "exact"
    std::uint64_t seed = 12345;

    // Reconstruction / outputs
    std::string out_dir = "out";
    bool psd_projection = false;
    double phase_threshold = 0.05;
    std::optional<int> m;                    // nullopt == "auto"
    std::string write_traces = "none";       // none | csv | bin

    // Parse, starting from defaults; throws std::invalid_argument on unknown
    // keys or malformed values.
    static RunConfig from_map(const std::map<std::string, std::string>& kv);
    static RunConfig from_file(const std::string& path,
                               const std::map<std::string, std::string>& overrides = {});

    std::vector<double> detunings_rad_per_ns() const;
    TimeGrid grid() const;
    TemporalModeFunction build_tmf() const;
    std::map<std::string, std::string> to_map() const;
};

}  // namespace tmt
