#include "tmt/config.hpp"

#include <charconv>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tmt/io.hpp"

namespace tmt {

namespace {

double to_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("config: bad value for " + key + ": '" + s + "'");
    }
    return v;
}

std::int64_t to_int(const std::string& key, const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& s) {
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    throw std::invalid_argument("config: bad flag for " + key + ": '" + s + "'");
}

std::vector<double> to_double_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(to_double(key, field));
    if (out.empty()) {
        throw std::invalid_argument("config: empty list for " + key);
    }
    return out;
}

}  // namespace

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& kv) {
    RunConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "tmf.model") {
            if (value != "rabi" && value != "tabulated") {
                throw std::invalid_argument("config: tmf.model must be rabi or tabulated");
            }
            c.tmf_model = value;
        } else if (key == "tmf.omega_c_mhz") {
            c.omega_c_mhz = to_double(key, value);
        } else if (key == "tmf.gamma13_per_ns") {
            c.gamma13_per_ns = to_double(key, value);
        } else if (key == "tmf.gamma12_per_ns") {
            c.gamma12_per_ns = to_double(key, value);
        } else if (key == "tmf.path") {
            c.tmf_path = value;
        } else if (key == "grid.t_start_ns") {
            c.t_start_ns = to_double(key, value);
        } else if (key == "grid.dt_ns") {
            c.dt_ns = to_double(key, value);
        } else if (key == "grid.n_bins") {
            c.n_bins = static_cast<int>(to_int(key, value));
        } else if (key == "detunings_mhz") {
            c.detunings_mhz = to_double_list(key, value);
        } else if (key == "angular_convention") {
            if (value != "2pi" && value != "direct") {
                throw std::invalid_argument("config: angular_convention must be 2pi or direct");
            }
            c.angular_convention = value;
        } else if (key == "eta") {
            c.eta = to_double(key, value);
        } else if (key == "n_samples") {
            c.n_samples = value == "exact"
                              ? std::nullopt
                              : std::optional<std::int64_t>(to_int(key, value));
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(to_int(key, value));
        } else if (key == "out_dir") {
            c.out_dir = value;
        } else if (key == "psd_projection") {
            c.psd_projection = to_bool(key, value);
        } else if (key == "phase_threshold") {
            c.phase_threshold = to_double(key, value);
        } else if (key == "m") {
            c.m = value == "auto" ? std::nullopt
                                  : std::optional<int>(static_cast<int>(to_int(key, value)));
        } else if (key == "write_traces") {
            if (value != "none" && value != "csv" && value != "bin") {
                throw std::invalid_argument("config: write_traces must be none, csv or bin");
            }
            c.write_traces = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (c.tmf_model == "tabulated" && c.tmf_path.empty()) {
        throw std::invalid_argument("config: tmf.model=tabulated requires tmf.path");
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path,
                               const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> kv = io::read_manifest(path);
    for (const auto& [k, v] : overrides) kv[k] = v;
    return from_map(kv);
}

std::vector<double> RunConfig::detunings_rad_per_ns() const {
    // 1 MHz = 1e-3 (1/ns); the 2pi convention reads the listed numbers as
    // ordinary frequencies, direct as angular frequencies.
    const double factor =
        (angular_convention == "2pi" ? 2.0 * std::numbers::pi : 1.0) * 1e-3;
    std::vector<double> out;
    out.reserve(detunings_mhz.size());
    for (double v : detunings_mhz) out.push_back(v * factor);
    return out;
}

TimeGrid RunConfig::grid() const { return make_time_grid(t_start_ns, dt_ns, n_bins); }

TemporalModeFunction RunConfig::build_tmf() const {
    if (tmf_model == "tabulated") {
        TemporalModeFunction tmf = io::read_tmf_csv(tmf_path);
        require_same_grid(tmf.grid, grid(), "config: tabulated TMF");
        return tmf;
    }
    const double omega_c = 2.0 * std::numbers::pi * omega_c_mhz * 1e-3;  // rad/ns
    return rabi_tmf(omega_c, gamma13_per_ns, gamma12_per_ns, grid());
}

std::map<std::string, std::string> RunConfig::to_map() const {
    std::map<std::string, std::string> kv;
    kv["tmf.model"] = tmf_model;
    if (tmf_model == "rabi") {
        kv["tmf.omega_c_mhz"] = io::format_double(omega_c_mhz);
        kv["tmf.gamma13_per_ns"] = io::format_double(gamma13_per_ns);
        kv["tmf.gamma12_per_ns"] = io::format_double(gamma12_per_ns);
    } else {
        kv["tmf.path"] = tmf_path;
    }
    kv["grid.t_start_ns"] = io::format_double(t_start_ns);
    kv["grid.dt_ns"] = io::format_double(dt_ns);
    kv["grid.n_bins"] = std::to_string(n_bins);
    std::string dets;
    for (std::size_t i = 0; i < detunings_mhz.size(); ++i) {
        dets += (i ? "," : "") + io::format_double(detunings_mhz[i]);
    }
    kv["detunings_mhz"] = dets;
    kv["angular_convention"] = angular_convention;
    kv["eta"] = io::format_double(eta);
    kv["n_samples"] = n_samples ? std::to_string(*n_samples) : "exact";
    kv["seed"] = std::to_string(seed);
    kv["out_dir"] = out_dir;
    kv["psd_projection"] = psd_projection ? "on" : "off";
    kv["phase_threshold"] = io::format_double(phase_threshold);
    kv["m"] = m ? std::to_string(*m) : "auto";
    kv["write_traces"] = write_traces;
    return kv;
}

}  // namespace tmt
