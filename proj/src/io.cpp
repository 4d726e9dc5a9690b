#include "tmt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace tmt::io {

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode);
    if (!f) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return f;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(path, mode);
    if (!f) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    return f;
}

double parse_double(const std::string& s, const fs::path& path) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw std::runtime_error("bad numeric field '" + s + "' in " + path.string());
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

std::vector<double> parse_row(const std::string& line, const fs::path& path) {
    std::vector<double> out;
    for (const auto& field : split_csv_line(line)) out.push_back(parse_double(field, path));
    return out;
}

// Three-column complex-sample reader shared by TMF and spectrum files.
std::pair<std::vector<double>, std::vector<std::complex<double>>> read_complex_samples(
    const fs::path& path, const std::string& expected_header) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || line != expected_header) {
        throw std::runtime_error(path.string() + ": expected header '" + expected_header + "'");
    }
    std::vector<double> axis;
    std::vector<std::complex<double>> values;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw std::runtime_error(path.string() + ": expected 3 columns per row");
        }
        axis.push_back(parse_double(fields[0], path));
        values.emplace_back(parse_double(fields[1], path), parse_double(fields[2], path));
    }
    if (axis.size() < 2) {
        throw std::runtime_error(path.string() + ": need at least 2 samples");
    }
    return {std::move(axis), std::move(values)};
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const int len = snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

void write_tmf_csv(const fs::path& path, const TemporalModeFunction& tmf) {
    std::ofstream f = open_out(path);
    f << "tau_ns,re,im\n";
    for (int i = 0; i < tmf.grid.n_bins; ++i) {
        f << format_double(tmf.grid.bin_center(i)) << ',' << format_double(tmf.amplitudes(i).real())
          << ',' << format_double(tmf.amplitudes(i).imag()) << '\n';
    }
}

TemporalModeFunction read_tmf_csv(const fs::path& path) {
    auto [tau, values] = read_complex_samples(path, "tau_ns,re,im");
    const double dt = tau[1] - tau[0];
    for (std::size_t i = 1; i < tau.size(); ++i) {
        if (std::abs((tau[i] - tau[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
            throw std::runtime_error(path.string() + ": tau axis is not uniform");
        }
    }
    const TimeGrid grid = make_time_grid(tau[0], dt, static_cast<int>(tau.size()));
    return tabulated_tmf(grid, values);
}

JointSpectrum read_spectrum_csv(const fs::path& path) {
    auto [omega, values] = read_complex_samples(path, "omega_rad_per_ns,re,im");
    JointSpectrum spec;
    spec.detunings = Eigen::Map<const Eigen::VectorXd>(omega.data(), omega.size());
    spec.values = Eigen::Map<const Eigen::VectorXcd>(values.data(), values.size());
    return spec;
}

void write_matrix_csv(const fs::path& path, const TimeGrid& grid, const Eigen::MatrixXd& m) {
    if (m.rows() != grid.n_bins || m.cols() != grid.n_bins) {
        throw std::invalid_argument("write_matrix_csv: matrix does not match grid");
    }
    std::ofstream f = open_out(path);
    for (int i = 0; i < grid.n_bins; ++i) {
        f << (i ? "," : "") << format_double(grid.bin_center(i));
    }
    f << '\n';
    for (int i = 0; i < grid.n_bins; ++i) {
        for (int j = 0; j < grid.n_bins; ++j) {
            f << (j ? "," : "") << format_double(m(i, j));
        }
        f << '\n';
    }
}

std::pair<TimeGrid, Eigen::MatrixXd> read_matrix_csv(const fs::path& path) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) {
        throw std::runtime_error(path.string() + ": empty file");
    }
    const std::vector<double> centers = parse_row(line, path);
    const int n = static_cast<int>(centers.size());
    if (n < 2) {
        throw std::runtime_error(path.string() + ": need at least 2 bins");
    }
    const double dt = centers[1] - centers[0];
    const TimeGrid grid = make_time_grid(centers[0], dt, n);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (!std::getline(f, line)) {
            throw std::runtime_error(path.string() + ": truncated matrix");
        }
        const std::vector<double> row = parse_row(line, path);
        if (static_cast<int>(row.size()) != n) {
            throw std::runtime_error(path.string() + ": ragged matrix row");
        }
        for (int j = 0; j < n; ++j) m(i, j) = row[j];
    }
    return {grid, std::move(m)};
}

void write_density_csv(const fs::path& base, const TimeBinDensityMatrix& rho) {
    write_matrix_csv(fs::path(base.string() + ".re.csv"), rho.grid, rho.elements.real());
    write_matrix_csv(fs::path(base.string() + ".im.csv"), rho.grid, rho.elements.imag());
}

TimeBinDensityMatrix read_density_csv(const fs::path& base) {
    auto [grid_re, re] = read_matrix_csv(fs::path(base.string() + ".re.csv"));
    auto [grid_im, im] = read_matrix_csv(fs::path(base.string() + ".im.csv"));
    require_same_grid(grid_re, grid_im, "read_density_csv");
    TimeBinDensityMatrix rho{grid_re, Eigen::MatrixXcd(re.rows(), re.cols())};
    rho.elements.real() = re;
    rho.elements.imag() = im;
    return rho;
}

void write_traces_csv(const fs::path& path, const QuadratureTraceSet& traces) {
    std::ofstream f = open_out(path);
    for (int i = 0; i < traces.grid.n_bins; ++i) {
        f << (i ? "," : "") << format_double(traces.grid.bin_center(i));
    }
    f << '\n';
    for (Eigen::Index s = 0; s < traces.traces.rows(); ++s) {
        for (Eigen::Index i = 0; i < traces.traces.cols(); ++i) {
            f << (i ? "," : "") << format_double(traces.traces(s, i));
        }
        f << '\n';
    }
}

namespace {
constexpr char kTraceMagic[4] = {'T', 'M', 'Q', 'T'};
constexpr std::uint32_t kTraceVersion = 1;
}  // namespace

void write_traces_bin(const fs::path& path, const QuadratureTraceSet& traces) {
    std::ofstream f = open_out(path, std::ios::binary);
    char header[32] = {};
    std::memcpy(header, kTraceMagic, 4);
    std::memcpy(header + 4, &kTraceVersion, 4);
    const std::uint64_t n_samples = static_cast<std::uint64_t>(traces.traces.rows());
    const std::uint64_t n_bins = static_cast<std::uint64_t>(traces.traces.cols());
    std::memcpy(header + 8, &n_samples, 8);
    std::memcpy(header + 16, &n_bins, 8);
    f.write(header, sizeof header);
    // Row-major f64, one trace per row.
    for (Eigen::Index s = 0; s < traces.traces.rows(); ++s) {
        for (Eigen::Index i = 0; i < traces.traces.cols(); ++i) {
            const double v = traces.traces(s, i);
            f.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    }
}

QuadratureTraceSet read_traces_bin(const fs::path& path, const TimeGrid& grid) {
    std::ifstream f = open_in(path, std::ios::binary);
    char header[32] = {};
    f.read(header, sizeof header);
    if (!f || std::memcmp(header, kTraceMagic, 4) != 0) {
        throw std::runtime_error(path.string() + ": not a TMQT trace file");
    }
    std::uint32_t version = 0;
    std::uint64_t n_samples = 0, n_bins = 0;
    std::memcpy(&version, header + 4, 4);
    std::memcpy(&n_samples, header + 8, 8);
    std::memcpy(&n_bins, header + 16, 8);
    if (version != kTraceVersion) {
        throw std::runtime_error(path.string() + ": unsupported trace file version");
    }
    if (static_cast<int>(n_bins) != grid.n_bins) {
        throw GridMismatch(path.string() + ": trace file bins do not match grid");
    }
    QuadratureTraceSet out{grid, 0.0,
                           Eigen::MatrixXd(static_cast<Eigen::Index>(n_samples),
                                           static_cast<Eigen::Index>(n_bins)),
                           0, 1.0};
    for (Eigen::Index s = 0; s < out.traces.rows(); ++s) {
        for (Eigen::Index i = 0; i < out.traces.cols(); ++i) {
            double v = 0.0;
            f.read(reinterpret_cast<char*>(&v), sizeof v);
            out.traces(s, i) = v;
        }
    }
    if (!f) {
        throw std::runtime_error(path.string() + ": truncated trace file");
    }
    return out;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
    std::ofstream f = open_out(path);
    for (const auto& [key, value] : manifest) {
        f << key << '=' << value << '\n';
    }
}

Manifest read_manifest(const fs::path& path) {
    std::ifstream f = open_in(path);
    Manifest out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path.string() + ": malformed manifest line '" + line + "'");
        }
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

void write_profile_csv(const fs::path& path, const TimeGrid& grid,
                       const ReconstructionResult& result) {
    std::ofstream f = open_out(path);
    f << "tau_ns,amp_sq,amp_sq_clipped,phase_rad,phase_valid\n";
    for (int i = 0; i < grid.n_bins; ++i) {
        f << format_double(grid.bin_center(i)) << ',' << format_double(result.amplitude.raw(i))
          << ',' << format_double(result.amplitude.clipped(i)) << ','
          << format_double(result.phase.theta(i)) << ',' << (result.phase.valid[i] ? 1 : 0)
          << '\n';
    }
}

void write_report(const fs::path& path, const ReconstructionResult& result) {
    std::ofstream f = open_out(path);
    f << "purity=" << format_double(result.purity) << '\n';
    f << "raw_purity=" << format_double(result.raw_purity) << '\n';
    f << "m_row=" << result.m_row << '\n';
    f << "residual=" << format_double(result.residual) << '\n';
    f << "weighted=" << (result.diagnostics.weighted ? 1 : 0) << '\n';
    f << "small_trace=" << (result.diagnostics.small_trace ? 1 : 0) << '\n';
    f << "heavily_clipped=" << (result.diagnostics.heavily_clipped ? 1 : 0) << '\n';
    f << "psd_min_eigenvalue=" << format_double(result.diagnostics.psd_min_eigenvalue) << '\n';
    f << "unidentifiable_im_count=" << result.diagnostics.unidentifiable_im.size() << '\n';
}

}  // namespace tmt::io
