// io.hpp -- CSV and binary persistence for every on-disk format:
//   TMF / joint spectrum CSV:  header "tau_ns,re,im" or "omega_rad_per_ns,re,im"
//   matrix CSV:                first row = bin centers (ns), then N rows of N
//   density matrix:            <base>.re.csv + <base>.im.csv in matrix format
//   trace set:                 CSV (first row bin centers, one trace per row)
//                              or raw little-endian f64 with a 32-byte header
//                              (magic "TMQT", u32 version, u64 n_samples,
//                              u64 n_bins, 8 reserved bytes)
//   manifest / report:         flat key=value text
//   profile.csv:               tau_ns, amp_sq, amp_sq_clipped, phase_rad,
//                              phase_valid

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "tmt/autocorr.hpp"
#include "tmt/density_matrix.hpp"
#include "tmt/reconstruct.hpp"
#include "tmt/tmf.hpp"

namespace tmt::io {

namespace fs = std::filesystem;

void write_tmf_csv(const fs::path& path, const TemporalModeFunction& tmf);

// Grid is inferred from the tau column (must be uniform); samples are
// normalized through tabulated_tmf.
TemporalModeFunction read_tmf_csv(const fs::path& path);

JointSpectrum read_spectrum_csv(const fs::path& path);

void write_matrix_csv(const fs::path& path, const TimeGrid& grid, const Eigen::MatrixXd& m);
std::pair<TimeGrid, Eigen::MatrixXd> read_matrix_csv(const fs::path& path);

void write_density_csv(const fs::path& base, const TimeBinDensityMatrix& rho);
TimeBinDensityMatrix read_density_csv(const fs::path& base);

void write_traces_csv(const fs::path& path, const QuadratureTraceSet& traces);
void write_traces_bin(const fs::path& path, const QuadratureTraceSet& traces);
QuadratureTraceSet read_traces_bin(const fs::path& path, const TimeGrid& grid);

using Manifest = std::map<std::string, std::string>;
void write_manifest(const fs::path& path, const Manifest& manifest);
Manifest read_manifest(const fs::path& path);

void write_profile_csv(const fs::path& path, const TimeGrid& grid,
                       const ReconstructionResult& result);
void write_report(const fs::path& path, const ReconstructionResult& result);

// Shortest decimal form that round-trips a double.
std::string format_double(double v);

}  // namespace tmt::io
