#pragma once

#include <filesystem>
#include <iosfwd>

#include "rft/config.hpp"

namespace rft {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kExitOk = 0, kExitFatal = 1, kExitPartial = 2 };

/// Quasiballistic evaluation of one T point; errors are caught into the row.
SpectrumRow qb_point(double T, const DirectionSet& set, double L_over_ell, double eta,
                     double damping);

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumTable& table);
void write_qfield_csv(const std::filesystem::path& path, const Field1D& field);

/// Executes the configured pipeline, writing spectrum.csv or qfield.csv plus summary.json into
/// cfg.output_dir. Progress goes to `log`.
int run(const RunConfig& cfg, std::ostream& log);

/// Runs the invariant suite for the configured geometry and prints one line per check.
int run_invariants(const RunConfig& cfg, std::ostream& out);

}  // namespace rft
