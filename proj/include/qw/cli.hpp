#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qw/model.hpp"
#include "qw/verify.hpp"

namespace qw::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kResource = 3 };

/// Usage or configuration problem; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct RunConfig {
    std::string sigma_plus = "3pi/2";
    std::string sigma_minus = "pi";
    double alpha_re = 1.0, alpha_im = 0.0;
    double beta_re = 0.0, beta_im = 0.0;
    long t = 100;
    long grid_points = 1001;
    double bin_width = 0.02;
    long xmax = 10;
    Format format = Format::csv;
};

/// Radians from "pi", "-pi/4", "3pi/2", "0.5pi", "2*pi/3" or a plain number.
double parse_angle(const std::string& text);

CoinParameters coin_parameters(const RunConfig& config);
// Throws ConfigError unless |alpha|^2 + |beta|^2 = 1 within 1e-9.
InitialState initial_state(const RunConfig& config);

// QW_MAX_T when set, else the library default. Throws ConfigError on junk.
long max_time_from_env();

// "%.17g"
std::string format_double(double v);

void write_simulate(const RunConfig& config, const std::string& path, long max_time);
void write_density(const RunConfig& config, const std::string& path);
void write_timeavg(const RunConfig& config, const std::string& path);
// Sidecar path for a density output: same stem, .json extension (or
// ".sidecar.json" when the output itself is JSON).
std::string sidecar_path(const std::string& path, Format format);

struct SweepSummaryRow {
    std::string out;
    double C = 0.0;
    double ac_mass = 0.0;
    bool mass_ok = false;
};

/// Runs every entry of a JSON list of run configs below out_dir and writes
/// out_dir/summary.csv. On any failure the outputs created so far are
/// removed and the error rethrown.
std::vector<SweepSummaryRow> run_sweep(const std::string& params_file, const std::string& out_dir, long max_time);

/// Loads tuples written as a JSON list of objects with sigma_plus,
/// sigma_minus, alpha_re, alpha_im, beta_re, beta_im.
std::vector<ParameterTuple> load_tuples(const std::string& path);

/// Full command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qw::cli
