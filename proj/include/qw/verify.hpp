#pragma once

#include <string>
#include <vector>

#include "qw/model.hpp"

namespace qw {

/// One (coins, initial state) pair of a property sweep.
struct ParameterTuple {
    CoinParameters params;
    InitialState init;
};

// sigma_+ = 3pi/2, sigma_- = pi, phi_0 = (1, 0).
ParameterTuple example_tuple();

struct MassCheck {
    double C = 0.0;
    double ac_mass = 0.0;
    double sum() const { return C + ac_mass; }
};

/// Localization mass plus the mass of the absolutely continuous part;
/// should be 1 within 1e-6.
MassCheck mass_check(const CoinParameters& params, const InitialState& init);

// Tail bound 2|z|^{T+1} / (1 - |z|) from ||Xi_t(x)||_max <= 1.
double gf_series_tail_bound(complex z, long horizon);

/// Max over x in [x_lo, x_hi] of ||xi_x(z) - sum_{t<=T} Xi_t(x) z^t||_max.
/// Requires |z| <= 0.9 and T >= 20.
double gf_series_check(const CoinParameters& params, complex z, long horizon, long x_lo, long x_hi);

/// The grid +-0.01, +-0.02, ..., +-0.69.
std::vector<double> residue_grid();

/// Max over the grid of |assemble_density - limit_density|. Grid points
/// must lie in (-0.69, 0.69) without the origin; the outer ends are
/// accepted at 0.69 exactly.
double residue_theorem_check(const CoinParameters& params, const InitialState& init,
                             const std::vector<double>& grid);

struct ConvergenceEntry {
    long t = 0;
    // Mean |binned density - bin average of the limit density| over bins
    // with |center| >= exclusion that meet the support.
    double binned_mad = 0.0;
    // sup |F_t - F| over site positions with |x/t| >= exclusion, F the
    // mixed limit CDF with its jump C at 0.
    double cdf_sup = 0.0;
    double mean_empirical = 0.0;
    double mean_limit = 0.0;
    double second_empirical = 0.0;
    double second_limit = 0.0;
};

struct ConvergenceReport {
    double bin_width = 0.02;
    double exclusion = 0.05;
    std::vector<ConvergenceEntry> entries;  // ascending t

    bool binned_mad_strictly_decreasing() const;
};

/// Evolves once up to the largest time and records the statistics at every
/// requested t. ts must be ascending with each entry >= 100.
ConvergenceReport convergence_report(const CoinParameters& params, const InitialState& init,
                                     const std::vector<long>& ts, double bin_width = 0.02,
                                     double exclusion = 0.05);

/// Outcome of one named check, as emitted in reports.
struct CheckRecord {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

inline constexpr double kMassTolerance = 1e-6;
inline constexpr double kResidueTolerance = 1e-10;
// Allowance for floating rounding on top of the analytic series tail.
inline constexpr double kSeriesRounding = 1e-12;
inline constexpr double kBinnedMadThreshold = 0.05;
inline constexpr double kMeanTolerance = 0.01;

std::vector<CheckRecord> run_mass_suite(const std::vector<ParameterTuple>& tuples);
std::vector<CheckRecord> run_gf_suite(const std::vector<ParameterTuple>& tuples);
std::vector<CheckRecord> run_residue_suite(const std::vector<ParameterTuple>& tuples);
std::vector<CheckRecord> run_converge_suite(const ParameterTuple& tuple, const std::vector<long>& ts);

}  // namespace qw
