#include "qw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "qw/errors.hpp"
#include "qw/evolution.hpp"
#include "qw/genfun.hpp"
#include "qw/limits.hpp"
#include "qw/quadrature.hpp"

namespace qw {

namespace {

constexpr double kBinQuadTol = 1e-10;
constexpr double kCdfQuadTol = 1e-12;

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string tuple_label(std::size_t i) { return "#" + std::to_string(i); }

}  // namespace

ParameterTuple example_tuple() { return {example_parameters(), make_initial_state(1.0, 0.0)}; }

MassCheck mass_check(const CoinParameters& params, const InitialState& init) {
    MassCheck out;
    out.C = loc_mass(params, init);
    out.ac_mass = ac_mass(params, init);
    return out;
}

double gf_series_tail_bound(complex z, long horizon) {
    const double r = std::abs(z);
    return 2.0 * std::pow(r, static_cast<double>(horizon + 1)) / (1.0 - r);
}

double gf_series_check(const CoinParameters& params, complex z, long horizon, long x_lo, long x_hi) {
    if (!(std::abs(z) <= 0.9)) throw DomainError("series check needs |z| <= 0.9");
    if (horizon < 20) throw DomainError("series check needs T >= 20");
    if (x_lo > x_hi) throw DomainError("empty site range");
    const WeightMatrixSeries series = weight_matrices(params, horizon);
    double worst = 0.0;
    for (long x = x_lo; x <= x_hi; ++x) {
        CoinMatrix partial = CoinMatrix::Zero();
        complex zt = 1.0;
        for (long t = 0; t <= horizon; ++t) {
            partial += zt * series.at(t, x);
            zt *= z;
        }
        const CoinMatrix diff = xi_x(z, x, params) - partial;
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return worst;
}

std::vector<double> residue_grid() {
    std::vector<double> grid;
    for (int j = -69; j <= 69; ++j) {
        if (j != 0) grid.push_back(j / 100.0);
    }
    return grid;
}

double residue_theorem_check(const CoinParameters& params, const InitialState& init,
                             const std::vector<double>& grid) {
    double worst = 0.0;
    for (const double x : grid) {
        if (x == 0.0 || std::abs(x) > 0.69 + 1e-12) throw DomainError("residue grid point outside 0 < |x| <= 0.69");
        worst = std::max(worst, std::abs(assemble_density(x, params, init) - limit_density(x, params, init)));
    }
    return worst;
}

bool ConvergenceReport::binned_mad_strictly_decreasing() const {
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (!(entries[i].binned_mad < entries[i - 1].binned_mad)) return false;
    }
    return !entries.empty();
}

namespace {

double binned_mad(const Distribution& dist, double bin_width, double exclusion,
                  const std::function<double(double)>& g) {
    double total = 0.0;
    long count = 0;
    for (const DensityBin& bin : binned_density(dist, bin_width)) {
        const double lo = bin.center - 0.5 * bin_width;
        const double hi = bin.center + 0.5 * bin_width;
        if (std::abs(bin.center) < exclusion) continue;
        if (hi <= -kSupportEdge || lo >= kSupportEdge) continue;
        const double average = integrate_density(g, lo, hi, kBinQuadTol).value / bin_width;
        total += std::abs(bin.density - average);
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

// Largest gap between the step function F_t and the limit CDF. Between two
// consecutive sites F_t is flat and F is monotone, so comparing at each
// site from both sides covers the whole line.
double cdf_sup(const Distribution& dist, double C, double exclusion, const std::function<double(double)>& g) {
    const std::vector<CdfPoint> points = empirical_cdf(dist);
    double G = 0.0;
    double prev_pos = -kSupportEdge;
    double prev_emp = 0.0;
    double worst = 0.0;
    for (const CdfPoint& p : points) {
        if (p.position > prev_pos) {
            G += integrate_density(g, prev_pos, p.position, kCdfQuadTol).value;
            prev_pos = p.position;
        }
        const double left_limit = G + (p.position > 0.0 ? C : 0.0);
        const double right_value = G + (p.position >= 0.0 ? C : 0.0);
        if (std::abs(p.position) >= exclusion) {
            worst = std::max(worst, std::abs(prev_emp - left_limit));
            worst = std::max(worst, std::abs(p.cumulative - right_value));
        }
        prev_emp = p.cumulative;
    }
    return worst;
}

}  // namespace

ConvergenceReport convergence_report(const CoinParameters& params, const InitialState& init,
                                     const std::vector<long>& ts, double bin_width, double exclusion) {
    if (ts.empty()) throw DomainError("no times given");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < 100) throw DomainError("convergence times must be >= 100");
        if (i > 0 && ts[i] <= ts[i - 1]) throw DomainError("convergence times must be strictly ascending");
    }
    ConvergenceReport report;
    report.bin_width = bin_width;
    report.exclusion = exclusion;

    const auto g = [&](double x) { return limit_density(x, params, init); };
    const double C = loc_mass(params, init);
    const double mean_limit = ac_moment(params, init, 1);
    const double second_limit = ac_moment(params, init, 2);

    Evolver evolver(params, init.spinor(), ts.back());
    for (const long t : ts) {
        evolver.advance(t - evolver.t());
        const Distribution dist = evolver.distribution();
        ConvergenceEntry e;
        e.t = t;
        e.binned_mad = binned_mad(dist, bin_width, exclusion, g);
        e.cdf_sup = cdf_sup(dist, C, exclusion, g);
        e.mean_empirical = empirical_moment(dist, 1);
        e.mean_limit = mean_limit;
        e.second_empirical = empirical_moment(dist, 2);
        e.second_limit = second_limit;
        report.entries.push_back(e);
    }
    return report;
}

std::vector<CheckRecord> run_mass_suite(const std::vector<ParameterTuple>& tuples) {
    std::vector<CheckRecord> out;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        CheckRecord r{"mass " + tuple_label(i), false, 0.0, kMassTolerance, ""};
        try {
            const MassCheck m = mass_check(tuples[i].params, tuples[i].init);
            r.value = std::abs(m.sum() - 1.0);
            r.passed = r.value <= kMassTolerance;
            r.detail = "C=" + format("%.12g", m.C) + " ac=" + format("%.12g", m.ac_mass);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        out.push_back(r);
    }
    return out;
}

std::vector<CheckRecord> run_gf_suite(const std::vector<ParameterTuple>& tuples) {
    constexpr long kHorizon = 80;
    constexpr double kRadius = 0.5;
    const std::vector<double> angles = {0.3, 1.2, 2.5, -0.9, -2.2};
    std::vector<CheckRecord> out;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        for (const double phase : angles) {
            const complex z = std::polar(kRadius, phase);
            const double tol = gf_series_tail_bound(z, kHorizon) + kSeriesRounding;
            CheckRecord r{"gf " + tuple_label(i) + " arg z=" + format("%g", phase), false, 0.0, tol, ""};
            try {
                r.value = gf_series_check(tuples[i].params, z, kHorizon, -4, 4);
                r.passed = r.value <= tol;
            } catch (const Error& e) {
                r.detail = e.what();
            }
            out.push_back(r);
        }
    }
    return out;
}

std::vector<CheckRecord> run_residue_suite(const std::vector<ParameterTuple>& tuples) {
    const std::vector<double> grid = residue_grid();
    std::vector<CheckRecord> out;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        CheckRecord r{"residue " + tuple_label(i), false, 0.0, kResidueTolerance, ""};
        try {
            r.value = residue_theorem_check(tuples[i].params, tuples[i].init, grid);
            r.passed = r.value <= kResidueTolerance;
        } catch (const Error& e) {
            r.detail = e.what();
        }
        out.push_back(r);
    }
    return out;
}

std::vector<CheckRecord> run_converge_suite(const ParameterTuple& tuple, const std::vector<long>& ts) {
    const ConvergenceReport report = convergence_report(tuple.params, tuple.init, ts);
    std::vector<CheckRecord> out;
    for (const ConvergenceEntry& e : report.entries) {
        out.push_back({"binned mad t=" + std::to_string(e.t), true, e.binned_mad, 0.0,
                       "cdf_sup=" + format("%.6g", e.cdf_sup)});
    }
    out.push_back({"binned mad strictly decreasing", report.binned_mad_strictly_decreasing(), 0.0, 0.0, ""});
    const ConvergenceEntry& last = report.entries.back();
    out.push_back({"binned mad at t=" + std::to_string(last.t), last.binned_mad <= kBinnedMadThreshold,
                   last.binned_mad, kBinnedMadThreshold, ""});
    const double mean_gap = std::abs(last.mean_empirical - last.mean_limit);
    out.push_back({"mean at t=" + std::to_string(last.t), mean_gap <= kMeanTolerance, mean_gap, kMeanTolerance,
                   "empirical=" + format("%.9g", last.mean_empirical) + " limit=" + format("%.9g", last.mean_limit)});
    return out;
}

}  // namespace qw
