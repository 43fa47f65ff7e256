#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "qw/model.hpp"

namespace qw {

inline constexpr long kDefaultMaxTime = 1'000'000;
inline constexpr long kDefaultMaxSeriesHorizon = 1024;

/// Amplitudes Psi_t(x) on the sites -t..t. Sites with x + t odd are exact
/// zeros.
class WalkState {
public:
    WalkState(long t, std::vector<Spinor> amplitudes);

    // Psi_0 = (alpha, beta) at the origin.
    static WalkState initial(const InitialState& init);

    long t() const { return t_; }
    long min_x() const { return -t_; }
    long max_x() const { return t_; }
    // Zero for |x| > t.
    Spinor amplitude(long x) const;
    const std::vector<Spinor>& amplitudes() const { return amplitudes_; }
    double total_probability() const;

private:
    long t_;
    std::vector<Spinor> amplitudes_;
};

class Distribution {
public:
    Distribution(long t, std::vector<double> probs);

    long t() const { return t_; }
    long min_x() const { return -t_; }
    long max_x() const { return t_; }
    double prob(long x) const;
    const std::vector<double>& probs() const { return probs_; }
    double total() const;

private:
    long t_;
    std::vector<double> probs_;
};

// x / t, with the convention 0 at t = 0.
double scaled_position(long x, long t);

WalkState step(const WalkState& state, const CoinParameters& params);

// Throws ResourceError when t > max_time.
WalkState evolve(const CoinParameters& params, const InitialState& init, long t,
                 long max_time = kDefaultMaxTime);

// In-place propagation used by long runs and parameter sweeps. Owns two
// site buffers and advances them without reallocating.
class Evolver {
public:
    Evolver(const CoinParameters& params, const Spinor& psi0, long capacity);
    Evolver(const CoinParameters& params, const WalkState& start, long capacity);

    long t() const { return t_; }
    void advance(long steps);
    WalkState state() const;
    Distribution distribution() const;

private:
    struct Kernel;
    void step_once();

    std::shared_ptr<const Kernel> kernel_;
    long capacity_;
    long t_ = 0;
    std::vector<Spinor> cur_;
    std::vector<Spinor> next_;
};

Distribution distribution(const WalkState& state);

struct DensityBin {
    double center;
    double density;
};

/// Histogram of X_t / t over [-1, 1] in left-closed bins of the given width
/// whose centers lie on the grid j * width. Mass per bin divided by width.
/// Throws BinError when width is outside (0, 1) or narrower than the
/// occupied-site spacing 2 / t.
std::vector<DensityBin> binned_density(const Distribution& dist, double bin_width);

// Index of the bin containing v for the grid used by binned_density.
long bin_index(double v, double bin_width);
// Largest |index| of the bins covering [-1, 1].
long bin_count_half(double bin_width);

struct CdfPoint {
    double position;    // x / t
    double cumulative;  // P(X_t / t <= position)
};

std::vector<CdfPoint> empirical_cdf(const Distribution& dist);

double empirical_moment(const Distribution& dist, int m);

/// Xi_t(x) for every t <= horizon; column j is Psi_t(x) started from e_j.
class WeightMatrixSeries {
public:
    long horizon() const { return horizon_; }
    // Zero matrix outside -t..t.
    CoinMatrix at(long t, long x) const;

private:
    friend WeightMatrixSeries weight_matrices(const CoinParameters&, long, long);
    long horizon_ = 0;
    std::vector<std::vector<CoinMatrix>> layers_;
};

WeightMatrixSeries weight_matrices(const CoinParameters& params, long horizon,
                                   long max_horizon = kDefaultMaxSeriesHorizon);

}  // namespace qw
