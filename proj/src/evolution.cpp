#include "qw/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "qw/errors.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace qw {

namespace {

// A complex coefficient carried as an unevaluated sum hi + lo of doubles.
// Rounding 1/sqrt(2) and e^{i sigma} to double biases |U_x| away from 1 by
// ~1e-16 per step, which accumulates linearly over 10^4 steps; the lo part
// keeps that bias below 1e-19.
struct SplitCoefficient {
    double hr = 0.0, hi = 0.0;
    double lr = 0.0, li = 0.0;

    static SplitCoefficient from(long double re, long double im) {
        SplitCoefficient c;
        c.hr = static_cast<double>(re);
        c.hi = static_cast<double>(im);
        c.lr = static_cast<double>(re - static_cast<long double>(c.hr));
        c.li = static_cast<double>(im - static_cast<long double>(c.hi));
        return c;
    }

    complex times(const complex& v) const {
        const double vr = v.real(), vi = v.imag();
        const double re = (hr * vr - hi * vi) + (lr * vr - li * vi);
        const double im = (hr * vi + hi * vr) + (lr * vi + li * vr);
        return {re, im};
    }
};

struct RegionCoefficients {
    SplitCoefficient p0, p1;  // top row, feeds the left move
    SplitCoefficient q0, q1;  // bottom row, feeds the right move
};

RegionCoefficients off_origin(double sigma) {
    const long double s = 1.0L / std::sqrt(2.0L);
    const long double c = std::cos(static_cast<long double>(sigma));
    const long double n = std::sin(static_cast<long double>(sigma));
    RegionCoefficients r;
    r.p0 = SplitCoefficient::from(s, 0.0L);
    r.p1 = SplitCoefficient::from(s * c, s * n);
    r.q0 = SplitCoefficient::from(s * c, -s * n);
    r.q1 = SplitCoefficient::from(-s, 0.0L);
    return r;
}

// Amplitudes past the ballistic front underflow; subnormals are flushed to
// zero while stepping (FTZ and DAZ).
class FlushSubnormals {
public:
#if defined(__SSE2__)
    FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
    ~FlushSubnormals() { _mm_setcsr(saved_); }

private:
    unsigned int saved_;
#endif
};

RegionCoefficients origin() {
    RegionCoefficients r;
    r.p0 = SplitCoefficient::from(1.0L, 0.0L);
    r.q1 = SplitCoefficient::from(-1.0L, 0.0L);
    return r;
}

}  // namespace

struct Evolver::Kernel {
    RegionCoefficients neg, zero, pos;

    explicit Kernel(const CoinParameters& p)
        : neg(off_origin(p.sigma_minus())), zero(origin()), pos(off_origin(p.sigma_plus())) {}

    const RegionCoefficients& at(long x) const { return x > 0 ? pos : (x < 0 ? neg : zero); }
};

WalkState::WalkState(long t, std::vector<Spinor> amplitudes)
    : t_(t), amplitudes_(std::move(amplitudes)) {
    if (t_ < 0 || amplitudes_.size() != static_cast<std::size_t>(2 * t_ + 1)) {
        throw DomainError("walk state must hold 2t+1 sites");
    }
}

WalkState WalkState::initial(const InitialState& init) { return WalkState(0, {init.spinor()}); }

Spinor WalkState::amplitude(long x) const {
    if (x < -t_ || x > t_) return Spinor::Zero();
    return amplitudes_[static_cast<std::size_t>(x + t_)];
}

double WalkState::total_probability() const {
    double total = 0.0;
    for (const auto& s : amplitudes_) total += s.squaredNorm();
    return total;
}

Distribution::Distribution(long t, std::vector<double> probs) : t_(t), probs_(std::move(probs)) {
    if (t_ < 0 || probs_.size() != static_cast<std::size_t>(2 * t_ + 1)) {
        throw DomainError("distribution must hold 2t+1 sites");
    }
}

double Distribution::prob(long x) const {
    if (x < -t_ || x > t_) return 0.0;
    return probs_[static_cast<std::size_t>(x + t_)];
}

double Distribution::total() const {
    double total = 0.0;
    for (double p : probs_) total += p;
    return total;
}

double scaled_position(long x, long t) {
    return t == 0 ? 0.0 : static_cast<double>(x) / static_cast<double>(t);
}

// Buffers are indexed by x + capacity + 2 so that the neighbours of the
// outermost sites read as zeros.
Evolver::Evolver(const CoinParameters& params, const WalkState& start, long capacity)
    : kernel_(std::make_shared<const Kernel>(params)), capacity_(capacity), t_(start.t()) {
    if (capacity < t_) throw DomainError("capacity below the starting time");
    const auto size = static_cast<std::size_t>(2 * capacity + 5);
    cur_.assign(size, Spinor::Zero());
    next_.assign(size, Spinor::Zero());
    const long off = capacity + 2;
    for (long x = -t_; x <= t_; x += 2) cur_[static_cast<std::size_t>(x + off)] = start.amplitude(x);
}

Evolver::Evolver(const CoinParameters& params, const Spinor& psi0, long capacity)
    : Evolver(params, WalkState(0, {psi0}), capacity) {}

void Evolver::step_once() {
    const Kernel& kernel = *kernel_;
    const long off = capacity_ + 2;
    const long t1 = t_ + 1;
    // Sites reachable at t+1 share the parity of t+1.
    for (long x = -t1; x <= t1; x += 2) {
        const auto i = static_cast<std::size_t>(x + off);
        const Spinor& from_right = cur_[i + 1];
        const Spinor& from_left = cur_[i - 1];
        const RegionCoefficients& r = kernel.at(x + 1);
        const RegionCoefficients& l = kernel.at(x - 1);
        Spinor& out = next_[i];
        out(0) = r.p0.times(from_right(0)) + r.p1.times(from_right(1));
        out(1) = l.q0.times(from_left(0)) + l.q1.times(from_left(1));
    }
    cur_.swap(next_);
    t_ = t1;
}

void Evolver::advance(long steps) {
    if (steps < 0) throw DomainError("negative step count");
    if (t_ + steps > capacity_) {
        throw ResourceError("evolution beyond capacity " + std::to_string(capacity_));
    }
    const FlushSubnormals guard;
    for (long s = 0; s < steps; ++s) step_once();
}

WalkState Evolver::state() const {
    const long off = capacity_ + 2;
    std::vector<Spinor> amps(static_cast<std::size_t>(2 * t_ + 1));
    for (long x = -t_; x <= t_; ++x) {
        amps[static_cast<std::size_t>(x + t_)] =
            (x + t_) % 2 == 0 ? cur_[static_cast<std::size_t>(x + off)] : Spinor::Zero();
    }
    return WalkState(t_, std::move(amps));
}

Distribution Evolver::distribution() const {
    const long off = capacity_ + 2;
    std::vector<double> probs(static_cast<std::size_t>(2 * t_ + 1), 0.0);
    for (long x = -t_; x <= t_; x += 2) {
        probs[static_cast<std::size_t>(x + t_)] = cur_[static_cast<std::size_t>(x + off)].squaredNorm();
    }
    return Distribution(t_, std::move(probs));
}

WalkState step(const WalkState& state, const CoinParameters& params) {
    Evolver ev(params, state, state.t() + 1);
    ev.advance(1);
    return ev.state();
}

WalkState evolve(const CoinParameters& params, const InitialState& init, long t, long max_time) {
    if (t < 0) throw DomainError("negative time");
    if (t > max_time) {
        throw ResourceError("t = " + std::to_string(t) + " exceeds the cap " + std::to_string(max_time));
    }
    Evolver ev(params, init.spinor(), t);
    ev.advance(t);
    return ev.state();
}

Distribution distribution(const WalkState& state) {
    std::vector<double> probs;
    probs.reserve(state.amplitudes().size());
    for (const auto& s : state.amplitudes()) probs.push_back(s.squaredNorm());
    return Distribution(state.t(), std::move(probs));
}

long bin_index(double v, double bin_width) { return static_cast<long>(std::floor(v / bin_width + 0.5)); }

long bin_count_half(double bin_width) { return bin_index(1.0, bin_width); }

std::vector<DensityBin> binned_density(const Distribution& dist, double bin_width) {
    if (!(bin_width > 0.0 && bin_width < 1.0)) throw BinError("bin width must lie in (0, 1)");
    const long t = dist.t();
    if (t > 0 && bin_width * static_cast<double>(t) < 2.0 * (1.0 - 1e-12)) {
        throw BinError("bin width " + std::to_string(bin_width) + " is below the site spacing 2/t at t = " +
                       std::to_string(t));
    }
    const long half = bin_count_half(bin_width);
    std::vector<double> mass(static_cast<std::size_t>(2 * half + 1), 0.0);
    for (long x = dist.min_x(); x <= dist.max_x(); ++x) {
        const double p = dist.prob(x);
        if (p == 0.0) continue;
        long j = bin_index(scaled_position(x, t), bin_width);
        j = std::clamp(j, -half, half);
        mass[static_cast<std::size_t>(j + half)] += p;
    }
    std::vector<DensityBin> bins;
    bins.reserve(mass.size());
    for (long j = -half; j <= half; ++j) {
        bins.push_back({static_cast<double>(j) * bin_width, mass[static_cast<std::size_t>(j + half)] / bin_width});
    }
    return bins;
}

std::vector<CdfPoint> empirical_cdf(const Distribution& dist) {
    std::vector<CdfPoint> cdf;
    const long t = dist.t();
    cdf.reserve(static_cast<std::size_t>(t + 1));
    double acc = 0.0;
    for (long x = -t; x <= t; x += 2) {
        acc += dist.prob(x);
        cdf.push_back({scaled_position(x, t), acc});
    }
    return cdf;
}

double empirical_moment(const Distribution& dist, int m) {
    if (m < 1) throw DomainError("moment order must be positive");
    double acc = 0.0;
    for (long x = dist.min_x(); x <= dist.max_x(); ++x) {
        const double p = dist.prob(x);
        if (p != 0.0) acc += std::pow(scaled_position(x, dist.t()), m) * p;
    }
    return acc;
}

CoinMatrix WeightMatrixSeries::at(long t, long x) const {
    if (t < 0 || t > horizon_ || x < -t || x > t) return CoinMatrix::Zero();
    return layers_[static_cast<std::size_t>(t)][static_cast<std::size_t>(x + t)];
}

WeightMatrixSeries weight_matrices(const CoinParameters& params, long horizon, long max_horizon) {
    if (horizon < 0) throw DomainError("negative horizon");
    if (horizon > max_horizon) {
        throw ResourceError("series horizon " + std::to_string(horizon) + " exceeds the cap " +
                            std::to_string(max_horizon));
    }
    Evolver e1(params, Spinor(1.0, 0.0), horizon);
    Evolver e2(params, Spinor(0.0, 1.0), horizon);
    WeightMatrixSeries series;
    series.horizon_ = horizon;
    series.layers_.reserve(static_cast<std::size_t>(horizon + 1));
    for (long t = 0; t <= horizon; ++t) {
        if (t > 0) {
            e1.advance(1);
            e2.advance(1);
        }
        const WalkState s1 = e1.state();
        const WalkState s2 = e2.state();
        std::vector<CoinMatrix> layer(static_cast<std::size_t>(2 * t + 1));
        for (long x = -t; x <= t; ++x) {
            CoinMatrix m;
            m.col(0) = s1.amplitude(x);
            m.col(1) = s2.amplitude(x);
            layer[static_cast<std::size_t>(x + t)] = m;
        }
        series.layers_.push_back(std::move(layer));
    }
    return series;
}

}  // namespace qw
