#pragma once

#include <complex>
#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace qw {

using complex = std::complex<double>;
using CoinMatrix = Eigen::Matrix2cd;
using Spinor = Eigen::Vector2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Right (+1) or left (-1) half line.
enum class Side : int { negative = -1, positive = +1 };

constexpr double sign_of(Side s) { return s == Side::positive ? 1.0 : -1.0; }

// sgn with sgn(0) = +1.
constexpr double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Reduce an angle to [0, 2pi).
double reduce_angle(double radians);

/// Phases of the two coins of the two-phase walk. U_+ acts on x >= 1,
/// U_- on x <= -1 and the origin carries the fixed defect diag(1, -1).
class CoinParameters {
public:
    CoinParameters(double sigma_plus, double sigma_minus);

    double sigma_plus() const { return sigma_plus_; }
    double sigma_minus() const { return sigma_minus_; }
    /// Half difference (sigma_+ - sigma_-) / 2.
    double sigma() const { return 0.5 * (sigma_plus_ - sigma_minus_); }
    /// Half sum (sigma_+ + sigma_-) / 2.
    double sigma_tilde() const { return 0.5 * (sigma_plus_ + sigma_minus_); }

    bool operator==(const CoinParameters&) const = default;

private:
    double sigma_plus_;
    double sigma_minus_;
};

/// Normalized coin state (alpha, beta) at the origin with its polar parts
/// alpha = a e^{i phi1}, beta = b e^{i phi2}.
class InitialState {
public:
    complex alpha() const { return alpha_; }
    complex beta() const { return beta_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double phi1() const { return phi1_; }
    double phi2() const { return phi2_; }
    double phi12_tilde() const { return phi1_ - phi2_; }
    Spinor spinor() const { return Spinor(alpha_, beta_); }

private:
    friend InitialState make_initial_state(complex alpha, complex beta);
    InitialState() = default;

    complex alpha_{1.0, 0.0};
    complex beta_{0.0, 0.0};
    double a_ = 1.0;
    double b_ = 0.0;
    double phi1_ = 0.0;
    double phi2_ = 0.0;
};

// Renormalizes (alpha, beta). Throws ZeroStateError for the zero vector and
// DomainError when the squared norm is off from 1 by more than 1e-9.
InitialState make_initial_state(complex alpha, complex beta);

CoinMatrix coin_at(const CoinParameters& params, long x);

struct Propagators {
    CoinMatrix left;   // P_x, top row of U_x
    CoinMatrix right;  // Q_x, bottom row of U_x
};

Propagators propagators_at(const CoinParameters& params, long x);

// Worked example: sigma_+ = 3pi/2, sigma_- = pi.
CoinParameters example_parameters();

}  // namespace qw
