#pragma once

#include "qw/model.hpp"

namespace qw {

/// Half width of the support of the ballistic part, 1/sqrt(2).
inline constexpr double kSupportEdge = kInvSqrt2;

// |cos 2 sigma| below this is treated as exact zero (s0 = 0). Angles given
// as rational multiples of pi miss exact zeros by ~1e-16 after rounding.
inline constexpr double kVanishingCos2Sigma = 1e-12;

/// Konno density sqrt(1-a^2) / (pi (1-x^2) sqrt(a^2-x^2)) on (-a, a), zero
/// elsewhere. Throws DomainError unless 0 < a < 1.
double konno_density(double x, double a);

/// Coefficients of the weight w(x) = (t3 x^5 + t2 x^4 + t1 x^3 + t0 x^2) /
/// (s2 x^4 + s1 x^2 + s0) on one half line. t2 and t0 carry sgn(x) and
/// gamma(x); the rest are side independent.
struct WeightCoefficients {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    double t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
    double gamma_plus = 0.0;   // phi1 - phi2 - sigma_-, reduced
    double gamma_minus = 0.0;  // -(phi1 - phi2) + sigma_+, reduced

    // cos 2 sigma vanishes and the x^2 factor cancels.
    bool s0_vanishes() const;
};

WeightCoefficients weight_coefficients(const CoinParameters& params, const InitialState& init, Side side);

/// w(x) for |x| < 1/sqrt(2); the x >= 0 coefficients apply at the origin.
double weight(double x, const CoinParameters& params, const InitialState& init);

/// Weight of the single-defect walk with both coins at phase sigma.
double one_defect_weight(double x, double sigma, const InitialState& init);

/// w(x) f_K(x; 1/sqrt(2)) inside the support, 0 outside.
double limit_density(double x, const CoinParameters& params, const InitialState& init);

// Mass of the absolutely continuous part, by adaptive quadrature to 1e-10.
double ac_mass(const CoinParameters& params, const InitialState& init);

// m-th moment of the absolutely continuous part, same quadrature.
double ac_moment(const CoinParameters& params, const InitialState& init, int m);

double nu_pm(long x, Side sign, const CoinParameters& params, const InitialState& init);

/// Time-averaged limit measure at site x. Symmetric in x.
double time_averaged_measure(long x, const CoinParameters& params, const InitialState& init);

/// C = sum over x of the time-averaged measure, with the geometric tails
/// summed in closed form.
double loc_mass(const CoinParameters& params, const InitialState& init);

struct LimitMeasure {
    double C = 0.0;
    WeightCoefficients coeffs_pos;
    WeightCoefficients coeffs_neg;
    double a_param = kSupportEdge;
};

LimitMeasure limit_measure(const CoinParameters& params, const InitialState& init);

}  // namespace qw
