#include "qw/limits.hpp"

#include <cmath>

#include "qw/errors.hpp"
#include "qw/quadrature.hpp"

namespace qw {

namespace {

constexpr double kAcMassTolerance = 1e-10;

void require_inside_support(double x) {
    if (!(std::abs(x) < kSupportEdge)) {
        throw DomainError("x = " + std::to_string(x) + " lies outside the open support (-1/sqrt(2), 1/sqrt(2))");
    }
}

// Prefactor sign u = +-sqrt(2) sin(sigma) of the two localization branches.
double branch_u(Side sign, const CoinParameters& params) { return sign_of(sign) * kSqrt2 * std::sin(params.sigma()); }

double branch_amplitude(Side sign, const CoinParameters& params, const InitialState& init) {
    return 1.0 + sign_of(sign) * 2.0 * init.a() * init.b() * std::sin(init.phi12_tilde() - params.sigma_tilde());
}

bool branch_active(Side sign, const CoinParameters& params) {
    const double s = std::sin(params.sigma());
    return sign == Side::positive ? (-kInvSqrt2 <= s && s <= 1.0) : (-1.0 <= s && s <= kInvSqrt2);
}

}  // namespace

double konno_density(double x, double a) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("Konno parameter a must lie in (0, 1)");
    if (!(std::abs(x) < a)) return 0.0;
    return std::sqrt(1.0 - a * a) / (kPi * (1.0 - x * x) * std::sqrt(a * a - x * x));
}

bool WeightCoefficients::s0_vanishes() const { return s0 <= kVanishingCos2Sigma * kVanishingCos2Sigma; }

WeightCoefficients weight_coefficients(const CoinParameters& params, const InitialState& init, Side side) {
    const double sigma = params.sigma();
    const double cos2 = std::cos(sigma) * std::cos(sigma);
    const double sin2 = std::sin(sigma) * std::sin(sigma);
    const double sin_2sigma = std::sin(2.0 * sigma);
    const double cos_2sigma = std::cos(2.0 * sigma);
    const double a = init.a();
    const double b = init.b();

    WeightCoefficients w;
    w.s2 = 4.0 * cos2 * cos2;
    w.s1 = 4.0 * cos2 * (1.0 + 2.0 * sin2);
    w.s0 = cos_2sigma * cos_2sigma;
    w.gamma_plus = reduce_angle(init.phi12_tilde() - params.sigma_minus());
    w.gamma_minus = reduce_angle(-init.phi12_tilde() + params.sigma_plus());

    const double sg = sign_of(side);
    const double gamma = side == Side::positive ? w.gamma_plus : w.gamma_minus;
    const double cross = kSqrt2 * a * b * sg;
    w.t3 = 4.0 * cos2 * (b * b - a * a);
    w.t2 = 4.0 * (cos2 * (1.0 + cross * std::cos(gamma)) + cross * std::sin(gamma) * sin_2sigma);
    w.t1 = 2.0 * (b * b - a * a);
    w.t0 = 2.0 * (1.0 + cross * std::cos(gamma) - cross * std::sin(gamma) * sin_2sigma);
    return w;
}

double weight(double x, const CoinParameters& params, const InitialState& init) {
    require_inside_support(x);
    const WeightCoefficients c = weight_coefficients(params, init, x >= 0.0 ? Side::positive : Side::negative);
    const double cubic = ((c.t3 * x + c.t2) * x + c.t1) * x + c.t0;
    const double x2 = x * x;
    if (c.s0_vanishes()) return cubic / (c.s2 * x2 + c.s1);
    return x2 * cubic / (x2 * (c.s2 * x2 + c.s1) + c.s0);
}

double one_defect_weight(double x, double sigma, const InitialState& init) {
    require_inside_support(x);
    const double cross = kSqrt2 * std::real(std::polar(1.0, -sigma) * init.alpha() * std::conj(init.beta()));
    const double side = x >= 0.0 ? cross : -cross;
    const double x2 = x * x;
    return (2.0 * x2 / (1.0 + 2.0 * x2)) * (1.0 + side + (init.b() * init.b() - init.a() * init.a()) * x);
}

double limit_density(double x, const CoinParameters& params, const InitialState& init) {
    if (!(std::abs(x) < kSupportEdge)) return 0.0;
    return weight(x, params, init) * konno_density(x, kSupportEdge);
}

double ac_mass(const CoinParameters& params, const InitialState& init) {
    return integrate_density([&](double x) { return limit_density(x, params, init); }, kAcMassTolerance).value;
}

double ac_moment(const CoinParameters& params, const InitialState& init, int m) {
    if (m < 0) throw DomainError("moment order must be nonnegative");
    return integrate_density([&](double x) { return std::pow(x, m) * limit_density(x, params, init); },
                             kAcMassTolerance)
        .value;
}

double nu_pm(long x, Side sign, const CoinParameters& params, const InitialState& init) {
    const double u = branch_u(sign, params);
    const double denom = 3.0 + 2.0 * u;
    if (denom == 0.0) throw DegenerateError("3 +- 2 sqrt(2) sin(sigma) vanished");
    const double ratio = (1.0 + u) / denom;
    const double head = ratio * ratio * branch_amplitude(sign, params, init);
    if (x == 0) return head;
    return head * (2.0 + u) * std::pow(1.0 / denom, static_cast<double>(std::labs(x)));
}

double time_averaged_measure(long x, const CoinParameters& params, const InitialState& init) {
    double total = 0.0;
    if (branch_active(Side::positive, params)) total += nu_pm(x, Side::positive, params, init);
    if (branch_active(Side::negative, params)) total += nu_pm(x, Side::negative, params, init);
    return total;
}

// nu(0) + 2 sum_{y>=1} nu(y) = ((1+u)/(3+2u))^2 K (1 + (2+u)/(1+u)) = (1+u)/(3+2u) K,
// which stays finite at u = -1 where the ratio of the tail reaches 1.
double loc_mass(const CoinParameters& params, const InitialState& init) {
    double total = 0.0;
    for (const Side sign : {Side::positive, Side::negative}) {
        if (!branch_active(sign, params)) continue;
        const double u = branch_u(sign, params);
        const double denom = 3.0 + 2.0 * u;
        if (denom == 0.0) throw DegenerateError("3 +- 2 sqrt(2) sin(sigma) vanished");
        total += (1.0 + u) / denom * branch_amplitude(sign, params, init);
    }
    return total;
}

LimitMeasure limit_measure(const CoinParameters& params, const InitialState& init) {
    LimitMeasure m;
    m.C = loc_mass(params, init);
    m.coeffs_pos = weight_coefficients(params, init, Side::positive);
    m.coeffs_neg = weight_coefficients(params, init, Side::negative);
    return m;
}

}  // namespace qw
