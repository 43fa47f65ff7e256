#include "qw/model.hpp"

#include <cmath>

#include "qw/errors.hpp"

namespace qw {

double reduce_angle(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

CoinParameters::CoinParameters(double sigma_plus, double sigma_minus)
    : sigma_plus_(reduce_angle(sigma_plus)), sigma_minus_(reduce_angle(sigma_minus)) {}

InitialState make_initial_state(complex alpha, complex beta) {
    const double norm2 = std::norm(alpha) + std::norm(beta);
    if (!(norm2 >= 1e-12)) throw ZeroStateError("initial coin state is zero");
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw DomainError("initial coin state is not normalized: |alpha|^2+|beta|^2 = " +
                          std::to_string(norm2));
    }
    const double scale = 1.0 / std::sqrt(norm2);
    InitialState s;
    s.alpha_ = alpha * scale;
    s.beta_ = beta * scale;
    s.a_ = std::abs(s.alpha_);
    s.b_ = std::abs(s.beta_);
    s.phi1_ = s.a_ > 0.0 ? std::arg(s.alpha_) : 0.0;
    s.phi2_ = s.b_ > 0.0 ? std::arg(s.beta_) : 0.0;
    return s;
}

CoinMatrix coin_at(const CoinParameters& params, long x) {
    CoinMatrix m;
    if (x == 0) {
        m << 1.0, 0.0, 0.0, -1.0;
        return m;
    }
    const double phase = x > 0 ? params.sigma_plus() : params.sigma_minus();
    const complex e = std::polar(1.0, phase);
    m << kInvSqrt2, kInvSqrt2 * e, kInvSqrt2 * std::conj(e), -kInvSqrt2;
    return m;
}

Propagators propagators_at(const CoinParameters& params, long x) {
    const CoinMatrix u = coin_at(params, x);
    Propagators p{CoinMatrix::Zero(), CoinMatrix::Zero()};
    p.left.row(0) = u.row(0);
    p.right.row(1) = u.row(1);
    return p;
}

CoinParameters example_parameters() { return CoinParameters(1.5 * kPi, kPi); }

}  // namespace qw
