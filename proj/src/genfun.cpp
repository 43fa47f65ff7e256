#include "qw/genfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qw/errors.hpp"
#include "qw/limits.hpp"

namespace qw {

namespace {

constexpr double kDiskMargin = 1e-9;
constexpr double kBranchTie = 1e-12;
constexpr double kLambda0Floor = 1e-14;
constexpr double kEdgeMargin = 1e-6;

// Phase carried by f_0^(+-): e^{i sigma_+} for +, e^{-i sigma_-} for -.
complex branch_phase(Side sign, const CoinParameters& params) {
    return sign == Side::positive ? std::polar(1.0, params.sigma_plus()) : std::polar(1.0, -params.sigma_minus());
}

complex power(complex base, long n) {
    complex out = 1.0;
    for (long i = 0; i < n; ++i) out *= base;
    return out;
}

struct Candidate {
    complex f;
    complex lambda;
};

}  // namespace

complex transfer_quadratic(complex f, complex z, Side sign, const CoinParameters& params) {
    const complex e = branch_phase(sign, params);
    return f * f - kSqrt2 * e * (1.0 + z * z) * f + e * e * z * z;
}

GFValue gf_at(complex z, const CoinParameters& params) {
    if (!(std::abs(z) < 1.0 - kDiskMargin)) {
        throw DomainError("generating functions are evaluated strictly inside the unit disk");
    }
    // With f = e h (e the branch phase) both quadratics reduce to
    // h^2 - sqrt2 (1+z^2) h + z^2 = 0, whose roots satisfy h1 h2 = z^2 and
    // h1 + h2 = sqrt2 (1+z^2).
    const complex sum = kSqrt2 * (1.0 + z * z);
    const complex disc = std::sqrt(sum * sum - 4.0 * z * z);
    const complex q = std::abs(sum + disc) >= std::abs(sum - disc) ? sum + disc : sum - disc;
    const complex h_large = 0.5 * q;
    const complex h_small = z * z / h_large;
    // h - sqrt2 for each root, the large one without cancellation.
    const std::array<complex, 2> roots = {h_small, h_large};
    const std::array<complex, 2> shifted = {h_small - kSqrt2, kSqrt2 * z * z - h_small};

    GFValue out;
    out.z = z;
    for (const Side sign : {Side::positive, Side::negative}) {
        const complex e = branch_phase(sign, params);
        int admissible = 0;
        Candidate chosen{};
        for (std::size_t i = 0; i < 2; ++i) {
            if (shifted[i] == 0.0) continue;  // lambda has a pole, not a candidate
            // lambda_+ = z / (e^{-i s+} f - sqrt2), lambda_- = z / (sqrt2 - e^{i s-} f).
            const complex lambda = sign == Side::positive ? z / shifted[i] : -z / shifted[i];
            const double modulus = std::abs(lambda);
            if (std::abs(modulus - 1.0) <= kBranchTie) {
                throw BranchError("transfer roots are not separated by |lambda| = 1 at z = (" +
                                  std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
            }
            if (modulus < 1.0) {
                ++admissible;
                chosen = {e * roots[i], lambda};
            }
        }
        if (admissible != 1) {
            throw BranchError("expected exactly one root with |lambda| < 1, found " + std::to_string(admissible));
        }
        if (sign == Side::positive) {
            out.f_plus = chosen.f;
            out.lambda_plus = chosen.lambda;
        } else {
            out.f_minus = chosen.f;
            out.lambda_minus = chosen.lambda;
        }
    }
    out.Lambda0 = 1.0 + out.f_plus * out.f_minus;
    if (std::abs(out.Lambda0) < kLambda0Floor) throw DegenerateError("Lambda0 vanishes: pole of Xi_0");
    return out;
}

CoinMatrix xi0(complex z, const CoinParameters& params) {
    const GFValue g = gf_at(z, params);
    CoinMatrix m;
    m << 1.0, -g.f_plus, g.f_minus, 1.0;
    return m / g.Lambda0;
}

CoinMatrix xi_x(complex z, long x, const CoinParameters& params) {
    const GFValue g = gf_at(z, params);
    CoinMatrix origin;
    origin << 1.0, -g.f_plus, g.f_minus, 1.0;
    origin /= g.Lambda0;
    if (x == 0) return origin;

    CoinMatrix hop = CoinMatrix::Zero();
    complex scale;
    if (x > 0) {
        // [lambda f; z] [0, -1]
        hop(0, 1) = -g.lambda_plus * g.f_plus;
        hop(1, 1) = -z;
        scale = power(g.lambda_plus, x - 1);
    } else {
        // [z; lambda f] [1, 0]
        hop(0, 0) = z;
        hop(1, 0) = g.lambda_minus * g.f_minus;
        scale = power(g.lambda_minus, -x - 1);
    }
    return scale * hop * origin;
}

namespace {

double band_discriminant(double theta) {
    const double c = std::cos(theta);
    const double disc = 2.0 * c * c - 1.0;
    if (disc < -1e-12) {
        throw DomainError("theta = " + std::to_string(theta) + " lies outside the band |sin theta| <= 1/sqrt(2)");
    }
    return std::max(disc, 0.0);
}

}  // namespace

complex unit_circle_f0(double theta, Side sign, const CoinParameters& params) {
    const double disc = band_discriminant(theta);
    const double c = std::cos(theta);
    const double modulus = kSqrt2 * std::abs(c) - std::sqrt(disc);
    return sgn(c) * std::polar(1.0, theta) * branch_phase(sign, params) * modulus;
}

complex unit_circle_lambda(double theta, Side sign) {
    const double disc = band_discriminant(theta);
    const complex inner(sgn(std::cos(theta)) * std::sqrt(disc), kSqrt2 * std::sin(theta));
    return -sign_of(sign) * inner;
}

std::pair<SingularPoint, SingularPoint> singular_points(double k, const CoinParameters& /*params*/) {
    const double ck = std::cos(k);
    const double sk = std::sin(k);
    if (std::abs(ck * sk) < 1e-14) {
        throw DegenerateError("singular points are undefined where sin k cos k = 0");
    }
    const double x = std::abs(ck) / std::sqrt(1.0 + ck * ck);
    const double one_minus_x2 = 1.0 - x * x;
    const double cos_mag = 1.0 / std::sqrt(2.0 * one_minus_x2);
    const double sin_theta = sgn(sk) * std::sqrt((1.0 - 2.0 * x * x) / (2.0 * one_minus_x2));

    auto make = [&](Side branch) {
        SingularPoint p;
        p.k = k;
        p.branch = branch;
        p.cos_theta = -sign_of(branch) * sgn(ck) * cos_mag;
        p.sin_theta = sin_theta;
        p.theta = std::atan2(p.sin_theta, p.cos_theta);
        p.x_slope = sign_of(branch) * x;
        p.s = sgn(sk * ck);
        return p;
    };
    return {make(Side::positive), make(Side::negative)};
}

ResidueComponents residue_components(double x, double s, const CoinParameters& params, const InitialState& init) {
    if (x == 0.0 || !(std::abs(x) < kSupportEdge)) {
        throw DomainError("residue components need 0 < |x| < 1/sqrt(2)");
    }
    const double sigma = params.sigma();
    const double root = std::sqrt(1.0 - 2.0 * x * x);
    const double cos_2sigma = std::cos(2.0 * sigma);
    const double sin_2sigma = std::sin(2.0 * sigma);
    const double a = init.a();
    const double b = init.b();
    const double cross = kSqrt2 * a * b;

    ResidueComponents r;
    r.r1 = x * x;
    if (x > 0.0) {
        const double gamma = init.phi12_tilde() - params.sigma_minus();
        r.r2 = (1.0 + x) * (1.0 + x) / (2.0 * (1.0 + x * x * (1.0 + cos_2sigma) + s * root * sin_2sigma));
        r.r3 = a * a * (1.0 - x) / (1.0 + x) + b * b +
               cross / (1.0 + x) * (std::cos(gamma) + s * root * std::sin(gamma));
        r.r4 = 2.0 / (1.0 + x);
    } else {
        const double gamma = -init.phi12_tilde() + params.sigma_plus();
        r.r2 = (1.0 - x) * (1.0 - x) / (2.0 * (1.0 + x * x * (1.0 + cos_2sigma) - s * root * sin_2sigma));
        r.r3 = a * a - cross / (1.0 - x) * (std::cos(gamma) - s * root * std::sin(gamma)) +
               b * b * (1.0 + x) / (1.0 - x);
        r.r4 = 2.0 / (1.0 - x);
    }
    return r;
}

// Each x in the open support is hit by four momenta k, one per quadrant,
// two with s = +1 and two with s = -1, and |dk| = pi f_K(x) dx at each.
// With the dk / 2pi measure the quadrant sum contributes f_K times the sum
// of the residue products over s.
double assemble_density(double x, const CoinParameters& params, const InitialState& init) {
    if (x == 0.0 || !(std::abs(x) < kSupportEdge - kEdgeMargin)) {
        throw DomainError("assembled density is defined for 0 < |x| < 1/sqrt(2) - 1e-6");
    }
    const double plus = residue_components(x, +1.0, params, init).product();
    const double minus = residue_components(x, -1.0, params, init).product();
    return (plus + minus) * konno_density(x, kSupportEdge);
}

}  // namespace qw
