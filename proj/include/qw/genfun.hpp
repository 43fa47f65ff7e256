#pragma once

#include <utility>

#include "qw/model.hpp"

namespace qw {

/// Transfer quantities of the generating function at a point z of the open
/// unit disk, on the branch where |lambda_+-(z)| < 1.
struct GFValue {
    complex z;
    complex f_plus;        // root of f^2 - sqrt2 e^{i s+} (1+z^2) f + e^{2i s+} z^2
    complex f_minus;       // root of f^2 - sqrt2 e^{-i s-} (1+z^2) f + e^{-2i s-} z^2
    complex lambda_plus;   // z / (e^{-i s+} f_plus - sqrt2)
    complex lambda_minus;  // z / (sqrt2 - e^{i s-} f_minus)
    complex Lambda0;       // 1 + f_plus f_minus
};

/// Evaluates the transfer quantities, choosing for each sign the unique
/// quadratic root with |lambda| < 1. Requires |z| < 1 - 1e-9.
/// Throws BranchError when the choice is not unique and DegenerateError at
/// zeros of Lambda0.
GFValue gf_at(complex z, const CoinParameters& params);

// Residual of the defining quadratic for f_plus (sign +) or f_minus.
complex transfer_quadratic(complex f, complex z, Side sign, const CoinParameters& params);

/// Closed form of sum_t Xi_t(0) z^t.
CoinMatrix xi0(complex z, const CoinParameters& params);

/// Closed form of sum_t Xi_t(x) z^t; x = 0 falls back to xi0.
CoinMatrix xi_x(complex z, long x, const CoinParameters& params);

/// Boundary value of f_0^(+-) at z = e^{i theta} inside the band
/// |sin theta| <= 1/sqrt(2):
///   sgn(cos theta) e^{i(theta +- sigma_+-)} (sqrt2 |cos theta| - sqrt(2 cos^2 theta - 1)).
/// This is the radial limit of the |lambda| < 1 branch.
complex unit_circle_f0(double theta, Side sign, const CoinParameters& params);

/// Boundary value -+(sgn(cos theta) sqrt(2 cos^2 theta - 1) + i sqrt2 sin theta); unimodular.
complex unit_circle_lambda(double theta, Side sign);

/// Unit-circle pole e^{i theta} of 1/(1 - e^{+-ik} lambda_+-) for a given
/// momentum k.
struct SingularPoint {
    double k = 0.0;
    Side branch = Side::positive;
    double cos_theta = 0.0;
    double sin_theta = 0.0;
    double theta = 0.0;    // in (-pi, pi]
    double x_slope = 0.0;  // -d theta / dk
    double s = 1.0;        // sgn(sin k cos k)
};

/// Both singular points at momentum k. Throws DegenerateError when
/// sin k cos k = 0.
std::pair<SingularPoint, SingularPoint> singular_points(double k, const CoinParameters& params);

/// The four factors of the squared residue norm at the pole selected by
/// x (branch + for x > 0, branch - for x < 0) and the quadrant sign s.
struct ResidueComponents {
    double r1 = 0.0;  // |Res 1/(1 - e^{+-ik} lambda)|^2 = x^2
    double r2 = 0.0;  // 1 / |Lambda0|^2
    double r3 = 0.0;  // |alpha f_- + beta|^2 or |alpha - beta f_+|^2
    double r4 = 0.0;  // |lambda f|^2 + 1
    double product() const { return r1 * r2 * r3 * r4; }
};

ResidueComponents residue_components(double x, double s, const CoinParameters& params, const InitialState& init);

/// Limit density assembled from the residues: the sum over both quadrant
/// signs of the residue products, times f_K(x; 1/sqrt(2)). Defined for
/// 0 < |x| < 1/sqrt(2) - 1e-6.
double assemble_density(double x, const CoinParameters& params, const InitialState& init);

}  // namespace qw
