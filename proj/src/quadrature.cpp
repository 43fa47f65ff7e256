#include "qw/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "qw/errors.hpp"
#include "qw/limits.hpp"

namespace qw {

namespace {

// Kronrod abscissae, descending; odd indices are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[static_cast<std::size_t>(j)] * pair;
        if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

QuadratureResult adaptive(const std::function<double(double)>& f, double lo, double hi, double tol,
                          long max_evaluations) {
    QuadratureResult out;
    if (lo == hi) return out;

    std::priority_queue<Segment> open;
    const Segment first = gauss_kronrod(f, lo, hi);
    out.evaluations = 15;
    open.push(first);
    double error = first.error;
    // Segments too narrow to bisect further keep their error here.
    double frozen_error = 0.0;
    std::vector<Segment> frozen;

    while (error + frozen_error > tol && !open.empty()) {
        if (out.evaluations + 30 > max_evaluations) {
            throw QuadratureError("quadrature did not reach tolerance " + std::to_string(tol) + " within " +
                                  std::to_string(max_evaluations) + " evaluations (estimate " +
                                  std::to_string(error + frozen_error) + ")");
        }
        const Segment worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            error -= worst.error;
            frozen_error += worst.error;
            frozen.push_back(worst);
            continue;
        }
        const Segment left = gauss_kronrod(f, worst.lo, mid);
        const Segment right = gauss_kronrod(f, mid, worst.hi);
        out.evaluations += 30;
        error += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
    }
    if (error + frozen_error > tol) {
        throw QuadratureError("quadrature stalled above tolerance " + std::to_string(tol));
    }

    double total = 0.0;
    double total_error = 0.0;
    while (!open.empty()) {
        total += open.top().value;
        total_error += open.top().error;
        open.pop();
    }
    for (const auto& s : frozen) {
        total += s.value;
        total_error += s.error;
    }
    out.value = total;
    out.abs_error_estimate = total_error;
    return out;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi, double tol,
                           long max_evaluations) {
    if (!(tol >= 1e-12)) throw DomainError("quadrature tolerance below 1e-12");
    return adaptive(f, lo, hi, tol, max_evaluations);
}

QuadratureResult integrate_density(const std::function<double(double)>& f, double lo, double hi, double tol,
                                   long max_evaluations) {
    if (!(tol >= 1e-12)) throw DomainError("quadrature tolerance below 1e-12");
    const double edge = kSupportEdge;
    lo = std::clamp(lo, -edge, edge);
    hi = std::clamp(hi, -edge, edge);
    QuadratureResult out;
    if (!(hi > lo)) return out;
    const auto integrand = [&f, edge](double u) { return f(edge * std::sin(u)) * edge * std::cos(u); };
    const double ulo = std::asin(lo / edge);
    const double uhi = std::asin(hi / edge);
    std::vector<std::pair<double, double>> pieces;
    if (ulo < 0.0 && uhi > 0.0) {
        pieces = {{ulo, 0.0}, {0.0, uhi}};
    } else {
        pieces = {{ulo, uhi}};
    }
    const double piece_tol = tol / static_cast<double>(pieces.size());
    for (const auto& [a, b] : pieces) {
        const QuadratureResult part = adaptive(integrand, a, b, piece_tol, max_evaluations - out.evaluations);
        out.value += part.value;
        out.abs_error_estimate += part.abs_error_estimate;
        out.evaluations += part.evaluations;
    }
    return out;
}

QuadratureResult integrate_density(const std::function<double(double)>& f, double tol, long max_evaluations) {
    return integrate_density(f, -kSupportEdge, kSupportEdge, tol, max_evaluations);
}

}  // namespace qw
