#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qw/model.hpp"
#include "qw/verify.hpp"

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(QW_FIXTURE_DIR) + "/" + name; }

inline std::vector<qw::ParameterTuple> fixture_tuples() {
    std::ifstream in(fixture_path("random_tuples.json"));
    const nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<qw::ParameterTuple> out;
    for (const auto& e : doc) {
        out.push_back({qw::CoinParameters(e.at("sigma_plus").get<double>(), e.at("sigma_minus").get<double>()),
                       qw::make_initial_state({e.at("alpha_re").get<double>(), e.at("alpha_im").get<double>()},
                                              {e.at("beta_re").get<double>(), e.at("beta_im").get<double>()})});
    }
    return out;
}

// Seeded generator of random coin phases and unit initial states.
class TupleGen {
public:
    explicit TupleGen(std::uint64_t seed) : rng_(seed) {}

    double angle() { return std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng_); }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

    qw::InitialState state() {
        const double a2 = unit();
        return qw::make_initial_state(std::polar(std::sqrt(a2), angle()), std::polar(std::sqrt(1.0 - a2), angle()));
    }
    qw::CoinParameters params() { return qw::CoinParameters(angle(), angle()); }
    qw::ParameterTuple tuple() {
        const qw::CoinParameters p = params();
        return {p, state()};
    }

private:
    std::mt19937_64 rng_;
};

using cplx = std::complex<double>;

// Straightforward site-by-site evolution written from the model definition,
// used as an oracle for the optimized evolver.
inline std::map<long, std::pair<cplx, cplx>> naive_walk(double sp, double sm, cplx alpha, cplx beta, long t) {
    auto coin = [&](long x) {
        std::array<cplx, 4> u{};
        if (x == 0) {
            u = {1.0, 0.0, 0.0, -1.0};
        } else {
            const double s = x > 0 ? sp : sm;
            const double r = 1.0 / std::sqrt(2.0);
            u = {r, r * std::exp(cplx(0, s)), r * std::exp(cplx(0, -s)), -r};
        }
        return u;
    };
    std::map<long, std::pair<cplx, cplx>> psi{{0, {alpha, beta}}};
    for (long step = 0; step < t; ++step) {
        std::map<long, std::pair<cplx, cplx>> next;
        for (const auto& [x, v] : psi) {
            const auto u = coin(x);
            // top row moves left, bottom row moves right
            next[x - 1].first += u[0] * v.first + u[1] * v.second;
            next[x + 1].second += u[2] * v.first + u[3] * v.second;
        }
        psi = std::move(next);
    }
    return psi;
}

}  // namespace testing
