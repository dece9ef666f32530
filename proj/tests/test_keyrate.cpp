#include "hdqkd/keyrate.hpp"

#include "doctest.h"

#include <cmath>

using namespace hdqkd;

namespace {

const std::vector<std::pair<int, int>> kScenarios = {
    {2, 2}, {4, 4}, {4, 2}, {8, 8}, {8, 4}, {8, 2}};

ErrorVector isotropic_error_vector(int d, int k, double p) {
    const double denom = (1.0 - p) + p * k / d;
    ErrorVector e;
    e.e.assign(k, (p / d) / denom);
    e.e[0] = ((1.0 - p) + p / d) / denom;
    return e;
}

} // namespace

TEST_CASE("simple rate formula on published row values") {
    // d = k = 2 at the highest noise setting: 1 - 0.447 - 0.387 = 0.166.
    ErrorVector e_k{{0.907, 0.093}};
    ErrorVector e_t{{0.924, 0.076}};
    CHECK(std::abs(keyrate_simple(2, e_k, e_t) - 0.166) < 0.02);
    CHECK_THROWS_AS(keyrate_simple(4, e_k, e_t), std::invalid_argument);
}

TEST_CASE("ideal state yields log2 k bits per coincidence") {
    for (auto [d, k] : kScenarios) {
        const auto rep =
            keyrate_subspace(max_entangled_state(d), d, k, default_flavor(k));
        CHECK(rep.bpsc == doctest::Approx(std::log2(double(k))).epsilon(1e-10));
        CHECK_FALSE(rep.no_key);
        for (const auto& r : rep.per_subspace) {
            CHECK(r.h_k < 1e-10);
            CHECK(r.h_t < 1e-10);
        }
    }
}

TEST_CASE("isotropic pipeline equals log2 k - 2 H(closed form)") {
    for (auto [d, k] : kScenarios) {
        for (double p : {0.0, 0.025, 0.075, 0.15, 0.3}) {
            const auto rho = apply_isotropic_noise(max_entangled_state(d), p);
            const auto rep = keyrate_subspace(rho, d, k, default_flavor(k));
            const double h = shannon_entropy(isotropic_error_vector(d, k, p));
            CHECK(rep.bpsc ==
                  doctest::Approx(std::log2(double(k)) - 2.0 * h).epsilon(1e-10));
        }
    }
}

TEST_CASE("bpsc strictly decreasing in noise fraction") {
    for (auto [d, k] : kScenarios) {
        double prev = std::log2(double(k)) + 1.0;
        for (double p = 0.0; p <= 0.5 + 1e-9; p += 0.01) {
            const auto rho = apply_isotropic_noise(max_entangled_state(d), p);
            const double bpsc = keyrate_subspace(rho, d, k, default_flavor(k)).bpsc;
            CHECK(bpsc < prev);
            prev = bpsc;
        }
    }
}

TEST_CASE("fidelity entropy bound matches a brute-force maximization") {
    // For d = 4 the bound must dominate every probability vector whose
    // leading entry is at least f_plus, and be attained by one of them.
    const int d = 4;
    for (double f : {0.5, 0.7, 0.85, 0.96}) {
        const auto bound = entropy_bound_from_fidelity(f, d);
        CHECK_FALSE(bound.vacuous);
        double best = 0.0;
        const int n = 60;
        for (int a = 0; a <= n; ++a) {
            for (int b = 0; a + b <= n; ++b) {
                const double rest = 1.0 - f;
                const double v1 = rest * a / n;
                const double v2 = (rest - v1) * b / n;
                const double v3 = rest - v1 - v2;
                best = std::max(best, shannon_entropy({f, v1, v2, v3}));
            }
        }
        CHECK(best <= bound.h_t_bound + 1e-9);
        CHECK(bound.h_t_bound - best < 1e-3);
    }
}

TEST_CASE("fidelity bound published values, d = 8") {
    const double f[] = {0.964, 0.943, 0.894, 0.824};
    const double h[] = {0.323, 0.474, 0.787, 1.166};
    for (int i = 0; i < 4; ++i) {
        const auto b = entropy_bound_from_fidelity(f[i], 8);
        CHECK(std::abs(b.h_t_bound - h[i]) < 0.003);
    }
}

TEST_CASE("fidelity bound edge cases") {
    const auto vac = entropy_bound_from_fidelity(0.05, 8);
    CHECK(vac.vacuous);
    CHECK(vac.h_t_bound == doctest::Approx(3.0));
    CHECK(entropy_bound_from_fidelity(1.0, 8).h_t_bound == doctest::Approx(0.0));
    // At f = 1/d the bound is the uniform-distribution entropy.
    CHECK(entropy_bound_from_fidelity(0.125, 8).h_t_bound == doctest::Approx(3.0));
    CHECK_THROWS_AS(entropy_bound_from_fidelity(-0.1, 8), std::invalid_argument);
    CHECK_THROWS_AS(entropy_bound_from_fidelity(1.1, 8), std::invalid_argument);
}

TEST_CASE("fidelity-method rate on the published d = k = 8 row") {
    ErrorVector e_k{{0.986, 0.003, 0.003, 0.001, 0.001, 0.001, 0.003, 0.002}};
    CHECK(std::abs(keyrate_fidelity_method(0.964, e_k, 8) - 2.523) < 0.02);
}

TEST_CASE("bits per second") {
    CHECK(std::abs(bps(2.523, 3291.88) - 8307.0) < 40.0);
    CHECK(std::abs(bps(0.830, 3889.92) - 3230.0) < 35.0);
    CHECK_THROWS_AS(bps(-1.0, 10.0), std::invalid_argument);
}

TEST_CASE("report serialization round trip fields") {
    const auto rho = apply_isotropic_noise(max_entangled_state(4), 0.075);
    auto rep = keyrate_subspace(rho, 4, 2, PhaseFlavor::RealHadamard);
    rep.tscs = 1000.0;
    rep.bps = rep.bpsc * rep.tscs;
    const auto json = rep.to_json();
    CHECK(json.find("\"bpsc\"") != std::string::npos);
    const auto csv = rep.to_csv_row(33.16, 0.075);
    CHECK(csv.find("4,2,0.075,33.16,") == 0);
    CHECK(KeyRateReport::csv_header().find("e_t,e_k") != std::string::npos);
}
