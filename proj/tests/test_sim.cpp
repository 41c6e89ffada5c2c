#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "asepqh/ansatz.hpp"
#include "asepqh/errors.hpp"
#include "asepqh/oracle.hpp"
#include "asepqh/sim.hpp"
#include "doctest.h"

using namespace asepqh;

namespace {

SimConfig config_for(const AsepParams& p, int n, double total, double burn,
                     std::uint64_t seed, int batches = 10) {
    SimConfig c;
    c.asep = p;
    c.n = n;
    c.total_time = total;
    c.burn_in_time = burn;
    c.seed = seed;
    c.batch_count = batches;
    return c;
}

} // namespace

TEST_CASE("sim: fixed seeds reproduce bitwise") {
    const SimConfig c =
        config_for(AsepParams{0.8, 0.7, 0.1, 0.1, 0.3}, 4, 500.0, 50.0, 77);
    const SimResult a = simulate(c);
    const SimResult b = simulate(c);
    CHECK(a.events == b.events);
    CHECK(a.flux_left == b.flux_left);
    CHECK(a.flux_right == b.flux_right);
    REQUIRE(a.occupancy.size() == b.occupancy.size());
    for (size_t i = 0; i < a.occupancy.size(); ++i) {
        CHECK(a.occupancy[i] == b.occupancy[i]);
    }
    const SimResult other = simulate(config_for(
        AsepParams{0.8, 0.7, 0.1, 0.1, 0.3}, 4, 500.0, 50.0, 78));
    CHECK(a.occupancy[0] != other.occupancy[0]);
}

TEST_CASE("sim: configuration validation") {
    const AsepParams p{1.0, 1.0, 0.0, 0.0, 0.5};
    CHECK_THROWS_AS(simulate(config_for(p, 0, 100.0, 10.0, 1)), DomainError);
    CHECK_THROWS_AS(simulate(config_for(p, 2, 10.0, 10.0, 1)), DomainError);
    CHECK_THROWS_AS(simulate(config_for(p, 2, 10.0, 20.0, 1)), DomainError);
    CHECK_THROWS_AS(simulate(config_for(p, 2, 100.0, 10.0, 1, 1)), DomainError);
    CHECK_THROWS_AS(
        simulate(config_for(AsepParams{0.0, 1.0, 0.0, 0.0, 0.0}, 2, 100.0,
                            10.0, 1)),
        DomainError);
}

TEST_CASE("sim: single site closed forms") {
    const double alpha = 0.7, beta = 0.4;
    const SimResult r = simulate(
        config_for(AsepParams{alpha, beta, 0.0, 0.0, 0.0}, 1, 4e4, 1e3, 11));
    const double occ = alpha / (alpha + beta);
    const double cur = alpha * beta / (alpha + beta);
    REQUIRE(r.occupancy.size() == 1);
    CHECK(std::fabs(r.occupancy[0] - occ) <= 4.0 * r.occupancy_se[0]);
    CHECK(r.occupancy_se[0] < 0.02);
    REQUIRE(r.count_hist.size() == 2);
    CHECK(r.count_hist[1] == doctest::Approx(r.occupancy[0]).epsilon(1e-12));
    CHECK(r.count_hist[0] + r.count_hist[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(r.flux_left - cur) <= 4.0 * r.flux_left_se);
    CHECK(std::fabs(r.flux_right - cur) <= 4.0 * r.flux_right_se);
    CHECK(r.rng_id == "mt19937_64");
    CHECK(r.measured_time == doctest::Approx(4e4 - 1e3));
    CHECK(r.events > 0);
    CHECK(r.n == 1);
}

TEST_CASE("sim: standard errors shrink with run length") {
    const AsepParams p{1.0, 1.0, 0.0, 0.0, 0.5};
    const SimResult shorter =
        simulate(config_for(p, 5, 5e3, 5e2, 21, 20));
    const SimResult longer =
        simulate(config_for(p, 5, 2e4, 5e2, 21, 20));
    auto mean_se = [](const SimResult& r) {
        return std::accumulate(r.occupancy_se.begin(), r.occupancy_se.end(),
                               0.0) /
               static_cast<double>(r.occupancy_se.size());
    };
    const double ratio = mean_se(shorter) / mean_se(longer);
    // Quadrupled measurement window: the ratio should sit near 2.
    CHECK(ratio > 1.2);
    CHECK(ratio < 3.3);
}

TEST_CASE("sim: six sites agree with the exact chain") {
    const AsepParams p{0.8, 0.7, 0.1, 0.1, 0.0};
    const SimResult r = simulate(config_for(p, 6, 6e4, 2e3, 5, 16));
    const Generator gen = build_generator(p, 6);
    const std::vector<double>& pi = stationary(gen).probs;
    std::vector<double> occ(6, 0.0), law(7, 0.0);
    for (size_t s = 0; s < pi.size(); ++s) {
        int pop = 0;
        for (int j = 0; j < 6; ++j) {
            if (s & (1ull << j)) {
                occ[j] += pi[s];
                ++pop;
            }
        }
        law[pop] += pi[s];
    }
    for (int j = 0; j < 6; ++j) {
        CHECK(std::fabs(r.occupancy[j] - occ[j]) <= 4.0 * r.occupancy_se[j]);
    }
    double tv = 0.0;
    for (int k = 0; k <= 6; ++k) tv += std::fabs(r.count_hist[k] - law[k]);
    CHECK(0.5 * tv <= 0.03);
}

TEST_CASE("sim: boundary fluxes balance and match the exact current") {
    const AsepParams p{1.2, 1.1, 0.4, 0.3, 0.6};
    const SimResult r = simulate(config_for(p, 5, 4e4, 2e3, 9, 16));
    // The hop asymmetry is already absorbed into the normalization ratio.
    const double exact = partition(p, 4) / partition(p, 5);
    CHECK(std::fabs(r.flux_left - exact) <= 4.0 * r.flux_left_se);
    CHECK(std::fabs(r.flux_right - exact) <= 4.0 * r.flux_right_se);
    CHECK(std::fabs(r.flux_left - r.flux_right) <=
          4.0 * (r.flux_left_se + r.flux_right_se));
    const double total = std::accumulate(r.count_hist.begin(),
                                         r.count_hist.end(), 0.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}
