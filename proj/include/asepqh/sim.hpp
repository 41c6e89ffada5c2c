#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asepqh/params.hpp"

namespace asepqh {

struct SimConfig {
    AsepParams asep;
    int n = 1;
    double total_time = 0.0;
    double burn_in_time = 0.0;
    std::uint64_t seed = 0;
    int batch_count = 10;
};

struct SimResult {
    int n = 0;
    std::string rng_id;            // generator algorithm identifier
    std::uint64_t seed = 0;
    long long events = 0;          // events applied after burn-in start
    double measured_time = 0.0;    // total_time - burn_in_time

    std::vector<double> occupancy;     // time-averaged, per site
    std::vector<double> occupancy_se;  // batch-means standard errors
    std::vector<double> count_hist;    // particle-count law, sums to 1

    // Net boundary particle fluxes (in minus out per unit time); both equal
    // the stationary current in the long run.
    double flux_left = 0.0;
    double flux_left_se = 0.0;
    double flux_right = 0.0;
    double flux_right_se = 0.0;
};

// Event-driven exact simulation: exponential holding times at the total
// rate, event chosen proportionally to its rate via a Fenwick-indexed rate
// tree updated locally after each move. Deterministic for a fixed seed.
SimResult simulate(const SimConfig& config);

} // namespace asepqh
