#pragma once

#include <cstdint>
#include <vector>

#include "asepqh/params.hpp"
#include "asepqh/quadrature.hpp"

namespace asepqh {

// Exact continuous-time Markov chain on {0,1}^N. Configurations are encoded
// as integers with site 1 in the least significant bit. Rates: insertion at
// site 1 at rate alpha, extraction there at rate gamma; extraction at site N
// at rate beta, insertion there at rate delta; right hops at rate 1 and left
// hops at rate q, both blocked by an occupied target.
class Generator {
public:
    Generator(const AsepParams& p, int n);

    int sites() const { return n_; }
    std::int64_t states() const { return std::int64_t(1) << n_; }
    const AsepParams& params() const { return p_; }

    // Off-diagonal transitions out of state s as (target, rate) pairs; at
    // most N+3 of them. The diagonal is minus their sum.
    std::vector<std::pair<std::int64_t, double>> transitions_from(
        std::int64_t s) const;
    double exit_rate(std::int64_t s) const;

    // Uniform bound on every exit rate: max(alpha,gamma) + max(beta,delta)
    // + (N-1) max(1,q).
    double uniformization_rate() const;

private:
    AsepParams p_;
    int n_;
};

Generator build_generator(const AsepParams& p, int n);

// Stationary distribution with residual control.
struct StationaryTable {
    int n = 0;
    std::vector<double> probs;
};

// Dense solve for N <= 12; uniformized power iteration for larger N (up to
// 20). Throws SingularSystem if the residual target 1e-10 is not reached.
StationaryTable stationary(const Generator& gen,
                           ExecMode mode = default_exec_mode());

// The two solver routes, callable directly so they can be cross-checked at
// sizes where both apply.
StationaryTable stationary_dense(const Generator& gen);
StationaryTable stationary_power(const Generator& gen,
                                 ExecMode mode = default_exec_mode(),
                                 long max_sweeps = 5000000L);

// max_s |(pi Q)_s| for a probability vector over the chain's states.
double stationary_residual(const Generator& gen,
                           const std::vector<double>& probs);

// E[prod_j t_j^{tau_j}]; throws LengthMismatch unless t has N entries.
double joint_gf(const StationaryTable& table, const std::vector<double>& t);

// Site marginals <tau_j>, j = 1..N.
std::vector<double> occupancy_profile(const StationaryTable& table);

// Law of the total particle count, length N+1.
std::vector<double> count_distribution(const StationaryTable& table);

} // namespace asepqh
