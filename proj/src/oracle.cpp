#include "asepqh/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>

#include "asepqh/errors.hpp"

namespace asepqh {

namespace {

constexpr int kDenseMaxSites = 12;
constexpr int kIterMaxSites = 20;
constexpr double kResidualTarget = 1e-10;

// Incoming transitions (pre, rate) with pre -> s an allowed move. Mirrors
// transitions_from: every move flips one bit or swaps a 01/10 pair, so the
// predecessor is recovered by the same bit flips.
void arrivals_to(const Generator& gen, std::int64_t s,
                 std::vector<std::pair<std::int64_t, double>>& out) {
    out.clear();
    const AsepParams& p = gen.params();
    const int n = gen.sites();
    const std::int64_t top = std::int64_t(1) << (n - 1);
    if (s & 1) {
        if (p.alpha > 0.0) out.emplace_back(s & ~std::int64_t(1), p.alpha);
    } else {
        if (p.gamma > 0.0) out.emplace_back(s | 1, p.gamma);
    }
    if (s & top) {
        if (p.delta > 0.0) out.emplace_back(s ^ top, p.delta);
    } else {
        if (p.beta > 0.0) out.emplace_back(s | top, p.beta);
    }
    for (int j = 0; j + 1 < n; ++j) {
        const bool a = (s >> j) & 1;
        const bool b = (s >> (j + 1)) & 1;
        if (a == b) continue;
        const std::int64_t mask = (std::int64_t(1) << j) | (std::int64_t(1) << (j + 1));
        if (!a && b) {
            out.emplace_back(s ^ mask, 1.0);
        } else if (p.q > 0.0) {
            out.emplace_back(s ^ mask, p.q);
        }
    }
}

} // namespace

StationaryTable stationary_dense(const Generator& gen) {
    const std::int64_t m = gen.states();
    // Columns of A hold Q rows (A = Q^T); the last row is replaced by ones
    // to impose normalization, with matching unit right-hand side.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (std::int64_t s = 0; s < m; ++s) {
        double exit = 0.0;
        for (const auto& [t, rate] : gen.transitions_from(s)) {
            A(t, s) += rate;
            exit += rate;
        }
        A(s, s) -= exit;
    }
    A.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(m - 1) = 1.0;
    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(A);
    Eigen::VectorXd pi = lu.solve(rhs);

    StationaryTable table;
    table.n = gen.sites();
    table.probs.assign(pi.data(), pi.data() + m);
    const double total =
        std::accumulate(table.probs.begin(), table.probs.end(), 0.0);
    for (double& v : table.probs) v /= total;
    const double res = stationary_residual(gen, table.probs);
    if (!(res <= kResidualTarget)) {
        throw SingularSystem("stationary solve residual " + std::to_string(res));
    }
    return table;
}

StationaryTable stationary_power(const Generator& gen, ExecMode mode,
                                 long max_sweeps) {
    const std::int64_t m = gen.states();
    const double lam = gen.uniformization_rate();
    std::vector<double> w(m, 1.0 / double(m));
    std::vector<double> next(m, 0.0);
    double maxdiff = 0.0;
    const bool parallel = (mode == ExecMode::Parallel);
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        maxdiff = 0.0;
#pragma omp parallel if (parallel)
        {
            std::vector<std::pair<std::int64_t, double>> in;
            in.reserve(gen.sites() + 3);
            double local = 0.0;
#pragma omp for schedule(static) nowait
            for (std::int64_t s = 0; s < m; ++s) {
                double acc = w[s] * (1.0 - gen.exit_rate(s) / lam);
                arrivals_to(gen, s, in);
                for (const auto& [pre, rate] : in) acc += w[pre] * rate / lam;
                next[s] = acc;
                local = std::max(local, std::fabs(acc - w[s]));
            }
#pragma omp critical
            maxdiff = std::max(maxdiff, local);
        }
        w.swap(next);
        if (lam * maxdiff <= kResidualTarget) break;
        if ((sweep & 255) == 255) {
            double total = std::accumulate(w.begin(), w.end(), 0.0);
            for (double& v : w) v /= total;
        }
    }
    if (!(lam * maxdiff <= kResidualTarget)) {
        throw SingularSystem("power iteration stalled at residual " +
                             std::to_string(lam * maxdiff));
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;
    StationaryTable table;
    table.n = gen.sites();
    table.probs = std::move(w);
    return table;
}

Generator::Generator(const AsepParams& p, int n) : p_(p), n_(n) {
    validate(p);
    if (n < 1 || n > kIterMaxSites) {
        throw SizeLimitExceeded("chain size " + std::to_string(n) +
                                " outside [1, " + std::to_string(kIterMaxSites) + "]");
    }
}

std::vector<std::pair<std::int64_t, double>> Generator::transitions_from(
    std::int64_t s) const {
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(n_ + 3);
    const std::int64_t top = std::int64_t(1) << (n_ - 1);
    if (s & 1) {
        if (p_.gamma > 0.0) out.emplace_back(s & ~std::int64_t(1), p_.gamma);
    } else {
        if (p_.alpha > 0.0) out.emplace_back(s | 1, p_.alpha);
    }
    if (s & top) {
        if (p_.beta > 0.0) out.emplace_back(s ^ top, p_.beta);
    } else {
        if (p_.delta > 0.0) out.emplace_back(s | top, p_.delta);
    }
    for (int j = 0; j + 1 < n_; ++j) {
        const bool a = (s >> j) & 1;
        const bool b = (s >> (j + 1)) & 1;
        if (a == b) continue;
        const std::int64_t mask = (std::int64_t(1) << j) | (std::int64_t(1) << (j + 1));
        if (a && !b) {
            out.emplace_back(s ^ mask, 1.0);
        } else if (p_.q > 0.0) {
            out.emplace_back(s ^ mask, p_.q);
        }
    }
    return out;
}

double Generator::exit_rate(std::int64_t s) const {
    double exit = 0.0;
    const std::int64_t top = std::int64_t(1) << (n_ - 1);
    exit += (s & 1) ? p_.gamma : p_.alpha;
    exit += (s & top) ? p_.beta : p_.delta;
    for (int j = 0; j + 1 < n_; ++j) {
        const bool a = (s >> j) & 1;
        const bool b = (s >> (j + 1)) & 1;
        if (a && !b) exit += 1.0;
        if (!a && b) exit += p_.q;
    }
    return exit;
}

double Generator::uniformization_rate() const {
    return std::max(p_.alpha, p_.gamma) + std::max(p_.beta, p_.delta) +
           (n_ - 1) * std::max(1.0, p_.q);
}

Generator build_generator(const AsepParams& p, int n) { return Generator(p, n); }

StationaryTable stationary(const Generator& gen, ExecMode mode) {
    if (gen.sites() <= kDenseMaxSites) return stationary_dense(gen);
    return stationary_power(gen, mode, 5000000L);
}

double stationary_residual(const Generator& gen,
                           const std::vector<double>& probs) {
    const std::int64_t m = gen.states();
    if (std::int64_t(probs.size()) != m) {
        throw LengthMismatch("probability vector has " +
                             std::to_string(probs.size()) + " entries, expected " +
                             std::to_string(m));
    }
    double worst = 0.0;
    std::vector<std::pair<std::int64_t, double>> in;
    for (std::int64_t s = 0; s < m; ++s) {
        double flux = -probs[s] * gen.exit_rate(s);
        arrivals_to(gen, s, in);
        for (const auto& [pre, rate] : in) flux += probs[pre] * rate;
        worst = std::max(worst, std::fabs(flux));
    }
    return worst;
}

double joint_gf(const StationaryTable& table, const std::vector<double>& t) {
    if (int(t.size()) != table.n) {
        throw LengthMismatch("expected " + std::to_string(table.n) +
                             " weights, got " + std::to_string(t.size()));
    }
    const std::int64_t m = std::int64_t(1) << table.n;
    double acc = 0.0;
    for (std::int64_t s = 0; s < m; ++s) {
        double prod = table.probs[s];
        for (int j = 0; j < table.n; ++j) {
            if ((s >> j) & 1) prod *= t[j];
        }
        acc += prod;
    }
    return acc;
}

std::vector<double> occupancy_profile(const StationaryTable& table) {
    std::vector<double> prof(table.n, 0.0);
    const std::int64_t m = std::int64_t(1) << table.n;
    for (std::int64_t s = 0; s < m; ++s) {
        for (int j = 0; j < table.n; ++j) {
            if ((s >> j) & 1) prof[j] += table.probs[s];
        }
    }
    return prof;
}

std::vector<double> count_distribution(const StationaryTable& table) {
    std::vector<double> law(table.n + 1, 0.0);
    const std::int64_t m = std::int64_t(1) << table.n;
    for (std::int64_t s = 0; s < m; ++s) {
        law[__builtin_popcountll(static_cast<unsigned long long>(s))] +=
            table.probs[s];
    }
    return law;
}

} // namespace asepqh
