#include "asepqh/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "asepqh/errors.hpp"

namespace asepqh {

namespace {

// Fenwick-indexed nonnegative rates supporting point updates, prefix sums
// and sampling of the slot whose cumulative range contains a value.
class RateTree {
public:
    explicit RateTree(int n) : n_(n), tree_(n + 1, 0.0), raw_(n, 0.0) {}

    double total() const { return prefix(n_); }
    double rate(int i) const { return raw_[i]; }

    void set(int i, double value) {
        const double delta = value - raw_[i];
        if (delta == 0.0) return;
        raw_[i] = value;
        for (int k = i + 1; k <= n_; k += k & -k) tree_[k] += delta;
    }

    // Smallest slot index with prefix sum exceeding v.
    int sample(double v) const {
        int pos = 0;
        int mask = 1;
        while ((mask << 1) <= n_) mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            const int next = pos + mask;
            if (next <= n_ && tree_[next] < v) {
                v -= tree_[next];
                pos = next;
            }
        }
        return std::min(pos, n_ - 1);
    }

private:
    double prefix(int i) const {
        double s = 0.0;
        for (int k = i; k > 0; k -= k & -k) s += tree_[k];
        return s;
    }

    int n_;
    std::vector<double> tree_;
    std::vector<double> raw_;
};

// Window accumulator with batch-means error bars: values are time-weighted
// over [burn_in, total], split across equal-length batches.
struct BatchStats {
    int batches;
    double start, length;
    std::vector<double> sums;  // batches * dims
    std::vector<double> time;  // per batch
    int dims;

    BatchStats(int b, double t0, double t1, int d)
        : batches(b), start(t0), length((t1 - t0) / b),
          sums(std::size_t(b) * d, 0.0), time(b, 0.0), dims(d) {}

    int batch_of(double t) const {
        const int b = int((t - start) / length);
        return std::min(std::max(b, 0), batches - 1);
    }
};

double mean_of(const BatchStats& st, int dim) {
    double num = 0.0, den = 0.0;
    for (int b = 0; b < st.batches; ++b) {
        num += st.sums[std::size_t(b) * st.dims + dim];
        den += st.time[b];
    }
    return num / den;
}

double se_of(const BatchStats& st, int dim) {
    std::vector<double> means(st.batches);
    for (int b = 0; b < st.batches; ++b) {
        means[b] = st.sums[std::size_t(b) * st.dims + dim] / st.time[b];
    }
    double avg = 0.0;
    for (double m : means) avg += m;
    avg /= st.batches;
    double var = 0.0;
    for (double m : means) var += (m - avg) * (m - avg);
    var /= double(st.batches) * double(st.batches - 1);
    return std::sqrt(var);
}

} // namespace

SimResult simulate(const SimConfig& config) {
    validate(config.asep);
    const int n = config.n;
    if (n < 1) throw DomainError("need at least one site");
    if (!(config.burn_in_time >= 0.0 &&
          config.total_time > config.burn_in_time)) {
        throw DomainError("need total_time > burn_in_time >= 0");
    }
    if (config.batch_count < 2) throw DomainError("need at least 2 batches");

    const AsepParams& p = config.asep;
    std::vector<std::uint8_t> occ(n, 0);
    int particles = 0;

    // Slots: 0 = left boundary, 1..n-1 = bond (site j, j+1), n = right
    // boundary. For n = 1 the two boundary slots act on the same site.
    RateTree rates(n + 1);
    auto slot_rate = [&](int slot) -> double {
        if (slot == 0) return occ[0] ? p.gamma : p.alpha;
        if (slot == n) return occ[n - 1] ? p.beta : p.delta;
        const int j = slot - 1;
        if (occ[j] && !occ[j + 1]) return 1.0;
        if (!occ[j] && occ[j + 1]) return p.q;
        return 0.0;
    };
    for (int s = 0; s <= n; ++s) rates.set(s, slot_rate(s));

    const double t0 = config.burn_in_time;
    const double t1 = config.total_time;
    BatchStats occ_stats(config.batch_count, t0, t1, n);
    BatchStats hist_stats(config.batch_count, t0, t1, n + 1);
    // Flux dims: left in, left out, right in, right out (event counts).
    BatchStats flux_stats(config.batch_count, t0, t1, 4);

    auto weigh = [&](double from, double to) {
        // Distribute the interval across batches, adding time-weighted state.
        double cur = std::max(from, t0);
        const double end = std::min(to, t1);
        while (cur < end) {
            const int b = occ_stats.batch_of(cur);
            double stop = std::min(end, t0 + (b + 1) * occ_stats.length);
            if (stop <= cur) stop = end; // boundary rounding guard
            const double w = stop - cur;
            occ_stats.time[b] += w;
            hist_stats.time[b] += w;
            flux_stats.time[b] += w;
            for (int j = 0; j < n; ++j) {
                if (occ[j]) occ_stats.sums[std::size_t(b) * n + j] += w;
            }
            hist_stats.sums[std::size_t(b) * (n + 1) + particles] += w;
            cur = stop;
        }
    };

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double t = 0.0;
    long long events = 0;

    while (true) {
        const double total = rates.total();
        if (!(total > 0.0)) {
            weigh(t, t1); // absorbing configuration, e.g. all rates zero
            break;
        }
        const double dt = -std::log1p(-unif(rng)) / total;
        const double tnext = t + dt;
        if (tnext > t0) weigh(t, tnext);
        if (tnext >= t1) break;
        int slot = rates.sample(unif(rng) * total);
        // Prefix-sum drift can land a draw on a zero-rate slot; re-draw.
        while (rates.rate(slot) == 0.0) slot = rates.sample(unif(rng) * total);
        if (tnext >= t0) ++events;

        if (slot == 0 || slot == n) {
            const int site = (slot == 0) ? 0 : n - 1;
            const bool entering = !occ[site];
            occ[site] ^= 1;
            particles += entering ? 1 : -1;
            if (tnext >= t0) {
                const int b = flux_stats.batch_of(tnext);
                const int dim = (slot == 0 ? 0 : 2) + (entering ? 0 : 1);
                flux_stats.sums[std::size_t(b) * 4 + dim] += 1.0;
            }
        } else {
            const int j = slot - 1;
            occ[j] ^= 1;
            occ[j + 1] ^= 1;
        }

        // Refresh the slots whose rates involve a touched site.
        const int lo = (slot == n) ? n - 1 : std::max(0, slot - 1);
        const int hi = (slot == 0) ? 1 : std::min(n, slot + 1);
        for (int s = lo; s <= hi; ++s) rates.set(s, slot_rate(s));
        t = tnext;
    }

    SimResult out;
    out.n = n;
    out.rng_id = "mt19937_64";
    out.seed = config.seed;
    out.events = events;
    out.measured_time = t1 - t0;
    out.occupancy.resize(n);
    out.occupancy_se.resize(n);
    for (int j = 0; j < n; ++j) {
        out.occupancy[j] = mean_of(occ_stats, j);
        out.occupancy_se[j] = se_of(occ_stats, j);
    }
    out.count_hist.resize(n + 1);
    for (int k = 0; k <= n; ++k) out.count_hist[k] = mean_of(hist_stats, k);
    const double li = mean_of(flux_stats, 0), lo_ = mean_of(flux_stats, 1);
    const double ri = mean_of(flux_stats, 2), ro = mean_of(flux_stats, 3);
    out.flux_left = li - lo_;
    out.flux_right = ro - ri;
    // SE of a difference of batch means via the per-batch differences.
    {
        BatchStats net(config.batch_count, t0, t1, 2);
        net.time = flux_stats.time;
        for (int b = 0; b < config.batch_count; ++b) {
            net.sums[std::size_t(b) * 2 + 0] =
                flux_stats.sums[std::size_t(b) * 4 + 0] -
                flux_stats.sums[std::size_t(b) * 4 + 1];
            net.sums[std::size_t(b) * 2 + 1] =
                flux_stats.sums[std::size_t(b) * 4 + 3] -
                flux_stats.sums[std::size_t(b) * 4 + 2];
        }
        out.flux_left_se = se_of(net, 0);
        out.flux_right_se = se_of(net, 1);
    }
    return out;
}

} // namespace asepqh
