#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "asepqh/ansatz.hpp"
#include "asepqh/errors.hpp"
#include "asepqh/ldp.hpp"
#include "asepqh/oracle.hpp"
#include "asepqh/params.hpp"
#include "asepqh/semiinf.hpp"
#include "asepqh/sim.hpp"
#include "asepqh/validate.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Options {
    asepqh::AsepParams p;
    std::string out = "-";
    int threads = 0;

    int n = 2;
    std::string method = "oracle";
    std::string lambda_grid;
    std::string rate_grid;
    int empirical_n = 0;
    double u = 1.0;
    int k = 1;
    std::vector<double> times;
    double total_time = 1e4;
    double burn_in = 1e2;
    std::uint64_t seed = 1;
    int batches = 10;
    std::string profile_csv;
    std::string level = "quick";
};

void apply_threads(int requested) {
    int t = requested;
    if (t <= 0) {
        if (const char* env = std::getenv("ASEPQH_THREADS")) t = std::atoi(env);
    }
    if (t <= 0) {
        if (const char* env = std::getenv("OMP_NUM_THREADS")) t = std::atoi(env);
    }
#ifdef _OPENMP
    if (t > 0) omp_set_num_threads(t);
#else
    (void)t;
#endif
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path);
    if (!f) throw asepqh::DomainError("cannot open output path " + path);
    f << content;
}

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json manifest(const std::string& command, const json& parameters,
              double wall_seconds, const std::vector<std::string>& outputs) {
    return json{{"command", command},
                {"parameters", parameters},
                {"tool_version", kVersion},
                {"wall_time_s", wall_seconds},
                {"outputs", outputs}};
}

json params_json(const Options& o) {
    return json{{"alpha", o.p.alpha}, {"beta", o.p.beta}, {"gamma", o.p.gamma},
                {"delta", o.p.delta}, {"q", o.p.q}};
}

std::vector<double> parse_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0.0 || hi < lo) {
        throw asepqh::DomainError("grid must be lo:hi:step with step > 0, got " +
                                  text);
    }
    std::vector<double> xs;
    for (double x = lo; x <= hi + 0.5 * step; x += step) xs.push_back(x);
    return xs;
}

std::string config_string(std::int64_t s, int n) {
    std::string str(n, '0');
    for (int j = 0; j < n; ++j) {
        if ((s >> j) & 1) str[j] = '1';
    }
    return str;
}

int emit(const Options& o, const std::string& command, const json& parameters,
         const std::string& payload, const std::function<double()>& wall,
         const std::vector<std::string>& extra_outputs = {}) {
    std::vector<std::string> outputs = {o.out};
    outputs.insert(outputs.end(), extra_outputs.begin(), extra_outputs.end());
    write_text(o.out, payload);
    if (o.out != "-") {
        std::cout << manifest(command, parameters, wall(), outputs).dump(2) << "\n";
    }
    return 0;
}

int run_params(const Options& o, const std::function<double()>& wall) {
    const asepqh::AwParams aw = asepqh::derive_aw(o.p);
    const asepqh::PhaseInfo info = asepqh::phase_info(aw);
    json result{{"A", aw.a},       {"B", aw.b},
                {"C", aw.c},       {"D", aw.d},
                {"rho0", info.rho0}, {"rho1", info.rho1},
                {"phase", asepqh::phase_name(info.phase)},
                {"J", asepqh::current(aw)}};
    json body{{"manifest", manifest("params", params_json(o), wall(), {o.out})},
              {"result", result}};
    write_text(o.out, body.dump(2) + "\n");
    return 0;
}

int run_stationary(const Options& o, const std::function<double()>& wall) {
    json parameters = params_json(o);
    parameters["n"] = o.n;
    parameters["method"] = o.method;
    std::ostringstream csv;
    if (o.method == "oracle") {
        const asepqh::StationaryTable table =
            asepqh::stationary(asepqh::build_generator(o.p, o.n));
        std::vector<std::pair<std::string, double>> rows;
        for (std::int64_t s = 0; s < std::int64_t(table.probs.size()); ++s) {
            rows.emplace_back(config_string(s, o.n), table.probs[s]);
        }
        std::sort(rows.begin(), rows.end());
        csv << "configuration,probability\n";
        for (const auto& [cfg, prob] : rows) {
            csv << cfg << "," << fmt17(prob) << "\n";
        }
    } else if (o.method == "ansatz") {
        const std::vector<double> prof = asepqh::profile_exact(o.p, o.n);
        const std::vector<double> law =
            asepqh::count_gf_poly(o.p, o.n).probabilities();
        csv << "kind,index,value\n";
        for (int j = 1; j <= o.n; ++j) {
            csv << "site_occupancy," << j << "," << fmt17(prof[j - 1]) << "\n";
        }
        for (int k = 0; k <= o.n; ++k) {
            csv << "count_probability," << k << "," << fmt17(law[k]) << "\n";
        }
    } else {
        throw asepqh::DomainError("method must be oracle or ansatz, got " +
                                  o.method);
    }
    return emit(o, "stationary", parameters, csv.str(), wall);
}

int run_profile(const Options& o, const std::function<double()>& wall) {
    json parameters = params_json(o);
    parameters["n"] = o.n;
    const std::vector<double> prof = asepqh::profile_exact(o.p, o.n);
    std::ostringstream csv;
    csv << "site,occupancy\n";
    for (int j = 1; j <= o.n; ++j) {
        csv << j << "," << fmt17(prof[j - 1]) << "\n";
    }
    return emit(o, "profile", parameters, csv.str(), wall);
}

int run_partition(const Options& o, const std::function<double()>& wall) {
    json parameters = params_json(o);
    parameters["n"] = o.n;
    const double ansatz = asepqh::partition(o.p, o.n);
    const double quad = asepqh::partition_via_moments(o.p, o.n);
    const double gap = std::fabs(ansatz - quad) /
                       std::max({std::fabs(ansatz), std::fabs(quad), 1e-300});
    json result{{"K_N", ansatz},
                {"route_ansatz", ansatz},
                {"route_quadrature", quad},
                {"relative_gap", gap}};
    json body{{"manifest", manifest("partition", parameters, wall(), {o.out})},
              {"result", result}};
    write_text(o.out, body.dump(2) + "\n");
    return 0;
}

int run_ldp(const Options& o, const std::function<double()>& wall) {
    if (o.lambda_grid.empty() == o.rate_grid.empty()) {
        throw asepqh::DomainError("give exactly one of --lambda or --rate");
    }
    json parameters = params_json(o);
    const asepqh::AwParams aw = asepqh::derive_aw(o.p);
    std::ostringstream csv;
    if (!o.lambda_grid.empty()) {
        parameters["lambda"] = o.lambda_grid;
        if (o.empirical_n > 0) parameters["empirical_n"] = o.empirical_n;
        csv << (o.empirical_n > 0 ? "lambda,Lambda,empirical\n" : "lambda,Lambda\n");
        for (double lam : parse_grid(o.lambda_grid)) {
            csv << fmt17(lam) << "," << fmt17(asepqh::Lambda(lam, aw));
            if (o.empirical_n > 0) {
                csv << ","
                    << fmt17(asepqh::empirical_Lambda(o.p, o.empirical_n, lam));
            }
            csv << "\n";
        }
    } else {
        parameters["rate"] = o.rate_grid;
        csv << "x,I\n";
        for (double x : parse_grid(o.rate_grid)) {
            csv << fmt17(x) << "," << fmt17(asepqh::rate_I(x, aw)) << "\n";
        }
    }
    return emit(o, "ldp", parameters, csv.str(), wall);
}

int run_semiinf(const Options& o, const std::function<double()>& wall) {
    json parameters = params_json(o);
    parameters["u"] = o.u;
    parameters["k"] = o.k;
    std::vector<double> t = o.times;
    if (t.empty()) t.assign(o.k, std::min(1.0, o.u));
    if (int(t.size()) != o.k) {
        throw asepqh::DomainError("expected " + std::to_string(o.k) +
                                  " times, got " + std::to_string(t.size()));
    }
    // Any positive ordering is accepted here; the generating function is
    // symmetric in the times, so sort before applying the monotone contract.
    std::sort(t.begin(), t.end());
    parameters["times"] = t;
    const asepqh::AwParams aw = asepqh::derive_aw(o.p);
    const asepqh::TildeParams tp = asepqh::tilde_params(aw, o.u);
    json result{{"u", o.u},
                {"k", o.k},
                {"times", t},
                {"gf", asepqh::mu_gf(aw, o.u, t)},
                {"deterministic", tp.deterministic},
                {"zeta", asepqh::zeta(aw, o.u)},
                {"current", asepqh::current(aw)}};
    if (tp.deterministic) {
        result["site_density"] = asepqh::bernoulli_site_density(aw);
    }
    json body{{"manifest", manifest("semiinf", parameters, wall(), {o.out})},
              {"result", result}};
    write_text(o.out, body.dump(2) + "\n");
    return 0;
}

int run_simulate(const Options& o, const std::function<double()>& wall) {
    json parameters = params_json(o);
    parameters["n"] = o.n;
    parameters["time"] = o.total_time;
    parameters["burnin"] = o.burn_in;
    parameters["seed"] = o.seed;
    parameters["batches"] = o.batches;
    asepqh::SimConfig cfg;
    cfg.asep = o.p;
    cfg.n = o.n;
    cfg.total_time = o.total_time;
    cfg.burn_in_time = o.burn_in;
    cfg.seed = o.seed;
    cfg.batch_count = o.batches;
    const asepqh::SimResult sim = asepqh::simulate(cfg);
    json result{{"n", sim.n},
                {"rng", sim.rng_id},
                {"seed", sim.seed},
                {"events", sim.events},
                {"measured_time", sim.measured_time},
                {"occupancy", sim.occupancy},
                {"occupancy_se", sim.occupancy_se},
                {"count_hist", sim.count_hist},
                {"flux_left", sim.flux_left},
                {"flux_left_se", sim.flux_left_se},
                {"flux_right", sim.flux_right},
                {"flux_right_se", sim.flux_right_se}};
    std::vector<std::string> outputs = {o.out};
    if (!o.profile_csv.empty()) {
        std::ostringstream csv;
        csv << "site,occupancy,standard_error\n";
        for (int j = 1; j <= sim.n; ++j) {
            csv << j << "," << fmt17(sim.occupancy[j - 1]) << ","
                << fmt17(sim.occupancy_se[j - 1]) << "\n";
        }
        write_text(o.profile_csv, csv.str());
        outputs.push_back(o.profile_csv);
    }
    json body{{"manifest", manifest("simulate", parameters, wall(), outputs)},
              {"result", result}};
    write_text(o.out, body.dump(2) + "\n");
    return 0;
}

int run_validate(const Options& o, const std::function<double()>& wall) {
    if (o.level != "quick" && o.level != "full") {
        throw asepqh::DomainError("level must be quick or full, got " + o.level);
    }
    const std::vector<asepqh::CriterionResult> results =
        asepqh::run_acceptance(o.level == "full");
    json items = json::array();
    for (const asepqh::CriterionResult& r : results) {
        items.push_back(json{{"id", r.id},
                             {"name", r.name},
                             {"pass", r.pass},
                             {"detail", r.detail}});
    }
    const bool ok = asepqh::all_passed(results);
    json body{{"manifest", manifest("validate", json{{"level", o.level}}, wall(),
                                    {o.out})},
              {"result", json{{"level", o.level},
                              {"all_pass", ok},
                              {"criteria", items}}}};
    write_text(o.out, body.dump(2) + "\n");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary-measure calculator for the open-boundary "
                 "asymmetric simple exclusion process"};
    app.require_subcommand(1);

    Options o;
    auto add_rates = [&](CLI::App* sub) {
        sub->add_option("--alpha", o.p.alpha, "left entry rate");
        sub->add_option("--beta", o.p.beta, "right exit rate");
        sub->add_option("--gamma", o.p.gamma, "left exit rate");
        sub->add_option("--delta", o.p.delta, "right entry rate");
        sub->add_option("--q", o.p.q, "left-hop rate");
        sub->add_option("--out", o.out, "output path or - for stdout");
        sub->add_option("--threads", o.threads, "worker thread count");
    };

    CLI::App* cparams = app.add_subcommand("params", "phase and boundary data");
    add_rates(cparams);

    CLI::App* cstat = app.add_subcommand("stationary", "stationary law");
    add_rates(cstat);
    cstat->add_option("--n", o.n, "number of sites")->required();
    cstat->add_option("--method", o.method, "oracle or ansatz");

    CLI::App* cprof = app.add_subcommand("profile", "site occupancies");
    add_rates(cprof);
    cprof->add_option("--n", o.n, "number of sites")->required();

    CLI::App* cpart = app.add_subcommand("partition", "normalization constant");
    add_rates(cpart);
    cpart->add_option("--n", o.n, "number of sites")->required();

    CLI::App* cldp = app.add_subcommand("ldp", "large-deviation grids");
    add_rates(cldp);
    cldp->add_option("--lambda", o.lambda_grid, "lo:hi:step grid for Lambda");
    cldp->add_option("--rate", o.rate_grid, "lo:hi:step grid for I");
    cldp->add_option("--empirical-n", o.empirical_n,
                     "add finite-size empirical column at this N");

    CLI::App* csemi = app.add_subcommand("semiinf", "semi-infinite limits");
    add_rates(csemi);
    csemi->add_option("--u", o.u, "boundary weight (>= 1)");
    csemi->add_option("--k", o.k, "number of sites kept");
    csemi->add_option("--times", o.times, "generating-function arguments")
        ->delimiter(',');

    CLI::App* csim = app.add_subcommand("simulate", "event-driven simulation");
    add_rates(csim);
    csim->add_option("--n", o.n, "number of sites")->required();
    csim->add_option("--time", o.total_time, "total simulated time");
    csim->add_option("--burnin", o.burn_in, "discarded initial time");
    csim->add_option("--seed", o.seed, "random seed");
    csim->add_option("--batches", o.batches, "batch count for error bars");
    csim->add_option("--profile-csv", o.profile_csv,
                     "also write occupancy CSV to this path");

    CLI::App* cval = app.add_subcommand("validate", "acceptance suite");
    cval->add_option("--level", o.level, "quick or full");
    cval->add_option("--out", o.out, "output path or - for stdout");
    cval->add_option("--threads", o.threads, "worker thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    apply_threads(o.threads);
    const auto start = std::chrono::steady_clock::now();
    auto wall = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    };

    try {
        if (app.got_subcommand(cparams)) return run_params(o, wall);
        if (app.got_subcommand(cstat)) return run_stationary(o, wall);
        if (app.got_subcommand(cprof)) return run_profile(o, wall);
        if (app.got_subcommand(cpart)) return run_partition(o, wall);
        if (app.got_subcommand(cldp)) return run_ldp(o, wall);
        if (app.got_subcommand(csemi)) return run_semiinf(o, wall);
        if (app.got_subcommand(csim)) return run_simulate(o, wall);
        if (app.got_subcommand(cval)) return run_validate(o, wall);
    } catch (const asepqh::Error& e) {
        nlohmann::json err{{"error", e.type()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", "InternalError"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 0;
}
