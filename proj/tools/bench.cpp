#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "asepqh/ansatz.hpp"
#include "asepqh/awdist.hpp"
#include "asepqh/oracle.hpp"
#include "asepqh/params.hpp"
#include "asepqh/quadrature.hpp"

namespace {

double time_ms(const std::function<void()>& fn) {
    // One warm-up pass, then the timed pass.
    fn();
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* label, const std::function<void()>& fn) {
    asepqh::set_default_exec_mode(asepqh::ExecMode::Serial);
    const double serial = time_ms(fn);
    asepqh::set_default_exec_mode(asepqh::ExecMode::Parallel);
    const double parallel = time_ms(fn);
    std::printf("%-32s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n",
                label, serial, parallel, serial / parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both paths run serially\n");
#endif
    const asepqh::AsepParams p{0.6, 0.9, 0.3, 0.2, 0.3};
    const asepqh::AwParams aw = asepqh::derive_aw(p);

    report("measure build (25.6k nodes)", [&]() {
        // Loose tolerance: the first doubling step already certifies, so the
        // work is a fixed 25600 + 51200 node evaluation pass.
        asepqh::QuadSpec spec;
        spec.n0 = 25600;
        spec.max_n = 102400;
        spec.tol = 1e-6;
        asepqh::marginal_z(aw, 1.0, spec);
    });

    report("count polynomial, N = 300", [&]() {
        asepqh::count_gf_poly(p, 300);
    });

    report("power iteration, N = 14", [&]() {
        const asepqh::Generator gen = asepqh::build_generator(p, 14);
        asepqh::stationary_power(gen);
    });

    asepqh::set_default_exec_mode(asepqh::ExecMode::Parallel);
    return 0;
}
