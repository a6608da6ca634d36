// Micro-benchmark: parallel kernels against their serial reference
// implementations, with a bitwise-equality check on every result.
//
// Usage: bench_kernels [n] [reps]   (defaults: n = 2^22, reps = 5)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "hardy/kernels.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <class F>
double best_time_ms(int reps, const F& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        f();
        const auto t1 = clock_type::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

struct Row {
    std::string name;
    double serial_ms;
    double parallel_ms;
    bool bitwise_equal;
};

void print_rows(const std::vector<Row>& rows) {
    std::printf("%-12s %12s %12s %9s %9s\n", "kernel", "serial(ms)", "parallel(ms)", "speedup",
                "bitwise");
    for (const Row& r : rows) {
        std::printf("%-12s %12.3f %12.3f %8.2fx %9s\n", r.name.c_str(), r.serial_ms,
                    r.parallel_ms, r.serial_ms / r.parallel_ms,
                    r.bitwise_equal ? "equal" : "DIFFER");
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : (std::size_t{1} << 22);
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = unit(rng);
        b[i] = unit(rng);
    }

    std::printf("n = %zu, reps = %d, threads = %d\n\n", n, reps, hardy::kernels::max_threads());

    std::vector<Row> rows;
    double rs = 0.0, rp = 0.0;

    const double ts_sum = best_time_ms(reps, [&]() { rs = hardy::kernels::ref::sum(a); });
    const double tp_sum = best_time_ms(reps, [&]() { rp = hardy::kernels::sum(a); });
    rows.push_back({"sum", ts_sum, tp_sum, rs == rp});

    const double ts_dot = best_time_ms(reps, [&]() { rs = hardy::kernels::ref::dot(a, b); });
    const double tp_dot = best_time_ms(reps, [&]() { rp = hardy::kernels::dot(a, b); });
    rows.push_back({"dot", ts_dot, tp_dot, rs == rp});

    const auto g = [&](std::size_t i) { return a[i] * a[i] + b[i]; };
    const double ts_max =
        best_time_ms(reps, [&]() { rs = hardy::kernels::ref::map_max(n, g, -1e300); });
    const double tp_max =
        best_time_ms(reps, [&]() { rp = hardy::kernels::map_max(n, g, -1e300); });
    rows.push_back({"map_max", ts_max, tp_max, rs == rp});

    std::vector<double> out_s(n), out_p(n);
    const auto body_s = [&](std::size_t i) { out_s[i] = a[i] * b[i] + std::abs(a[i]); };
    const auto body_p = [&](std::size_t i) { out_p[i] = a[i] * b[i] + std::abs(a[i]); };
    const double ts_fe =
        best_time_ms(reps, [&]() { hardy::kernels::ref::for_each_index(n, body_s); });
    const double tp_fe = best_time_ms(reps, [&]() { hardy::kernels::for_each_index(n, body_p); });
    rows.push_back({"for_each", ts_fe, tp_fe, out_s == out_p});

    print_rows(rows);

    for (const Row& r : rows) {
        if (!r.bitwise_equal) {
            std::fprintf(stderr, "FAIL: %s parallel result differs from serial reference\n",
                         r.name.c_str());
            return 1;
        }
    }
    return 0;
}
