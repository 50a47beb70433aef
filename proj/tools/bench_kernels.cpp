// Times the serial reference kernels against the OpenMP variants on the
// matrix shapes the encoder actually uses, and verifies bitwise agreement.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "mciseq/kernels.hpp"
#include "mciseq/rng.hpp"

using namespace mciseq;
namespace chrono = std::chrono;

namespace {

using KernelFn = void (*)(const double*, const double*, double*, std::size_t, std::size_t,
                          std::size_t);

double time_ms(KernelFn fn, const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n, int reps) {
    const auto t0 = chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn(a, b, c, m, k, n);
    const auto t1 = chrono::steady_clock::now();
    return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

struct Case {
    const char* name;
    std::size_t m, k, n;
};

}  // namespace

int main() {
    // window x model_dim projections, attention scores, FFN
    const Case cases[] = {
        {"qkv projection (200x769 @ 769x96)", 200, 769, 96},
        {"attention scores (200x96 @ 96x200)", 200, 96, 200},
        {"output projection (200x768 @ 768x769)", 200, 768, 769},
        {"ffn layer (200x769 @ 769x128)", 200, 769, 128},
        {"mlp hidden (1x769 @ 769x384)", 1, 769, 384},
    };

    Rng rng(42);
    std::printf("%-42s %10s %10s %8s %8s\n", "case", "serial ms", "omp ms", "speedup", "match");
    for (const Case& c : cases) {
        std::vector<double> a(c.m * c.k), b(c.k * c.n), out_s(c.m * c.n), out_p(c.m * c.n);
        for (double& v : a) v = rng.uniform(-1, 1);
        for (double& v : b) v = rng.uniform(-1, 1);

        const int reps = c.m * c.k * c.n > 10'000'000 ? 10 : 50;
        const double ts = time_ms(kernels::serial::matmul_nn, a.data(), b.data(), out_s.data(),
                                  c.m, c.k, c.n, reps);
        const double tp = time_ms(kernels::par::matmul_nn, a.data(), b.data(), out_p.data(),
                                  c.m, c.k, c.n, reps);
        const bool match =
            std::memcmp(out_s.data(), out_p.data(), out_s.size() * sizeof(double)) == 0;
        std::printf("%-42s %10.3f %10.3f %7.2fx %8s\n", c.name, ts, tp, ts / tp,
                    match ? "bitwise" : "DIFFERS");
        if (!match) return 1;
    }
    return 0;
}
