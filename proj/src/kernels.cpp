#include "mciseq/kernels.hpp"

#include <atomic>

namespace mciseq::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (parallel_enabled())
        par::matmul_nn(a, b, c, m, k, n);
    else
        serial::matmul_nn(a, b, c, m, k, n);
}

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (parallel_enabled())
        par::matmul_nt(a, b, c, m, k, n);
    else
        serial::matmul_nt(a, b, c, m, k, n);
}

void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (parallel_enabled())
        par::matmul_tn(a, b, c, m, k, n);
    else
        serial::matmul_tn(a, b, c, m, k, n);
}

}  // namespace mciseq::kernels
