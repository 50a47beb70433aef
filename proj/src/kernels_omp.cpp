#include "mciseq/kernels.hpp"

#include <cstdint>

// Row-parallel variants. The per-row computation (including summation order)
// is identical to kernels::serial, so results match the reference bitwise for
// any thread count. Matrices below the work threshold go straight to the
// serial kernels; fork/join costs more than the multiply there.
namespace mciseq::kernels::par {

namespace {
constexpr std::size_t kMinParallelWork = 1 << 16;
}

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (m * k * n < kMinParallelWork || m == 1) {
        serial::matmul_nn(a, b, c, m, k, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
        const double* ai = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (m * k * n < kMinParallelWork || m == 1) {
        serial::matmul_nt(a, b, c, m, k, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
            ci[j] = s;
        }
    }
}

void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (m * k * n < kMinParallelWork || m == 1) {
        serial::matmul_tn(a, b, c, m, k, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += a[p * m + i] * b[p * n + j];
            ci[j] = s;
        }
    }
}

}  // namespace mciseq::kernels::par
