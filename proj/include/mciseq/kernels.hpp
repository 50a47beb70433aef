#pragma once

#include <cstddef>

// Dense matrix kernels. Two implementations with identical summation order:
// `serial` is the reference, `par` distributes independent output rows across
// OpenMP threads. Because each output element is computed by exactly one
// thread with the same inner-loop order, both variants are bitwise equal.
namespace mciseq::kernels {

namespace serial {
// c(m x n) = a(m x k) * b(k x n)
void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
// c(m x n) = a(m x k) * b(n x k)^T
void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
// c(m x n) = a(k x m)^T * b(k x n)
void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
}  // namespace serial

namespace par {
void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
}  // namespace par

// Runtime switch, defaults to the parallel kernels.
bool parallel_enabled();
void set_parallel(bool on);

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);
void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t k, std::size_t n);

}  // namespace mciseq::kernels
