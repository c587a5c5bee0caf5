#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Arithmetic inner loops of the repertoire machinery. Every kernel has a
// scalar reference implementation and, where the host supports it, a SIMD
// variant selected once at startup. The two must agree bit-for-bit on the
// reductions used by the engine's deterministic tie-breaks, so reductions
// are performed in fixed blocked order in both variants.

namespace iit::kernels {

struct Dispatch {
    // y[i] *= x[i]
    void (*mul_inplace)(double* y, const double* x, size_t n);
    // y[i] = a[i] * b[i]
    void (*mul)(double* y, const double* a, const double* b, size_t n);
    // sum_i x[i]
    double (*sum)(const double* x, size_t n);
    // y[i] = 0.5 * (x[i] + x[i + stride]) for the lower half of each 2*stride block
    void (*fold_stride)(double* y, const double* x, size_t stride, size_t npairs);
    // sum_i p[i] * log2(p[i] / q[i]) restricted to p[i] > 0 (pointwise ID accumulation)
    double (*id_sum)(const double* p, const double* q, size_t n);
    const char* name;
};

const Dispatch& active();
// Force a specific variant ("scalar", "avx2", "neon"); returns false if unavailable.
bool select(const std::string& name);

namespace scalar {
void mul_inplace(double* y, const double* x, size_t n);
void mul(double* y, const double* a, const double* b, size_t n);
double sum(const double* x, size_t n);
void fold_stride(double* y, const double* x, size_t stride, size_t npairs);
double id_sum(const double* p, const double* q, size_t n);
}  // namespace scalar

}  // namespace iit::kernels
