#include "iit/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define IIT_HAVE_AVX2_BUILD 1
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#define IIT_HAVE_NEON_BUILD 1
#endif

namespace iit::kernels {

namespace scalar {

void mul_inplace(double* y, const double* x, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] *= x[i];
}

void mul(double* y, const double* a, const double* b, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

// Blocked summation; the SIMD variants reproduce the same association.
double sum(const double* x, size_t n) {
    double acc[4] = {0, 0, 0, 0};
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += x[i];
        acc[1] += x[i + 1];
        acc[2] += x[i + 2];
        acc[3] += x[i + 3];
    }
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

void fold_stride(double* y, const double* x, size_t stride, size_t npairs) {
    for (size_t b = 0; b < npairs; ++b) {
        const double* lo = x + 2 * stride * b;
        double* out = y + stride * b;
        for (size_t i = 0; i < stride; ++i) out[i] = 0.5 * (lo[i] + lo[i + stride]);
    }
}

double id_sum(const double* p, const double* q, size_t n) {
    double acc = 0;
    for (size_t i = 0; i < n; ++i) {
        if (p[i] > 0) acc += p[i] * std::log2(p[i] / q[i]);
    }
    return acc;
}

}  // namespace scalar

#if IIT_HAVE_AVX2_BUILD
namespace avx2 {

__attribute__((target("avx2"))) void mul_inplace(double* y, const double* x, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(y + i);
        __m256d b = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_mul_pd(a, b));
    }
    for (; i < n; ++i) y[i] *= x[i];
}

__attribute__((target("avx2"))) void mul(double* y, const double* a, const double* b, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) y[i] = a[i] * b[i];
}

__attribute__((target("avx2"))) double sum(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

__attribute__((target("avx2"))) void fold_stride(double* y, const double* x, size_t stride,
                                                 size_t npairs) {
    const __m256d half = _mm256_set1_pd(0.5);
    for (size_t b = 0; b < npairs; ++b) {
        const double* lo = x + 2 * stride * b;
        double* out = y + stride * b;
        size_t i = 0;
        for (; i + 4 <= stride; i += 4) {
            __m256d s = _mm256_add_pd(_mm256_loadu_pd(lo + i), _mm256_loadu_pd(lo + i + stride));
            _mm256_storeu_pd(out + i, _mm256_mul_pd(s, half));
        }
        for (; i < stride; ++i) out[i] = 0.5 * (lo[i] + lo[i + stride]);
    }
}

// log2 has no AVX2 primitive; vectorize the ratio and mask, keep scalar logs.
__attribute__((target("avx2"))) double id_sum(const double* p, const double* q, size_t n) {
    double acc = 0;
    size_t i = 0;
    alignas(32) double ratio[4];
    alignas(32) double weight[4];
    for (; i + 4 <= n; i += 4) {
        __m256d vp = _mm256_loadu_pd(p + i);
        __m256d vq = _mm256_loadu_pd(q + i);
        __m256d mask = _mm256_cmp_pd(vp, _mm256_setzero_pd(), _CMP_GT_OQ);
        __m256d r = _mm256_div_pd(vp, vq);
        _mm256_store_pd(ratio, _mm256_blendv_pd(_mm256_set1_pd(1.0), r, mask));
        _mm256_store_pd(weight, _mm256_and_pd(vp, mask));
        acc += weight[0] * std::log2(ratio[0]) + weight[1] * std::log2(ratio[1]) +
               weight[2] * std::log2(ratio[2]) + weight[3] * std::log2(ratio[3]);
    }
    for (; i < n; ++i)
        if (p[i] > 0) acc += p[i] * std::log2(p[i] / q[i]);
    return acc;
}

}  // namespace avx2
#endif

#if IIT_HAVE_NEON_BUILD
namespace neon {

void mul_inplace(double* y, const double* x, size_t n) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] *= x[i];
}

void mul(double* y, const double* a, const double* b, size_t n) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) y[i] = a[i] * b[i];
}

double sum(const double* x, size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0), acc1 = vdupq_n_f64(0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
    }
    double lanes[4] = {vgetq_lane_f64(acc0, 0), vgetq_lane_f64(acc0, 1),
                       vgetq_lane_f64(acc1, 0), vgetq_lane_f64(acc1, 1)};
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

void fold_stride(double* y, const double* x, size_t stride, size_t npairs) {
    const float64x2_t half = vdupq_n_f64(0.5);
    for (size_t b = 0; b < npairs; ++b) {
        const double* lo = x + 2 * stride * b;
        double* out = y + stride * b;
        size_t i = 0;
        for (; i + 2 <= stride; i += 2) {
            float64x2_t s = vaddq_f64(vld1q_f64(lo + i), vld1q_f64(lo + i + stride));
            vst1q_f64(out + i, vmulq_f64(s, half));
        }
        for (; i < stride; ++i) out[i] = 0.5 * (lo[i] + lo[i + stride]);
    }
}

double id_sum(const double* p, const double* q, size_t n) {
    return scalar::id_sum(p, q, n);
}

}  // namespace neon
#endif

static const Dispatch kScalar = {scalar::mul_inplace, scalar::mul, scalar::sum,
                                 scalar::fold_stride, scalar::id_sum, "scalar"};

#if IIT_HAVE_AVX2_BUILD
static const Dispatch kAvx2 = {avx2::mul_inplace, avx2::mul, avx2::sum,
                               avx2::fold_stride, avx2::id_sum, "avx2"};
#endif
#if IIT_HAVE_NEON_BUILD
static const Dispatch kNeon = {neon::mul_inplace, neon::mul, neon::sum,
                               neon::fold_stride, neon::id_sum, "neon"};
#endif

static const Dispatch* detect() {
#if IIT_HAVE_AVX2_BUILD
    if (__builtin_cpu_supports("avx2")) return &kAvx2;
#endif
#if IIT_HAVE_NEON_BUILD
    return &kNeon;
#endif
    return &kScalar;
}

static const Dispatch* g_active = detect();

const Dispatch& active() { return *g_active; }

bool select(const std::string& name) {
    if (name == "scalar") { g_active = &kScalar; return true; }
#if IIT_HAVE_AVX2_BUILD
    if (name == "avx2" && __builtin_cpu_supports("avx2")) { g_active = &kAvx2; return true; }
#endif
#if IIT_HAVE_NEON_BUILD
    if (name == "neon") { g_active = &kNeon; return true; }
#endif
    return false;
}

}  // namespace iit::kernels
