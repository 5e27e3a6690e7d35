// AVX2 + FMA variants of the solver kernels. This TU is the only one compiled
// with -mavx2; callers go through active_ops() which checks cpuid first.

#include "helifem/kernels.hpp"

#include <immintrin.h>

namespace helifem::kernels {

namespace {

// Complex numbers are interleaved (re, im); one __m256d holds two of them.
// (a+bi)(c+di): with yr = [c c], yi = [d d], xs = swapped x = [b a]:
// fmaddsub(x, yr, xs*yi) = [a*c - b*d, b*c + a*d].
inline __m256d cmul(__m256d x, __m256d y) {
    __m256d yr = _mm256_movedup_pd(y);
    __m256d yi = _mm256_permute_pd(y, 0xF);
    __m256d xs = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

inline __m256d cfma(__m256d x, __m256d y, __m256d acc) {
    return _mm256_add_pd(acc, cmul(x, y));
}

inline cplx hsum_cplx(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    return {t[0] + t[2], t[1] + t[3]};
}

void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, cfma(xv, av, yv));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, cfma(yv, av, xv));
    }
    for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

cplx dotu_avx2(std::size_t n, const cplx* x, const cplx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = cfma(_mm256_loadu_pd(xp + 2 * i), _mm256_loadu_pd(yp + 2 * i), acc);
    cplx s = hsum_cplx(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    const __m256d conj_mask = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_mul_pd(_mm256_loadu_pd(xp + 2 * i), conj_mask);
        acc = cfma(xv, _mm256_loadu_pd(yp + 2 * i), acc);
    }
    cplx s = hsum_cplx(acc);
    for (; i < n; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm2_avx2(std::size_t n, const cplx* x) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    alignas(32) double t[4];
    _mm256_store_pd(t, acc);
    double s = t[0] + t[1] + t[2] + t[3];
    for (; i < n; ++i) s += std::norm(x[i]);
    return std::sqrt(s);
}

void csr_matvec_avx2(std::size_t nrows, const std::int64_t* rowptr,
                     const std::int32_t* colind, const cplx* val,
                     const cplx* x, cplx* y) {
    const double* vp = reinterpret_cast<const double*>(val);
    for (std::size_t r = 0; r < nrows; ++r) {
        const std::int64_t begin = rowptr[r], end = rowptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        std::int64_t k = begin;
        for (; k + 2 <= end; k += 2) {
            __m256d vv = _mm256_loadu_pd(vp + 2 * k);
            const cplx x0 = x[colind[k]];
            const cplx x1 = x[colind[k + 1]];
            __m256d xv = _mm256_setr_pd(x0.real(), x0.imag(), x1.real(), x1.imag());
            acc = cfma(vv, xv, acc);
        }
        cplx s = hsum_cplx(acc);
        for (; k < end; ++k) s += val[k] * x[colind[k]];
        y[r] = s;
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{"avx2",      axpy_avx2, xpay_avx2,
                         dotu_avx2,   dotc_avx2, norm2_avx2,
                         csr_matvec_avx2};
    return ops;
}

}  // namespace helifem::kernels
