#include "helifem/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace helifem::kernels {

namespace {

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

cplx dotu_scalar(std::size_t n, const cplx* x, const cplx* y) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm2_scalar(std::size_t n, const cplx* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
    return std::sqrt(s);
}

void csr_matvec_scalar(std::size_t nrows, const std::int64_t* rowptr,
                       const std::int32_t* colind, const cplx* val,
                       const cplx* x, cplx* y) {
    for (std::size_t r = 0; r < nrows; ++r) {
        cplx s{0.0, 0.0};
        for (std::int64_t k = rowptr[r]; k < rowptr[r + 1]; ++k)
            s += val[k] * x[colind[k]];
        y[r] = s;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar",      axpy_scalar, xpay_scalar,
                         dotu_scalar,   dotc_scalar, norm2_scalar,
                         csr_matvec_scalar};
    return ops;
}

bool avx2_supported() {
#if defined(HELIFEM_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& active_ops() {
    static const Ops* selected = [] {
        const char* env = std::getenv("HELIFEM_SIMD");
        if (env != nullptr) {
            std::string want = env;
            if (want == "scalar") return &scalar_ops();
#if defined(HELIFEM_HAVE_AVX2)
            if (want == "avx2" && avx2_supported()) return &avx2_ops();
#endif
            return &scalar_ops();
        }
#if defined(HELIFEM_HAVE_AVX2)
        if (avx2_supported()) return &avx2_ops();
#endif
        return &scalar_ops();
    }();
    return *selected;
}

}  // namespace helifem::kernels
