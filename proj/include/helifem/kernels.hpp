#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the sparse solver. Every operation exists as a
// scalar reference kernel; on x86-64 an AVX2 variant is compiled into a
// separate TU and selected at runtime. The two variants are equivalence-tested
// against each other.

namespace helifem::kernels {

using cplx = std::complex<double>;

struct Ops {
    const char* name;
    // y += a * x
    void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
    // y = x + a * y  (BiCGSTAB direction update)
    void (*xpay)(std::size_t n, cplx a, const cplx* x, cplx* y);
    // unconjugated dot:  sum x_i * y_i
    cplx (*dotu)(std::size_t n, const cplx* x, const cplx* y);
    // conjugated dot:    sum conj(x_i) * y_i
    cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
    // Euclidean norm
    double (*norm2)(std::size_t n, const cplx* x);
    // y = A * x, CSR storage
    void (*csr_matvec)(std::size_t nrows, const std::int64_t* rowptr,
                       const std::int32_t* colind, const cplx* val,
                       const cplx* x, cplx* y);
};

const Ops& scalar_ops();

#if defined(HELIFEM_HAVE_AVX2)
const Ops& avx2_ops();
#endif

bool avx2_supported();

// Runtime-selected kernel set. Honours HELIFEM_SIMD=scalar|avx2 if set,
// otherwise picks the widest variant the CPU supports.
const Ops& active_ops();

}  // namespace helifem::kernels
