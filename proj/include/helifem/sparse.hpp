#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "helifem/kernels.hpp"

// Compressed-row sparse storage with ascending column indices per row.
// Patterns are structurally symmetric by construction in this code base.

namespace helifem {

using cplx = std::complex<double>;

struct Triplet {
    int row, col;
    cplx value;
};

class SparseComplex {
  public:
    SparseComplex() = default;
    // Sums duplicates; drops nothing else.
    SparseComplex(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t nonzeros() const { return static_cast<std::int64_t>(values_.size()); }

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int32_t>& col_ind() const { return col_ind_; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }

    // y = A x  (kernel-dispatched)
    void multiply(const cplx* x, cplx* y) const;
    std::vector<cplx> multiply(const std::vector<cplx>& x) const;

    cplx coeff(int r, int c) const;

    // max |A - A^T| over the pattern
    double symmetry_error() const;

    // undirected pattern bandwidth: max |r - c| over nonzeros
    int bandwidth() const;

    // A with rows and columns permuted: B[p[i]][p[j]] = A[i][j]... inverse
    // convention: perm[new] = old.
    SparseComplex permuted(const std::vector<int>& perm_new_to_old) const;

    // Matrix Market coordinate format, complex general.
    void write_matrix_market(std::ostream& out) const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> col_ind_;
    std::vector<cplx> values_;
};

}  // namespace helifem
