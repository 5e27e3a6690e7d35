#include "helifem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace helifem {

SparseComplex::SparseComplex(int rows, int cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
    for (const auto& t : triplets)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::out_of_range("SparseComplex: triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row < b.row || (a.row == b.row && a.col < b.col);
    });
    row_ptr_.assign(rows + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        cplx sum{0.0, 0.0};
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col)
            sum += triplets[j++].value;
        col_ind_.push_back(triplets[i].col);
        values_.push_back(sum);
        ++row_ptr_[triplets[i].row + 1];
        i = j;
    }
    for (int r = 0; r < rows; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

void SparseComplex::multiply(const cplx* x, cplx* y) const {
    kernels::active_ops().csr_matvec(static_cast<std::size_t>(rows_), row_ptr_.data(),
                                     col_ind_.data(), values_.data(), x, y);
}

std::vector<cplx> SparseComplex::multiply(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("SparseComplex::multiply: size mismatch");
    std::vector<cplx> y(rows_);
    multiply(x.data(), y.data());
    return y;
}

cplx SparseComplex::coeff(int r, int c) const {
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        if (col_ind_[k] == c) return values_[k];
    return {0.0, 0.0};
}

double SparseComplex::symmetry_error() const {
    double err = 0.0;
    for (int r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            err = std::max(err, std::abs(values_[k] - coeff(col_ind_[k], r)));
    return err;
}

int SparseComplex::bandwidth() const {
    int bw = 0;
    for (int r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            bw = std::max(bw, std::abs(r - col_ind_[k]));
    return bw;
}

SparseComplex SparseComplex::permuted(const std::vector<int>& perm_new_to_old) const {
    if (static_cast<int>(perm_new_to_old.size()) != rows_ || rows_ != cols_)
        throw std::invalid_argument("SparseComplex::permuted: bad permutation");
    std::vector<int> old_to_new(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
        const int o = perm_new_to_old[i];
        if (o < 0 || o >= rows_ || old_to_new[o] != -1)
            throw std::invalid_argument("SparseComplex::permuted: not a bijection");
        old_to_new[o] = i;
    }
    std::vector<Triplet> trips;
    trips.reserve(values_.size());
    for (int r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            trips.push_back({old_to_new[r], old_to_new[col_ind_[k]], values_[k]});
    return SparseComplex(rows_, cols_, std::move(trips));
}

void SparseComplex::write_matrix_market(std::ostream& out) const {
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << rows_ << " " << cols_ << " " << nonzeros() << "\n";
    out.precision(17);
    for (int r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            out << (r + 1) << " " << (col_ind_[k] + 1) << " " << values_[k].real() << " "
                << values_[k].imag() << "\n";
}

}  // namespace helifem
