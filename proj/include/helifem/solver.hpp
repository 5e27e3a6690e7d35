#pragma once

#include <string>

#include "helifem/sparse.hpp"

// Sparse complex-symmetric linear solves: reverse Cuthill-McKee ordering, a
// direct sparse LU, and a Jacobi-preconditioned BiCGSTAB fallback for systems
// whose factor memory estimate exceeds the configured cap.

namespace helifem {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    double tolerance = 1e-10;           // relative residual
    int max_iterations = 10000;         // iterative path
    double pivot_threshold = 1e-13;     // relative pivot breakdown threshold
    std::size_t memory_cap_bytes = 2ull << 30;  // direct-path factor cap
    std::string method = "auto";        // auto | direct | iterative
};

struct SolveReport {
    std::string method;         // "direct" or "iterative"
    double relative_residual = 0.0;
    std::int64_t factor_nonzeros = 0;   // direct
    int iterations = 0;                 // iterative
    double wall_seconds = 0.0;
};

// Reverse Cuthill-McKee on the pattern graph; returns perm with
// perm[new] = old.
std::vector<int> reorder_rcm(const SparseComplex& A);

// Direct sparse LU on the RCM-reordered matrix.
std::vector<cplx> factor_solve(const SparseComplex& A, const std::vector<cplx>& b,
                               const SolverOptions& opt, SolveReport& report);

// BiCGSTAB with Jacobi preconditioner.
std::vector<cplx> iterative_solve(const SparseComplex& A, const std::vector<cplx>& b,
                                  const SolverOptions& opt, SolveReport& report);

// Dispatch per options (memory estimate decides in "auto" mode).
std::vector<cplx> solve(const SparseComplex& A, const std::vector<cplx>& b,
                        const SolverOptions& opt, SolveReport& report);

}  // namespace helifem
