#include "helifem/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>

namespace helifem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_residual(const SparseComplex& A, const std::vector<cplx>& x,
                         const std::vector<cplx>& b) {
    const auto& ops = kernels::active_ops();
    std::vector<cplx> r = A.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const double nb = ops.norm2(b.size(), b.data());
    return nb == 0.0 ? ops.norm2(r.size(), r.data()) : ops.norm2(r.size(), r.data()) / nb;
}

}  // namespace

std::vector<int> reorder_rcm(const SparseComplex& A) {
    const int n = A.rows();
    std::vector<std::vector<int>> adj(n);
    for (int r = 0; r < n; ++r)
        for (std::int64_t k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
            const int c = A.col_ind()[k];
            if (c != r) adj[r].push_back(c);
        }
    std::vector<int> degree(n);
    for (int i = 0; i < n; ++i) {
        std::sort(adj[i].begin(), adj[i].end());
        adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
        degree[i] = static_cast<int>(adj[i].size());
    }

    std::vector<int> order;
    order.reserve(n);
    std::vector<char> visited(n, 0);
    for (int comp_seed = 0; comp_seed < n; ++comp_seed) {
        if (visited[comp_seed]) continue;
        // start each component from its minimum-degree node
        int start = comp_seed;
        {
            // cheap pseudo-peripheral pass: one BFS, take the last level's
            // min-degree node
            std::queue<int> q;
            std::vector<int> level(n, -1);
            q.push(comp_seed);
            level[comp_seed] = 0;
            int last = comp_seed;
            while (!q.empty()) {
                const int x = q.front();
                q.pop();
                last = x;
                for (int y : adj[x])
                    if (level[y] == -1 && !visited[y]) {
                        level[y] = level[x] + 1;
                        q.push(y);
                    }
            }
            start = last;
            for (int i = 0; i < n; ++i)
                if (!visited[i] && level[i] == level[last] && degree[i] < degree[start]) start = i;
        }
        std::queue<int> q;
        q.push(start);
        visited[start] = 1;
        while (!q.empty()) {
            const int x = q.front();
            q.pop();
            order.push_back(x);
            std::vector<int> nb;
            for (int y : adj[x])
                if (!visited[y]) nb.push_back(y);
            std::sort(nb.begin(), nb.end(),
                      [&](int a, int b) { return degree[a] < degree[b] || (degree[a] == degree[b] && a < b); });
            for (int y : nb) {
                visited[y] = 1;
                q.push(y);
            }
        }
    }
    std::reverse(order.begin(), order.end());
    return order;  // perm[new] = old
}

std::vector<cplx> factor_solve(const SparseComplex& A, const std::vector<cplx>& b,
                               const SolverOptions& opt, SolveReport& report) {
    const auto t0 = Clock::now();
    const int n = A.rows();
    if (n != A.cols() || static_cast<int>(b.size()) != n)
        throw SolverError("factor_solve: dimension mismatch");

    const std::vector<int> perm = reorder_rcm(A);
    const SparseComplex Ap = A.permuted(perm);
    std::vector<int> old_to_new(n);
    for (int i = 0; i < n; ++i) old_to_new[perm[i]] = i;

    Eigen::SparseMatrix<cplx> M(n, n);
    {
        std::vector<Eigen::Triplet<cplx>> trips;
        trips.reserve(Ap.nonzeros());
        for (int r = 0; r < n; ++r)
            for (std::int64_t k = Ap.row_ptr()[r]; k < Ap.row_ptr()[r + 1]; ++k)
                trips.emplace_back(r, Ap.col_ind()[k], Ap.values()[k]);
        M.setFromTriplets(trips.begin(), trips.end());
    }
    M.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.isSymmetric(true);
    lu.compute(M);
    if (lu.info() != Eigen::Success)
        throw SolverError("factor_solve: factorization failed (singular system?)");

    Eigen::VectorXcd bp(n);
    for (int i = 0; i < n; ++i) bp[i] = b[perm[i]];
    Eigen::VectorXcd xp = lu.solve(bp);
    if (lu.info() != Eigen::Success) throw SolverError("factor_solve: back-substitution failed");

    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[perm[i]] = xp[i];

    report.method = "direct";
    report.factor_nonzeros = lu.nnzL() + lu.nnzU();
    report.iterations = 0;
    report.relative_residual = relative_residual(A, x, b);
    report.wall_seconds = seconds_since(t0);
    if (!(report.relative_residual <= opt.tolerance))
        throw SolverError("factor_solve: residual " + std::to_string(report.relative_residual) +
                          " above tolerance");
    return x;
}

std::vector<cplx> iterative_solve(const SparseComplex& A, const std::vector<cplx>& b,
                                  const SolverOptions& opt, SolveReport& report) {
    const auto t0 = Clock::now();
    const auto& ops = kernels::active_ops();
    const std::size_t n = b.size();
    if (A.rows() != static_cast<int>(n)) throw SolverError("iterative_solve: dimension mismatch");

    // Jacobi preconditioner
    std::vector<cplx> dinv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx d = A.coeff(static_cast<int>(i), static_cast<int>(i));
        if (std::abs(d) < 1e-300)
            throw SolverError("iterative_solve: zero diagonal at dof " + std::to_string(i));
        dinv[i] = 1.0 / d;
    }
    auto precond = [&](const std::vector<cplx>& v, std::vector<cplx>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = dinv[i] * v[i];
    };

    const double nb = ops.norm2(n, b.data());
    std::vector<cplx> x(n, cplx{0.0, 0.0});
    if (nb == 0.0) {
        report = {"iterative", 0.0, 0, 0, seconds_since(t0)};
        return x;
    }

    std::vector<cplx> r = b, rhat = b, p(n, {0, 0}), v(n, {0, 0});
    std::vector<cplx> phat(n), shat(n), s(n), t(n);
    cplx rho{1.0, 0.0}, alpha{1.0, 0.0}, omega{1.0, 0.0};

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const cplx rho_new = ops.dotc(n, rhat.data(), r.data());
        if (std::abs(rho_new) < 1e-300) throw SolverError("iterative_solve: BiCGSTAB breakdown (rho)");
        if (it == 0) {
            p = r;
        } else {
            const cplx beta = (rho_new / rho) * (alpha / omega);
            // p = r + beta * (p - omega v)
            ops.axpy(n, -omega, v.data(), p.data());
            ops.xpay(n, beta, r.data(), p.data());
        }
        rho = rho_new;
        precond(p, phat);
        A.multiply(phat.data(), v.data());
        alpha = rho / ops.dotc(n, rhat.data(), v.data());
        s = r;
        ops.axpy(n, -alpha, v.data(), s.data());
        if (ops.norm2(n, s.data()) / nb < opt.tolerance) {
            ops.axpy(n, alpha, phat.data(), x.data());
            ++it;
            break;
        }
        precond(s, shat);
        A.multiply(shat.data(), t.data());
        const cplx tt = ops.dotc(n, t.data(), t.data());
        if (std::abs(tt) < 1e-300) throw SolverError("iterative_solve: BiCGSTAB breakdown (t)");
        omega = ops.dotc(n, t.data(), s.data()) / tt;
        ops.axpy(n, alpha, phat.data(), x.data());
        ops.axpy(n, omega, shat.data(), x.data());
        r = s;
        ops.axpy(n, -omega, t.data(), r.data());
        if (ops.norm2(n, r.data()) / nb < opt.tolerance) {
            ++it;
            break;
        }
    }

    report.method = "iterative";
    report.iterations = it;
    report.factor_nonzeros = 0;
    report.relative_residual = relative_residual(A, x, b);
    report.wall_seconds = seconds_since(t0);
    if (!(report.relative_residual <= 10.0 * opt.tolerance))
        throw SolverError("iterative_solve: no convergence after " + std::to_string(it) +
                          " iterations (residual " + std::to_string(report.relative_residual) + ")");
    return x;
}

std::vector<cplx> solve(const SparseComplex& A, const std::vector<cplx>& b,
                        const SolverOptions& opt, SolveReport& report) {
    if (opt.method == "direct") return factor_solve(A, b, opt, report);
    if (opt.method == "iterative") return iterative_solve(A, b, opt, report);
    // auto: rough factor-fill estimate against the memory cap
    const double est_bytes = 24.0 * static_cast<double>(A.nonzeros()) * 20.0;
    if (est_bytes > static_cast<double>(opt.memory_cap_bytes))
        return iterative_solve(A, b, opt, report);
    return factor_solve(A, b, opt, report);
}

}  // namespace helifem
