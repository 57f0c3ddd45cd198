#pragma once

// Exact kernels of integer matrices modulo p^r via Smith normal form.

#include <cstdlib>
#include <vector>

#include "ring.hpp"

namespace ptau {

struct SnfResult {
    std::vector<bigint> diag;           // elementary divisors (padded with 0)
    std::vector<std::vector<bigint>> R;  // column-op accumulator: x = R y
};

// Reduce A (rows x cols) to diagonal form by row/column operations,
// accumulating column operations so kernels can be pulled back.
inline SnfResult smith_normal_form(std::vector<std::vector<bigint>> A) {
    const int rows = static_cast<int>(A.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(A[0].size());
    SnfResult out;
    out.R.assign(cols, std::vector<bigint>(cols, 0));
    for (int i = 0; i < cols; ++i) out.R[i][i] = 1;
    auto col_addmul = [&](int dst, int src, const bigint& f) {
        for (int i = 0; i < rows; ++i) A[i][dst] += f * A[i][src];
        for (int i = 0; i < cols; ++i) out.R[i][dst] += f * out.R[i][src];
    };
    auto col_swap = [&](int a, int b) {
        for (int i = 0; i < rows; ++i) std::swap(A[i][a], A[i][b]);
        for (int i = 0; i < cols; ++i) std::swap(out.R[i][a], out.R[i][b]);
    };
    auto row_addmul = [&](int dst, int src, const bigint& f) {
        for (int j = 0; j < cols; ++j) A[dst][j] += f * A[src][j];
    };
    auto row_swap = [&](int a, int b) { std::swap(A[a], A[b]); };

    int t = 0;
    while (t < rows && t < cols) {
        // find a nonzero pivot with minimal absolute value
        int pi = -1, pj = -1;
        bigint best = 0;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (A[i][j] == 0) continue;
                bigint a = abs(A[i][j]);
                if (pi < 0 || a < best) { best = a; pi = i; pj = j; }
            }
        if (pi < 0) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool again = true;
        while (again) {
            again = false;
            for (int i = t + 1; i < rows; ++i) {
                if (A[i][t] == 0) continue;
                bigint q = A[i][t] / A[t][t];
                row_addmul(i, t, -q);
                if (A[i][t] != 0) {  // remainder smaller than pivot: swap up
                    row_swap(t, i);
                    again = true;
                }
            }
            for (int j = t + 1; j < cols; ++j) {
                if (A[t][j] == 0) continue;
                bigint q = A[t][j] / A[t][t];
                col_addmul(j, t, -q);
                if (A[t][j] != 0) {
                    col_swap(t, j);
                    again = true;
                }
            }
        }
        ++t;
    }
    int n = std::min(rows, cols);
    out.diag.assign(cols, 0);
    for (int i = 0; i < n; ++i) out.diag[i] = A[i][i];
    return out;
}

// Basis of { x : A x = 0 mod p^r } as vectors over Z/p^r (entries reduced),
// dropping generators that vanish mod p^r.
inline std::vector<std::vector<std::uint64_t>> kernel_mod_pr(
    const std::vector<std::vector<bigint>>& A, const Ring& R) {
    const int cols = A.empty() ? 0 : static_cast<int>(A[0].size());
    bigint N = static_cast<long long>(R.pr);
    SnfResult snf = smith_normal_form(A);
    std::vector<std::vector<std::uint64_t>> basis;
    for (int j = 0; j < cols; ++j) {
        bigint s = j < static_cast<int>(snf.diag.size()) ? snf.diag[j] : 0;
        bigint g = gcd(s < 0 ? -s : s, N);
        bigint scalefac = N / g;
        if (scalefac == N) continue;  // generator dies mod p^r
        std::vector<std::uint64_t> v(cols, 0);
        bool nonzero = false;
        for (int i = 0; i < cols; ++i) {
            bigint w = (snf.R[i][j] * scalefac) % N;
            if (w < 0) w += N;
            v[i] = static_cast<std::uint64_t>(w);
            if (v[i] != 0) nonzero = true;
        }
        if (nonzero) basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace ptau
