#pragma once

// Small dense matrices over the series rings; Gauss inversion with
// invertible-leading pivots.

#include <functional>
#include <vector>

#include "series.hpp"

namespace ptau {

template <class T>
struct Mat {
    int n = 0, m = 0;
    std::vector<T> a;  // row-major

    Mat() = default;
    Mat(int n_, int m_) : n(n_), m(m_), a(static_cast<std::size_t>(n_) * m_) {}

    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * m + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * m + j]; }
};

template <class T>
Mat<T> mat_mul(const Mat<T>& A, const Mat<T>& B) {
    Mat<T> C(A.n, B.m);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < B.m; ++j) {
            T acc = A(i, 0) * B(0, j);
            for (int k = 1; k < A.m; ++k) acc = acc + A(i, k) * B(k, j);
            C(i, j) = acc;
        }
    return C;
}

template <class T>
std::vector<T> mat_vec(const Mat<T>& A, const std::vector<T>& x) {
    std::vector<T> y(A.n);
    for (int i = 0; i < A.n; ++i) {
        T acc = A(i, 0) * x[0];
        for (int k = 1; k < A.m; ++k) acc = acc + A(i, k) * x[k];
        y[i] = acc;
    }
    return y;
}

// Kronecker product (basis e_i (x) f_j ordered lexicographically).
template <class T>
Mat<T> kronecker(const Mat<T>& A, const Mat<T>& B) {
    Mat<T> C(A.n * B.n, A.m * B.m);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.m; ++j)
            for (int k = 0; k < B.n; ++k)
                for (int l = 0; l < B.m; ++l)
                    C(i * B.n + k, j * B.m + l) = A(i, j) * B(k, l);
    return C;
}

template <class T>
Mat<T> transpose(const Mat<T>& A) {
    Mat<T> C(A.m, A.n);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.m; ++j) C(j, i) = A(i, j);
    return C;
}

// Gauss-Jordan inverse; `invert` inverts a ring element, `is_invertible`
// screens pivot candidates, `sub`/`mul`/`neg` do ring ops.  Throws
// precision_error when no pivot in a column is invertible.
template <class T>
Mat<T> mat_inverse(const Mat<T>& A, const std::function<bool(const T&)>& is_invertible,
                   const std::function<T(const T&)>& invert, const T& one, const T& zero) {
    int n = A.n;
    if (n != A.m) throw domain_error("mat_inverse: square matrices only");
    Mat<T> L = A;
    Mat<T> R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = (i == j) ? one : zero;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (is_invertible(L(i, col))) { piv = i; break; }
        if (piv < 0) throw precision_error("mat_inverse: no invertible pivot");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(L.a[static_cast<std::size_t>(piv) * n + j], L.a[static_cast<std::size_t>(col) * n + j]);
                std::swap(R.a[static_cast<std::size_t>(piv) * n + j], R.a[static_cast<std::size_t>(col) * n + j]);
            }
        T ip = invert(L(col, col));
        for (int j = 0; j < n; ++j) {
            L(col, j) = ip * L(col, j);
            R(col, j) = ip * R(col, j);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            T f = L(i, col);
            for (int j = 0; j < n; ++j) {
                L(i, j) = L(i, j) - f * L(col, j);
                R(i, j) = R(i, j) - f * R(col, j);
            }
        }
    }
    return R;
}

template <class T>
T mat_det(const Mat<T>& A) {
    int n = A.n;
    if (n == 1) return A(0, 0);
    if (n == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    // cofactor expansion; fine for the small ranks used here
    T acc = A(0, 0) * minor_det(A, 0, 0);
    for (int j = 1; j < n; ++j) {
        T term = A(0, j) * minor_det(A, 0, j);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

template <class T>
T minor_det(const Mat<T>& A, int row, int col) {
    Mat<T> M(A.n - 1, A.m - 1);
    int r = 0;
    for (int i = 0; i < A.n; ++i) {
        if (i == row) continue;
        int cidx = 0;
        for (int j = 0; j < A.m; ++j) {
            if (j == col) continue;
            M(r, cidx++) = A(i, j);
        }
        ++r;
    }
    return mat_det(M);
}

// Inversion helper for matrices over the series rings.
template <class C>
Mat<Series<C>> mat_inverse_series(const Mat<Series<C>>& A, const Ring& R, int span) {
    auto inv_ok = [](const Series<C>& s) {
        return !s.c.empty() && coeff_invertible(s.c.begin()->second);
    };
    auto inv = [span](const Series<C>& s) {
        if (s.c.size() == 1 && s.hi >= INF_HI) return inverse(s);  // exact monomial
        return inverse(s.truncated(sat_add(s.c.begin()->first, span)));
    };
    return mat_inverse<Series<C>>(A, inv_ok, inv, Series<C>::one(R), Series<C>::zero());
}

}  // namespace ptau
