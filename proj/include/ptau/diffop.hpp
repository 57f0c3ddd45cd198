#pragma once

// Finite-order differential operators sum_k C_k (d/du)^k with matrix
// coefficients over rational series; composition via the Leibniz rule.

#include "matrix.hpp"
#include "useries.hpp"

namespace ptau {

struct DiffOp {
    int rank = 1;
    std::vector<Mat<SeriesQ>> coef;  // coef[k] multiplies (d/du)^k

    int order() const { return static_cast<int>(coef.size()) - 1; }

    static DiffOp identity(int rank, const Ring& R) {
        DiffOp op;
        op.rank = rank;
        op.coef.emplace_back(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                op.coef[0](i, j) = (i == j) ? SeriesQ::one(R) : SeriesQ::zero();
        return op;
    }
    static DiffOp zero(int rank) {
        DiffOp op;
        op.rank = rank;
        op.coef.emplace_back(rank, rank);
        for (auto& e : op.coef[0].a) e = SeriesQ::zero();
        return op;
    }
};

inline DiffOp diffop_add(const DiffOp& a, const DiffOp& b) {
    DiffOp o;
    o.rank = a.rank;
    std::size_t n = std::max(a.coef.size(), b.coef.size());
    for (std::size_t k = 0; k < n; ++k) {
        Mat<SeriesQ> m(a.rank, a.rank);
        for (int i = 0; i < a.rank; ++i)
            for (int j = 0; j < a.rank; ++j) {
                SeriesQ s = SeriesQ::zero();
                if (k < a.coef.size()) s = s + a.coef[k](i, j);
                if (k < b.coef.size()) s = s + b.coef[k](i, j);
                m(i, j) = s;
            }
        o.coef.push_back(std::move(m));
    }
    return o;
}

inline DiffOp diffop_scale(const DiffOp& a, const SeriesQ& s) {
    DiffOp o = a;
    for (auto& m : o.coef)
        for (auto& e : m.a) e = s * e;
    return o;
}

inline Mat<SeriesQ> mat_derive(const Mat<SeriesQ>& m) {
    Mat<SeriesQ> o(m.n, m.m);
    for (std::size_t i = 0; i < m.a.size(); ++i) o.a[i] = derive_u(m.a[i]);
    return o;
}

// a . b with (C (d)^k)(B (d)^l) = sum_j binom(k, j) C B^{(j)} (d)^{k+l-j}.
inline DiffOp diffop_compose(const DiffOp& a, const DiffOp& b, const Ring& R) {
    DiffOp o = DiffOp::zero(a.rank);
    o.coef.resize(a.coef.size() + b.coef.size() - 1, o.coef[0]);
    for (std::size_t k = 0; k < a.coef.size(); ++k) {
        // derivatives of each b-coefficient, reused across j
        std::vector<Mat<SeriesQ>> der;
        der.push_back(Mat<SeriesQ>(a.rank, a.rank));
        for (std::size_t l = 0; l < b.coef.size(); ++l) {
            Mat<SeriesQ> cur = b.coef[l];
            for (std::size_t j = 0; j <= k; ++j) {
                bigint bc = binomial_int(static_cast<std::int64_t>(k), static_cast<std::int64_t>(j));
                PFloat w = PFloat::from_bigint(R, bc);
                if (!w.is_exact_zero()) {
                    Mat<SeriesQ> term = mat_mul(a.coef[k], cur);
                    std::size_t deg = k + l - j;
                    for (int i = 0; i < a.rank; ++i)
                        for (int jj = 0; jj < a.rank; ++jj)
                            o.coef[deg](i, jj) = o.coef[deg](i, jj) + scale(term(i, jj), w);
                }
                cur = mat_derive(cur);
            }
        }
    }
    // trim top zero coefficients
    while (o.coef.size() > 1) {
        bool all_zero = true;
        for (auto& e : o.coef.back().a)
            if (!e.is_exact_zero()) all_zero = false;
        if (!all_zero) break;
        o.coef.pop_back();
    }
    return o;
}

inline std::vector<SeriesQ> diffop_apply(const DiffOp& op, const std::vector<SeriesQ>& f) {
    std::vector<SeriesQ> acc(f.size(), SeriesQ::zero());
    std::vector<SeriesQ> der = f;
    for (std::size_t k = 0; k < op.coef.size(); ++k) {
        std::vector<SeriesQ> t = mat_vec(op.coef[k], der);
        for (std::size_t i = 0; i < f.size(); ++i) acc[i] = acc[i] + t[i];
        for (auto& s : der) s = derive_u(s);
    }
    return acc;
}

}  // namespace ptau
