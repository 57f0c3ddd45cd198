#pragma once

// Truncated Laurent series with an explicit guaranteed window.
//
// Window semantics: the support starts at `lo` (everything below vanishes at
// working precision), coefficients are known exactly on [lo, hi], and nothing
// is known above `hi`.  Exactly-known polynomials carry hi = INF_HI.  Every
// operation computes the largest window on which its result is provably
// correct under these rules.

#include <algorithm>
#include <map>

#include "ring.hpp"

namespace ptau {

constexpr int INF_HI = 1 << 26;

inline int sat_add(int a, int b) {
    long long s = static_cast<long long>(a) + b;
    if (s >= INF_HI) return INF_HI;
    if (s <= -INF_HI) return -INF_HI;
    return static_cast<int>(s);
}
inline int sat_mul(int a, int b) {
    long long s = static_cast<long long>(a) * b;
    if (s >= INF_HI) return INF_HI;
    if (s <= -INF_HI) return -INF_HI;
    return static_cast<int>(s);
}

inline const Ring* coeff_ring(const Zq& x) { return x.R; }
inline const Ring* coeff_ring(const PFloat& x) { return x.R; }

template <class C>
struct Series {
    int lo = INF_HI;  // support lower bound
    int hi = INF_HI;  // last known exponent (INF_HI: exact)
    std::map<int, C> c;

    bool window_empty() const { return lo > hi; }
    bool is_exact_zero() const { return c.empty() && hi >= INF_HI; }

    static Series zero() { return Series{}; }

    static Series monomial(int e, const C& v, int hi_ = INF_HI) {
        Series s;
        s.lo = e;
        s.hi = hi_;
        if (!coeff_is_exact_zero(v)) s.c.emplace(e, v);
        s.normalize();
        return s;
    }
    static Series constant(const Ring& R, std::int64_t v) {
        return monomial(0, coeff_int<C>(R, v));
    }
    static Series one(const Ring& R) { return constant(R, 1); }

    const C* at(int e) const {
        auto it = c.find(e);
        return it == c.end() ? nullptr : &it->second;
    }

    void normalize() {
        for (auto it = c.begin(); it != c.end();) {
            if (coeff_is_exact_zero(it->second)) it = c.erase(it);
            else ++it;
        }
        if (!c.empty())
            for (auto it = c.upper_bound(hi); it != c.end();) it = c.erase(it);
        if (c.empty()) {
            if (hi >= INF_HI) lo = INF_HI;  // exactly zero
            return;
        }
        lo = std::max(lo, c.begin()->first);
    }

    Series truncated(int new_hi) const {
        Series o = *this;
        o.hi = std::min(o.hi, new_hi);
        o.normalize();
        return o;
    }

    Series shifted(int k) const {  // multiply by t^k
        Series o;
        o.lo = sat_add(lo, k);
        o.hi = sat_add(hi, k);
        for (auto& [e, v] : c) o.c.emplace(sat_add(e, k), v);
        return o;
    }

    bool known_zero(long long digits) const {
        for (auto& [e, v] : c)
            if (!coeff_negligible(v, digits)) return false;
        return true;
    }
};

template <class C>
Series<C> operator+(const Series<C>& a, const Series<C>& b) {
    Series<C> o;
    o.lo = std::min(a.lo, b.lo);
    o.hi = std::min(a.hi, b.hi);
    o.c = a.c;
    for (auto& [e, v] : b.c) {
        auto it = o.c.find(e);
        if (it == o.c.end()) o.c.emplace(e, v);
        else it->second = it->second + v;
    }
    o.normalize();
    return o;
}

template <class C>
Series<C> operator-(const Series<C>& a) {
    Series<C> o = a;
    for (auto& [e, v] : o.c) v = -v;
    return o;
}

template <class C>
Series<C> operator-(const Series<C>& a, const Series<C>& b) { return a + (-b); }

template <class C>
Series<C> operator*(const Series<C>& a, const Series<C>& b) {
    Series<C> o;
    if (a.is_exact_zero()) return a;
    if (b.is_exact_zero()) return b;
    o.lo = sat_add(a.lo, b.lo);
    o.hi = std::min(sat_add(a.lo, b.hi), sat_add(b.lo, a.hi));
    if (o.lo > o.hi) return o;
    for (auto& [i, av] : a.c) {
        for (auto& [j, bv] : b.c) {
            int e = sat_add(i, j);
            if (e > o.hi) break;
            C t = av * bv;
            auto it = o.c.find(e);
            if (it == o.c.end()) o.c.emplace(e, t);
            else it->second = it->second + t;
        }
    }
    o.normalize();
    return o;
}

template <class C>
Series<C> scale(const Series<C>& a, const C& s) {
    Series<C> o = a;
    for (auto& [e, v] : o.c) v = v * s;
    o.normalize();
    return o;
}

// Laurent division: num/den where den's lowest known coefficient is
// invertible.  The quotient is exact on [num.lo - dlo, that + min span].
template <class C>
Series<C> divide(const Series<C>& num, const Series<C>& den) {
    if (den.c.empty()) throw precision_error("division by a series with no known coefficients");
    int dlo = den.c.begin()->first;
    const C& lead = den.c.begin()->second;
    if (!coeff_invertible(lead)) throw precision_error("divisor leading coefficient not invertible");
    if (num.c.empty()) {
        Series<C> o;
        if (num.is_exact_zero()) return o;
        o.lo = sat_add(num.lo, -dlo);
        o.hi = sat_add(num.hi, -dlo);
        return o;
    }
    C ilead = coeff_inv(lead);
    if (den.c.size() == 1) {  // exact monomial divisor
        Series<C> o = scale(num.shifted(-dlo), ilead);
        if (den.hi < INF_HI) o.hi = std::min(o.hi, sat_add(o.lo, den.hi - dlo));
        o.normalize();
        return o;
    }
    long long num_span = static_cast<long long>(std::min(num.hi, INF_HI)) - num.lo;
    long long den_span = static_cast<long long>(std::min(den.hi, INF_HI)) - dlo;
    long long span = std::min(num_span, den_span);
    if (span >= INF_HI / 2) throw domain_error("divide: unbounded quotient window; truncate first");
    Series<C> q;
    q.lo = num.lo - dlo;
    q.hi = sat_add(q.lo, static_cast<int>(span));
    Series<C> rem = num;
    for (int k = q.lo; k <= q.hi; ++k) {
        const C* rv = rem.at(k + dlo);
        if (rv == nullptr || coeff_is_exact_zero(*rv)) continue;
        C qk = *rv * ilead;
        q.c.emplace(k, qk);
        for (auto& [e, dv] : den.c) {
            int t = e + k;
            if (t > q.hi + dlo) break;
            C sub = qk * dv;
            auto it = rem.c.find(t);
            if (it == rem.c.end()) rem.c.emplace(t, -sub);
            else it->second = it->second - sub;
        }
    }
    q.normalize();
    return q;
}

template <class C>
Series<C> inverse(const Series<C>& x, int out_span = -1) {
    if (x.c.empty()) throw precision_error("inverse of a series with no known coefficients");
    const Ring& R = *coeff_ring(x.c.begin()->second);
    Series<C> xw = x;
    if (out_span >= 0) xw = xw.truncated(sat_add(xw.c.begin()->first, out_span));
    if (xw.hi >= INF_HI && xw.c.size() > 1)
        throw domain_error("inverse: give an explicit span for exact series");
    Series<C> one = Series<C>::one(R);
    return divide(one, xw);
}

// Equality of everything both sides know; coefficients compared below p^digits.
template <class C>
bool series_equal(const Series<C>& a, const Series<C>& b, long long digits) {
    int hi = std::min(a.hi, b.hi);
    int lo = std::min(a.lo, b.lo);
    if (lo > hi) return true;
    auto ai = a.c.lower_bound(lo);
    auto bi = b.c.lower_bound(lo);
    while (true) {
        int ae = (ai == a.c.end() || ai->first > hi) ? INF_HI : ai->first;
        int be = (bi == b.c.end() || bi->first > hi) ? INF_HI : bi->first;
        if (ae >= INF_HI && be >= INF_HI) break;
        if (ae < be) {
            if (!coeff_negligible(ai->second, digits)) return false;
            ++ai;
        } else if (be < ae) {
            if (!coeff_negligible(bi->second, digits)) return false;
            ++bi;
        } else {
            if (!coeff_negligible(ai->second - bi->second, digits)) return false;
            ++ai;
            ++bi;
        }
    }
    return true;
}

// a(g(t)) truncated to out_hi; g needs positive valuation.  Negative
// exponents of a go through the Laurent inverse of g.
template <class C>
Series<C> substitute(const Series<C>& a, const Series<C>& g, int out_hi) {
    if (a.c.empty()) {
        Series<C> o;
        if (a.is_exact_zero()) return o;
        o.lo = sat_mul(a.lo, std::max(1, g.c.empty() ? 1 : g.c.begin()->first));
        o.hi = std::min(a.hi >= INF_HI ? INF_HI : sat_add(sat_mul(sat_add(a.hi, 1),
                       g.c.empty() ? 1 : g.c.begin()->first), -1),
                       out_hi);
        return o;
    }
    const Ring& R = *coeff_ring(a.c.begin()->second);
    if (g.c.empty()) throw domain_error("substitute: inner series has no known coefficients");
    int vg = g.c.begin()->first;
    if (vg < 1) throw domain_error("substitute: inner series must have positive valuation");
    int hi = out_hi;
    if (a.hi < INF_HI) hi = std::min(hi, sat_add(sat_mul(sat_add(a.hi, 1), vg), -1));
    if (g.hi < INF_HI) hi = std::min(hi, g.hi);
    Series<C> gt = g.truncated(hi);
    Series<C> acc;
    Series<C> pw = Series<C>::one(R);
    int cur = 0;
    for (auto it = a.c.lower_bound(0); it != a.c.end(); ++it) {
        int k = it->first;
        while (cur < k) { pw = (pw * gt).truncated(hi); ++cur; }
        acc = acc + scale(pw, it->second);
    }
    if (a.c.begin()->first < 0) {
        Series<C> gi = inverse(gt);
        Series<C> pwn = Series<C>::one(R);
        int curn = 0;
        for (auto it = std::make_reverse_iterator(a.c.lower_bound(0)); it != a.c.rend(); ++it) {
            int k = it->first;  // negative
            while (curn > k) { pwn = (pwn * gi).truncated(hi); --curn; }
            acc = acc + scale(pwn, it->second);
        }
    }
    acc.hi = std::min(acc.hi, hi);
    acc.lo = std::max(std::min(acc.lo, INF_HI), sat_mul(a.lo, vg));
    acc.normalize();
    return acc;
}

}  // namespace ptau
