#pragma once

// Operators on truncated series in the uniformizer variable u: the lifted
// Frobenius phi (u -> u^p), its left inverse psi, d/du, the structural series
// lambda and c attached to the Eisenstein polynomial, Gauss valuations, and
// the geometric-series section of phi - 1.

#include <optional>

#include "config.hpp"
#include "series.hpp"

namespace ptau {

using SeriesZ = Series<Zq>;
using SeriesQ = Series<PFloat>;

// phi: a_i u^i -> Frob(a_i) u^{p i}
template <class C>
Series<C> phi_u(const Series<C>& x, const PrimeConfig& cfg) {
    const int p = static_cast<int>(cfg.ring.p);
    Series<C> o;
    o.lo = sat_mul(x.lo, p);
    o.hi = x.hi >= INF_HI ? INF_HI : sat_mul(x.hi, p);
    for (auto& [e, v] : x.c) o.c.emplace(sat_mul(e, p), frobenius(v));
    o.normalize();
    return o;
}

// psi: keeps exponents divisible by p, divides them by p, Frob^{-1} on
// coefficients; psi(phi(x)) = x.
template <class C>
Series<C> psi_u(const Series<C>& x, const PrimeConfig& cfg) {
    const int p = static_cast<int>(cfg.ring.p);
    auto fdiv = [p](int a) { return a >= 0 ? a / p : -((-a + p - 1) / p); };
    auto cdiv = [p](int a) { return a >= 0 ? (a + p - 1) / p : -((-a) / p); };
    Series<C> o;
    o.lo = x.lo >= INF_HI ? INF_HI : cdiv(x.lo);
    o.hi = x.hi >= INF_HI ? INF_HI : fdiv(x.hi);
    for (auto& [e, v] : x.c)
        if (e % p == 0) o.c.emplace(e / p, frobenius_inv(v));
    o.normalize();
    return o;
}

template <class C>
Series<C> derive_u(const Series<C>& x) {
    Series<C> o;
    o.lo = sat_add(x.lo, -1);
    o.hi = x.hi >= INF_HI ? INF_HI : x.hi - 1;
    const Ring* R = nullptr;
    for (auto& [e, v] : x.c) {
        R = coeff_ring(v);
        if (e == 0) continue;
        o.c.emplace(e - 1, v * coeff_int<C>(*R, e));
    }
    o.normalize();
    return o;
}

// E(u)/E(0) as a rational-coefficient polynomial (exact).
inline SeriesQ e_over_e0(const PrimeConfig& cfg) {
    const Ring& R = cfg.ring;
    PFloat e0 = PFloat::from_int(R, cfg.E[0]);
    PFloat ie0 = e0.inv();
    SeriesQ s;
    s.lo = 0;
    s.hi = INF_HI;
    for (int i = 0; i <= cfg.e; ++i) {
        PFloat v = PFloat::from_int(R, cfg.E[i]) * ie0;
        if (!v.is_exact_zero()) s.c.emplace(i, v);
    }
    s.normalize();
    return s;
}

// lambda = prod_{n >= 0} phi^n(E/E(0)), truncated to u-window [0, N].
inline SeriesQ lambda_series(const PrimeConfig& cfg, int N) {
    if (N < 1) throw domain_error("lambda_series: N must be >= 1");
    SeriesQ acc = SeriesQ::one(cfg.ring).truncated(N);
    SeriesQ factor = e_over_e0(cfg);
    long long pn = 1;
    while (pn <= N) {
        acc = (acc * factor).truncated(N);
        factor = phi_u(factor, cfg);
        pn *= static_cast<long long>(cfg.ring.p);
    }
    acc.hi = N;
    return acc;
}

// c = p E(u)/E(0); integral coefficients.
inline SeriesZ c_series(const PrimeConfig& cfg) {
    const Ring& R = cfg.ring;
    SeriesQ q = e_over_e0(cfg);
    PFloat pp = PFloat::from_int(R, static_cast<std::int64_t>(R.p));
    SeriesZ s;
    s.lo = 0;
    s.hi = INF_HI;
    for (auto& [e, v] : q.c) {
        PFloat t = v * pp;
        if (t.is_exact_zero()) continue;
        if (t.val() < 0) throw domain_error("c_series: coefficient not integral");
        Zq z = t.mant_;
        std::uint64_t sh = R.ppow(static_cast<int>(t.val()));
        for (auto& w : z.c) w = R.mulm(w, sh);
        s.c.emplace(e, z);
    }
    s.normalize();
    return s;
}

inline SeriesQ c_series_q(const PrimeConfig& cfg) {
    SeriesQ q = e_over_e0(cfg);
    return scale(q, PFloat::from_int(cfg.ring, static_cast<std::int64_t>(cfg.ring.p)));
}

// Additive Gauss valuation at radius p^{-s}: min over known support of
// v_p(a_i) + i*s, with s = snum/sden.  Lower bound only: the window hides
// the tail.
struct GaussVal {
    bool has_value = false;
    long long num = 0;   // value = num / den
    long long den = 1;
    bool lower_bound_only = true;
};

inline long long coeff_val(const Zq& v) { return v.val(); }
inline long long coeff_val(const PFloat& v) { return v.val(); }

template <class C>
GaussVal gauss_val(const Series<C>& x, long long snum, long long sden) {
    GaussVal g;
    g.den = sden;
    for (auto& [e, v] : x.c) {
        long long n = coeff_val(v) * sden + static_cast<long long>(e) * snum;
        if (!g.has_value || n < g.num) {
            g.num = n;
            g.has_value = true;
        }
    }
    return g;
}

// Section of phi - 1 on series with positive u-valuation:
// x = -sum_k phi^k(y) satisfies (phi - 1)(x) = y on the window of y.
template <class C>
Series<C> solve_phi_minus_one(const Series<C>& y, const PrimeConfig& cfg) {
    if (y.is_exact_zero()) return y;
    if (y.lo < 1)
        throw domain_error("solve_phi_minus_one: strategy needs strictly positive u-valuation");
    int hi = y.hi;
    if (hi >= INF_HI) {
        if (y.c.empty()) return y;
        hi = y.c.rbegin()->first;  // exact polynomial: solve through its top
    }
    Series<C> acc;
    Series<C> term = y.truncated(hi);
    while (!term.c.empty() && term.c.begin()->first <= hi) {
        acc = acc + (-term);
        term = phi_u(term, cfg).truncated(hi);
    }
    acc.lo = y.lo;
    acc.hi = hi;
    acc.normalize();
    return acc;
}

// Integral series viewed with rational coefficients.
inline SeriesQ to_rational(const SeriesZ& x) {
    SeriesQ o;
    o.lo = x.lo;
    o.hi = x.hi;
    for (auto& [e, v] : x.c) {
        const Ring& R = *v.R;
        int d = v.val();
        if (d >= R.r) continue;
        Zq m(R);
        std::uint64_t pd = R.ppow(d);
        for (int i = 0; i < R.f; ++i) m.c[i] = v.c[i] / pd;
        o.c.emplace(e, PFloat::make(R, d, m, R.r - d));
    }
    o.normalize();
    return o;
}

// Rational series with nonnegative coefficient valuations, reduced mod p^r.
inline std::optional<SeriesZ> to_integral(const SeriesQ& x) {
    SeriesZ o;
    o.lo = x.lo;
    o.hi = x.hi;
    for (auto& [e, v] : x.c) {
        if (v.is_zero()) continue;
        if (v.val() < 0) return std::nullopt;
        const Ring& R = *v.R;
        Zq z = v.mant_;
        if (v.val() >= R.r) continue;
        std::uint64_t sh = R.ppow(static_cast<int>(v.val()));
        for (auto& w : z.c) w = R.mulm(w, sh);
        o.c.emplace(e, z);
    }
    o.normalize();
    return o;
}

}  // namespace ptau
