#pragma once

// The two-variable truncated ring: Laurent series in u whose coefficients are
// Laurent series in eta_m = [eps^{1/p^m}] - 1 at a fixed Teichmueller level m.
// Carries phi, psi, tau, gamma, delta, integer tau-powers and the explicit
// inverse of tau - 1 on the psi = 0 part.
//
// Level conventions: [eps] = (1 + eta_m)^{p^m}; tau fixes eta-scalars and
// sends u to [eps] u; gamma fixes u and sends eta_m to (1+eta_m)^chi - 1;
// phi is u -> u^p together with eta_m -> (1+eta_m)^p - 1 on scalars; psi
// reinterprets scalars verbatim one level up.

#include "useries.hpp"

namespace ptau {

template <class C>
struct TwoVar {
    int level = 0;
    int ulo = INF_HI;
    int uhi = INF_HI;
    std::map<int, Series<C>> uc;  // u-exponent -> eta-series (jagged windows)

    bool is_exact_zero() const { return uc.empty() && uhi >= INF_HI; }

    static TwoVar zero(int level = 0) {
        TwoVar o;
        o.level = level;
        return o;
    }
    static TwoVar from_eta(int level, int uexp, Series<C> etas, int uhi_ = INF_HI) {
        TwoVar o;
        o.level = level;
        o.ulo = uexp;
        o.uhi = uhi_;
        o.uc.emplace(uexp, std::move(etas));
        o.normalize();
        return o;
    }
    static TwoVar constant(const Ring& R, std::int64_t v, int level = 0) {
        return from_eta(level, 0, Series<C>::constant(R, v));
    }

    void normalize() {
        for (auto it = uc.begin(); it != uc.end();) {
            if (it->second.is_exact_zero()) it = uc.erase(it);
            else ++it;
        }
        if (!uc.empty())
            for (auto it = uc.upper_bound(uhi); it != uc.end();) it = uc.erase(it);
        if (uc.empty()) {
            if (uhi >= INF_HI) ulo = INF_HI;
            return;
        }
        ulo = std::max(ulo, uc.begin()->first);
    }

    const Series<C>* at(int e) const {
        auto it = uc.find(e);
        return it == uc.end() ? nullptr : &it->second;
    }

    bool known_zero(long long digits) const {
        for (auto& [e, s] : uc)
            if (!s.known_zero(digits)) return false;
        return true;
    }

    TwoVar truncated_u(int new_hi) const {
        TwoVar o = *this;
        o.uhi = std::min(o.uhi, new_hi);
        o.normalize();
        return o;
    }
    TwoVar truncated_eta(int eta_hi) const {
        TwoVar o = *this;
        for (auto& [e, s] : o.uc) s = s.truncated(eta_hi);
        o.normalize();
        return o;
    }
};

using TwoVarZ = TwoVar<Zq>;
using TwoVarQ = TwoVar<PFloat>;

template <class C>
TwoVar<C> operator+(const TwoVar<C>& a, const TwoVar<C>& b) {
    if (a.level != b.level) throw domain_error("TwoVar add: level mismatch");
    TwoVar<C> o;
    o.level = a.level;
    o.ulo = std::min(a.ulo, b.ulo);
    o.uhi = std::min(a.uhi, b.uhi);
    o.uc = a.uc;
    for (auto& [e, s] : b.uc) {
        auto it = o.uc.find(e);
        if (it == o.uc.end()) o.uc.emplace(e, s);
        else it->second = it->second + s;
    }
    o.normalize();
    return o;
}

template <class C>
TwoVar<C> operator-(const TwoVar<C>& a) {
    TwoVar<C> o = a;
    for (auto& [e, s] : o.uc) s = -s;
    return o;
}

template <class C>
TwoVar<C> operator-(const TwoVar<C>& a, const TwoVar<C>& b) { return a + (-b); }

template <class C>
TwoVar<C> operator*(const TwoVar<C>& a, const TwoVar<C>& b) {
    if (a.level != b.level) throw domain_error("TwoVar mul: level mismatch");
    TwoVar<C> o;
    o.level = a.level;
    if (a.is_exact_zero()) return a;
    if (b.is_exact_zero()) return b;
    o.ulo = sat_add(a.ulo, b.ulo);
    o.uhi = std::min(sat_add(a.ulo, b.uhi), sat_add(b.ulo, a.uhi));
    if (o.ulo > o.uhi) return o;
    for (auto& [i, as] : a.uc) {
        for (auto& [j, bs] : b.uc) {
            int e = sat_add(i, j);
            if (e > o.uhi) break;
            Series<C> t = as * bs;
            auto it = o.uc.find(e);
            if (it == o.uc.end()) o.uc.emplace(e, std::move(t));
            else it->second = it->second + t;
        }
    }
    o.normalize();
    return o;
}

template <class C>
TwoVar<C> scale_eta(const TwoVar<C>& a, const Series<C>& s) {
    TwoVar<C> o = a;
    for (auto& [e, v] : o.uc) v = v * s;
    o.normalize();
    return o;
}

template <class C>
bool twovar_equal(const TwoVar<C>& a, const TwoVar<C>& b, long long digits) {
    if (a.level != b.level) return false;
    int hi = std::min(a.uhi, b.uhi);
    int lo = std::min(a.ulo, b.ulo);
    if (lo > hi) return true;
    auto ai = a.uc.lower_bound(lo);
    auto bi = b.uc.lower_bound(lo);
    while (true) {
        int ae = (ai == a.uc.end() || ai->first > hi) ? INF_HI : ai->first;
        int be = (bi == b.uc.end() || bi->first > hi) ? INF_HI : bi->first;
        if (ae >= INF_HI && be >= INF_HI) break;
        if (ae < be) {
            if (!ai->second.known_zero(digits)) return false;
            ++ai;
        } else if (be < ae) {
            if (!bi->second.known_zero(digits)) return false;
            ++bi;
        } else {
            if (!series_equal(ai->second, bi->second, digits)) return false;
            ++ai;
            ++bi;
        }
    }
    return true;
}

template <class C>
C coeff_from_bigint(const Ring& R, const bigint& v);

template <>
inline Zq coeff_from_bigint<Zq>(const Ring& R, const bigint& v) { return Zq(R, v); }
template <>
inline PFloat coeff_from_bigint<PFloat>(const Ring& R, const bigint& v) {
    return PFloat::from_bigint(R, v);
}

// (1 + eta)^z - 1 as an exact polynomial when z >= 0, else truncated series.
template <class C>
Series<C> one_plus_eta_pow_minus_one(const Ring& R, std::int64_t z, int eta_hi) {
    Series<C> s;
    s.lo = 1;
    s.hi = (z >= 0 && z <= eta_hi) ? INF_HI : eta_hi;
    std::int64_t top = (z >= 0) ? std::min<std::int64_t>(z, eta_hi) : eta_hi;
    for (std::int64_t n = 1; n <= top; ++n) {
        C v = coeff_from_bigint<C>(R, binomial_int(z, n));
        if (!coeff_is_exact_zero(v)) s.c.emplace(static_cast<int>(n), v);
    }
    s.normalize();
    return s;
}

// (1 + eta)^z truncated to [0, eta_hi] (exact when z >= 0 small).
template <class C>
Series<C> one_plus_eta_pow(const Ring& R, std::int64_t z, int eta_hi) {
    Series<C> s = one_plus_eta_pow_minus_one<C>(R, z, eta_hi);
    Series<C> one = Series<C>::one(R);
    return one + s;
}

// Embed a u-series as a TwoVar at a given level.
template <class C>
TwoVar<C> embed_useries(const Series<C>& x, int level) {
    TwoVar<C> o;
    o.level = level;
    o.ulo = x.lo;
    o.uhi = x.hi;
    for (auto& [e, v] : x.c) o.uc.emplace(e, Series<C>::monomial(0, v));
    o.normalize();
    return o;
}

// phi: u -> u^p, eta -> (1+eta)^p - 1 in every scalar.
template <class C>
TwoVar<C> phi_2v(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    const int p = static_cast<int>(cfg.ring.p);
    Series<C> g = one_plus_eta_pow_minus_one<C>(cfg.ring, p, eta_hi);
    TwoVar<C> o;
    o.level = x.level;
    o.ulo = sat_mul(x.ulo, p);
    o.uhi = x.uhi >= INF_HI ? INF_HI : sat_mul(x.uhi, p);
    for (auto& [e, s] : x.uc) {
        Series<C> sub = substitute(s, g, eta_hi);
        for (auto& [k, v] : sub.c) v = frobenius(v);
        o.uc.emplace(sat_mul(e, p), std::move(sub));
    }
    o.normalize();
    return o;
}

// psi: keep p | j, divide by p, reinterpret scalars one level up.
template <class C>
TwoVar<C> psi_2v(const TwoVar<C>& x, const PrimeConfig& cfg) {
    const int p = static_cast<int>(cfg.ring.p);
    auto fdiv = [p](int a) { return a >= 0 ? a / p : -((-a + p - 1) / p); };
    auto cdiv = [p](int a) { return a >= 0 ? (a + p - 1) / p : -((-a) / p); };
    TwoVar<C> o;
    o.level = x.level + 1;
    o.ulo = x.ulo >= INF_HI ? INF_HI : cdiv(x.ulo);
    o.uhi = x.uhi >= INF_HI ? INF_HI : fdiv(x.uhi);
    for (auto& [e, s] : x.uc) {
        if (e % p != 0) continue;
        Series<C> t = s;
        for (auto& [k, v] : t.c) v = frobenius_inv(v);
        o.uc.emplace(e / p, std::move(t));
    }
    o.normalize();
    return o;
}

// Level-raising embedding: eta_m = (1+eta_{m+1})^p - 1.
template <class C>
TwoVar<C> raise_level(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    const int p = static_cast<int>(cfg.ring.p);
    Series<C> g = one_plus_eta_pow_minus_one<C>(cfg.ring, p, eta_hi);
    TwoVar<C> o;
    o.level = x.level + 1;
    o.ulo = x.ulo;
    o.uhi = x.uhi;
    for (auto& [e, s] : x.uc) o.uc.emplace(e, substitute(s, g, eta_hi));
    o.normalize();
    return o;
}

template <class C>
TwoVar<C> raise_level_to(const TwoVar<C>& x, int level, const PrimeConfig& cfg, int eta_hi) {
    TwoVar<C> o = x;
    while (o.level < level) o = raise_level(o, cfg, eta_hi);
    if (o.level != level) throw domain_error("raise_level_to: cannot lower a level");
    return o;
}

// tau^reps: u^j picks up the factor [eps]^{j reps} = (1+eta_m)^{j reps p^m};
// scalars fixed.
template <class C>
TwoVar<C> tau_2v_pow(const TwoVar<C>& x, std::int64_t reps, const PrimeConfig& cfg, int eta_hi) {
    std::int64_t pm = reps;
    for (int i = 0; i < x.level; ++i) pm *= cfg.p_ll();
    TwoVar<C> o;
    o.level = x.level;
    o.ulo = x.ulo;
    o.uhi = x.uhi;
    for (auto& [e, s] : x.uc) {
        int span = (s.hi >= INF_HI || s.lo > s.hi) ? eta_hi : std::min(s.hi - s.lo, eta_hi);
        Series<C> mult = one_plus_eta_pow<C>(cfg.ring, static_cast<std::int64_t>(e) * pm,
                                             std::max(span, 0));
        o.uc.emplace(e, s * mult);
    }
    o.normalize();
    return o;
}

template <class C>
TwoVar<C> tau_2v(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    return tau_2v_pow(x, 1, cfg, eta_hi);
}

// gamma: u fixed, eta -> (1+eta)^{chi(gamma)} - 1.
template <class C>
TwoVar<C> gamma_2v(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    Series<C> g = one_plus_eta_pow_minus_one<C>(cfg.ring, cfg.chi_gamma, eta_hi);
    TwoVar<C> o;
    o.level = x.level;
    o.ulo = x.ulo;
    o.uhi = x.uhi;
    for (auto& [e, s] : x.uc) o.uc.emplace(e, substitute(s, g, eta_hi));
    o.normalize();
    return o;
}

// delta = 1 + tau + ... + tau^{chi(gamma)-1}.
template <class C>
TwoVar<C> delta_2v(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    TwoVar<C> acc = x;
    TwoVar<C> cur = x;
    for (std::int64_t i = 1; i < cfg.chi_gamma; ++i) {
        cur = tau_2v(cur, cfg, eta_hi);
        acc = acc + cur;
    }
    return acc;
}

// tau^z for an exact integer z via the binomial series in (tau - 1); finite
// on the window because tau - 1 raises eta-valuation.
template <class C>
TwoVar<C> tau_pow(const TwoVar<C>& x, std::int64_t z, const PrimeConfig& cfg, int eta_hi) {
    if (z >= 0 && z <= 8) {
        TwoVar<C> cur = x;
        for (std::int64_t i = 0; i < z; ++i) cur = tau_2v(cur, cfg, eta_hi);
        return cur;
    }
    TwoVar<C> acc = x;  // n = 0 term
    TwoVar<C> diff = x;
    int guard = eta_hi + 4;
    for (int n = 1;; ++n) {
        diff = tau_2v(diff, cfg, eta_hi) - diff;
        if (diff.known_zero(cfg.ring.r)) break;
        if (n > guard) throw precision_error("tau_pow: (tau-1)^n does not vanish on the window");
        C b = coeff_from_bigint<C>(cfg.ring, binomial_int(z, n));
        TwoVar<C> term = diff;
        for (auto& [e, s] : term.uc)
            for (auto& [k, v] : s.c) v = v * b;
        term.normalize();
        acc = acc + term;
    }
    return acc;
}

// Inverse of tau - 1 on psi = 0 elements: divide the u^n-coefficient by
// (1+eta_m)^{n p^m} - 1 (eta-valuation p^m, unit-led when p does not divide n).
template <class C>
TwoVar<C> tau_minus_one_inverse_psi0(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    const std::int64_t p = cfg.p_ll();
    std::int64_t pm = 1;
    for (int i = 0; i < x.level; ++i) pm *= p;
    TwoVar<C> o;
    o.level = x.level;
    o.ulo = x.ulo;
    o.uhi = x.uhi;
    for (auto& [e, s] : x.uc) {
        if (e % p == 0) throw domain_error("tau_minus_one_inverse_psi0: input not in the psi = 0 kernel");
        Series<C> div = one_plus_eta_pow_minus_one<C>(cfg.ring, static_cast<std::int64_t>(e) * pm,
                                                      eta_hi);
        int dlo = div.c.empty() ? 1 : div.c.begin()->first;
        o.uc.emplace(e, divide(s.truncated(sat_add(eta_hi, dlo)), div));
    }
    o.normalize();
    return o;
}

template <class C>
TwoVar<C> tau_minus_one(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi) {
    return tau_2v(x, cfg, eta_hi) - x;
}

// Both sides of (delta - gamma)(tau - 1) = (1 - tau^{chi(gamma)})(gamma - 1).
template <class C>
bool delta_gamma_identity_check(const TwoVar<C>& x, const PrimeConfig& cfg, int eta_hi,
                                long long digits) {
    TwoVar<C> t = tau_minus_one(x, cfg, eta_hi);
    TwoVar<C> lhs = delta_2v(t, cfg, eta_hi) - gamma_2v(t, cfg, eta_hi);
    TwoVar<C> g = gamma_2v(x, cfg, eta_hi) - x;
    TwoVar<C> rhs = g - tau_pow(g, cfg.chi_gamma, cfg, eta_hi);
    return twovar_equal(lhs, rhs, digits);
}

// Laurent division in u: den's lowest u-coefficient must be an eta-series
// with invertible leading coefficient.
template <class C>
TwoVar<C> divide_2v(const TwoVar<C>& num, const TwoVar<C>& den) {
    if (num.level != den.level) throw domain_error("divide_2v: level mismatch");
    if (den.uc.empty()) throw precision_error("divide_2v: divisor has no known coefficients");
    int dlo = den.uc.begin()->first;
    const Series<C>& lead = den.uc.begin()->second;
    if (lead.c.empty() || !coeff_invertible(lead.c.begin()->second))
        throw precision_error("divide_2v: divisor lead not invertible");
    if (num.uc.empty()) {
        TwoVar<C> o;
        o.level = num.level;
        if (num.is_exact_zero()) return o;
        o.ulo = sat_add(num.ulo, -dlo);
        o.uhi = sat_add(num.uhi, -dlo);
        return o;
    }
    long long num_span = static_cast<long long>(std::min(num.uhi, INF_HI)) - num.ulo;
    long long den_span = static_cast<long long>(std::min(den.uhi, INF_HI)) - dlo;
    long long span = std::min(num_span, den_span);
    if (span >= INF_HI / 2) throw domain_error("divide_2v: unbounded quotient window; truncate first");
    TwoVar<C> q;
    q.level = num.level;
    q.ulo = num.ulo - dlo;
    q.uhi = sat_add(q.ulo, static_cast<int>(span));
    TwoVar<C> rem = num;
    for (int k = q.ulo; k <= q.uhi; ++k) {
        const Series<C>* rv = rem.at(k + dlo);
        if (rv == nullptr || rv->c.empty()) continue;
        Series<C> qk = divide(*rv, lead);
        if (qk.c.empty()) continue;
        q.uc.emplace(k, qk);
        for (auto& [e, dv] : den.uc) {
            int t = e + k;
            if (t > q.uhi + dlo) break;
            Series<C> sub = qk * dv;
            auto it = rem.uc.find(t);
            if (it == rem.uc.end()) rem.uc.emplace(t, -sub);
            else it->second = it->second - sub;
        }
    }
    q.normalize();
    return q;
}

template <class C>
TwoVar<C> inverse_2v(const TwoVar<C>& x, const Ring& R, int u_span) {
    TwoVar<C> one = TwoVar<C>::constant(R, 1, x.level);
    TwoVar<C> xw = x;
    if (!x.uc.empty()) xw = xw.truncated_u(sat_add(x.uc.begin()->first, u_span));
    return divide_2v(one, xw);
}

// psi = 0 test: all known u-exponents prime to p.
template <class C>
bool in_psi0(const TwoVar<C>& x, const PrimeConfig& cfg, long long digits) {
    for (auto& [e, s] : x.uc) {
        if (e % cfg.p_ll() != 0) continue;
        if (!s.known_zero(digits)) return false;
    }
    return true;
}

}  // namespace ptau
