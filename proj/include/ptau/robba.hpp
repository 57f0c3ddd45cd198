#pragma once

// Robba-ring layer over truncated rational Laurent series: the derivations
// N = -u lambda d/du and dtau = u d/du, their twisted actions on the rank-1
// modules with symbolic basis, the three-term complexes, the image solvers,
// and the residue pairing.

#include "useries.hpp"

namespace ptau {

// Overconvergence certificate: a verified lower bound for the Gauss
// valuation at radius p^{-s} on the known window.
struct Certificate {
    long long snum = 1, sden = 1;
    long long bound_num = 0;  // claimed lower bound = bound_num / sden
    bool verified = false;
};

struct RobbaElt {
    SeriesQ s;
    std::optional<Certificate> cert;
};

inline RobbaElt make_robba(SeriesQ s) { return RobbaElt{std::move(s), std::nullopt}; }

inline RobbaElt with_certificate(SeriesQ s, long long snum, long long sden) {
    RobbaElt e{std::move(s), Certificate{snum, sden, 0, false}};
    GaussVal g = gauss_val(e.s, snum, sden);
    if (g.has_value) {
        e.cert->bound_num = g.num;
        e.cert->verified = true;
    }
    return e;
}

// dtau = u d/du
inline SeriesQ partial_tau(const SeriesQ& f) {
    SeriesQ o;
    o.lo = f.lo;
    o.hi = f.hi;
    for (auto& [e, v] : f.c) {
        if (e == 0) continue;
        o.c.emplace(e, v * PFloat::from_int(*coeff_ring(v), e));
    }
    o.normalize();
    return o;
}

// N = -u lambda d/du, with lambda truncated to the span the window needs.
inline SeriesQ n_nabla(const SeriesQ& f, const PrimeConfig& cfg) {
    if (f.c.empty()) return f;
    int span = (f.hi >= INF_HI ? (f.c.empty() ? 1 : f.c.rbegin()->first) : f.hi) - f.lo;
    SeriesQ lam = lambda_series(cfg, std::max(span + 1, 2));
    return -(lam * partial_tau(f));
}

// N(lambda)/lambda = -u lambda' and dtau(lambda)/lambda = u lambda'/lambda.
inline SeriesQ n_lambda_over_lambda(const PrimeConfig& cfg, int N) {
    SeriesQ lam = lambda_series(cfg, N + 1);
    SeriesQ ul = derive_u(lam).shifted(1).truncated(N);
    return -ul;
}
inline SeriesQ partial_lambda_over_lambda(const PrimeConfig& cfg, int N) {
    SeriesQ lam = lambda_series(cfg, N + 1);
    SeriesQ ul = derive_u(lam).shifted(1).truncated(N);
    return divide(ul, lam.truncated(N));
}

// Coefficient actions on the rank-1 twist with symbolic basis of weight n:
//   phi:   f -> c^{-n} phi(f)
//   N:     f -> N(f) + n f N(lambda)/lambda
//   dtau:  f -> dtau(f) + n f dtau(lambda)/lambda
struct TwistModule {
    int n = 0;
    const PrimeConfig* cfg = nullptr;
    int uN = 12;  // working u-span for the structural series

    SeriesQ c_pow(int k) const {  // c^k truncated
        SeriesQ c = c_series_q(*cfg);
        SeriesQ acc = SeriesQ::one(cfg->ring);
        for (int i = 0; i < std::abs(k); ++i) acc = (acc * c).truncated(uN + cfg->e * std::abs(k));
        if (k > 0) return acc.truncated(uN);
        if (k < 0) acc = inverse(acc, uN);
        return acc.truncated(uN);
    }

    SeriesQ twist_phi(const SeriesQ& f, const PrimeConfig&) const {
        return (c_pow(-n) * phi_u(f, *cfg));
    }
    SeriesQ twist_n_nabla(const SeriesQ& f) const {
        SeriesQ o = n_nabla(f, *cfg);
        if (n != 0)
            o = o + scale(f * n_lambda_over_lambda(*cfg, uN), PFloat::from_int(cfg->ring, n));
        return o;
    }
    SeriesQ twist_partial(const SeriesQ& f) const {
        SeriesQ o = partial_tau(f);
        if (n != 0)
            o = o + scale(f * partial_lambda_over_lambda(*cfg, uN), PFloat::from_int(cfg->ring, n));
        return o;
    }
};

// ---- complexes ---------------------------------------------------------

enum class RobbaKind { n_nabla, partial_tau };

struct RobbaComplex {
    RobbaKind kind;
    TwistModule mod;

    // d0(x) = ((c^{-n} phi - 1) x, N_n(x))
    std::pair<SeriesQ, SeriesQ> d0(const SeriesQ& x) const {
        SeriesQ fx = mod.twist_phi(x, *mod.cfg) - x;
        SeriesQ nx = (kind == RobbaKind::n_nabla) ? mod.twist_n_nabla(x) : mod.twist_partial(x);
        return {fx, nx};
    }
    // d1(y, z) = N_n(y) - (c^{1-n} phi - 1) z   (resp. p c^{-n} phi - 1)
    SeriesQ d1(const SeriesQ& y, const SeriesQ& z) const {
        SeriesQ ny = (kind == RobbaKind::n_nabla) ? mod.twist_n_nabla(y) : mod.twist_partial(y);
        SeriesQ fz;
        if (kind == RobbaKind::n_nabla)
            fz = mod.c_pow(1 - mod.n) * phi_u(z, *mod.cfg) - z;
        else
            fz = scale(mod.c_pow(-mod.n) * phi_u(z, *mod.cfg),
                       PFloat::from_int(mod.cfg->ring, mod.cfg->p_ll())) - z;
        return ny - fz;
    }
};

inline RobbaComplex build_robba_complex(RobbaKind kind, int n, const PrimeConfig& cfg, int uN) {
    return RobbaComplex{kind, TwistModule{n, &cfg, uN}};
}

// ---- solvers ------------------------------------------------------------

// (c phi - 1) g = h for h supported in u-exponents >= 0:
// g = -sum_m (c phi)^m h, iterated until the tail drops below the target
// absolute p-precision on the window.
inline SeriesQ solve_c_phi_minus_one(const SeriesQ& h, const PrimeConfig& cfg,
                                     long long target_digits) {
    if (h.is_exact_zero()) return h;
    if (h.lo < 0) throw domain_error("solve_c_phi_minus_one: support must be >= 0");
    int hi = h.hi >= INF_HI ? (h.c.empty() ? 0 : h.c.rbegin()->first) : h.hi;
    SeriesQ c = c_series_q(cfg);
    SeriesQ acc;
    SeriesQ term = h.truncated(hi);
    for (int m = 0; m < 256; ++m) {
        if (term.known_zero(target_digits)) break;
        acc = acc - term;
        term = (c * phi_u(term, cfg)).truncated(hi);
        if (m == 255) throw precision_error("solve_c_phi_minus_one: tail did not vanish");
    }
    acc.lo = h.lo;
    acc.hi = hi;
    acc.normalize();
    return acc;
}

// (p phi - 1) g = h for h supported in u-exponents >= 0, by the same
// geometric series (each step gains one p-digit).
inline SeriesQ solve_p_phi_minus_one(const SeriesQ& h, const PrimeConfig& cfg,
                                     long long target_digits) {
    if (h.is_exact_zero()) return h;
    if (h.lo < 0) throw domain_error("solve_p_phi_minus_one: support must be >= 0");
    int hi = h.hi >= INF_HI ? (h.c.empty() ? 0 : h.c.rbegin()->first) : h.hi;
    PFloat p = PFloat::from_int(cfg.ring, cfg.p_ll());
    SeriesQ acc;
    SeriesQ term = h.truncated(hi);
    for (int m = 0; m < 256; ++m) {
        if (term.known_zero(target_digits)) break;
        acc = acc - term;
        term = scale(phi_u(term, cfg), p).truncated(hi);
        if (m == 255) throw precision_error("solve_p_phi_minus_one: tail did not vanish");
    }
    acc.lo = h.lo;
    acc.hi = hi;
    acc.normalize();
    return acc;
}

// dtau(y) = f - a0: y = sum_{n != 0} f_n / n u^n.
inline std::pair<SeriesQ, PFloat> solve_partial_tau(const SeriesQ& f, const PrimeConfig& cfg) {
    SeriesQ y;
    y.lo = f.lo;
    y.hi = f.hi;
    PFloat a0 = PFloat::zero(cfg.ring);
    for (auto& [e, v] : f.c) {
        if (e == 0) { a0 = v; continue; }
        y.c.emplace(e, v * PFloat::from_int(cfg.ring, e).inv());
    }
    y.normalize();
    return {y, a0};
}

struct Decomposition {
    SeriesQ g;  // (c phi - 1) part
    SeriesQ h;  // N part
};

// f = (c phi - 1) g + N(h) on the window: the negative exponents are peeled
// off from the bottom through N(a/j u^{-j}) = a lambda u^{-j}, the rest goes
// through the geometric phi-series.
inline Decomposition solve_image_bounded_below(const SeriesQ& f, const PrimeConfig& cfg,
                                               long long target_digits) {
    Decomposition out;
    out.h = SeriesQ::zero();
    SeriesQ rest = f;
    int hi = f.hi >= INF_HI ? (f.c.empty() ? 0 : std::max(0, f.c.rbegin()->first)) : f.hi;
    int span = hi - std::min(f.lo, 0);
    SeriesQ lam = lambda_series(cfg, std::max(2 * span + 2, 2));
    while (!rest.c.empty() && rest.c.begin()->first < 0) {
        if (rest.c.begin()->second.is_zero()) {  // cancelled to a precision zero
            rest.c.erase(rest.c.begin());
            continue;
        }
        int j = -rest.c.begin()->first;
        PFloat a = rest.c.begin()->second;
        PFloat coeff = a * PFloat::from_int(cfg.ring, j).inv();
        SeriesQ hterm = SeriesQ::monomial(-j, coeff, hi);
        out.h = out.h + hterm;
        // N(coeff u^{-j}) = coeff j lambda u^{-j} = a lambda u^{-j}
        SeriesQ img = scale(lam, a).shifted(-j).truncated(hi);
        rest = rest - img;
        rest.normalize();
    }
    rest = rest.truncated(hi);
    rest.normalize();
    if (rest.c.empty()) {
        out.g = SeriesQ::zero();
        out.g.lo = 0;
        out.g.hi = hi;
    } else {
        out.g = solve_c_phi_minus_one(rest, cfg, target_digits);
    }
    return out;
}

inline long long ceil_log_p(long long x, long long p) {
    long long k = 0, pk = 1;
    while (pk < x) { pk *= p; ++k; }
    return k;
}

// ---- residue pairing ------------------------------------------------------

// res on the weight-1 twist: the u^0 coefficient of the series part.
inline PFloat residue_t_basis(const SeriesQ& r, const PrimeConfig& cfg) {
    if (const PFloat* v = r.at(0)) return *v;
    // below the support bound or inside the window: known zero; above the
    // window: nothing known
    return PFloat::zero(cfg.ring, r.hi < 0 ? 0 : PFloat::EXACT);
}

// res in the 1/t normalization: constant term of p lambda r.
inline PFloat residue_one_over_t(const SeriesQ& r, const PrimeConfig& cfg) {
    int span = r.c.empty() ? 1 : std::max(1, -r.c.begin()->first + 1);
    SeriesQ lam = lambda_series(cfg, span);
    SeriesQ b = scale(lam * r, PFloat::from_int(cfg.ring, cfg.p_ll()));
    return residue_t_basis(b, cfg);
}

// B(f, x) = Tr(res(sum f_i x_i)) against the weight-1 twist.
inline PFloat pairing(const std::vector<SeriesQ>& fvec, const std::vector<SeriesQ>& x,
                      const PrimeConfig& cfg) {
    SeriesQ acc;
    for (std::size_t i = 0; i < fvec.size(); ++i) acc = acc + fvec[i] * x[i];
    return trace_to_base(residue_t_basis(acc, cfg));
}

struct VanishingReport {
    bool n_image_vanishes = false;
    bool phi_image_vanishes = false;
    long long n_residue_val = 0;
    long long phi_residue_val = 0;
};

// res(N_1(r)) = 0 and Tr res((c phi - 1)-twisted r) = 0 at working precision.
inline VanishingReport pairing_vanishing_check(const SeriesQ& r, const PrimeConfig& cfg, int uN) {
    VanishingReport rep;
    TwistModule tw{1, &cfg, uN};
    SeriesQ nr = tw.twist_n_nabla(r);
    PFloat rn = residue_t_basis(nr, cfg);
    rep.n_image_vanishes = rn.is_zero();
    rep.n_residue_val = rn.val();
    // (c phi - 1) on the weight-1 twist acts as phi - 1 on coefficients
    SeriesQ fr = tw.c_pow(0) * phi_u(r, cfg) - r;
    PFloat rf = trace_to_base(residue_t_basis(fr, cfg));
    rep.phi_image_vanishes = rf.is_zero();
    rep.phi_residue_val = rf.val();
    return rep;
}

}  // namespace ptau
