#pragma once

// Finite free etale phi-modules with a semilinear tau-action on the base
// change to the two-variable ring: constructors for trivial and rank-1 twist
// modules, the semilinear operator applications, the tau0 membership test,
// the transition maps between tau-power levels, and tensor/dual.

#include "matrix.hpp"
#include "twovar.hpp"

namespace ptau {

template <class C>
using PlainElt = std::vector<Series<C>>;

template <class C>
struct TauElt {
    int level = 0;
    std::vector<TwoVar<C>> v;
};

template <class C>
struct PhiTauMod {
    const PrimeConfig* cfg = nullptr;
    int rank = 0;
    Mat<Series<C>> phi_mat;   // phi(e_j) = sum_i phi_mat(i,j) e_i
    Mat<TwoVar<C>> tau_mat;   // stored tau^{p^s}(e_j) = sum_i tau_mat(i,j) e_i, level 0
    int tau_power = 0;        // s

    Mat<TwoVar<C>> tau_mat_at(int level, int eta_hi) const {
        Mat<TwoVar<C>> M = tau_mat;
        for (auto& e : M.a) e = raise_level_to(e, level, *cfg, eta_hi);
        return M;
    }
    Mat<TwoVar<C>> phi_mat_embedded(int level) const {
        Mat<TwoVar<C>> M(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) M(i, j) = embed_useries(phi_mat(i, j), level);
        return M;
    }
};

template <class C>
PhiTauMod<C> make_trivial(int d, const PrimeConfig& cfg) {
    PhiTauMod<C> M;
    M.cfg = &cfg;
    M.rank = d;
    M.phi_mat = Mat<Series<C>>(d, d);
    M.tau_mat = Mat<TwoVar<C>>(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            M.phi_mat(i, j) = (i == j) ? Series<C>::one(cfg.ring) : Series<C>::zero();
            M.tau_mat(i, j) = (i == j) ? TwoVar<C>::constant(cfg.ring, 1) : TwoVar<C>::zero();
        }
    return M;
}

// tau applied to a u-series: a_i u^i -> a_i [eps]^i u^i at the given level.
template <class C>
TwoVar<C> tau_of_useries(const Series<C>& s, const PrimeConfig& cfg, int level, int eta_hi) {
    std::int64_t pm = 1;
    for (int i = 0; i < level; ++i) pm *= cfg.p_ll();
    TwoVar<C> o;
    o.level = level;
    o.ulo = s.lo;
    o.uhi = s.hi;
    for (auto& [e, v] : s.c) {
        Series<C> mult = one_plus_eta_pow<C>(cfg.ring, static_cast<std::int64_t>(e) * pm, eta_hi);
        o.uc.emplace(e, scale(mult, v));
    }
    o.normalize();
    return o;
}

// tau(lambda)/lambda as a TwoVar unit (constant term 1).
inline TwoVarQ tau_lambda_over_lambda(const PrimeConfig& cfg, int uN, int eta_hi, int level = 0) {
    SeriesQ lam = lambda_series(cfg, uN);
    TwoVarQ tl = tau_of_useries(lam, cfg, level, eta_hi);
    TwoVarQ l = embed_useries(lam, level);
    return divide_2v(tl, l);
}

template <class C>
TwoVar<C> pow_2v(const TwoVar<C>& x, int k, const Ring& R, int u_span) {
    TwoVar<C> acc = TwoVar<C>::constant(R, 1, x.level);
    if (k == 0) return acc;
    int a = k < 0 ? -k : k;
    for (int i = 0; i < a; ++i) acc = acc * x;
    if (k < 0) acc = inverse_2v(acc, R, u_span);
    return acc;
}

// Z_p(n) model: rank 1, phi = c^{-n}, tau = (tau(lambda)/lambda)^n.
inline PhiTauMod<PFloat> make_twist(int n, const PrimeConfig& cfg, int uN, int eta_hi) {
    PhiTauMod<PFloat> M;
    M.cfg = &cfg;
    M.rank = 1;
    M.phi_mat = Mat<SeriesQ>(1, 1);
    M.tau_mat = Mat<TwoVarQ>(1, 1);
    SeriesQ c = c_series_q(cfg);
    SeriesQ cn = SeriesQ::one(cfg.ring);
    for (int i = 0; i < std::abs(n); ++i) cn = (cn * c).truncated(uN + cfg.e * std::abs(n));
    if (n > 0) cn = inverse(cn, uN);
    M.phi_mat(0, 0) = cn.truncated(uN);
    TwoVarQ base = tau_lambda_over_lambda(cfg, uN, eta_hi);
    M.tau_mat(0, 0) = pow_2v(base, n, cfg.ring, uN);
    return M;
}

// ---- element operations ----------------------------------------------------

template <class C>
TauElt<C> base_change(const PlainElt<C>& x, int level) {
    TauElt<C> o;
    o.level = level;
    o.v.reserve(x.size());
    for (auto& s : x) o.v.push_back(embed_useries(s, level));
    return o;
}

template <class C>
PlainElt<C> plain_sub(const PlainElt<C>& a, const PlainElt<C>& b) {
    PlainElt<C> o(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) o[i] = a[i] - b[i];
    return o;
}

template <class C>
TauElt<C> tau_sub(const TauElt<C>& a, const TauElt<C>& b, const PrimeConfig& cfg, int eta_hi) {
    int lvl = std::max(a.level, b.level);
    TauElt<C> o;
    o.level = lvl;
    o.v.resize(a.v.size());
    for (std::size_t i = 0; i < a.v.size(); ++i)
        o.v[i] = raise_level_to(a.v[i], lvl, cfg, eta_hi) - raise_level_to(b.v[i], lvl, cfg, eta_hi);
    return o;
}

template <class C>
bool plain_equal(const PlainElt<C>& a, const PlainElt<C>& b, long long digits) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!series_equal(a[i], b[i], digits)) return false;
    return true;
}
template <class C>
bool plain_is_zero(const PlainElt<C>& a, long long digits) {
    for (auto& s : a)
        if (!s.known_zero(digits)) return false;
    return true;
}

template <class C>
bool tau_equal(const TauElt<C>& a, const TauElt<C>& b, const PrimeConfig& cfg, int eta_hi,
               long long digits) {
    int lvl = std::max(a.level, b.level);
    for (std::size_t i = 0; i < a.v.size(); ++i)
        if (!twovar_equal(raise_level_to(a.v[i], lvl, cfg, eta_hi),
                          raise_level_to(b.v[i], lvl, cfg, eta_hi), digits))
            return false;
    return true;
}
template <class C>
bool tau_is_zero(const TauElt<C>& a, long long digits) {
    for (auto& x : a.v)
        if (!x.known_zero(digits)) return false;
    return true;
}

// phi on plain coordinates: y = phi_mat . phi(x).
template <class C>
PlainElt<C> apply_phi(const PhiTauMod<C>& M, const PlainElt<C>& x) {
    PlainElt<C> px(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) px[i] = phi_u(x[i], *M.cfg);
    return mat_vec(M.phi_mat, px);
}

template <class C>
TauElt<C> apply_phi(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi) {
    TauElt<C> o;
    o.level = x.level;
    std::vector<TwoVar<C>> px(x.v.size());
    for (std::size_t i = 0; i < x.v.size(); ++i) px[i] = phi_2v(x.v[i], *M.cfg, eta_hi);
    o.v = mat_vec(M.phi_mat_embedded(x.level), px);
    return o;
}

// Applies the stored action tau^{p^s}: ring tau^{p^s} on coordinates, then
// the stored matrix.
template <class C>
TauElt<C> apply_tau(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi) {
    std::int64_t reps = 1;
    for (int i = 0; i < M.tau_power; ++i) reps *= M.cfg->p_ll();
    TauElt<C> o;
    o.level = x.level;
    std::vector<TwoVar<C>> tx(x.v.size());
    for (std::size_t i = 0; i < x.v.size(); ++i) tx[i] = tau_2v_pow(x.v[i], reps, *M.cfg, eta_hi);
    o.v = mat_vec(M.tau_mat_at(x.level, eta_hi), tx);
    return o;
}

template <class C>
TauElt<C> apply_tau_iter(const PhiTauMod<C>& M, TauElt<C> x, int k, int eta_hi) {
    for (int i = 0; i < k; ++i) x = apply_tau(M, x, eta_hi);
    return x;
}

// gamma acts on coordinates with the identity matrix: basis vectors are fixed.
template <class C>
TauElt<C> apply_gamma(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi) {
    TauElt<C> o;
    o.level = x.level;
    o.v.reserve(x.v.size());
    for (auto& t : x.v) o.v.push_back(gamma_2v(t, *M.cfg, eta_hi));
    return o;
}

// delta = 1 + tau + ... + tau^{chi(gamma)-1} built from the stored action.
template <class C>
TauElt<C> apply_delta(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi) {
    TauElt<C> acc = x;
    TauElt<C> cur = x;
    for (std::int64_t i = 1; i < M.cfg->chi_gamma; ++i) {
        cur = apply_tau(M, cur, eta_hi);
        for (std::size_t k = 0; k < acc.v.size(); ++k) acc.v[k] = acc.v[k] + cur.v[k];
    }
    return acc;
}

template <class C>
TauElt<C> apply_tau_minus_one(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi) {
    TauElt<C> t = apply_tau(M, x, eta_hi);
    for (std::size_t i = 0; i < t.v.size(); ++i) t.v[i] = t.v[i] - x.v[i];
    return t;
}

// gamma(x) = (1 + tau + ... + tau^{chi-1})(x), window-exact verdict.
template <class C>
bool in_tau0(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi, long long digits) {
    TauElt<C> g = apply_gamma(M, x, eta_hi);
    TauElt<C> d = apply_delta(M, x, eta_hi);
    return tau_equal(g, d, *M.cfg, eta_hi, digits);
}

// Module carrying the action of (stored tau)^p, for the next tau-power level.
template <class C>
PhiTauMod<C> power_module(const PhiTauMod<C>& M, int eta_hi) {
    PhiTauMod<C> N = M;
    N.tau_power = M.tau_power + 1;
    N.tau_mat = Mat<TwoVar<C>>(M.rank, M.rank);
    for (int j = 0; j < M.rank; ++j) {
        TauElt<C> e;
        e.level = 0;
        e.v.assign(M.rank, TwoVar<C>::zero(0));
        e.v[j] = TwoVar<C>::constant(M.cfg->ring, 1, 0);
        TauElt<C> te = apply_tau_iter(M, e, static_cast<int>(M.cfg->ring.p), eta_hi);
        for (int i = 0; i < M.rank; ++i) N.tau_mat(i, j) = te.v[i];
    }
    return N;
}

// (1 + tau^{p^s} + ... + tau^{(p-1)p^s})(x): lands in the next tau0 space.
template <class C>
TauElt<C> tau_power_transition(const PhiTauMod<C>& M, const TauElt<C>& x, int eta_hi) {
    TauElt<C> acc = x;
    TauElt<C> cur = x;
    for (std::int64_t i = 1; i < M.cfg->p_ll(); ++i) {
        cur = apply_tau(M, cur, eta_hi);
        for (std::size_t k = 0; k < acc.v.size(); ++k) acc.v[k] = acc.v[k] + cur.v[k];
    }
    return acc;
}

template <class C>
PhiTauMod<C> tensor(const PhiTauMod<C>& A, const PhiTauMod<C>& B) {
    PhiTauMod<C> M;
    M.cfg = A.cfg;
    M.rank = A.rank * B.rank;
    M.tau_power = A.tau_power;
    M.phi_mat = kronecker(A.phi_mat, B.phi_mat);
    M.tau_mat = kronecker(A.tau_mat, B.tau_mat);
    return M;
}

template <class C>
PhiTauMod<C> dual(const PhiTauMod<C>& M, int u_span, int eta_hi) {
    PhiTauMod<C> D = M;
    D.phi_mat = transpose(mat_inverse_series(M.phi_mat, M.cfg->ring, u_span));
    const Ring& R = M.cfg->ring;
    auto inv_ok = [](const TwoVar<C>& t) {
        return !t.uc.empty() && !t.uc.begin()->second.c.empty() &&
               coeff_invertible(t.uc.begin()->second.c.begin()->second);
    };
    auto inv = [&R, u_span](const TwoVar<C>& t) { return inverse_2v(t, R, u_span); };
    D.tau_mat = transpose(mat_inverse<TwoVar<C>>(M.tau_mat, inv_ok, inv,
                                                 TwoVar<C>::constant(R, 1, 0), TwoVar<C>::zero(0)));
    return D;
}

// Module-level psi against the phi-twisted basis: psi(sum l_i phi(e_i)) =
// sum psi(l_i) e_i, i.e. coordinates psi(phi_mat^{-1} x).
template <class C>
PlainElt<C> module_psi(const PhiTauMod<C>& M, const PlainElt<C>& x, int u_span) {
    Mat<Series<C>> Ainv = mat_inverse_series(M.phi_mat, M.cfg->ring, u_span);
    PlainElt<C> lam = mat_vec(Ainv, x);
    PlainElt<C> o(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) o[i] = psi_u(lam[i], *M.cfg);
    return o;
}

template <class C>
TauElt<C> module_psi(const PhiTauMod<C>& M, const TauElt<C>& x, int u_span,
                     [[maybe_unused]] int eta_hi) {
    Mat<Series<C>> Ainv = mat_inverse_series(M.phi_mat, M.cfg->ring, u_span);
    Mat<TwoVar<C>> AinvE(M.rank, M.rank);
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) AinvE(i, j) = embed_useries(Ainv(i, j), x.level);
    std::vector<TwoVar<C>> lam = mat_vec(AinvE, x.v);
    TauElt<C> o;
    o.level = x.level + 1;
    o.v.resize(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) o.v[i] = psi_2v(lam[i], *M.cfg);
    return o;
}

// psi = 0 test for module elements (coordinates in the phi-twisted basis).
template <class C>
bool module_in_psi0(const PhiTauMod<C>& M, const TauElt<C>& x, int u_span,
                    [[maybe_unused]] int eta_hi, long long digits) {
    return tau_is_zero(module_psi(M, x, u_span, eta_hi), digits);
}

// Structural validation: commutation of tau with phi and the gamma relation,
// sampled on basis vectors.
template <class C>
bool validate_module(const PhiTauMod<C>& M, int eta_hi, long long digits) {
    for (int j = 0; j < M.rank; ++j) {
        TauElt<C> e;
        e.level = 0;
        e.v.assign(M.rank, TwoVar<C>::zero(0));
        e.v[j] = TwoVar<C>::constant(M.cfg->ring, 1, 0);
        TauElt<C> a = apply_tau(M, apply_phi(M, e, eta_hi), eta_hi);
        TauElt<C> b = apply_phi(M, apply_tau(M, e, eta_hi), eta_hi);
        if (!tau_equal(a, b, *M.cfg, eta_hi, digits)) return false;
        TauElt<C> g = apply_gamma(M, apply_tau(M, e, eta_hi), eta_hi);
        TauElt<C> h = apply_tau_iter(M, apply_gamma(M, e, eta_hi),
                                     static_cast<int>(M.cfg->chi_gamma), eta_hi);
        if (!tau_equal(g, h, *M.cfg, eta_hi, digits)) return false;
    }
    return true;
}

}  // namespace ptau
