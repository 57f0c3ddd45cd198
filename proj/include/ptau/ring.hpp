#pragma once

// Base coefficient arithmetic: Z/p^r, the Galois ring GR(p^r, f) with its
// Frobenius and trace, p-adic binomial coefficients, and fixed-relative-
// precision p-adic floats.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ptau {

using bigint = boost::multiprecision::cpp_int;

struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Arithmetic context: the ring GR(p^r, f) = (Z/p^r)[x]/(m(x)) with m a monic
// lift of an irreducible degree-f polynomial over F_p.  f = 1 gives Z/p^r.
class Ring {
public:
    std::uint64_t p = 3;
    int r = 4;
    int f = 1;
    std::uint64_t pr = 81;                 // p^r
    std::vector<std::uint64_t> modpoly;    // monic, degree f; modpoly[i] = coeff of x^i, i < f
    std::vector<std::uint64_t> frob_x;     // image of x under Frobenius, degree < f

    Ring() { init(3, 4, 1); }
    Ring(std::uint64_t p_, int r_, int f_) { init(p_, r_, f_); }

    void init(std::uint64_t p_, int r_, int f_);

    std::uint64_t norm(std::int64_t v) const {
        std::int64_t m = v % static_cast<std::int64_t>(pr);
        if (m < 0) m += static_cast<std::int64_t>(pr);
        return static_cast<std::uint64_t>(m);
    }
    std::uint64_t addm(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= pr ? s - pr : s;
    }
    std::uint64_t subm(std::uint64_t a, std::uint64_t b) const { return addm(a, pr - b % pr); }
    std::uint64_t mulm(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % pr);
    }
    // Inverse of a unit mod p^r.
    std::uint64_t invm(std::uint64_t a) const;
    int valp(std::uint64_t a) const {
        if (a == 0) return r;
        int v = 0;
        while (a % p == 0) { a /= p; ++v; }
        return v;
    }
    std::uint64_t ppow(int k) const {
        std::uint64_t y = 1;
        for (int i = 0; i < k; ++i) y *= p;
        return y;
    }
};

// Element of GR(p^r, f); for f = 1 this is just Z/p^r.
class Zq {
public:
    const Ring* R = nullptr;
    std::vector<std::uint64_t> c;  // length f, coefficients mod p^r

    Zq() = default;
    explicit Zq(const Ring& ring) : R(&ring), c(ring.f, 0) {}
    Zq(const Ring& ring, std::int64_t v) : R(&ring), c(ring.f, 0) { c[0] = ring.norm(v); }
    Zq(const Ring& ring, const bigint& v) : R(&ring), c(ring.f, 0) {
        bigint m = v % static_cast<std::int64_t>(ring.pr);
        if (m < 0) m += static_cast<std::int64_t>(ring.pr);
        c[0] = static_cast<std::uint64_t>(m);
    }

    bool is_zero() const {
        for (auto v : c)
            if (v != 0) return false;
        return true;
    }
    // Zero modulo p^d (d clamped to the working precision).
    bool is_zero_mod(int d) const {
        if (d >= R->r) return is_zero();
        std::uint64_t pd = R->ppow(d < 0 ? 0 : d);
        for (auto v : c)
            if (v % pd != 0) return false;
        return true;
    }
    bool is_unit() const {
        // Unit iff nonzero in the residue field F_{p^f}.
        for (auto v : c)
            if (v % R->p != 0) return true;
        return false;
    }
    int val() const {  // min p-adic valuation over coordinates, r if zero
        int m = R->r;
        for (auto v : c) m = std::min(m, R->valp(v));
        return m;
    }

    friend Zq operator+(const Zq& a, const Zq& b) {
        Zq o(*a.R);
        for (int i = 0; i < a.R->f; ++i) o.c[i] = a.R->addm(a.c[i], b.c[i]);
        return o;
    }
    friend Zq operator-(const Zq& a, const Zq& b) {
        Zq o(*a.R);
        for (int i = 0; i < a.R->f; ++i) o.c[i] = a.R->subm(a.c[i], b.c[i]);
        return o;
    }
    Zq operator-() const {
        Zq o(*R);
        for (int i = 0; i < R->f; ++i) o.c[i] = R->subm(0, c[i]);
        return o;
    }
    friend Zq operator*(const Zq& a, const Zq& b);

    Zq inv() const;
    Zq frob() const;      // lifted q-power Frobenius (identity when f = 1)
    Zq frob_inv() const;  // Frobenius applied f-1 times
    Zq frob_pow(int k) const;

    friend bool operator==(const Zq& a, const Zq& b) { return a.c == b.c; }
};

// Reduce a polynomial (coeffs mod p^r) modulo the ring's modpoly.
inline std::vector<std::uint64_t> poly_mod(const Ring& R, std::vector<std::uint64_t> a) {
    const int f = R.f;
    while (static_cast<int>(a.size()) > f) {
        std::uint64_t lead = a.back();
        std::size_t d = a.size() - 1;
        a.pop_back();
        if (lead == 0) continue;
        // x^d = x^{d-f} * (x^f) = x^{d-f} * (-modpoly_{<f})
        for (int i = 0; i < f; ++i) {
            std::uint64_t t = R.mulm(lead, R.modpoly[i]);
            a[d - f + i] = R.subm(a[d - f + i], t);
        }
    }
    a.resize(f, 0);
    return a;
}

inline Zq operator*(const Zq& a, const Zq& b) {
    const Ring& R = *a.R;
    std::vector<std::uint64_t> prod(2 * R.f - 1, 0);
    for (int i = 0; i < R.f; ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j < R.f; ++j)
            prod[i + j] = R.addm(prod[i + j], R.mulm(a.c[i], b.c[j]));
    }
    Zq o(R);
    o.c = poly_mod(R, std::move(prod));
    return o;
}

inline std::uint64_t Ring::invm(std::uint64_t a) const {
    a %= pr;
    if (a % p == 0) throw domain_error("inverse of non-unit mod p^r");
    // extended Euclid on (a, p^r)
    std::int64_t t = 0, newt = 1;
    std::int64_t rr = static_cast<std::int64_t>(pr), newr = static_cast<std::int64_t>(a);
    while (newr != 0) {
        std::int64_t q = rr / newr;
        std::int64_t tmp = t - q * newt;
        t = newt; newt = tmp;
        tmp = rr - q * newr;
        rr = newr; newr = tmp;
    }
    return norm(t);
}

inline Zq zq_pow(Zq a, bigint e) {
    Zq acc(*a.R, 1);
    while (e > 0) {
        if ((e & 1) != 0) acc = acc * a;
        a = a * a;
        e >>= 1;
    }
    return acc;
}

inline Zq Zq::inv() const {
    if (!is_unit()) throw domain_error("Zq::inv of non-unit");
    if (R->f == 1) {
        Zq o(*R);
        o.c[0] = R->invm(c[0]);
        return o;
    }
    // unit group of GR(p^r, f) has order p^{(r-1)f} (p^f - 1)
    bigint order = 1;
    for (int i = 0; i < (R->r - 1) * R->f; ++i) order *= static_cast<std::int64_t>(R->p);
    bigint q = 1;
    for (int i = 0; i < R->f; ++i) q *= static_cast<std::int64_t>(R->p);
    order *= (q - 1);
    return zq_pow(*this, order - 1);
}

inline Zq Zq::frob() const {
    if (R->f == 1) return *this;
    // substitute x -> frob_x coordinatewise
    Zq acc(*R);
    Zq xi(*R, 1);
    Zq fx(*R);
    fx.c = R->frob_x;
    for (int i = 0; i < R->f; ++i) {
        Zq term = xi;
        for (auto& v : term.c) v = R->mulm(v, c[i]);
        acc = acc + term;
        if (i + 1 < R->f) xi = xi * fx;
    }
    return acc;
}

inline Zq Zq::frob_pow(int k) const {
    if (R->f == 1) return *this;
    int m = ((k % R->f) + R->f) % R->f;
    Zq o = *this;
    for (int i = 0; i < m; ++i) o = o.frob();
    return o;
}

inline Zq Zq::frob_inv() const { return frob_pow(R->f - 1); }

// Trace to the prime ring: sum of the f Frobenius conjugates.
inline Zq trace_to_base(const Zq& x) {
    Zq acc = x;
    Zq cur = x;
    for (int i = 1; i < x.R->f; ++i) {
        cur = cur.frob();
        acc = acc + cur;
    }
    return acc;
}

namespace detail {

// Irreducibility over F_p of a monic degree-f polynomial, by checking that it
// has no root in F_{p^d} for any proper divisor d (computed via gcd with
// x^{p^d} - x).  f is small here, so a direct check suffices.
inline bool irreducible_mod_p(std::uint64_t p, const std::vector<std::uint64_t>& mp, int f);

}  // namespace detail

inline void Ring::init(std::uint64_t p_, int r_, int f_) {
    if (!is_prime_u64(p_) || p_ == 2) throw domain_error("p must be an odd prime");
    if (r_ < 1) throw domain_error("r must be >= 1");
    if (f_ < 1) throw domain_error("f must be >= 1");
    p = p_; r = r_; f = f_;
    // keep p^r within safe 64-bit multiply range
    unsigned __int128 acc = 1;
    for (int i = 0; i < r; ++i) {
        acc *= p;
        if (acc > (static_cast<unsigned __int128>(1) << 62))
            throw domain_error("p^r too large for the fixed-width coefficient model");
    }
    pr = static_cast<std::uint64_t>(acc);
    modpoly.assign(f, 0);
    frob_x.assign(f, 0);
    if (f == 1) return;

    // pick the lexicographically-smallest monic irreducible x^f + a_{f-1}x^{f-1} + ... + a_0 over F_p
    std::vector<std::uint64_t> cand(f, 0);
    bool found = false;
    std::uint64_t total = 1;
    for (int i = 0; i < f; ++i) total *= p;
    for (std::uint64_t code = 0; code < total && !found; ++code) {
        std::uint64_t t = code;
        for (int i = 0; i < f; ++i) { cand[i] = t % p; t /= p; }
        if (detail::irreducible_mod_p(p, cand, f)) {
            modpoly = cand;
            found = true;
        }
    }
    if (!found) throw domain_error("no irreducible polynomial found");  // unreachable

    // Hensel-lift the Frobenius: find the root of modpoly congruent to x^p mod p.
    // Newton iteration y <- y - m(y)/m'(y) in GR(p^r, f).
    Zq y(*this);
    {
        // x^p mod (modpoly, p^r) as the starting point
        std::vector<std::uint64_t> xp(2, 0);
        xp[1] = 1;
        Zq xx(*this);
        xx.c = poly_mod(*this, xp);
        Zq acc1(*this, 1);
        std::uint64_t e = p;
        Zq base = xx;
        while (e > 0) {
            if (e & 1) acc1 = acc1 * base;
            base = base * base;
            e >>= 1;
        }
        y = acc1;
    }
    auto eval_m = [&](const Zq& v) {
        Zq acc2(*this);
        Zq pw(*this, 1);
        for (int i = 0; i < f; ++i) {
            Zq term = pw;
            for (auto& w : term.c) w = mulm(w, modpoly[i]);
            acc2 = acc2 + term;
            pw = pw * v;
        }
        return acc2 + pw;  // + v^f (monic)
    };
    auto eval_mprime = [&](const Zq& v) {
        Zq acc2(*this);
        Zq pw(*this, 1);
        for (int i = 1; i < f; ++i) {
            Zq term = pw;
            for (auto& w : term.c) w = mulm(w, mulm(static_cast<std::uint64_t>(i), modpoly[i]));
            acc2 = acc2 + term;
            pw = pw * v;
        }
        Zq lead = pw;
        for (auto& w : lead.c) w = mulm(w, static_cast<std::uint64_t>(f % p == 0 ? f % pr : f));
        return acc2 + lead;
    };
    for (int it = 0; it < r + 2; ++it) {
        Zq fy = eval_m(y);
        if (fy.is_zero()) break;
        y = y - fy * eval_mprime(y).inv();
    }
    if (!eval_m(y).is_zero()) throw domain_error("Frobenius lift did not converge");
    frob_x = y.c;
}

namespace detail {

inline std::vector<std::uint64_t> polymul_fp(std::uint64_t p, const std::vector<std::uint64_t>& a,
                                             const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> o(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            o[i + j] = (o[i + j] + a[i] * b[j]) % p;
    return o;
}

inline std::vector<std::uint64_t> polymod_fp(std::uint64_t p, std::vector<std::uint64_t> a,
                                             const std::vector<std::uint64_t>& mp, int f) {
    while (static_cast<int>(a.size()) > f) {
        std::uint64_t lead = a.back();
        std::size_t d = a.size() - 1;
        a.pop_back();
        if (lead == 0) continue;
        for (int i = 0; i < f; ++i)
            a[d - f + i] = (a[d - f + i] + (p - lead % p) * mp[i]) % p;
    }
    a.resize(f, 0);
    while (!a.empty() && a.back() == 0 && a.size() > 1) a.pop_back();
    return a;
}

inline std::vector<std::uint64_t> poly_gcd_fp(std::uint64_t p, std::vector<std::uint64_t> a,
                                              std::vector<std::uint64_t> b) {
    auto deg = [](const std::vector<std::uint64_t>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
            if (v[i] != 0) return i;
        return -1;
    };
    auto invp = [&](std::uint64_t x) {
        std::uint64_t acc = 1, e = p - 2, base = x % p;
        while (e) { if (e & 1) acc = acc * base % p; base = base * base % p; e >>= 1; }
        return acc;
    };
    while (deg(b) >= 0) {
        int da = deg(a), db = deg(b);
        if (da < db) { std::swap(a, b); continue; }
        std::uint64_t q = a[da] * invp(b[db]) % p;
        for (int i = 0; i <= db; ++i)
            a[da - db + i] = (a[da - db + i] + (p - q * b[i] % p)) % p;
        while (deg(a) == da && da >= 0) a[da] = 0;  // defensive clear handled above
        if (deg(a) < deg(b)) std::swap(a, b);
    }
    return a;
}

inline bool irreducible_mod_p(std::uint64_t p, const std::vector<std::uint64_t>& mp, int f) {
    // m(x) = x^f + mp(x).  Check m | x^{p^f} - x and gcd(m, x^{p^d} - x) = const for d < f.
    std::vector<std::uint64_t> m = mp;
    m.resize(f + 1, 0);
    m[f] = 1;
    auto xp_pow = [&](int k) {
        // x^{p^k} mod m over F_p
        std::vector<std::uint64_t> cur = {0, 1};
        for (int i = 0; i < k; ++i) {
            // raise to p-th power
            std::vector<std::uint64_t> acc = {1};
            std::vector<std::uint64_t> base = cur;
            std::uint64_t e = p;
            while (e) {
                if (e & 1) acc = polymod_fp(p, polymul_fp(p, acc, base), mp, f);
                base = polymod_fp(p, polymul_fp(p, base, base), mp, f);
                e >>= 1;
            }
            cur = acc;
        }
        return cur;
    };
    // x^{p^f} == x mod m ?
    auto xf = xp_pow(f);
    std::vector<std::uint64_t> x = {0, 1};
    xf.resize(std::max(xf.size(), x.size()), 0);
    x.resize(xf.size(), 0);
    if (xf != x) return false;
    for (int d = 1; d < f; ++d) {
        if (f % d != 0) continue;
        auto xd = xp_pow(d);
        // gcd(m, x^{p^d} - x) must be constant
        std::vector<std::uint64_t> diff = xd;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        auto g = poly_gcd_fp(p, m, diff);
        int dg = -1;
        for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i)
            if (g[i] != 0) { dg = i; break; }
        if (dg > 0) return false;
    }
    return true;
}

}  // namespace detail

// binom(z, n) as an exact integer, reduced into the ring.
// Incremental product keeps every intermediate integral.
inline Zq padic_binomial(std::int64_t z, std::int64_t n, const Ring& R) {
    if (n < 0) throw domain_error("binomial: n must be >= 0");
    bigint acc = 1;
    for (std::int64_t k = 1; k <= n; ++k) {
        acc *= (bigint(z) - (k - 1));
        acc /= k;  // exact: C(z,k) is an integer
    }
    return Zq(R, acc);
}

inline bigint binomial_int(std::int64_t z, std::int64_t n) {
    bigint acc = 1;
    for (std::int64_t k = 1; k <= n; ++k) {
        acc *= (bigint(z) - (k - 1));
        acc /= k;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// PFloat: p-adic number with valuation, unit mantissa and tracked relative
// precision.  A "precision zero" records only the absolute exponent below
// which nothing is known.
// ---------------------------------------------------------------------------

class PFloat {
public:
    static constexpr long long EXACT = std::numeric_limits<long long>::max() / 2;

    const Ring* R = nullptr;
    bool zero_ = true;
    long long val_ = EXACT;  // for zero: absolute precision exponent (EXACT = exact zero)
    Zq mant_;                // unit, canonicalized mod p^prec
    int prec_ = 0;           // valid relative digits, 1..r

    PFloat() = default;
    explicit PFloat(const Ring& ring) : R(&ring), zero_(true), val_(EXACT) {}

    static PFloat zero(const Ring& ring, long long abs_prec = EXACT) {
        PFloat o(ring);
        o.zero_ = true;
        o.val_ = abs_prec;
        return o;
    }
    static PFloat from_int(const Ring& ring, std::int64_t v) {
        return from_bigint(ring, bigint(v));
    }
    static PFloat from_bigint(const Ring& ring, const bigint& v) {
        if (v == 0) return zero(ring);
        bigint a = v;
        long long w = 0;
        while (a % static_cast<std::int64_t>(ring.p) == 0) { a /= static_cast<std::int64_t>(ring.p); ++w; }
        PFloat o(ring);
        o.zero_ = false;
        o.val_ = w;
        o.mant_ = Zq(ring, a);
        o.prec_ = ring.r;
        o.canonicalize();
        return o;
    }
    static PFloat make(const Ring& ring, long long val, const Zq& mant, int prec) {
        if (!mant.is_unit()) throw domain_error("PFloat mantissa must be a unit");
        PFloat o(ring);
        o.zero_ = false;
        o.val_ = val;
        o.mant_ = mant;
        o.prec_ = std::min(prec, ring.r);
        if (o.prec_ <= 0) throw precision_error("PFloat with no valid digits");
        o.canonicalize();
        return o;
    }

    bool is_zero() const { return zero_; }
    bool is_exact_zero() const { return zero_ && val_ >= EXACT; }
    long long val() const { return zero_ ? val_ : val_; }
    int prec() const { return prec_; }
    // absolute exponent below which the value is unknown
    long long abs_prec() const { return zero_ ? val_ : val_ + prec_; }

    void canonicalize() {
        if (zero_) return;
        std::uint64_t pp = R->ppow(prec_);
        for (auto& v : mant_.c) v %= pp;
    }

    // negligible below p^d (absolute)
    bool negligible(long long d) const {
        if (zero_) return val_ >= d;
        return val_ >= d;
    }

    friend PFloat operator*(const PFloat& a, const PFloat& b) {
        const Ring& R = *(a.R ? a.R : b.R);
        if (a.zero_ || b.zero_) {
            if (a.is_exact_zero() || b.is_exact_zero()) return zero(R);
            long long av = a.zero_ ? a.val_ : a.val_;
            long long bv = b.zero_ ? b.val_ : b.val_;
            long long s = av + bv;
            return zero(R, s > EXACT ? EXACT : s);
        }
        PFloat o(R);
        o.zero_ = false;
        o.val_ = a.val_ + b.val_;
        o.mant_ = a.mant_ * b.mant_;
        o.prec_ = std::min(a.prec_, b.prec_);
        o.canonicalize();
        return o;
    }

    friend PFloat operator+(const PFloat& a, const PFloat& b) {
        const Ring& R = *(a.R ? a.R : b.R);
        if (a.zero_ && b.zero_) return zero(R, std::min(a.val_, b.val_));
        if (a.zero_) return add_zero(a, b);
        if (b.zero_) return add_zero(b, a);
        long long v = std::min(a.val_, b.val_);
        long long known = std::min(a.val_ + a.prec_, b.val_ + b.prec_);  // absolute
        int digits = static_cast<int>(std::min<long long>(known - v, R.r));
        if (digits <= 0) return zero(R, known);
        std::uint64_t pd = R.ppow(digits);
        Zq s(R);
        {
            long long sa = a.val_ - v, sb = b.val_ - v;
            std::uint64_t fa = sa >= digits ? 0 : R.ppow(static_cast<int>(sa));
            std::uint64_t fb = sb >= digits ? 0 : R.ppow(static_cast<int>(sb));
            for (int i = 0; i < R.f; ++i)
                s.c[i] = (R.mulm(a.mant_.c[i], fa) + R.mulm(b.mant_.c[i], fb)) % pd;
        }
        // find cancellation depth
        int d = R.r;
        for (auto w : s.c) d = std::min(d, R.valp(w % pd));
        if (d >= digits) return zero(R, known);
        PFloat o(R);
        o.zero_ = false;
        o.val_ = v + d;
        std::uint64_t pdiv = R.ppow(d);
        for (int i = 0; i < R.f; ++i) s.c[i] = (s.c[i] % pd) / pdiv;
        o.mant_ = s;
        o.prec_ = digits - d;
        o.canonicalize();
        return o;
    }

    PFloat operator-() const {
        if (zero_) return *this;
        PFloat o = *this;
        std::uint64_t pd = R->ppow(prec_);
        for (auto& v : o.mant_.c) v = (pd - v % pd) % pd;
        // keep mantissa a unit representative mod p^prec
        return o;
    }
    friend PFloat operator-(const PFloat& a, const PFloat& b) { return a + (-b); }

    PFloat inv() const {
        if (zero_) throw precision_error("division by (precision) zero");
        PFloat o(*R);
        o.zero_ = false;
        o.val_ = -val_;
        o.mant_ = mant_.inv();
        o.prec_ = prec_;
        o.canonicalize();
        return o;
    }
    PFloat frob() const {
        if (zero_) return *this;
        PFloat o = *this;
        o.mant_ = mant_.frob();
        o.canonicalize();
        return o;
    }
    PFloat frob_inv() const {
        if (zero_) return *this;
        PFloat o = *this;
        o.mant_ = mant_.frob_inv();
        o.canonicalize();
        return o;
    }

private:
    static PFloat add_zero(const PFloat& z, const PFloat& x) {
        // z is a precision zero with absolute bound A
        const Ring& R = *x.R;
        long long A = z.val_;
        if (A >= EXACT) return x;
        if (x.val_ >= A) return zero(R, A);
        int digits = static_cast<int>(std::min<long long>(A - x.val_, x.prec_));
        PFloat o = x;
        o.prec_ = digits;
        o.canonicalize();
        return o;
    }
};

inline Zq frobenius(const Zq& x) { return x.frob(); }
inline Zq frobenius_inv(const Zq& x) { return x.frob_inv(); }
inline PFloat frobenius(const PFloat& x) { return x.frob(); }
inline PFloat frobenius_inv(const PFloat& x) { return x.frob_inv(); }

inline bool coeff_is_exact_zero(const Zq& x) { return x.is_zero(); }
inline bool coeff_is_exact_zero(const PFloat& x) { return x.is_exact_zero(); }

// Threshold value selecting tracked-precision comparison: a difference that
// cancelled to a precision zero counts as equal, whatever its absolute bound.
constexpr long long TRACKED = std::numeric_limits<long long>::min() / 2;

// negligible below absolute p-exponent d (or in all tracked digits)
inline bool coeff_negligible(const Zq& x, long long d) {
    if (d <= TRACKED) return x.is_zero();
    return x.is_zero_mod(static_cast<int>(std::min<long long>(d, x.R->r)));
}
inline bool coeff_negligible(const PFloat& x, long long d) {
    if (d <= TRACKED) return x.is_zero();
    return x.negligible(d);
}

inline Zq coeff_inv(const Zq& x) { return x.inv(); }
inline PFloat coeff_inv(const PFloat& x) { return x.inv(); }

inline bool coeff_invertible(const Zq& x) { return x.is_unit(); }
inline bool coeff_invertible(const PFloat& x) { return !x.is_zero(); }

inline Zq coeff_from_int(const Ring& R, std::int64_t v, const Zq*) { return Zq(R, v); }
inline PFloat coeff_from_int(const Ring& R, std::int64_t v, const PFloat*) { return PFloat::from_int(R, v); }

template <class C>
C coeff_int(const Ring& R, std::int64_t v) {
    return coeff_from_int(R, v, static_cast<const C*>(nullptr));
}

// trace to the f = 1 subring
inline PFloat trace_to_base(const PFloat& x) {
    if (x.is_zero()) return x;
    Zq t(*x.R);
    Zq cur = x.mant_;
    t = cur;
    for (int i = 1; i < x.R->f; ++i) {
        cur = cur.frob();
        t = t + cur;
    }
    // trace may lose unit-ness; renormalize through bigint-free valuation split
    if (t.is_zero()) return PFloat::zero(*x.R, x.val_ + x.prec_);
    int d = t.val();
    if (d >= x.prec_) return PFloat::zero(*x.R, x.val_ + x.prec_);
    std::uint64_t pd = x.R->ppow(d);
    Zq m(*x.R);
    for (int i = 0; i < x.R->f; ++i) m.c[i] = t.c[i] / pd;
    return PFloat::make(*x.R, x.val_ + d, m, x.prec_ - d);
}

}  // namespace ptau
