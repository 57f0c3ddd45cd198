#pragma once

// Deterministic generators for property tests and seeded suite runs.

#include <random>

#include "twovar.hpp"

namespace ptau {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Zq zq(const Ring& R) {
        Zq v(R);
        for (auto& c : v.c) c = eng_() % R.pr;
        return v;
    }
    Zq zq_unit(const Ring& R) {
        while (true) {
            Zq v = zq(R);
            if (v.is_unit()) return v;
        }
    }
    PFloat pfloat(const Ring& R, int vlo = -2, int vhi = 2) {
        return PFloat::make(R, range(vlo, vhi), zq_unit(R), R.r);
    }

    SeriesZ useries_z(const Ring& R, int lo, int hi, int terms) {
        SeriesZ s;
        s.lo = lo;
        s.hi = hi;
        for (int t = 0; t < terms; ++t) {
            int e = static_cast<int>(range(lo, hi));
            Zq v = zq(R);
            auto it = s.c.find(e);
            if (it == s.c.end()) s.c.emplace(e, v);
            else it->second = it->second + v;
        }
        s.normalize();
        return s;
    }
    SeriesQ useries_q(const Ring& R, int lo, int hi, int terms, int vlo = -2, int vhi = 2) {
        SeriesQ s;
        s.lo = lo;
        s.hi = hi;
        for (int t = 0; t < terms; ++t) {
            int e = static_cast<int>(range(lo, hi));
            if (s.c.count(e)) continue;
            s.c.emplace(e, pfloat(R, vlo, vhi));
        }
        s.normalize();
        return s;
    }

    template <class C>
    TwoVar<C> twovar(const Ring& R, int level, int ulo, int uhi, int eta_hi, int uterms,
                     int eta_terms) {
        TwoVar<C> x;
        x.level = level;
        x.ulo = ulo;
        x.uhi = uhi;
        for (int t = 0; t < uterms; ++t) {
            int e = static_cast<int>(range(ulo, uhi));
            if (x.uc.count(e)) continue;
            x.uc.emplace(e, eta_scalar<C>(R, eta_hi, eta_terms));
        }
        x.normalize();
        return x;
    }

    // psi = 0 sample: u-exponents prime to p
    template <class C>
    TwoVar<C> twovar_psi0(const Ring& R, int level, int ulo, int uhi, int eta_hi, int uterms,
                          int eta_terms) {
        TwoVar<C> x;
        x.level = level;
        x.ulo = ulo;
        x.uhi = uhi;
        for (int t = 0; t < uterms; ++t) {
            int e = static_cast<int>(range(ulo, uhi));
            if (e % static_cast<int>(R.p) == 0 || x.uc.count(e)) continue;
            x.uc.emplace(e, eta_scalar<C>(R, eta_hi, eta_terms));
        }
        x.normalize();
        return x;
    }

    template <class C>
    Series<C> eta_scalar(const Ring& R, int eta_hi, int terms) {
        Series<C> s;
        s.lo = 0;
        s.hi = eta_hi;
        for (int t = 0; t < terms; ++t) {
            int e = static_cast<int>(range(0, eta_hi));
            if (s.c.count(e)) continue;
            s.c.emplace(e, random_coeff<C>(R));
        }
        s.normalize();
        return s;
    }

    template <class C>
    Series<C> random_series(const Ring& R, int lo, int hi, int terms) {
        Series<C> s;
        s.lo = lo;
        s.hi = hi;
        for (int t = 0; t < terms; ++t) {
            int e = static_cast<int>(range(lo, hi));
            if (s.c.count(e)) continue;
            s.c.emplace(e, random_coeff<C>(R));
        }
        s.normalize();
        return s;
    }

    template <class C>
    C random_coeff(const Ring& R);

private:
    std::mt19937_64 eng_;
};

template <>
inline Zq Rng::random_coeff<Zq>(const Ring& R) { return zq(R); }
template <>
inline PFloat Rng::random_coeff<PFloat>(const Ring& R) { return pfloat(R, 0, 2); }

}  // namespace ptau
