#pragma once

// Arithmetic parameters: the prime, working precision, residue degree,
// Eisenstein data for the uniformizer, and the chosen cyclotomic generator.

#include <vector>

#include "ring.hpp"

namespace ptau {

struct PrimeConfig {
    Ring ring;                  // p, r, f
    int e = 1;                  // absolute ramification index
    std::vector<std::int64_t> E;  // E[i] = coefficient of u^i, degree e, Eisenstein
    std::int64_t chi_gamma = 2;   // integer value of chi(gamma)

    PrimeConfig() : E{-3, 1} { validate(); }
    PrimeConfig(std::uint64_t p, int r, int f, int e_, std::vector<std::int64_t> Ecoef,
                std::int64_t chi)
        : ring(p, r, f), e(e_), E(std::move(Ecoef)), chi_gamma(chi) {
        validate();
    }

    void validate() const {
        const std::uint64_t p = ring.p;
        if (e < 1) throw domain_error("e must be >= 1");
        if (static_cast<int>(E.size()) != e + 1) throw domain_error("E must have degree e");
        auto vp = [&](std::int64_t v) {
            if (v == 0) return ring.r + 1;
            int k = 0;
            while (v % static_cast<std::int64_t>(p) == 0) { v /= static_cast<std::int64_t>(p); ++k; }
            return k;
        };
        if (vp(E[e]) != 0) throw domain_error("E leading coefficient must be a unit");
        for (int i = 0; i < e; ++i)
            if (vp(E[i]) < 1) throw domain_error("E must be Eisenstein (lower coefficients divisible by p)");
        if (vp(E[0]) != 1) throw domain_error("E(0) must have p-valuation exactly 1");
        if (chi_gamma <= 1) throw domain_error("chi(gamma) must be > 1");
        if (chi_gamma % static_cast<std::int64_t>(p) == 1)
            throw domain_error("chi(gamma) must not be 1 mod p");
        // chi generates (Z/p^2)^*
        std::uint64_t p2 = p * p;
        std::uint64_t target = p * (p - 1);
        std::uint64_t x = static_cast<std::uint64_t>(((chi_gamma % static_cast<std::int64_t>(p2)) +
                                                      static_cast<std::int64_t>(p2)) %
                                                     static_cast<std::int64_t>(p2));
        std::uint64_t acc = 1;
        std::uint64_t order = 0;
        for (std::uint64_t k = 1; k <= target; ++k) {
            acc = acc * x % p2;
            if (acc == 1) { order = k; break; }
        }
        if (order != target)
            throw domain_error("chi(gamma) must generate (Z/p^2)^*");
    }

    std::int64_t p_ll() const { return static_cast<std::int64_t>(ring.p); }
};

}  // namespace ptau
