// Cross-parameter smoke tests: a different prime, higher ramification, and
// Laurent eta-exponents.

#include <doctest.h>

#include "ptau/breuilkisin.hpp"
#include "ptau/complexes.hpp"
#include "ptau/rng.hpp"

using namespace ptau;

TEST_CASE("p = 5 end to end") {
    PrimeConfig cfg(5, 3, 1, 1, {-5, 1}, 2);
    const Ring& R = cfg.ring;
    const int EW = 10, UN = 10;
    Rng rng(401);
    SUBCASE("psi . phi = id and delta-gamma identity") {
        for (int t = 0; t < 15; ++t) {
            SeriesZ x = rng.useries_z(R, -8, 8, 4);
            CHECK(series_equal(psi_u(phi_u(x, cfg), cfg), x, R.r));
            TwoVarZ z = rng.twovar<Zq>(R, 0, -4, 4, 5, 3, 2);
            CHECK(delta_gamma_identity_check(z, cfg, EW, R.r));
        }
        for (int i = 1; i < 5; ++i)
            CHECK(psi_u(SeriesZ::monomial(i, Zq(R, 1)), cfg).c.empty());
    }
    SUBCASE("lambda functional equation and inverse of tau - 1") {
        SeriesQ lam = lambda_series(cfg, UN);
        CHECK(series_equal(lam, (e_over_e0(cfg) * phi_u(lam, cfg)).truncated(UN), TRACKED));
        for (int t = 0; t < 10; ++t) {
            TwoVarZ x = rng.twovar_psi0<Zq>(R, 0, -6, 6, 5, 3, 2);
            if (x.uc.empty()) continue;
            TwoVarZ y = tau_minus_one_inverse_psi0(x, cfg, EW);
            CHECK(twovar_equal(tau_minus_one(y, cfg, EW), x, R.r));
        }
    }
    SUBCASE("the constant 1 fails the tau0 test (chi != 1 mod p^r)") {
        auto M = make_trivial<Zq>(1, cfg);
        TauElt<Zq> one{0, {TwoVarZ::constant(R, 1, 0)}};
        CHECK_FALSE(in_tau0(M, one, EW, R.r));
    }
    SUBCASE("height-1 section equals lambda for A = E") {
        Mat<SeriesQ> A(1, 1);
        A(0, 0) = eisenstein_series(cfg);
        XiData xi = solve_xi(make_bk(cfg, A), UN);
        CHECK(series_equal(xi.Xi(0, 0), lambda_series(cfg, UN), TRACKED));
    }
}

TEST_CASE("ramification e = 2") {
    // E = u^2 - 3u - 3: Eisenstein over Z_3 with v(E(0)) = 1
    PrimeConfig cfg(3, 4, 1, 2, {-3, -3, 1}, 2);
    const int UN = 12;
    SUBCASE("lambda and c") {
        SeriesQ lam = lambda_series(cfg, UN);
        CHECK(series_equal(lam, (e_over_e0(cfg) * phi_u(lam, cfg)).truncated(UN), TRACKED));
        SeriesZ c = c_series(cfg);
        CHECK(c.at(0)->c[0] == 3);          // c(0) = p
        CHECK(c.at(2)->c[0] == cfg.ring.norm(-1));
    }
    SUBCASE("height-1 machinery with the degree-2 Eisenstein") {
        Mat<SeriesQ> A(1, 1);
        A(0, 0) = eisenstein_series(cfg);
        BKMod M = make_bk(cfg, A);
        CHECK(validate_height1(M, UN).pass);
        XiData xi = solve_xi(M, UN);
        CHECK(series_equal(xi.Xi(0, 0), lambda_series(cfg, UN), TRACKED));
        Mat<SeriesQ> nm = n_nabla_matrix(M, xi);
        SeriesQ expect = derive_u(lambda_series(cfg, UN + 1)).shifted(1).truncated(UN);
        CHECK(series_equal(nm(0, 0), expect, TRACKED));
        CHECK(s_nabla_certificate(nm, cfg));
    }
}

TEST_CASE("Laurent eta-exponents") {
    PrimeConfig modp(3, 1, 1, 1, {-3, 1}, 2);
    const Ring& R = modp.ring;
    const int EW = 10;
    // scalar with a negative eta-exponent: gamma and phi still act (phi's
    // substitution is the monomial eta^p mod p, so Laurent inversion is exact)
    SeriesZ s = SeriesZ::monomial(-2, Zq(R, 1), 6) + SeriesZ::monomial(1, Zq(R, 2), 6);
    TwoVarZ x = TwoVarZ::from_eta(0, 1, s);
    TwoVarZ gx = gamma_2v(x, modp, EW);
    // gamma is invertible: chi * chi' = 1 mod p^r picks the inverse substitution
    CHECK(delta_gamma_identity_check(x, modp, EW, 1));
    TwoVarZ px = phi_2v(x, modp, EW);
    const SeriesZ* ps = px.at(3);
    REQUIRE(ps != nullptr);
    CHECK(ps->at(-6) != nullptr);  // eta^{-2} -> eta^{-6} mod p
    CHECK(twovar_equal(psi_2v(px, modp), raise_level(x, modp, EW), 1));
    (void)gx;
}
