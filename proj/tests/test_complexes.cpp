#include <doctest.h>

#include "ptau/complexes.hpp"
#include "ptau/rng.hpp"

using namespace ptau;

namespace {
const PrimeConfig& cfg3() {
    static PrimeConfig c(3, 4, 1, 1, {-3, 1}, 2);
    return c;
}
const PrimeConfig& cfgp() {
    static PrimeConfig c(3, 1, 1, 1, {-3, 1}, 2);
    return c;
}
constexpr int EW = 10;
constexpr int UN = 12;
}  // namespace

TEST_CASE("d1 . d0 = 0 for the restricted and naive complexes") {
    const auto& cfg = cfg3();
    Rng rng(101);
    auto M = make_trivial<Zq>(1, cfg);
    for (int t = 0; t < 20; ++t) {
        PlainElt<Zq> x{rng.useries_z(cfg.ring, -5, 5, 4)};
        Elt1<Zq> e = d0_phi_tau(M, x, EW);
        CHECK(tau_is_zero(d1_phi_tau(M, e, EW), cfg.ring.r));
        CHECK(in_tau0(M, e.z, EW, cfg.ring.r));
        CHECK(cocycle_check_phi_tau(M, e, EW, cfg.ring.r));
    }
}

TEST_CASE("d1 . d0 = 0 for the psi complex") {
    const auto& cfg = cfg3();
    Rng rng(103);
    auto M = make_trivial<Zq>(1, cfg);
    for (int t = 0; t < 20; ++t) {
        PlainElt<Zq> x{rng.useries_z(cfg.ring, -5, 5, 4)};
        Elt1<Zq> e = d0_psi_tau(M, x, UN, EW);
        CHECK(tau_is_zero(d1_psi_tau(M, e, UN, EW), cfg.ring.r));
    }
}

TEST_CASE("counter-example classes (alpha, 1) over the trivial mod-p module") {
    const auto& cp = cfgp();
    const Ring& R = cp.ring;
    auto M = make_trivial<Zq>(1, cp);
    for (int alpha = 0; alpha < 3; ++alpha) {
        Elt1<Zq> e;
        e.y = PlainElt<Zq>{SeriesZ::constant(R, alpha)};
        e.z = TauElt<Zq>{0, {TwoVarZ::constant(R, 1, 0)}};
        // naive cocycle: d1 = (tau-1)(alpha) - (phi-1)(1) = 0
        CHECK(cocycle_check_naive(M, e, EW, 1));
        // but the second component fails the tau0 membership
        CHECK_FALSE(in_tau0(M, e.z, EW, 1));
        // 1 lies in ker(phi - 1)
        PlainElt<Zq> one{SeriesZ::one(R)};
        CHECK(plain_is_zero(plain_sub(apply_phi(M, one), one), 1));
        // and the class resists the coboundary solver
        SolveOutcome<Zq> s = coboundary_solve(M, e, UN, EW, 1);
        CHECK_FALSE(s.ok);
        CHECK(s.detail.find("inapplicable") != std::string::npos);
    }
}

TEST_CASE("coboundary solver recovers images of d0") {
    const auto& cfg = cfg3();
    const Ring& R = cfg.ring;
    auto M = make_trivial<Zq>(1, cfg);
    SUBCASE("phi-geometric route (positive valuation data)") {
        Rng rng(107);
        for (int t = 0; t < 15; ++t) {
            SeriesZ s = rng.useries_z(R, 1, 8, 3);
            if (s.c.empty()) continue;
            Elt1<Zq> e = d0_phi_tau(M, PlainElt<Zq>{s}, EW);
            SolveOutcome<Zq> out = coboundary_solve(M, e, UN, EW, R.r);
            REQUIRE(out.ok);
            Elt1<Zq> d = d0_phi_tau(M, out.preimage, EW);
            CHECK(plain_equal(d.y, e.y, R.r));
            CHECK(tau_equal(d.z, e.z, cfg, EW, R.r));
        }
    }
    SUBCASE("(u, 0)-type data solved by the geometric series") {
        SeriesZ u = SeriesZ::monomial(1, Zq(R, 1), 9);
        Elt1<Zq> e;
        e.y = PlainElt<Zq>{u};
        // z = (tau-1)x for the x that the phi-series will find
        PlainElt<Zq> x = solve_module_phi_minus_one(M, e.y);
        e.z = apply_tau_minus_one(M, base_change(x, 0), EW);
        SolveOutcome<Zq> out = coboundary_solve(M, e, UN, EW, R.r);
        CHECK(out.ok);
        CHECK(out.detail == "phi-geometric");
    }
    SUBCASE("tau-inverse route (psi = 0 second component, zero first)") {
        // x plain with exponents prime to p; e = (0 + (phi-1)x?, ...) -- use
        // d0 of x and strip to the solvable shape: y = (phi-1)x has constant
        // and p-divisible parts, so feed the genuine d0 pair instead.
        SeriesZ x = SeriesZ::monomial(2, Zq(R, 1), EW) + SeriesZ::monomial(-2, Zq(R, 2), EW);
        Elt1<Zq> e = d0_phi_tau(M, PlainElt<Zq>{x}, EW);
        SolveOutcome<Zq> out = coboundary_solve(M, e, UN, EW, R.r);
        CHECK(out.ok);  // either strategy may fire; d0-image must be solved
    }
}

TEST_CASE("four-term complex and chain morphisms") {
    const auto& cfg = cfg3();
    Rng rng(109);
    auto M = make_trivial<Zq>(1, cfg);
    auto rnd3 = [&rng, &cfg]() {
        return Elt3<Zq>{TauElt<Zq>{0, {rng.twovar<Zq>(cfg.ring, 0, -4, 4, 5, 3, 2)}},
                        TauElt<Zq>{0, {rng.twovar<Zq>(cfg.ring, 0, -4, 4, 5, 3, 2)}},
                        TauElt<Zq>{0, {rng.twovar<Zq>(cfg.ring, 0, -4, 4, 5, 3, 2)}}};
    };
    for (int t = 0; t < 15; ++t) {
        TauElt<Zq> x{0, {rng.twovar<Zq>(cfg.ring, 0, -4, 4, 5, 3, 2)}};
        PlainElt<Zq> px{rng.useries_z(cfg.ring, -4, 4, 3)};
        TrReport rep = tr_check(M, x, rnd3(), px, EW, cfg.ring.r);
        CHECK(rep.beta_alpha_zero);
        CHECK(rep.eta_beta_zero);
        CHECK(rep.square1);
        CHECK(rep.square2);
    }
    // zero element trivially commutes
    TauElt<Zq> z{0, {TwoVarZ::zero(0)}};
    PlainElt<Zq> pz{SeriesZ::zero()};
    CHECK(tr_check(M, z, Elt3<Zq>{z, z, z}, pz, EW, cfg.ring.r).all());
    // twist(1) module at tracked precision
    auto W = make_twist(1, cfg, UN, EW);
    Rng rng2(113);
    for (int t = 0; t < 5; ++t) {
        TauElt<PFloat> x{0, {rng2.twovar<PFloat>(cfg.ring, 0, -3, 3, 4, 2, 2)}};
        Elt3<PFloat> t3{TauElt<PFloat>{0, {rng2.twovar<PFloat>(cfg.ring, 0, -3, 3, 4, 2, 2)}},
                        TauElt<PFloat>{0, {rng2.twovar<PFloat>(cfg.ring, 0, -3, 3, 4, 2, 2)}},
                        TauElt<PFloat>{0, {rng2.twovar<PFloat>(cfg.ring, 0, -3, 3, 4, 2, 2)}}};
        PlainElt<PFloat> px{rng2.useries_q(cfg.ring, -3, 3, 3)};
        TrReport rep = tr_check(W, x, t3, px, EW, TRACKED);
        CHECK(rep.beta_alpha_zero);
        CHECK(rep.eta_beta_zero);
        CHECK(rep.square1);
        CHECK(rep.square2);
    }
}

TEST_CASE("psi interacts with the tau0 space and the psi=0 bijection") {
    const auto& cfg = cfg3();
    const Ring& R = cfg.ring;
    auto M = make_trivial<Zq>(1, cfg);
    Rng rng(127);
    SUBCASE("psi of a tau0 member is a tau0 member") {
        for (int t = 0; t < 15; ++t) {
            SeriesZ s = rng.useries_z(R, -5, 5, 3);
            TauElt<Zq> y = apply_tau_minus_one(M, base_change(PlainElt<Zq>{s}, 0), EW);
            REQUIRE(in_tau0(M, y, EW, R.r));
            TauElt<Zq> py = module_psi(M, y, UN, EW);
            CHECK(in_tau0(M, py, EW, R.r));
        }
    }
    SUBCASE("module psi is surjective: phi(y) is a preimage of y") {
        for (int t = 0; t < 15; ++t) {
            PlainElt<Zq> y{rng.useries_z(R, -5, 5, 3)};
            PlainElt<Zq> x = apply_phi(M, y);
            CHECK(plain_equal(module_psi(M, x, UN), y, R.r));
        }
    }
    SUBCASE("(tau-1) maps psi=0 plainly into psi=0 tau0 members and back") {
        for (int t = 0; t < 15; ++t) {
            // plain psi=0 element: u-exponents prime to p
            SeriesZ s;
            s.lo = -7;
            s.hi = 7;
            for (int k = 0; k < 3; ++k) {
                int e = static_cast<int>(rng.range(-7, 7));
                if (e % 3 == 0) continue;
                s.c.emplace(e, rng.zq(R));
            }
            s.normalize();
            if (s.c.empty()) continue;
            TauElt<Zq> z = apply_tau_minus_one(M, base_change(PlainElt<Zq>{s}, 0), EW);
            CHECK(in_tau0(M, z, EW, R.r));
            CHECK(module_in_psi0(M, z, UN, EW, R.r));
            // ring-level inverse recovers the plain element
            TwoVarZ w = tau_minus_one_inverse_psi0(z.v[0], cfg, EW);
            CHECK(twovar_equal(w, embed_useries(s, 0), R.r));
        }
    }
}

TEST_CASE("windowed kernels over the trivial mod-p module") {
    const auto& cp = cfgp();
    SUBCASE("ker(phi - 1) = constants for hi >= p^2") {
        for (int W : {9, 10, 12}) {
            WindowedMap wm = windowed_phi_minus_one(cp, -W, W);
            auto ker = windowed_kernel(wm, cp.ring);
            REQUIRE(ker.size() == 1);
            // the kernel vector is supported on u^0
            for (std::size_t i = 0; i < wm.source.size(); ++i)
                if (wm.source[i] != 0) CHECK(ker[0][i] == 0);
        }
    }
    SUBCASE("joint kernel of (phi - 1, tau - 1) is one-dimensional") {
        WindowedMap a = windowed_phi_minus_one(cp, -12, 12);
        WindowedMap b = windowed_tau_minus_one(cp, -12, 12, 12);
        auto ker = joint_kernel(a, b, cp.ring);
        CHECK(ker.size() == 1);
    }
    SUBCASE("zero map has full kernel") {
        WindowedMap z;
        for (int j = -3; j <= 3; ++j) z.source.push_back(j);
        auto ker = windowed_kernel(z, cp.ring);
        CHECK(ker.size() == 7);
    }
}

TEST_CASE("windowed H0 stabilizes at dimension 1 as windows grow (mod p^r too)") {
    const auto& cfg = cfg3();
    for (int W : {9, 12}) {
        WindowedMap a = windowed_phi_minus_one(cfg, -W, W);
        WindowedMap b = windowed_tau_minus_one(cfg, -W, W, 12);
        auto ker = joint_kernel(a, b, cfg.ring);
        CHECK(ker.size() == 1);
    }
}

TEST_CASE("tau-power complex variant: d1 . d0 = 0 and membership") {
    const auto& cfg = cfg3();
    Rng rng(131);
    auto M0 = make_trivial<Zq>(1, cfg);
    auto M1 = power_module(M0, EW);
    for (int t = 0; t < 10; ++t) {
        PlainElt<Zq> x{rng.useries_z(cfg.ring, -4, 4, 3)};
        Elt1<Zq> e = d0_phi_tau(M1, x, EW);
        CHECK(tau_is_zero(d1_phi_tau(M1, e, EW), cfg.ring.r));
        CHECK(in_tau0(M1, e.z, EW, cfg.ring.r));
    }
}

TEST_CASE("naive-versus-restricted comparison report") {
    const auto& cp = cfgp();
    auto M = make_trivial<Zq>(1, cp);
    Rng rng(139);
    auto rep = naive_vs_restricted(M, rng, 10, EW, 1);
    // the p constant classes are naive cocycles that fail the membership
    CHECK(rep.naive_only == 3);
    for (auto& e : rep.entries) {
        if (e.label == "d0-image") {
            CHECK(e.naive_cocycle);
            CHECK(e.tau0_member);
        } else {
            CHECK(e.naive_cocycle);
            CHECK_FALSE(e.tau0_member);
        }
    }
}
