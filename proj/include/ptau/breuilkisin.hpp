#pragma once

// Height-1 phi-modules over the truncated power-series ring: the height
// certificate, the fixed-point solver for the unique phi-equivariant section
// congruent to the identity mod u, the induced connection matrix, the
// higher-derivative recursion, and the series reconstruction of the
// semilinear tau-action from it.

#include "diffop.hpp"
#include "phitau.hpp"

namespace ptau {

struct BKMod {
    const PrimeConfig* cfg = nullptr;
    int rank = 0;
    Mat<SeriesQ> A;  // phi(e_j) = sum_i A(i, j) e_i; entries supported in u >= 0
};

inline BKMod make_bk(const PrimeConfig& cfg, Mat<SeriesQ> A) {
    BKMod M;
    M.cfg = &cfg;
    M.rank = A.n;
    M.A = std::move(A);
    for (auto& e : M.A.a)
        if (!e.c.empty() && e.c.begin()->first < 0)
            throw domain_error("make_bk: matrix entries must be supported in u >= 0");
    return M;
}

inline SeriesQ eisenstein_series(const PrimeConfig& cfg) {
    SeriesQ E;
    E.lo = 0;
    E.hi = INF_HI;
    for (int i = 0; i <= cfg.e; ++i) {
        PFloat v = PFloat::from_int(cfg.ring, cfg.E[i]);
        if (!v.is_exact_zero()) E.c.emplace(i, v);
    }
    return E;
}

struct HeightCertificate {
    bool pass = false;
    int det_e_power = 0;          // h with det(A) = unit * E^h
    std::string detail;
};

// E * A^{-1} integral entry-wise; det(A) = unit * E^h with 0 <= h <= rank.
inline HeightCertificate validate_height1(const BKMod& M, int u_span) {
    HeightCertificate cert;
    const PrimeConfig& cfg = *M.cfg;
    Mat<SeriesQ> Ainv = mat_inverse_series(M.A, cfg.ring, u_span);
    SeriesQ E = eisenstein_series(cfg);
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) {
            SeriesQ t = E * Ainv(i, j);
            for (auto& [e, v] : t.c) {
                if (e < 0 && !v.is_zero()) {
                    cert.detail = "E A^{-1} has a negative u-exponent at entry (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")";
                    return cert;
                }
                if (!v.is_zero() && v.val() < 0) {
                    cert.detail = "E A^{-1} entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") has negative p-valuation at u^" +
                                  std::to_string(e);
                    return cert;
                }
            }
        }
    // determinant analysis: strip E-factors while the quotient stays integral
    SeriesQ det = mat_det(M.A).truncated(u_span);
    int h = 0;
    while (h <= M.rank) {
        bool integral = true;
        bool unit_const = false;
        for (auto& [e, v] : det.c)
            if (!v.is_zero() && v.val() < 0) integral = false;
        if (const PFloat* c0 = det.at(0))
            unit_const = !c0->is_zero() && c0->val() == 0;
        if (integral && unit_const) break;
        det = divide(det, E.truncated(u_span));
        ++h;
    }
    if (h > M.rank) {
        cert.detail = "det(A) is not unit * E^h with h <= rank";
        return cert;
    }
    cert.det_e_power = h;
    cert.pass = true;
    return cert;
}

struct XiData {
    Mat<SeriesQ> Xi;      // congruent to the identity mod u
    int iterations = 0;
    int u_precision = 0;  // achieved window
};

inline long long ceil_log_p_int(long long x, long long p) {
    long long k = 0, pk = 1;
    while (pk < x) { pk *= p; ++k; }
    return k;
}

// Fixed-point iteration Xi <- A phi(Xi) A(0)^{-1} from the identity;
// successive differences gain a factor p in u-valuation.
inline XiData solve_xi(const BKMod& M, int N) {
    const PrimeConfig& cfg = *M.cfg;
    const Ring& R = cfg.ring;
    // p-digit budget: each step multiplies by A(0)^{-1}
    int budget = static_cast<int>(ceil_log_p_int(N, cfg.p_ll())) + 1;
    if (R.r < budget)
        throw precision_error("solve_xi: needs at least " + std::to_string(budget) + " p-digits");
    Mat<SeriesQ> A0(M.rank, M.rank);
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) {
            const PFloat* v = M.A(i, j).at(0);
            A0(i, j) = v ? SeriesQ::monomial(0, *v) : SeriesQ::zero();
        }
    Mat<SeriesQ> A0inv = mat_inverse_series(A0, R, 1);
    XiData out;
    out.Xi = Mat<SeriesQ>(M.rank, M.rank);
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j)
            out.Xi(i, j) = (i == j) ? SeriesQ::one(R).truncated(N) : SeriesQ::zero();
    int steps = static_cast<int>(ceil_log_p_int(N + 1, cfg.p_ll())) + 1;
    long long gain = 1;
    for (int k = 0; k < steps; ++k) {
        Mat<SeriesQ> phiXi(M.rank, M.rank);
        for (int i = 0; i < M.rank; ++i)
            for (int j = 0; j < M.rank; ++j) phiXi(i, j) = phi_u(out.Xi(i, j), cfg).truncated(N);
        Mat<SeriesQ> next = mat_mul(mat_mul(M.A, phiXi), A0inv);
        for (auto& e : next.a) e = e.truncated(N);
        // geometric convergence: iterates differ only from u^{p^k} on
        for (std::size_t i = 0; i < next.a.size(); ++i) {
            SeriesQ d = next.a[i] - out.Xi.a[i];
            for (auto& [e, v] : d.c)
                if (!v.is_zero() && e < gain)
                    throw precision_error("solve_xi: iterate differs below the expected valuation");
        }
        out.Xi = std::move(next);
        ++out.iterations;
        if (gain <= N) gain *= cfg.p_ll();
    }
    for (auto& e : out.Xi.a) e = e.truncated(N);
    out.u_precision = N;
    // defect check: A phi(Xi) = Xi A(0) on the window
    Mat<SeriesQ> phiXi(M.rank, M.rank);
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) phiXi(i, j) = phi_u(out.Xi(i, j), cfg).truncated(N);
    Mat<SeriesQ> lhs = mat_mul(M.A, phiXi);
    Mat<SeriesQ> rhs = mat_mul(out.Xi, A0);
    for (std::size_t i = 0; i < lhs.a.size(); ++i)
        if (!series_equal(lhs.a[i].truncated(N), rhs.a[i].truncated(N), TRACKED))
            throw precision_error("solve_xi: defect nonzero on the window");
    return out;
}

// N_mat = u lambda Xi' Xi^{-1}: on module coordinates the connection acts as
// f -> -u lambda f' + N_mat f.
inline Mat<SeriesQ> n_nabla_matrix(const BKMod& M, const XiData& xi) {
    const PrimeConfig& cfg = *M.cfg;
    int N = xi.u_precision;
    SeriesQ ulam = lambda_series(cfg, N).shifted(1);
    Mat<SeriesQ> dXi(M.rank, M.rank);
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) dXi(i, j) = derive_u(xi.Xi(i, j));
    Mat<SeriesQ> XiInv = mat_inverse_series(xi.Xi, cfg.ring, N);
    Mat<SeriesQ> nm = mat_mul(dXi, XiInv);
    for (auto& e : nm.a) e = (ulam * e).truncated(N);
    return nm;
}

// v_p(coefficient of u^j) >= -1 - max{n : e (p^n - 1)/(p-1) <= j}.
inline bool s_nabla_certificate(const Mat<SeriesQ>& nm, const PrimeConfig& cfg) {
    for (const auto& entry : nm.a)
        for (auto& [j, v] : entry.c) {
            if (v.is_zero()) continue;
            long long bound = -1;
            long long pn = 1;
            int n = 0;
            while (cfg.e * (pn - 1) / (cfg.p_ll() - 1) <= j) {
                bound = n;
                pn *= cfg.p_ll();
                ++n;
            }
            if (v.val() < -1 - bound) return false;
        }
    return true;
}

// The connection as a first-order operator: N(f) = -u lambda f' + N_mat f.
inline DiffOp n_nabla_op(const BKMod& M, const Mat<SeriesQ>& nmat, int N) {
    const PrimeConfig& cfg = *M.cfg;
    DiffOp op;
    op.rank = M.rank;
    op.coef.resize(2, Mat<SeriesQ>(M.rank, M.rank));
    SeriesQ mulam = -(lambda_series(cfg, N).shifted(1));
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) {
            op.coef[0](i, j) = nmat(i, j);
            op.coef[1](i, j) = (i == j) ? mulam : SeriesQ::zero();
        }
    return op;
}

// Recursion in the operator algebra:
//   N^{(0)} = id,  N^{(i+1)} = i u lambda' N^{(i)} + N . N^{(i)}.
inline std::vector<DiffOp> n_upper(const BKMod& M, const DiffOp& n_op, int imax, int N) {
    const PrimeConfig& cfg = *M.cfg;
    SeriesQ ulp = derive_u(lambda_series(cfg, N + 1)).shifted(1).truncated(N);
    std::vector<DiffOp> ops;
    ops.push_back(DiffOp::identity(M.rank, cfg.ring));
    for (int i = 1; i <= imax; ++i) {
        DiffOp prev = ops.back();
        DiffOp t1 = diffop_scale(prev, scale(ulp, PFloat::from_int(cfg.ring, i - 1)));
        DiffOp t2 = diffop_compose(n_op, prev, cfg.ring);
        ops.push_back(diffop_add(t1, t2));
    }
    return ops;
}

// t = log([eps]) expanded at the given level: p^m log(1 + eta_m).
inline SeriesQ t_series(const PrimeConfig& cfg, int level, int eta_hi) {
    const Ring& R = cfg.ring;
    std::int64_t pm = 1;
    for (int i = 0; i < level; ++i) pm *= cfg.p_ll();
    SeriesQ s;
    s.lo = 1;
    s.hi = eta_hi;
    for (int n = 1; n <= eta_hi; ++n) {
        // (-1)^{n-1} p^m / n
        PFloat v = PFloat::from_int(R, (n % 2 == 1) ? pm : -pm) * PFloat::from_int(R, n).inv();
        s.c.emplace(n, v);
    }
    return s;
}

// tau(m) = sum_i w^i / i! N^{(i)}(m) with w = -t/lambda, evaluated in the
// two-variable ring (eta-degree of the i-th term is at least i).  The sign of
// w is the one the semilinearity oracle tau(u x) = [eps] tau(x) selects.
template <class C = PFloat>
TauElt<PFloat> tau_series(const BKMod& M, const std::vector<SeriesQ>& m,
                          const std::vector<DiffOp>& nup, int level, int eta_hi, int N,
                          int sign = -1) {
    const PrimeConfig& cfg = *M.cfg;
    const Ring& R = cfg.ring;
    SeriesQ lam = lambda_series(cfg, N);
    SeriesQ lam_inv = inverse(lam);
    SeriesQ t = t_series(cfg, level, eta_hi);
    int imax = static_cast<int>(nup.size()) - 1;
    TauElt<PFloat> out;
    out.level = level;
    out.v.assign(m.size(), TwoVarQ::zero(level));
    // i-th term: (sign^i t^i / i!) (eta part) times (lambda^{-i} N^{(i)} m) (u part)
    SeriesQ tpow = SeriesQ::one(R).truncated(eta_hi);
    SeriesQ lampow = SeriesQ::one(R).truncated(N);
    PFloat ifact = PFloat::from_int(R, 1);
    for (int i = 0; i <= imax; ++i) {
        if (i > 0) {
            tpow = (tpow * t).truncated(eta_hi);
            lampow = (lampow * lam_inv).truncated(N);
            ifact = ifact * PFloat::from_int(R, i);
        }
        if (tpow.c.empty()) break;  // eta-degree exceeded the window
        std::vector<SeriesQ> ni = diffop_apply(nup[i], m);
        PFloat inv_fact = ifact.inv();
        PFloat sgn = PFloat::from_int(R, (sign < 0 && i % 2 == 1) ? -1 : 1);
        SeriesQ eta_part = scale(tpow, inv_fact * sgn);
        for (std::size_t k = 0; k < m.size(); ++k) {
            SeriesQ upart = (ni[k] * lampow).truncated(N);
            // tensor: eta_part (eta only) times upart (u only)
            TwoVarQ term;
            term.level = level;
            term.ulo = upart.lo;
            term.uhi = upart.hi;
            for (auto& [ue, uv] : upart.c) term.uc.emplace(ue, scale(eta_part, uv));
            term.normalize();
            out.v[k] = out.v[k] + term;
        }
    }
    return out;
}

// The connection complex of a height-1 module over rational coordinates:
// d0(x) = ((A phi - 1) x, N x), d1(y, z) = N y - (c A phi - 1) z with
// N f = -u lambda f' + N_mat f.
struct BKNablaComplex {
    const BKMod* M = nullptr;
    Mat<SeriesQ> nmat;
    int N = 12;

    std::vector<SeriesQ> mod_phi(const std::vector<SeriesQ>& x) const {
        std::vector<SeriesQ> px(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) px[i] = phi_u(x[i], *M->cfg).truncated(N);
        return mat_vec(M->A, px);
    }
    std::vector<SeriesQ> conn(const std::vector<SeriesQ>& x) const {
        SeriesQ mulam = -(lambda_series(*M->cfg, N).shifted(1));
        std::vector<SeriesQ> o(x.size());
        std::vector<SeriesQ> nm = mat_vec(nmat, x);
        for (std::size_t i = 0; i < x.size(); ++i)
            o[i] = ((mulam * derive_u(x[i])) + nm[i]).truncated(N);
        return o;
    }
    std::pair<std::vector<SeriesQ>, std::vector<SeriesQ>> d0(const std::vector<SeriesQ>& x) const {
        std::vector<SeriesQ> fx = mod_phi(x);
        for (std::size_t i = 0; i < x.size(); ++i) fx[i] = (fx[i] - x[i]).truncated(N);
        return {fx, conn(x)};
    }
    std::vector<SeriesQ> d1(const std::vector<SeriesQ>& y, const std::vector<SeriesQ>& z) const {
        std::vector<SeriesQ> ny = conn(y);
        SeriesQ cs = c_series_q(*M->cfg);
        std::vector<SeriesQ> fz = mod_phi(z);
        for (std::size_t i = 0; i < z.size(); ++i)
            ny[i] = ny[i] - ((cs * fz[i]).truncated(N) - z[i]);
        return ny;
    }
};

inline BKNablaComplex bk_nabla_complex(const BKMod& M, int N) {
    XiData xi = solve_xi(M, N);
    return BKNablaComplex{&M, n_nabla_matrix(M, xi), N};
}

// PhiTauMod built from a height-1 module: phi is A, tau columns come from the
// series reconstruction on basis vectors.
inline PhiTauMod<PFloat> bk_phitau_module(const BKMod& M, int imax, int level, int eta_hi, int N,
                                          int sign = -1) {
    const PrimeConfig& cfg = *M.cfg;
    XiData xi = solve_xi(M, N);
    Mat<SeriesQ> nm = n_nabla_matrix(M, xi);
    DiffOp nop = n_nabla_op(M, nm, N);
    std::vector<DiffOp> nup = n_upper(M, nop, imax, N);
    PhiTauMod<PFloat> out;
    out.cfg = &cfg;
    out.rank = M.rank;
    out.phi_mat = M.A;
    out.tau_mat = Mat<TwoVarQ>(M.rank, M.rank);
    for (int j = 0; j < M.rank; ++j) {
        std::vector<SeriesQ> e(M.rank, SeriesQ::zero());
        e[j] = SeriesQ::one(cfg.ring).truncated(N);
        TauElt<PFloat> te = tau_series(M, e, nup, level, eta_hi, N, sign);
        for (int i = 0; i < M.rank; ++i) out.tau_mat(i, j) = te.v[i];
    }
    return out;
}

}  // namespace ptau
