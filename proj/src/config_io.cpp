#include "ptau/config_io.hpp"

#include <fstream>

namespace ptau {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw domain_error("config field '" + field + "': " + what);
}

int get_int(const ojson& j, const char* field, int defval, bool required = false) {
    if (!j.contains(field)) {
        if (required) field_error(field, "missing");
        return defval;
    }
    if (!j[field].is_number_integer()) field_error(field, "must be an integer");
    return j[field].get<int>();
}

}  // namespace

RunConfig parse_config(const ojson& j) {
    RunConfig rc;
    if (!j.contains("prime")) field_error("prime", "missing");
    const ojson& p = j["prime"];
    std::uint64_t prime = static_cast<std::uint64_t>(get_int(p, "p", 3));
    int r = get_int(p, "r", 4);
    int f = get_int(p, "f", 1);
    int e = get_int(p, "e", 1);
    std::int64_t chi = get_int(p, "chi_gamma", 2);
    std::vector<std::int64_t> E;
    if (!p.contains("E") || !p["E"].is_array()) field_error("prime.E", "must be a coefficient array");
    for (auto& v : p["E"]) {
        if (!v.is_number_integer()) field_error("prime.E", "coefficients must be integers");
        E.push_back(v.get<std::int64_t>());
    }
    rc.prime = PrimeConfig(prime, r, f, e, E, chi);
    if (j.contains("windows")) {
        const ojson& w = j["windows"];
        rc.windows.u_lo = get_int(w, "u_lo", -12);
        rc.windows.u_hi = get_int(w, "u_hi", 12);
        rc.windows.eta_hi = get_int(w, "eta_hi", 12);
        rc.windows.level = get_int(w, "level", 0);
        rc.windows.u_span = get_int(w, "u_span", rc.windows.u_hi);
        if (rc.windows.u_hi < rc.windows.u_lo) field_error("windows", "u_hi < u_lo");
        if (rc.windows.eta_hi < 0) field_error("windows.eta_hi", "must be >= 0");
        if (rc.windows.level < 0) field_error("windows.level", "must be >= 0");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            field_error("seed", "must be an integer");
        rc.seed = j["seed"].get<std::uint64_t>();
    }
    if (!j.contains("command") || !j["command"].is_object())
        field_error("command", "missing or not an object");
    rc.command = j["command"];
    if (!rc.command.contains("verb")) field_error("command.verb", "missing");
    if (j.contains("objects")) rc.objects = j["objects"];
    return rc;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config file: " + path);
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw domain_error("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

ojson zq_to_json(const Zq& v) {
    if (v.R->f == 1) return ojson(static_cast<std::int64_t>(v.c.empty() ? 0 : v.c[0]));
    ojson a = ojson::array();
    for (auto x : v.c) a.push_back(static_cast<std::int64_t>(x));
    return a;
}

Zq zq_from_json(const ojson& j, const Ring& R) {
    Zq v(R);
    if (j.is_number_integer()) {
        v.c[0] = R.norm(j.get<std::int64_t>());
        return v;
    }
    if (!j.is_array() || j.size() != static_cast<std::size_t>(R.f))
        throw domain_error("integral coefficient literal: expected integer or array of length f");
    for (int i = 0; i < R.f; ++i) v.c[i] = R.norm(j[i].get<std::int64_t>());
    return v;
}

ojson pfloat_to_json(const PFloat& v) {
    ojson a = ojson::array();
    if (v.is_zero()) {
        a.push_back("zero");
        if (!v.is_exact_zero()) a.push_back(v.val());
        return a;
    }
    a.push_back(v.val());
    a.push_back(zq_to_json(v.mant_));
    a.push_back(v.prec());
    return a;
}

PFloat pfloat_from_json(const ojson& j, const Ring& R) {
    if (j.is_number_integer()) return PFloat::from_int(R, j.get<std::int64_t>());
    if (!j.is_array() || j.empty()) throw domain_error("rational coefficient literal: expected array");
    if (j[0].is_string() && j[0].get<std::string>() == "zero") {
        if (j.size() > 1) return PFloat::zero(R, j[1].get<long long>());
        return PFloat::zero(R);
    }
    long long val = j[0].get<long long>();
    Zq mant = zq_from_json(j[1], R);
    int prec = j.size() > 2 ? j[2].get<int>() : R.r;
    return PFloat::make(R, val, mant, prec);
}

namespace {
ojson coeff_to_json(const Zq& v) { return zq_to_json(v); }
ojson coeff_to_json(const PFloat& v) { return pfloat_to_json(v); }
Zq coeff_from_json(const ojson& j, const Ring& R, const Zq*) { return zq_from_json(j, R); }
PFloat coeff_from_json(const ojson& j, const Ring& R, const PFloat*) {
    return pfloat_from_json(j, R);
}
ojson hi_to_json(int hi) {
    if (hi >= INF_HI) return ojson("inf");
    return ojson(hi);
}
int hi_from_json(const ojson& j) {
    if (j.is_string()) return INF_HI;
    return j.get<int>();
}
}  // namespace

template <class C>
ojson series_to_json(const Series<C>& s) {
    ojson o;
    o["window"] = ojson::array({s.lo >= INF_HI ? ojson("inf") : ojson(s.lo), hi_to_json(s.hi)});
    ojson cs = ojson::array();
    for (auto& [e, v] : s.c) cs.push_back(ojson::array({e, coeff_to_json(v)}));
    o["coeffs"] = cs;
    return o;
}

template <class C>
Series<C> series_from_json(const ojson& j, const Ring& R) {
    Series<C> s;
    if (!j.contains("window") || !j["window"].is_array() || j["window"].size() != 2)
        throw domain_error("series literal: window must be [lo, hi]");
    s.lo = j["window"][0].is_string() ? INF_HI : j["window"][0].get<int>();
    s.hi = hi_from_json(j["window"][1]);
    if (j.contains("coeffs"))
        for (auto& pair : j["coeffs"]) {
            int e = pair[0].get<int>();
            s.c.emplace(e, coeff_from_json(pair[1], R, static_cast<const C*>(nullptr)));
        }
    s.normalize();
    return s;
}

template <class C>
ojson twovar_to_json(const TwoVar<C>& x) {
    ojson o;
    o["level"] = x.level;
    o["uwindow"] = ojson::array({x.ulo >= INF_HI ? ojson("inf") : ojson(x.ulo), hi_to_json(x.uhi)});
    ojson cs = ojson::array();
    for (auto& [e, s] : x.uc) cs.push_back(ojson::array({e, series_to_json(s)}));
    o["coeffs"] = cs;
    return o;
}

template <class C>
TwoVar<C> twovar_from_json(const ojson& j, const Ring& R) {
    TwoVar<C> x;
    x.level = j.value("level", 0);
    if (!j.contains("uwindow") || !j["uwindow"].is_array() || j["uwindow"].size() != 2)
        throw domain_error("twovar literal: uwindow must be [lo, hi]");
    x.ulo = j["uwindow"][0].is_string() ? INF_HI : j["uwindow"][0].get<int>();
    x.uhi = hi_from_json(j["uwindow"][1]);
    if (j.contains("coeffs"))
        for (auto& pair : j["coeffs"]) {
            int e = pair[0].get<int>();
            x.uc.emplace(e, series_from_json<C>(pair[1], R));
        }
    x.normalize();
    return x;
}

template ojson series_to_json<Zq>(const Series<Zq>&);
template ojson series_to_json<PFloat>(const Series<PFloat>&);
template Series<Zq> series_from_json<Zq>(const ojson&, const Ring&);
template Series<PFloat> series_from_json<PFloat>(const ojson&, const Ring&);
template ojson twovar_to_json<Zq>(const TwoVar<Zq>&);
template ojson twovar_to_json<PFloat>(const TwoVar<PFloat>&);
template TwoVar<Zq> twovar_from_json<Zq>(const ojson&, const Ring&);
template TwoVar<PFloat> twovar_from_json<PFloat>(const ojson&, const Ring&);

}  // namespace ptau
