#pragma once

// Config file parsing and literal (de)serialization.  Everything is integer
// encoded: rational coefficients travel as [valuation, mantissa, precision].

#include <json.hpp>

#include "phitau.hpp"

namespace ptau {

using ojson = nlohmann::ordered_json;

struct Windows {
    int u_lo = -12;
    int u_hi = 12;
    int eta_hi = 12;
    int level = 0;
    int u_span = 12;  // working span for structural series
};

struct RunConfig {
    PrimeConfig prime;
    Windows windows;
    std::uint64_t seed = 1;
    ojson command;
    ojson objects;
};

// throws domain_error with the offending field name
RunConfig parse_config(const ojson& j);
RunConfig load_config_file(const std::string& path);

// literals
ojson zq_to_json(const Zq& v);
Zq zq_from_json(const ojson& j, const Ring& R);
ojson pfloat_to_json(const PFloat& v);
PFloat pfloat_from_json(const ojson& j, const Ring& R);

template <class C>
ojson series_to_json(const Series<C>& s);
template <class C>
Series<C> series_from_json(const ojson& j, const Ring& R);

template <class C>
ojson twovar_to_json(const TwoVar<C>& x);
template <class C>
TwoVar<C> twovar_from_json(const ojson& j, const Ring& R);

}  // namespace ptau
