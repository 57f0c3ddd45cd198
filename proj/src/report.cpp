#include "ptau/report.hpp"

namespace ptau {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

ojson report_to_json(const Report& r) {
    ojson o;
    o["command"] = r.command;
    o["config_digest"] = r.config_digest;
    o["seed"] = r.seed;
    ojson checks = ojson::array();
    int pass = 0, fail = 0, inc = 0;
    for (auto& c : r.checks) {
        ojson cj;
        cj["name"] = c.name;
        switch (c.status) {
            case CheckStatus::pass: cj["status"] = "pass"; ++pass; break;
            case CheckStatus::fail: cj["status"] = "fail"; ++fail; break;
            case CheckStatus::inconclusive: cj["status"] = "inconclusive-precision"; ++inc; break;
        }
        if (!c.witness.empty()) cj["witness"] = c.witness;
        checks.push_back(std::move(cj));
    }
    o["checks"] = checks;
    o["summary"] = ojson{{"pass", pass}, {"fail", fail}, {"inconclusive", inc}};
    return o;
}

std::string report_to_bytes(const Report& r) { return report_to_json(r).dump(2) + "\n"; }

}  // namespace ptau
