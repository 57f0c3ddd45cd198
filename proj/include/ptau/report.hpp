#pragma once

// Deterministic structured reports with a stable digest for golden-file
// comparison.

#include "config_io.hpp"

namespace ptau {

enum class CheckStatus { pass, fail, inconclusive };

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    ojson witness;  // minimal reproduction data
};

struct Report {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    void add(const std::string& name, bool ok, ojson witness = ojson::object()) {
        checks.push_back({name, ok ? CheckStatus::pass : CheckStatus::fail, std::move(witness)});
    }
    void add_inconclusive(const std::string& name, ojson witness) {
        checks.push_back({name, CheckStatus::inconclusive, std::move(witness)});
    }
    int exit_code() const {
        bool any_fail = false, any_inc = false;
        for (auto& c : checks) {
            if (c.status == CheckStatus::fail) any_fail = true;
            if (c.status == CheckStatus::inconclusive) any_inc = true;
        }
        if (any_fail) return 1;
        if (any_inc) return 2;
        return 0;
    }
};

std::string fnv1a_hex(const std::string& bytes);
ojson report_to_json(const Report& r);
std::string report_to_bytes(const Report& r);

}  // namespace ptau
