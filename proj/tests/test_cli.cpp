#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ptau/cli.hpp"

using namespace ptau;

namespace {
RunConfig config_from_string(const std::string& text) {
    return parse_config(ojson::parse(text));
}
const char* base_prime = R"({"p": 3, "r": 4, "f": 1, "e": 1, "E": [-3, 1], "chi_gamma": 2})";
}  // namespace

TEST_CASE("config parsing and validation errors") {
    SUBCASE("valid config") {
        RunConfig rc = config_from_string(std::string(R"({"prime": )") + base_prime +
                                          R"(, "command": {"verb": "op-identity"}})");
        CHECK(rc.prime.ring.p == 3);
        CHECK(rc.seed == 1);
    }
    SUBCASE("missing command names the field") {
        try {
            config_from_string(std::string(R"({"prime": )") + base_prime + "}");
            FAIL("expected a validation error");
        } catch (const domain_error& e) {
            CHECK(std::string(e.what()).find("command") != std::string::npos);
        }
    }
    SUBCASE("bad Eisenstein data names the reason") {
        CHECK_THROWS_AS(config_from_string(
                            R"({"prime": {"p": 3, "r": 4, "E": [-9, 1]}, "command": {"verb": "x"}})"),
                        domain_error);
    }
}

TEST_CASE("op-identity verb produces an all-pass report") {
    RunConfig rc = config_from_string(std::string(R"({"prime": )") + base_prime +
                                      R"(, "seed": 7,
        "windows": {"u_lo": -8, "u_hi": 8, "eta_hi": 8},
        "command": {"verb": "op-identity", "name": "psi-phi", "count": 20}})");
    Report rep = run_config(rc, ".", false);
    CHECK(rep.exit_code() == 0);
    REQUIRE(!rep.checks.empty());
    CHECK(rep.checks[0].status == CheckStatus::pass);
}

TEST_CASE("cocycle-verify reproduces the counter-example verdicts") {
    RunConfig rc = config_from_string(std::string(R"({"prime": {"p": 3, "r": 1, "E": [-3, 1]})") +
                                      R"(, "seed": 5,
        "windows": {"u_lo": -6, "u_hi": 6, "eta_hi": 8},
        "command": {"verb": "cocycle-verify", "y": "y", "z": "z",
                    "expect_tau0": false, "expect_solvable": false},
        "objects": {
          "y": {"window": [0, "inf"], "coeffs": [[0, 1]]},
          "z": {"level": 0, "uwindow": [0, "inf"],
                "coeffs": [[0, {"window": [0, "inf"], "coeffs": [[0, 1]]}]]}
        }})");
    Report rep = run_config(rc, ".", false);
    CHECK(rep.exit_code() == 0);
    for (auto& c : rep.checks) CHECK(c.status == CheckStatus::pass);
}

TEST_CASE("kernel verb reports the expected dimension") {
    RunConfig rc = config_from_string(std::string(R"({"prime": {"p": 3, "r": 1, "E": [-3, 1]})") +
                                      R"(,
        "windows": {"u_lo": -9, "u_hi": 9, "eta_hi": 9},
        "command": {"verb": "kernel", "operator": "joint", "expect_dimension": 1}})");
    Report rep = run_config(rc, ".", false);
    CHECK(rep.exit_code() == 0);
}

TEST_CASE("reports are byte-identical for a fixed config and seed") {
    RunConfig rc = config_from_string(std::string(R"({"prime": )") + base_prime +
                                      R"(, "seed": 99,
        "windows": {"u_lo": -8, "u_hi": 8, "eta_hi": 8},
        "command": {"verb": "robba-axioms", "count": 10}})");
    std::string a = report_to_bytes(run_config(rc, ".", false));
    std::string b = report_to_bytes(run_config(rc, ".", false));
    CHECK(a == b);
    CHECK(fnv1a_hex(a) == fnv1a_hex(b));
}

TEST_CASE("suite: golden comparison, missing baseline, tampering") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ptau_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream c(dir / "inner.json");
        c << R"({"prime": )" << base_prime << R"(, "seed": 3,
                 "windows": {"u_lo": -6, "u_hi": 6, "eta_hi": 6},
                 "command": {"verb": "op-identity", "name": "delta-gamma", "count": 5}})";
    }
    {
        std::ofstream m(dir / "manifest.json");
        m << R"({"prime": )" << base_prime << R"(,
                 "command": {"verb": "suite",
                             "manifest": [{"config": "inner.json", "golden": "inner.golden.json"}]}})";
    }
    RunConfig suite = load_config_file((dir / "manifest.json").string());
    SUBCASE("missing golden fails without the accept flag") {
        Report rep = run_config(suite, dir.string(), false);
        CHECK(rep.exit_code() == 1);
    }
    SUBCASE("accept-baselines writes the golden, then the suite passes and is stable") {
        Report rep = run_config(suite, dir.string(), true);
        CHECK(rep.exit_code() == 0);
        Report rep2 = run_config(suite, dir.string(), false);
        CHECK(rep2.exit_code() == 0);
        // determinism across runs: byte-identical suite reports
        CHECK(report_to_bytes(rep2) == report_to_bytes(run_config(suite, dir.string(), false)));
        // negative control: tamper with the golden
        {
            std::ofstream g(dir / "inner.golden.json", std::ios::app);
            g << "tampered\n";
        }
        Report rep3 = run_config(suite, dir.string(), false);
        CHECK(rep3.exit_code() == 1);
        bool has_diff = false;
        for (auto& c : rep3.checks)
            if (c.status == CheckStatus::fail && c.witness.contains("diff")) has_diff = true;
        CHECK(has_diff);
    }
    SUBCASE("empty manifest passes with zero checks") {
        RunConfig empty = config_from_string(std::string(R"({"prime": )") + base_prime +
                                             R"(, "command": {"verb": "suite", "manifest": []}})");
        Report rep = run_config(empty, dir.string(), false);
        CHECK(rep.exit_code() == 0);
        CHECK(rep.checks.empty());
    }
}

TEST_CASE("cli entry point: usage and exit codes") {
    std::ostringstream out, err;
    CHECK(run_cli({}, out, err) == 3);
    CHECK(run_cli({"--config", "/nonexistent/x.json"}, out, err) == 3);
}

TEST_CASE("bk verbs through the cli layer") {
    RunConfig rc = config_from_string(std::string(R"({"prime": )") + base_prime +
                                      R"(,
        "windows": {"u_lo": 0, "u_hi": 12, "eta_hi": 8, "u_span": 12},
        "command": {"verb": "bk-xi", "compare_lambda": true,
                    "A": [[{"window": [0, "inf"], "coeffs": [[0, -3], [1, 1]]}]]}})");
    // A = E(u) = u - 3 written as rational coefficients: -3 = [1, 2] (3^1 * 2... )
    Report rep = run_config(rc, ".", false);
    CHECK(rep.exit_code() == 0);
}

TEST_CASE("precision exhaustion surfaces as inconclusive, exit code 2") {
    // xi needs ceil(log_p N) + 1 digits; r = 2 is below the budget for N = 12
    RunConfig rc = config_from_string(R"({
        "prime": {"p": 3, "r": 2, "f": 1, "e": 1, "E": [-3, 1], "chi_gamma": 2},
        "windows": {"u_lo": 0, "u_hi": 12, "eta_hi": 6, "u_span": 12},
        "command": {"verb": "bk-xi",
                    "A": [[{"window": [0, "inf"], "coeffs": [[0, -3], [1, 1]]}]]}})");
    Report rep = run_config(rc, ".", false);
    CHECK(rep.exit_code() == 2);
    REQUIRE(!rep.checks.empty());
    CHECK(rep.checks[0].status == CheckStatus::inconclusive);
}

TEST_CASE("explicit module descriptors and the twisted robba wiring") {
    RunConfig rc = config_from_string(std::string(R"({"prime": )") + base_prime + R"(,
        "seed": 11,
        "windows": {"u_lo": -8, "u_hi": 8, "eta_hi": 8},
        "command": {"verb": "complex-build", "kind": "phi_tau", "samples": 5,
                    "module": {"kind": "explicit", "rank": 1, "tau_power": 0,
                               "phi_mat": [[{"window": [0, "inf"], "coeffs": [[0, 1]]}]],
                               "tau_mat": [[{"level": 0, "uwindow": [0, "inf"],
                                             "coeffs": [[0, {"window": [0, "inf"],
                                                             "coeffs": [[0, 1]]}]]}]]}}})");
    CHECK(run_config(rc, ".", false).exit_code() == 0);
    RunConfig rc2 = config_from_string(std::string(R"({"prime": )") + base_prime + R"(,
        "seed": 12,
        "windows": {"u_lo": -8, "u_hi": 8, "eta_hi": 8},
        "command": {"verb": "robba-axioms", "count": 10, "twist_n": 1}})");
    CHECK(run_config(rc2, ".", false).exit_code() == 0);
}

TEST_CASE("ring-eval applies an operator chain to a configured element") {
    RunConfig rc = config_from_string(std::string(R"({"prime": )") + base_prime + R"(,
        "windows": {"u_lo": -6, "u_hi": 6, "eta_hi": 8},
        "command": {"verb": "ring-eval", "object": "x", "ops": ["tau", "psi"]},
        "objects": {
          "x": {"level": 0, "uwindow": [0, "inf"],
                "coeffs": [[3, {"window": [0, "inf"], "coeffs": [[0, 1]]}]]}
        }})");
    Report rep = run_config(rc, ".", false);
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].status == CheckStatus::pass);
    // tau(u^3) = (1+eta)^3 u^3; psi keeps u^3 -> u at level 1
    const ojson& res = rep.checks[0].witness["result"];
    CHECK(res["level"] == 1);
    CHECK(res["coeffs"][0][0] == 1);
}
