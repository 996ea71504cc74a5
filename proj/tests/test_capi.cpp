#include "henselkit/henselkit.h"

#include <doctest.h>
#include <json.hpp>

#include <gmpxx.h>

#include <map>
#include <string>

namespace {

struct Run {
    int code;
    std::string text;
    nlohmann::json doc;
};

Run run(const std::string& command, const std::map<std::string, std::string>& flags) {
    hk_job* job = hk_job_create(command.c_str());
    REQUIRE(job != nullptr);
    for (const auto& [k, v] : flags) REQUIRE(hk_job_set(job, k.c_str(), v.c_str()) == HK_OK);
    hk_report* rep = hk_job_run(job);
    hk_job_free(job);
    REQUIRE(rep != nullptr);
    Run r{hk_report_exit_code(rep), hk_report_text(rep), nlohmann::json::parse(hk_report_structured(rep))};
    hk_report_free(rep);
    return r;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("command and flag tables") {
    int n = 0;
    while (hk_command_name(n)) ++n;
    CHECK(n == 10);
    CHECK(std::string(hk_command_name(0)) == "lift1d");
    CHECK(hk_command_name(-1) == nullptr);
    CHECK(std::string(hk_flag_name(0)) == "ground");
    CHECK(hk_version() != nullptr);
}

TEST_CASE("argument validation") {
    hk_job* job = hk_job_create("lift1d");
    CHECK(hk_job_set(job, "nonsense", "1") == HK_ERR_UNKNOWN_FLAG);
    CHECK(hk_job_set(job, nullptr, "1") == HK_ERR_NULL);
    CHECK(hk_job_set(nullptr, "ground", "1") == HK_ERR_NULL);
    CHECK(hk_job_set(job, "ground", nullptr) == HK_ERR_NULL);
    hk_job_free(job);
    CHECK(hk_job_run(nullptr) == nullptr);
    CHECK(hk_report_text(nullptr) == nullptr);
    hk_report_free(nullptr);
    hk_job_free(nullptr);
}

TEST_CASE("lift1d square root of 7 in the 3-adics") {
    auto r = run("lift1d", {{"ground", "padic(3, 12)"}, {"poly", "X^2 - 7"}, {"point", "1"}});
    REQUIRE(r.code == HK_EXIT_OK);
    mpz_class a(r.doc["result"]["root_integer"].get<std::string>());
    CHECK(a % 9 == 4);
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), 3, 12);
    CHECK((a * a - 7) % mod == 0);
    CHECK(r.doc["certificate"]["strictly_increasing"] == true);
    auto steps = r.doc["certificate"]["steps"];
    REQUIRE(!steps.empty());
    for (const auto& s : steps) CHECK(std::stoi(s["after"].get<std::string>()) > std::stoi(s["before"].get<std::string>()));
    CHECK(r.doc["verification"]["passed"] == true);
    CHECK(r.doc["result"]["pseudo_slope_pairs_checked"] == "50");
    CHECK(r.text.find("root_integer: " + a.get_str()) != std::string::npos);
}

TEST_CASE("reports are deterministic") {
    std::map<std::string, std::string> flags{{"ground", "rosenlicht(1, 16)"}, {"poly", "X0^2"}, {"target", "t^2"},
                                             {"rate", "2"}, {"ode-order", "1"}, {"seed", "7"}};
    auto a = run("ode", flags), b = run("ode", flags);
    CHECK(a.code == HK_EXIT_OK);
    CHECK(a.text == b.text);
    CHECK(a.doc.dump() == b.doc.dump());
}

TEST_CASE("invert-series of X + X^2") {
    auto r = run("invert-series", {{"ground", "series(Q, 1, 8)"}, {"poly", "X + X^2"}, {"target", "t"}});
    REQUIRE(r.code == HK_EXIT_OK);
    CHECK(r.doc["result"]["inverse"].get<std::string>().rfind("1*t^(1) + -1*t^(2) + 2*t^(3) + -5*t^(4)", 0) == 0);
}

TEST_CASE("text report mirrors the structured document") {
    auto r = run("liftnd", {{"ground", "padic(3, 10)"}, {"poly", "X0^2 - 7; X1^2 - X0"}, {"point", "1; 1"}});
    REQUIRE(r.code == HK_EXIT_OK);
    for (const auto& x : r.doc["result"]["root"]) CHECK(r.text.find("- " + x.get<std::string>()) != std::string::npos);
    CHECK(r.text.find("status: ok") != std::string::npos);
    CHECK(r.doc["status"] == "ok");
}

TEST_CASE("exit codes") {
    auto hyp = run("integrate", {{"ground", "rosenlicht(1, 10)"}, {"target", "t^-1"}});
    CHECK(hyp.code == HK_EXIT_HYPOTHESIS);
    CHECK(hyp.doc["error"]["message"].get<std::string>().find("-1") != std::string::npos);

    auto boundary = run("lift1d", {{"ground", "padic(2, 8)"}, {"poly", "X^2 + 3"}, {"point", "1"}});
    CHECK(boundary.code == HK_EXIT_HYPOTHESIS);
    CHECK(!boundary.doc["error"]["counterexample"].get<std::string>().empty());

    auto residue = run("dhensel", {{"ground", "vdfield(2, 8, 1)"}, {"poly", "X1 - t"}});
    CHECK(residue.code == HK_EXIT_HYPOTHESIS);
    CHECK(residue.doc["error"]["message"].get<std::string>().find("not surjective") != std::string::npos);

    CHECK(run("lift1d", {{"ground", "padic(4, 8)"}, {"poly", "X"}, {"point", "0"}}).code == HK_EXIT_USAGE);
    CHECK(run("lift1d", {{"ground", "padic(3, 8)"}, {"poly", "X^^2"}, {"point", "0"}}).code == HK_EXIT_USAGE);
    CHECK(run("lift1d", {{"ground", "padic(3, 8)"}, {"poly", "X"}}).code == HK_EXIT_USAGE);
    CHECK(run("frobnicate", {{"ground", "padic(3, 8)"}}).code == HK_EXIT_USAGE);
    CHECK(run("dsolve", {{"ground", "padic(3, 8)"}, {"target", "1"}}).code == HK_EXIT_USAGE);

    auto loss = run("subgroup", {{"ground", "series(F2, 1, 8)"}, {"poly", "(1 + O(t^2))*X"}, {"window", "0,4"}});
    CHECK(loss.code == HK_EXIT_PRECISION_LOSS);

    auto cap = run("subgroup", {{"ground", "series(F2, 1, 8)"}, {"poly", "X^2"}, {"window", "0,5000"}});
    CHECK(cap.code == HK_EXIT_RESOURCE_CAP);
}

TEST_CASE("every command runs through the handle API") {
    struct Case {
        std::string command;
        std::map<std::string, std::string> flags;
    };
    std::vector<Case> cases{
        {"implicit", {{"ground", "padic(3, 10)"}, {"poly", "X1^2 - 1 - X0"}, {"point", "0; 1"}, {"target", "9"}}},
        {"pinv-lift",
         {{"ground", "series(F2, 1, 10)"}, {"poly", "X0 + t*X1^2 + t; X1 + t*X0"}, {"point", "0; 0"}, {"matrix", "1,0;0,1"}}},
        {"dsolve", {{"ground", "vdfield(2, 10)"}, {"target", "t + t^3"}}},
        {"dhensel", {{"ground", "vdfield(2, 10)"}, {"poly", "X1 + t*X0^2 - t^2"}}},
        {"integrate", {{"ground", "rosenlicht(2, 8)"}, {"target", "t^(1/2) + 3*t^2"}}},
        {"subgroup", {{"ground", "series(F2, 1, 6)"}, {"poly", "X^2 + X; X^2"}, {"target", "1 + t^3"}}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.command);
        auto r = run(c.command, c.flags);
        CHECK(r.code == HK_EXIT_OK);
        CHECK(r.doc["verification"]["passed"] == true);
    }
}

}  // TEST_SUITE
