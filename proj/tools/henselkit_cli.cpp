#include "henselkit/henselkit.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Values of the form @path are read from the file.
std::string resolve_value(const std::string& value) {
    if (value.size() < 2 || value[0] != '@') return value;
    std::ifstream in(value.substr(1));
    if (!in) throw CLI::ValidationError("cannot read " + value.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> commands;
    for (int i = 0; hk_command_name(i); ++i) commands.emplace_back(hk_command_name(i));

    CLI::App app{"Valued-field Hensel lifting and differential equation solvers"};
    app.set_version_flag("--version", std::string(hk_version()));
    std::string command;
    app.add_option("command", command, "Solver to run")->required()->check(CLI::IsMember(commands));

    std::map<std::string, std::string> values;
    const std::map<std::string, std::string> help{
        {"ground", "padic(p,N) | series(Q|F<p>,d,N) | vdfield(p,N[,m]) | rosenlicht(d,N)"},
        {"precision", "target precision (defaults to the ground's N)"},
        {"poly", "polynomial(s) in X0, X1, ...; systems separated by ';'"},
        {"point", "start point; coordinates separated by ';'"},
        {"target", "right-hand side, new parameters, or element to approximate"},
        {"seed", "seed for sampled hypothesis and axiom checks"},
        {"matrix", "pseudo-inverse rows separated by ';', entries by ','"},
        {"window", "subgroup exponent window lo,hi"},
        {"rate", "ode: rate r > 1 of the inhomogeneous term"},
        {"ode-order", "operator order n (variables X0..Xn)"},
    };
    for (int i = 0; hk_flag_name(i); ++i) {
        std::string key = hk_flag_name(i);
        auto it = help.find(key);
        app.add_option("--" + key, values[key], it == help.end() ? "" : it->second);
    }
    std::string report_kind = "text";
    app.add_option("--report", report_kind, "text | structured")->check(CLI::IsMember({"text", "structured"}));
    std::string output;
    app.add_option("--output", output, "write the report to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return HK_EXIT_USAGE;
    }

    hk_job* job = hk_job_create(command.c_str());
    if (!job) return HK_EXIT_RESOURCE_CAP;
    try {
        for (const auto& [key, value] : values)
            if (app.count("--" + key)) hk_job_set(job, key.c_str(), resolve_value(value).c_str());
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        hk_job_free(job);
        return HK_EXIT_USAGE;
    }
    hk_report* rep = hk_job_run(job);
    hk_job_free(job);
    if (!rep) return HK_EXIT_RESOURCE_CAP;

    const char* body = report_kind == "structured" ? hk_report_structured(rep) : hk_report_text(rep);
    int code = hk_report_exit_code(rep);
    if (output.empty()) {
        std::fputs(body, stdout);
    } else {
        std::ofstream out(output, std::ios::binary);
        out << body;
        if (!out) {
            std::cerr << "cannot write " << output << "\n";
            code = HK_EXIT_USAGE;
        }
    }
    hk_report_free(rep);
    return code;
}
