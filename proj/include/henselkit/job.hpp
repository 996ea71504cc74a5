#pragma once

#include <map>
#include <string>
#include <vector>

namespace hk {

enum ExitCode : int {
    kExitOk = 0,
    kExitHypothesis = 2,
    kExitStalled = 3,
    kExitUsage = 64,
    kExitPrecisionLoss = 65,
    kExitResourceCap = 70,
};

// command plus flag values keyed by long flag name without dashes
// (ground, precision, poly, point, target, seed, matrix, window, rate, ode-order).
struct JobSpec {
    std::string command;
    std::map<std::string, std::string> flags;
};

struct JobReport {
    int exit_code = kExitOk;
    std::string text;
    std::string structured;  // JSON document with the same content as `text`
};

const std::vector<std::string>& job_commands();
const std::vector<std::string>& job_flags();

JobReport run_job(const JobSpec& spec);

}  // namespace hk
