#include "henselkit/henselkit.h"

#include "henselkit/job.hpp"

#include <algorithm>
#include <new>

struct hk_job {
    hk::JobSpec spec;
};

struct hk_report {
    hk::JobReport report;
};

extern "C" {

const char* hk_version(void) { return "0.1.0"; }

const char* hk_command_name(int index) {
    const auto& c = hk::job_commands();
    return index >= 0 && static_cast<std::size_t>(index) < c.size() ? c[static_cast<std::size_t>(index)].c_str() : nullptr;
}

const char* hk_flag_name(int index) {
    const auto& f = hk::job_flags();
    return index >= 0 && static_cast<std::size_t>(index) < f.size() ? f[static_cast<std::size_t>(index)].c_str() : nullptr;
}

hk_job* hk_job_create(const char* command) {
    auto* job = new (std::nothrow) hk_job;
    if (job && command) {
        try {
            job->spec.command = command;
        } catch (...) {
            delete job;
            return nullptr;
        }
    }
    return job;
}

hk_status hk_job_set(hk_job* job, const char* key, const char* value) {
    if (!job || !key || !value) return HK_ERR_NULL;
    const auto& f = hk::job_flags();
    if (std::find(f.begin(), f.end(), key) == f.end()) return HK_ERR_UNKNOWN_FLAG;
    try {
        job->spec.flags[key] = value;
    } catch (...) {
        return HK_ERR_ALLOC;
    }
    return HK_OK;
}

hk_report* hk_job_run(const hk_job* job) {
    if (!job) return nullptr;
    auto* rep = new (std::nothrow) hk_report;
    if (!rep) return nullptr;
    try {
        rep->report = hk::run_job(job->spec);
    } catch (...) {
        delete rep;
        return nullptr;
    }
    return rep;
}

void hk_job_free(hk_job* job) { delete job; }

int hk_report_exit_code(const hk_report* report) { return report ? report->report.exit_code : HK_EXIT_USAGE; }

const char* hk_report_text(const hk_report* report) { return report ? report->report.text.c_str() : nullptr; }

const char* hk_report_structured(const hk_report* report) { return report ? report->report.structured.c_str() : nullptr; }

void hk_report_free(hk_report* report) { delete report; }

}
