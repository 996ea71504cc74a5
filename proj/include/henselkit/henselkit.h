#ifndef HENSELKIT_H
#define HENSELKIT_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HK_API __attribute__((visibility("default")))
#else
#define HK_API
#endif

typedef struct hk_job hk_job;
typedef struct hk_report hk_report;

typedef enum hk_status {
    HK_OK = 0,
    HK_ERR_NULL = 1,          /* a required pointer argument was NULL */
    HK_ERR_UNKNOWN_FLAG = 2,  /* hk_job_set with a key outside hk_flag_name */
    HK_ERR_ALLOC = 3
} hk_status;

/* Process exit codes reported by hk_report_exit_code. */
enum {
    HK_EXIT_OK = 0,
    HK_EXIT_HYPOTHESIS = 2,
    HK_EXIT_STALLED = 3,
    HK_EXIT_USAGE = 64,
    HK_EXIT_PRECISION_LOSS = 65,
    HK_EXIT_RESOURCE_CAP = 70
};

HK_API const char* hk_version(void);

/* Commands and flag keys, indexed from 0; NULL past the end. */
HK_API const char* hk_command_name(int index);
HK_API const char* hk_flag_name(int index);

/* Returns NULL only on allocation failure. The command is validated by hk_job_run. */
HK_API hk_job* hk_job_create(const char* command);
/* Flag keys are long names without dashes, e.g. "ground", "poly", "ode-order". Setting a key twice replaces it. */
HK_API hk_status hk_job_set(hk_job* job, const char* key, const char* value);
/* Always returns a report unless job is NULL or allocation fails; errors are reported inside it. */
HK_API hk_report* hk_job_run(const hk_job* job);
HK_API void hk_job_free(hk_job* job);

HK_API int hk_report_exit_code(const hk_report* report);
/* Strings stay valid until hk_report_free. */
HK_API const char* hk_report_text(const hk_report* report);
HK_API const char* hk_report_structured(const hk_report* report);
HK_API void hk_report_free(hk_report* report);

#ifdef __cplusplus
}
#endif

#endif
