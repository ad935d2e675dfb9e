/* C API for the nehari solver library.
 *
 * Opaque handles, status codes, and string results. All strings returned
 * through `char**` are heap-allocated and must be released with
 * nehari_string_free(). Error details for the most recent failing call
 * on the current thread are available via nehari_last_error().
 */
#ifndef NEHARI_H
#define NEHARI_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nehari_status {
    NEHARI_OK = 0,
    NEHARI_ERR_INVALID_ARGUMENT = 1,
    NEHARI_ERR_INVALID_GEOMETRY = 2,
    NEHARI_ERR_DEGENERATE_DOMAIN = 3,
    NEHARI_ERR_RESOURCE_LIMIT = 4,
    NEHARI_ERR_NO_CONVERGENCE = 5,
    NEHARI_ERR_NODAL_COLLAPSE = 6,
    NEHARI_ERR_DIMENSION_MISMATCH = 7,
    NEHARI_ERR_IO = 8,
    NEHARI_ERR_PARSE = 9,
    NEHARI_ERR_UNDERFLOW = 10,
    NEHARI_ERR_INTERNAL = 11
} nehari_status;

/* Opaque parsed configuration. */
typedef struct nehari_config nehari_config;

/* Parse a flat key=value config file / string. On failure the status is
 * NEHARI_ERR_PARSE and nehari_last_error() lists every problem with its
 * line number. */
nehari_status nehari_config_parse_file(const char* path, nehari_config** out);
nehari_status nehari_config_parse_string(const char* text, nehari_config** out);

/* Apply a "key=value" override on top of a parsed config. */
nehari_status nehari_config_override(nehari_config* cfg, const char* key_equals_value);

void nehari_config_free(nehari_config* cfg);

/* Execute a command (solve|nodal|eigen|gap|decay|instanton|shoot|report).
 * Artifacts are written under out_dir. On success *report_json_out (if
 * non-NULL) receives the report text and *exit_code_out the process
 * exit code contract: 0 ok, 1 solver non-convergence, 2 config error. */
nehari_status nehari_run(const nehari_config* cfg, const char* command, const char* out_dir,
                         char** report_json_out, int* exit_code_out);

void nehari_string_free(char* s);

/* Message of the last error on this thread ("" when none). */
const char* nehari_last_error(void);

const char* nehari_status_name(nehari_status status);

/* Exit code contract for a status (matches nehari_run's exit codes). */
int nehari_status_exit_code(nehari_status status);

const char* nehari_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NEHARI_H */
