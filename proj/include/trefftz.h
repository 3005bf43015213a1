/* C API for the Trefftz Helmholtz toolkit.
 *
 * All entry points return one of the TREFFTZ_* status codes below.  On
 * failure, a NUL-terminated human-readable message is copied into `errbuf`
 * (when non-NULL; truncated to `errbuf_len` including the terminator).
 * Configurations are opaque handles owned by the caller via
 * trefftz_config_free.  Output files are written to the paths named inside
 * the configuration ([output] / [sweep] sections).
 */
#ifndef TREFFTZ_H
#define TREFFTZ_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TREFFTZ_OK 0
#define TREFFTZ_ERROR_CONFIG 2  /* malformed or semantically invalid config */
#define TREFFTZ_ERROR_NUMERIC 3 /* assembly/solve failure at run time */

typedef struct trefftz_config trefftz_config;

/* Parse a configuration from a file or from text already in memory. */
int trefftz_config_load(const char* path, trefftz_config** out_config,
                        char* errbuf, size_t errbuf_len);
int trefftz_config_parse(const char* text, trefftz_config** out_config,
                         char* errbuf, size_t errbuf_len);
void trefftz_config_free(trefftz_config* config);

/* Canonical text form of the effective configuration (defaults filled in).
 * Returns a pointer owned by the config handle, valid until it is freed. */
const char* trefftz_config_serialize(trefftz_config* config);

/* Run a study / conditioning sweep / field sampling, writing the CSVs named
 * in the configuration. */
int trefftz_run_solve(const trefftz_config* config, char* errbuf,
                      size_t errbuf_len);
int trefftz_run_sweep(const trefftz_config* config, char* errbuf,
                      size_t errbuf_len);
int trefftz_run_sample(const trefftz_config* config, char* errbuf,
                       size_t errbuf_len);

const char* trefftz_version(void);

#ifdef __cplusplus
}
#endif

#endif /* TREFFTZ_H */
