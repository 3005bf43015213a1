// Command-line driver.  Talks to the toolkit exclusively through the C API.
//
//   trefftz solve  <config>   run the study, write the study (and field) CSV
//   trefftz sweep  <config>   run the conditioning sweep, write its CSV
//   trefftz sample <config>   solve once and write the sampled field CSV
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
#include <cstdio>
#include <cstring>

#include "trefftz.h"

namespace {

void usage(std::FILE* to) {
  std::fprintf(to,
               "usage: trefftz <solve|sweep|sample> <config-file>\n"
               "       trefftz --version\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 2 && std::strcmp(argv[1], "--version") == 0) {
    std::printf("trefftz %s\n", trefftz_version());
    return 0;
  }
  if (argc == 2 && (std::strcmp(argv[1], "--help") == 0 ||
                    std::strcmp(argv[1], "-h") == 0)) {
    usage(stdout);
    return 0;
  }
  if (argc != 3) {
    usage(stderr);
    return TREFFTZ_ERROR_CONFIG;
  }
  const char* command = argv[1];
  const char* path = argv[2];

  char err[512];
  trefftz_config* config = nullptr;
  int status = trefftz_config_load(path, &config, err, sizeof(err));
  if (status != TREFFTZ_OK) {
    std::fprintf(stderr, "trefftz: %s\n", err);
    return status;
  }

  if (std::strcmp(command, "solve") == 0) {
    status = trefftz_run_solve(config, err, sizeof(err));
  } else if (std::strcmp(command, "sweep") == 0) {
    status = trefftz_run_sweep(config, err, sizeof(err));
  } else if (std::strcmp(command, "sample") == 0) {
    status = trefftz_run_sample(config, err, sizeof(err));
  } else {
    std::fprintf(stderr, "trefftz: unknown command '%s'\n", command);
    usage(stderr);
    trefftz_config_free(config);
    return TREFFTZ_ERROR_CONFIG;
  }

  if (status != TREFFTZ_OK) {
    std::fprintf(stderr, "trefftz: %s\n", err);
  }
  trefftz_config_free(config);
  return status;
}
