#include "trefftz.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "trefftz/config.hpp"
#include "trefftz/runner.hpp"

struct trefftz_config {
  trefftz::RunConfig cfg;
  std::string serialized;  // backing store for trefftz_config_serialize
};

namespace {

void copy_error(const char* msg, char* errbuf, size_t errbuf_len) {
  if (errbuf == nullptr || errbuf_len == 0) return;
  std::strncpy(errbuf, msg, errbuf_len - 1);
  errbuf[errbuf_len - 1] = '\0';
}

// Config problems (including invalid parameter values detected by the core's
// argument validation) map to the config status; everything else that throws
// at run time is a numerical failure.
template <typename Fn>
int guarded(Fn&& fn, char* errbuf, size_t errbuf_len) {
  try {
    fn();
    return TREFFTZ_OK;
  } catch (const trefftz::ConfigError& e) {
    copy_error(e.what(), errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  } catch (const std::invalid_argument& e) {
    copy_error(e.what(), errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  } catch (const std::exception& e) {
    copy_error(e.what(), errbuf, errbuf_len);
    return TREFFTZ_ERROR_NUMERIC;
  } catch (...) {
    copy_error("unknown error", errbuf, errbuf_len);
    return TREFFTZ_ERROR_NUMERIC;
  }
}

}  // namespace

extern "C" {

int trefftz_config_load(const char* path, trefftz_config** out_config,
                        char* errbuf, size_t errbuf_len) {
  if (path == nullptr || out_config == nullptr) {
    copy_error("null argument", errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  }
  *out_config = nullptr;
  return guarded(
      [&]() {
        auto* handle = new trefftz_config{trefftz::load_config(path), {}};
        *out_config = handle;
      },
      errbuf, errbuf_len);
}

int trefftz_config_parse(const char* text, trefftz_config** out_config,
                         char* errbuf, size_t errbuf_len) {
  if (text == nullptr || out_config == nullptr) {
    copy_error("null argument", errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  }
  *out_config = nullptr;
  return guarded(
      [&]() {
        auto* handle = new trefftz_config{trefftz::parse_config(text), {}};
        *out_config = handle;
      },
      errbuf, errbuf_len);
}

void trefftz_config_free(trefftz_config* config) { delete config; }

const char* trefftz_config_serialize(trefftz_config* config) {
  if (config == nullptr) return nullptr;
  try {
    config->serialized = trefftz::serialize_config(config->cfg);
  } catch (const std::exception&) {
    return nullptr;
  }
  return config->serialized.c_str();
}

int trefftz_run_solve(const trefftz_config* config, char* errbuf,
                      size_t errbuf_len) {
  if (config == nullptr) {
    copy_error("null config", errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  }
  return guarded([&]() { trefftz::run_solve_files(config->cfg); }, errbuf,
                 errbuf_len);
}

int trefftz_run_sweep(const trefftz_config* config, char* errbuf,
                      size_t errbuf_len) {
  if (config == nullptr) {
    copy_error("null config", errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  }
  return guarded([&]() { trefftz::run_sweep_files(config->cfg); }, errbuf,
                 errbuf_len);
}

int trefftz_run_sample(const trefftz_config* config, char* errbuf,
                       size_t errbuf_len) {
  if (config == nullptr) {
    copy_error("null config", errbuf, errbuf_len);
    return TREFFTZ_ERROR_CONFIG;
  }
  return guarded([&]() { trefftz::run_sample_files(config->cfg); }, errbuf,
                 errbuf_len);
}

const char* trefftz_version(void) { return "1.0.0"; }

}  // extern "C"
