// Exercises the shared library through the C header only, the way an
// external client would.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "trefftz.h"

namespace {

const char* kSolveTemplate =
    "[problem]\n"
    "domain = rect 0 0 1 1\n"
    "k = 4\n"
    "theta = 1\n"
    "boundary = robin\n"
    "exact = plane_wave 1 0\n"
    "[method]\n"
    "name = uwvf\n"
    "[basis]\n"
    "p = 7\n"
    "[schedule]\n"
    "levels = 1 2\n"
    "[output]\n"
    "study_csv = %s\n";

std::string temp_path(const char* stem) {
  return std::string("capi_") + stem + ".csv";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("version string") {
  CHECK(std::strcmp(trefftz_version(), "1.0.0") == 0);
}

TEST_CASE("null arguments are config errors") {
  char err[128] = {0};
  trefftz_config* cfg = nullptr;
  CHECK(trefftz_config_load(nullptr, &cfg, err, sizeof(err)) ==
        TREFFTZ_ERROR_CONFIG);
  CHECK(trefftz_config_parse("x", nullptr, err, sizeof(err)) ==
        TREFFTZ_ERROR_CONFIG);
  CHECK(trefftz_run_solve(nullptr, err, sizeof(err)) == TREFFTZ_ERROR_CONFIG);
  CHECK(err[0] != '\0');
  trefftz_config_free(nullptr);  // must be safe
}

TEST_CASE("parse errors report line numbers and leave no handle") {
  char err[256] = {0};
  trefftz_config* cfg = reinterpret_cast<trefftz_config*>(0x1);
  const int status =
      trefftz_config_parse("[problem]\nbogus = 1\n", &cfg, err, sizeof(err));
  CHECK(status == TREFFTZ_ERROR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::strstr(err, "line 2") != nullptr);
}

TEST_CASE("solve writes the study CSV and serialization is canonical") {
  const std::string study = temp_path("study");
  char text[2048];
  std::snprintf(text, sizeof(text), kSolveTemplate, study.c_str());

  char err[256] = {0};
  trefftz_config* cfg = nullptr;
  REQUIRE(trefftz_config_parse(text, &cfg, err, sizeof(err)) == TREFFTZ_OK);

  const char* canon = trefftz_config_serialize(cfg);
  REQUIRE(canon != nullptr);
  trefftz_config* cfg2 = nullptr;
  REQUIRE(trefftz_config_parse(canon, &cfg2, err, sizeof(err)) == TREFFTZ_OK);
  CHECK(std::string(trefftz_config_serialize(cfg2)) == canon);
  trefftz_config_free(cfg2);

  REQUIRE(trefftz_run_solve(cfg, err, sizeof(err)) == TREFFTZ_OK);
  const std::string csv = read_file(study);
  CHECK(csv.rfind("level,h,p,dofs,err_L2,err_TDG,err_LS,cond2", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
  trefftz_config_free(cfg);
  std::remove(study.c_str());
}

TEST_CASE("sweep writes the conditioning CSV") {
  const std::string path = temp_path("cond");
  const std::string text =
      "[sweep]\nfamily = pw\nk = 2\nh_values = 1\norders = 1\ncsv = " + path +
      "\n";
  char err[256] = {0};
  trefftz_config* cfg = nullptr;
  REQUIRE(trefftz_config_parse(text.c_str(), &cfg, err, sizeof(err)) ==
          TREFFTZ_OK);
  REQUIRE(trefftz_run_sweep(cfg, err, sizeof(err)) == TREFFTZ_OK);
  CHECK(read_file(path) == "family,p_or_q,k,h,kh,cond2,saturated\npw,1,2,1,2,1,0\n");
  trefftz_config_free(cfg);
  std::remove(path.c_str());
}

TEST_CASE("run-time failures map to the numeric status") {
  // Valid config, but the h-version flux penalty delta = d*k*h exceeds 1/2 on
  // this coarse mesh, which the assembler rejects at run time.
  const std::string study = temp_path("numfail");
  std::string text =
      "[problem]\n"
      "domain = rect 0 0 1 1\n"
      "k = 4\n"
      "boundary = robin\n"
      "exact = plane_wave 1 0\n"
      "[method]\n"
      "name = tdg\n"
      "flux = h_version\n"
      "[basis]\n"
      "p = 5\n"
      "[schedule]\n"
      "levels = 1\n"
      "[output]\n"
      "study_csv = " +
      study + "\n";
  char err[256] = {0};
  trefftz_config* cfg = nullptr;
  REQUIRE(trefftz_config_parse(text.c_str(), &cfg, err, sizeof(err)) ==
          TREFFTZ_OK);
  CHECK(trefftz_run_solve(cfg, err, sizeof(err)) == TREFFTZ_ERROR_NUMERIC);
  CHECK(err[0] != '\0');
  trefftz_config_free(cfg);
  std::remove(study.c_str());
}
