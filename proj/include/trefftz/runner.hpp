#pragma once

#include <iosfwd>

#include "trefftz/config.hpp"

namespace trefftz {

// Runs the configured study: one CSV row per schedule entry
// ("level,h,p,dofs,err_L2,err_TDG,err_LS,cond2,assemble_ms,solve_ms").
// If `field` is non-null and a sampling grid is configured, the solution of
// the last schedule entry is sampled onto it ("x,y,re,im,abs"; points outside
// the domain get empty value cells).
void run_solve(const RunConfig& cfg, std::ostream& study, std::ostream* field);

// Conditioning sweep ("family,p_or_q,k,h,kh,cond2,saturated").  Orders are
// processed in increasing sequence; once every h at an order saturates
// (cond2 > 1e15), larger orders are not evaluated.
void run_sweep(const RunConfig& cfg, std::ostream& out);

// Solves the last schedule entry and writes the sampled field CSV.
void run_sample(const RunConfig& cfg, std::ostream& out);

// File-writing wrappers taking paths from [output] / [sweep].  Failure to
// open an output file is reported as ConfigError.
void run_solve_files(const RunConfig& cfg);
void run_sweep_files(const RunConfig& cfg);
void run_sample_files(const RunConfig& cfg);

}  // namespace trefftz
