#pragma once

#include "twobridge/obstruct.hpp"
#include "twobridge/report.hpp"

#include <iosfwd>
#include <string>

namespace twobridge {

// A knot named on the command line or in a batch file.
struct KnotSpec {
  std::string name; // defaults to "K_{p,q}"
  long p = 0;
  long q = 0;
};

// Accepts "p/q" or "p,q", optionally with a whitespace-separated
// "name=..." token ("45,17 name=10_10").  The parameters are validated via
// TwoBridgeKnot::create; the name defaults to "K_{p,q}".
KnotSpec parse_knot(const std::string& text);

enum class KnotCommand { tau, d, hfk, obstruct };

struct RunOptions {
  OutputFormat format = OutputFormat::table;
  bool use_oracle = false;
  std::string cache_dir; // before CONCORDANCE_CACHE resolution
  unsigned jobs = 1;
};

// Computes (or retrieves from the cache) the obstruction report for a knot.
// The returned string is the exact JSON document that is cached, so cache
// hits and fresh runs are byte-identical.
std::string obtain_report_json(const KnotSpec& spec, const RunOptions& options);

// Executes one single-knot subcommand and returns its rendered output.
std::string run_knot(const KnotSpec& spec, KnotCommand command,
                     const RunOptions& options);

struct BatchResult {
  std::string output;           // rendered rows, input order
  std::size_t rows = 0;
  std::size_t infinite_order = 0;
  std::size_t inconclusive = 0;
  std::size_t errors = 0;
};

// Executes the batch subcommand: reads "name,p,q" rows (header, blank lines
// and # comments skipped), processes rows concurrently with options.jobs
// workers, and renders results in input order.  Rows that fail are
// quarantined with verdict "error" instead of aborting the batch; empty
// input yields empty output.
BatchResult run_batch(std::istream& input, const RunOptions& options);

} // namespace twobridge
