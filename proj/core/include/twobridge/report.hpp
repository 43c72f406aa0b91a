#pragma once

#include "twobridge/homology.hpp"
#include "twobridge/obstruct.hpp"

#include <string>
#include <vector>

namespace twobridge {

enum class OutputFormat { table, csv, json };

// Parses "table", "csv" or "json"; throws std::invalid_argument otherwise.
OutputFormat parse_format(const std::string& text);

// The canonical JSON document for a knot's obstruction report:
//
//   {
//     "p": 29,
//     "q": 11,
//     "tau": { "0": "1", "1": "0", ... },       // label -> rational string
//     "d":   { "0": "1/2", ... },
//     "tests": [
//       { "kind": "T", "p": 1, "k": 1, "value": "1", "fired": true },
//       ...
//     ],
//     "verdict": "infinite-order"               // or "inconclusive"
//   }
//
// Tests appear in evaluation order: the spin values T_1, D_1, then for each
// prime divisor in increasing order all T sums by exponent, all D sums, and
// for primes dividing the determinant exactly once the two minmax entries,
// tau before d.  Key order and formatting are fixed, so equal reports
// produce byte-identical documents.
std::string report_to_json(const ObstructionReport& report);

// Inverse of report_to_json (used to revalidate cached documents).  Throws
// std::invalid_argument on malformed input.
ObstructionReport report_from_json(const std::string& text);

// Rendering for the single-knot commands.
std::string render_label_values(long p, long q, const std::string& key,
                                const std::vector<Rational>& values,
                                OutputFormat format);
std::string render_hfk(long p, long q, const std::vector<HfkEntry>& entries,
                       OutputFormat format);
std::string render_report(const ObstructionReport& report, OutputFormat format);

// One line of batch CSV output (shared with the csv rendering of a single
// report): name,p,q,det,verdict,tests_fired,values where tests_fired is the
// ';'-joined list of fired test names and values the ';'-joined
// "name=value" list of all T/D subgroup sums.
std::string report_csv_header();
std::string report_csv_row(const std::string& name,
                           const ObstructionReport& report);

} // namespace twobridge
