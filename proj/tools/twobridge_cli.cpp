// Command-line front end for the two-bridge concordance calculator.
//
// Subcommands:
//   tau KNOT       per-label tau invariants of the lifted knot
//   d KNOT         per-label correction terms of the branched double cover
//   hfk KNOT       knot Floer homology bigradings per spin^c structure
//   obstruct KNOT  full concordance-order obstruction report
//   twist P        closed-form twist-knot (K_{P,2}) d-table and prime sums
//   batch IN [OUT] obstruction reports for a CSV of knots
//
// Exit codes: 0 success, 1 invalid input, 2 internal invariant violation.

#include <CLI11.hpp>

#include "twobridge/errors.hpp"
#include "twobridge/knot.hpp"
#include "twobridge/lens_d.hpp"
#include "twobridge/obstruct.hpp"
#include "twobridge/rational.hpp"
#include "twobridge/report.hpp"
#include "twobridge/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using twobridge::OutputFormat;
using twobridge::Rational;
using ordered_json = nlohmann::ordered_json;

struct CommonFlags {
  std::string format = "table";
  bool oracle = false;
  std::string cache;
  unsigned jobs = 1;
};

void add_common_flags(CLI::App* sub, CommonFlags& flags, bool compute_flags) {
  sub->add_option("--format", flags.format,
                  "Output format: table, csv or json");
  if (compute_flags) {
    sub->add_flag("--oracle", flags.oracle,
                  "Use the exhaustive domain oracle instead of the fast "
                  "enumeration (guarded to 2pq <= 200)");
    sub->add_option("--cache", flags.cache,
                    "Directory for cached obstruction reports "
                    "(the CONCORDANCE_CACHE environment variable overrides)");
    sub->add_option("--jobs", flags.jobs,
                    "Worker threads; 0 means hardware concurrency");
  }
}

twobridge::RunOptions to_run_options(const CommonFlags& flags) {
  twobridge::RunOptions options;
  options.format = twobridge::parse_format(flags.format);
  options.use_oracle = flags.oracle;
  options.cache_dir = flags.cache;
  options.jobs = flags.jobs == 0
                     ? std::max(1u, std::thread::hardware_concurrency())
                     : flags.jobs;
  return options;
}

std::vector<long> parse_family(const std::string& text) {
  std::vector<long> ps;
  std::istringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t used = 0;
      const long value = std::stol(token, &used);
      while (used < token.size() &&
             (token[used] == ' ' || token[used] == '\t')) {
        ++used;
      }
      if (used != token.size()) throw std::invalid_argument(token);
      ps.push_back(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid family entry '" + token +
                                  "' (expected comma-separated integers)");
    }
  }
  if (ps.empty() && !text.empty()) {
    throw std::invalid_argument("invalid family '" + text + "'");
  }
  return ps;
}

// The twist command: everything here is closed-form, so it stays fast even
// where the full pipeline would be expensive.
std::string run_twist(long p, OutputFormat format) {
  const std::vector<Rational> table = twobridge::twist_d_table(p);
  struct PrimeSum {
    long prime;
    Rational value;
  };
  std::vector<PrimeSum> sums;
  for (const auto& [prime, exponent] : twobridge::factorize(p)) {
    (void)exponent;
    const auto subgroup = twobridge::subgroup_elements_cyclic(p, prime);
    sums.push_back({prime, twobridge::S_H(table, subgroup)});
  }
  const bool fired = std::any_of(sums.begin(), sums.end(),
                                 [](const PrimeSum& s) { return s.value != 0; });
  std::ostringstream out;
  switch (format) {
    case OutputFormat::table: {
      out << "twist knot K_{" << p << ",2}  (determinant " << p << ")\n";
      out << "label\tk\td\n";
      for (long label = 0; label < p; ++label) {
        const long k = label <= (p - 1) / 2 ? label : label - p;
        out << label << "\t" << k << "\t"
            << twobridge::rational_to_string(table[label]) << "\n";
      }
      out << "prime-order d-sums:\n";
      for (const PrimeSum& s : sums) {
        out << "  D_" << s.prime << " = "
            << twobridge::rational_to_string(s.value)
            << (s.value != 0 ? "  [nonzero]" : "") << "\n";
      }
      out << "verdict: " << (fired ? "infinite-order" : "inconclusive")
          << "\n";
      break;
    }
    case OutputFormat::csv: {
      out << "label,k,d\n";
      for (long label = 0; label < p; ++label) {
        const long k = label <= (p - 1) / 2 ? label : label - p;
        out << label << "," << k << ","
            << twobridge::rational_to_string(table[label]) << "\n";
      }
      break;
    }
    case OutputFormat::json: {
      ordered_json doc;
      doc["p"] = p;
      doc["q"] = 2;
      ordered_json map = ordered_json::object();
      for (long label = 0; label < p; ++label) {
        map[std::to_string(label)] =
            twobridge::rational_to_string(table[label]);
      }
      doc["d"] = std::move(map);
      ordered_json list = ordered_json::array();
      for (const PrimeSum& s : sums) {
        ordered_json item;
        item["prime"] = s.prime;
        item["value"] = twobridge::rational_to_string(s.value);
        item["nonzero"] = s.value != 0;
        list.push_back(std::move(item));
      }
      doc["sums"] = std::move(list);
      doc["verdict"] = fired ? "infinite-order" : "inconclusive";
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string run_twist_family(const std::vector<long>& family,
                             OutputFormat format) {
  const bool independent = twobridge::twist_family_independent(family);
  std::ostringstream out;
  switch (format) {
    case OutputFormat::table: {
      out << "twist family:";
      for (long p : family) out << " K_{" << p << ",2}";
      out << "\nindependent: "
          << (independent ? "yes" : "not certified") << "\n";
      break;
    }
    case OutputFormat::csv: {
      out << "family,independent\n";
      std::string joined;
      for (long p : family) {
        if (!joined.empty()) joined += ";";
        joined += std::to_string(p);
      }
      out << joined << "," << (independent ? "true" : "false") << "\n";
      break;
    }
    case OutputFormat::json: {
      ordered_json doc;
      doc["family"] = family;
      doc["independent"] = independent;
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concordance-order obstructions for two-bridge knots from the "
               "Heegaard Floer invariants of their branched double covers"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string knot_text;
  long twist_p = 0;
  std::string family_text;
  std::string batch_input;
  std::string batch_output = "-";

  CLI::App* cmd_tau = app.add_subcommand(
      "tau", "Per-label tau invariants of the lifted knot");
  cmd_tau->add_option("knot", knot_text, "Knot as p/q or p,q (name=... optional)")
      ->required();
  add_common_flags(cmd_tau, flags, true);

  CLI::App* cmd_d = app.add_subcommand(
      "d", "Per-label correction terms of the branched double cover");
  cmd_d->add_option("knot", knot_text, "Knot as p/q or p,q (name=... optional)")
      ->required();
  add_common_flags(cmd_d, flags, true);

  CLI::App* cmd_hfk = app.add_subcommand(
      "hfk", "Knot Floer homology bigradings per spin^c structure");
  cmd_hfk->add_option("knot", knot_text, "Knot as p/q or p,q (name=... optional)")
      ->required();
  add_common_flags(cmd_hfk, flags, true);

  CLI::App* cmd_obstruct = app.add_subcommand(
      "obstruct", "Full concordance-order obstruction report");
  cmd_obstruct
      ->add_option("knot", knot_text, "Knot as p/q or p,q (name=... optional)")
      ->required();
  add_common_flags(cmd_obstruct, flags, true);

  CLI::App* cmd_twist = app.add_subcommand(
      "twist", "Closed-form d-invariants and prime sums for twist knots "
               "K_{p,2}");
  cmd_twist->add_option("p", twist_p, "Odd determinant p >= 3");
  cmd_twist->add_option(
      "--family", family_text,
      "Comma-separated odd determinants: check linear independence of the "
      "twist knots K_{p,2} in the concordance group");
  add_common_flags(cmd_twist, flags, false);

  CLI::App* cmd_batch = app.add_subcommand(
      "batch", "Obstruction reports for a CSV of knots (name,p,q)");
  cmd_batch->add_option("input", batch_input, "Input CSV path, or - for stdin")
      ->required();
  cmd_batch->add_option("output", batch_output,
                        "Output path, or - for stdout (default)");
  add_common_flags(cmd_batch, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const twobridge::RunOptions options = to_run_options(flags);

    if (*cmd_twist) {
      if (!family_text.empty()) {
        std::cout << run_twist_family(parse_family(family_text),
                                      options.format);
      } else if (cmd_twist->count("p") > 0) {
        std::cout << run_twist(twist_p, options.format);
      } else {
        throw std::invalid_argument(
            "twist requires either a determinant p or --family");
      }
      return 0;
    }

    if (*cmd_batch) {
      std::ifstream file;
      std::istream* input = &std::cin;
      if (batch_input != "-") {
        file.open(batch_input);
        if (!file) {
          throw std::invalid_argument("cannot open input file '" +
                                      batch_input + "'");
        }
        input = &file;
      }
      const twobridge::BatchResult result =
          twobridge::run_batch(*input, options);
      if (batch_output == "-") {
        std::cout << result.output;
      } else {
        std::ofstream out(batch_output);
        if (!out) {
          throw std::invalid_argument("cannot open output file '" +
                                      batch_output + "'");
        }
        out << result.output;
      }
      std::cerr << "batch: " << result.rows << " rows, "
                << result.infinite_order << " infinite-order, "
                << result.inconclusive << " inconclusive, " << result.errors
                << " errors\n";
      return 0;
    }

    const twobridge::KnotSpec spec = twobridge::parse_knot(knot_text);
    twobridge::KnotCommand command = twobridge::KnotCommand::obstruct;
    if (*cmd_tau) command = twobridge::KnotCommand::tau;
    if (*cmd_d) command = twobridge::KnotCommand::d;
    if (*cmd_hfk) command = twobridge::KnotCommand::hfk;
    if (*cmd_obstruct) command = twobridge::KnotCommand::obstruct;
    std::cout << twobridge::run_knot(spec, command, options);
    return 0;
  } catch (const twobridge::inconsistency_error& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
