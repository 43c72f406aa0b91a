#include "twobridge/run.hpp"

#include "twobridge/cache.hpp"
#include "twobridge/errors.hpp"
#include "twobridge/homology.hpp"
#include "twobridge/knot.hpp"
#include "twobridge/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace twobridge {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

// Strict long parser: the whole (trimmed) token must be an optionally
// signed integer.
long parse_long(const std::string& token, const std::string& what) {
  const std::string t = trim(token);
  if (t.empty()) {
    throw std::invalid_argument("missing " + what);
  }
  std::size_t pos = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (pos == t.size()) {
    throw std::invalid_argument("invalid " + what + ": '" + token + "'");
  }
  for (std::size_t i = pos; i < t.size(); ++i) {
    if (t[i] < '0' || t[i] > '9') {
      throw std::invalid_argument("invalid " + what + ": '" + token + "'");
    }
  }
  try {
    return std::stol(t);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid " + what + ": '" + token + "'");
  }
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string sanitize_message(const std::string& message) {
  std::string out = message;
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  return out;
}

// One parsed batch line and, after processing, its result.
struct BatchRow {
  std::string name;
  long p = 0;
  long q = 0;
  bool spec_ok = false;
  std::string report_json; // set on success
  std::string error;       // set on failure (parse or compute)
};

BatchRow parse_batch_row(const std::string& line) {
  BatchRow row;
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  try {
    if (fields.size() == 3) {
      row.name = trim(fields[0]);
      row.p = parse_long(fields[1], "p");
      row.q = parse_long(fields[2], "q");
    } else if (fields.size() == 2) {
      row.p = parse_long(fields[0], "p");
      row.q = parse_long(fields[1], "q");
    } else {
      throw std::invalid_argument("expected 'name,p,q' or 'p,q'");
    }
    const TwoBridgeKnot knot = TwoBridgeKnot::create(row.p, row.q);
    if (row.name.empty()) row.name = knot.name();
    row.spec_ok = true;
  } catch (const std::exception& e) {
    if (row.name.empty()) row.name = trim(line);
    row.error = sanitize_message(e.what());
  }
  return row;
}

} // namespace

KnotSpec parse_knot(const std::string& text) {
  KnotSpec spec;
  std::string body;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) {
    if (token.rfind("name=", 0) == 0) {
      spec.name = token.substr(5);
      if (spec.name.empty()) {
        throw std::invalid_argument("empty knot name in '" + text + "'");
      }
    } else if (body.empty()) {
      body = token;
    } else {
      throw std::invalid_argument("unexpected token '" + token + "' in '" +
                                  text + "'");
    }
  }
  auto sep = body.find('/');
  if (sep == std::string::npos) sep = body.find(',');
  if (sep == std::string::npos) {
    throw std::invalid_argument("knot must be given as 'p/q' or 'p,q', got '" +
                                text + "'");
  }
  spec.p = parse_long(body.substr(0, sep), "p");
  spec.q = parse_long(body.substr(sep + 1), "q");
  const TwoBridgeKnot knot = TwoBridgeKnot::create(spec.p, spec.q);
  if (spec.name.empty()) spec.name = knot.name();
  return spec;
}

std::string obtain_report_json(const KnotSpec& spec, const RunOptions& options) {
  const TwoBridgeKnot knot = TwoBridgeKnot::create(spec.p, spec.q);
  const std::string dir = resolved_cache_dir(options.cache_dir);
  if (!dir.empty()) {
    if (auto hit = cache_lookup(dir, knot)) return *hit;
  }
  PipelineOptions pipeline;
  pipeline.jobs = options.jobs;
  pipeline.use_oracle = options.use_oracle;
  const PipelineResult result = tau_and_d(knot, pipeline);
  const ObstructionReport report =
      verdict(knot, result.tau_table(), result.d_table());
  const std::string json = report_to_json(report);
  if (!dir.empty()) cache_store(dir, knot, json);
  return json;
}

std::string run_knot(const KnotSpec& spec, KnotCommand command,
                     const RunOptions& options) {
  if (command == KnotCommand::hfk) {
    // The cache stores only the obstruction report, so the knot homology is
    // always computed directly.
    const TwoBridgeKnot knot = TwoBridgeKnot::create(spec.p, spec.q);
    PipelineOptions pipeline;
    pipeline.jobs = options.jobs;
    pipeline.use_oracle = options.use_oracle;
    const PipelineResult result = tau_and_d(knot, pipeline);
    return render_hfk(spec.p, spec.q, result.hfk_reduced, options.format);
  }
  const std::string json = obtain_report_json(spec, options);
  if (command == KnotCommand::obstruct && options.format == OutputFormat::json) {
    // Return the canonical document itself so cache hits, fresh runs and
    // any --jobs value are byte-identical.
    return json;
  }
  const ObstructionReport report = report_from_json(json);
  switch (command) {
    case KnotCommand::tau:
      return render_label_values(spec.p, spec.q, "tau", report.tau,
                                 options.format);
    case KnotCommand::d:
      return render_label_values(spec.p, spec.q, "d", report.d,
                                 options.format);
    case KnotCommand::obstruct:
      if (options.format == OutputFormat::csv) {
        return report_csv_header() + report_csv_row(spec.name, report);
      }
      return render_report(report, options.format);
    case KnotCommand::hfk:
      break; // handled above
  }
  throw inconsistency_error("unhandled knot command");
}

BatchResult run_batch(std::istream& input, const RunOptions& options) {
  std::vector<BatchRow> rows;
  std::string line;
  bool first_content_line = true;
  while (std::getline(input, line)) {
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    if (first_content_line && content == "name,p,q") {
      first_content_line = false;
      continue;
    }
    first_content_line = false;
    rows.push_back(parse_batch_row(content));
  }

  // Rows run concurrently; the per-knot pipeline then runs single-threaded
  // to avoid oversubscription.  Output order is input order either way.
  RunOptions row_options = options;
  if (options.jobs > 1) row_options.jobs = 1;
  parallel_for(rows.size(), options.jobs, [&](std::size_t i) {
    BatchRow& row = rows[i];
    if (!row.spec_ok) return;
    try {
      KnotSpec spec{row.name, row.p, row.q};
      row.report_json = obtain_report_json(spec, row_options);
    } catch (const std::exception& e) {
      row.error = sanitize_message(e.what());
    }
  });

  BatchResult result;
  result.rows = rows.size();
  std::ostringstream out;
  switch (options.format) {
    case OutputFormat::csv:
    case OutputFormat::table: {
      if (!rows.empty()) out << report_csv_header();
      for (const BatchRow& row : rows) {
        if (row.error.empty()) {
          const ObstructionReport report = report_from_json(row.report_json);
          (report.infinite_order ? result.infinite_order
                                 : result.inconclusive)++;
          out << report_csv_row(row.name, report);
        } else {
          result.errors++;
          out << csv_escape(row.name) << ",";
          if (row.spec_ok) {
            out << row.p << "," << row.q << "," << row.p;
          } else {
            out << ",,";
          }
          out << ",error,," << csv_escape(row.error) << "\n";
        }
      }
      break;
    }
    case OutputFormat::json: {
      ordered_json list = ordered_json::array();
      for (const BatchRow& row : rows) {
        ordered_json item;
        item["name"] = row.name;
        if (row.error.empty()) {
          const ordered_json report = ordered_json::parse(row.report_json);
          for (const auto& [key, value] : report.items()) item[key] = value;
          (report.at("verdict").get<std::string>() == "infinite-order"
               ? result.infinite_order
               : result.inconclusive)++;
        } else {
          item["error"] = row.error;
          result.errors++;
        }
        list.push_back(std::move(item));
      }
      out << list.dump(2) << "\n";
      break;
    }
  }
  result.output = out.str();
  return result;
}

} // namespace twobridge
