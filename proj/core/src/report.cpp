#include "twobridge/report.hpp"

#include "twobridge/errors.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace twobridge {

namespace {

using ordered_json = nlohmann::ordered_json;

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

const char* verdict_string(bool infinite_order) {
  return infinite_order ? "infinite-order" : "inconclusive";
}

} // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "table") return OutputFormat::table;
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format: '" + text +
                              "' (expected table, csv or json)");
}

std::string report_to_json(const ObstructionReport& report) {
  ordered_json doc;
  doc["p"] = report.p;
  doc["q"] = report.q;
  ordered_json tau = ordered_json::object();
  ordered_json d = ordered_json::object();
  for (std::size_t label = 0; label < report.tau.size(); ++label) {
    tau[std::to_string(label)] = rational_to_string(report.tau[label]);
  }
  for (std::size_t label = 0; label < report.d.size(); ++label) {
    d[std::to_string(label)] = rational_to_string(report.d[label]);
  }
  doc["tau"] = std::move(tau);
  doc["d"] = std::move(d);
  ordered_json tests = ordered_json::array();
  for (const auto& t : report.tests) {
    ordered_json entry;
    entry["kind"] = t.kind;
    entry["p"] = t.prime;
    entry["k"] = t.k;
    entry["value"] = rational_to_string(t.value);
    entry["fired"] = t.fired;
    tests.push_back(std::move(entry));
  }
  doc["tests"] = std::move(tests);
  doc["verdict"] = verdict_string(report.infinite_order);
  return doc.dump(2) + "\n";
}

ObstructionReport report_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("malformed report JSON: ") + e.what());
  }
  try {
    ObstructionReport report;
    report.p = doc.at("p").get<long>();
    report.q = doc.at("q").get<long>();
    report.tau.resize(static_cast<std::size_t>(report.p));
    report.d.resize(static_cast<std::size_t>(report.p));
    for (const auto& [key, value] : doc.at("tau").items()) {
      const long label = std::stol(key);
      if (label < 0 || label >= report.p) {
        throw std::invalid_argument("label out of range in report");
      }
      report.tau[static_cast<std::size_t>(label)] =
          parse_rational(value.get<std::string>());
    }
    for (const auto& [key, value] : doc.at("d").items()) {
      const long label = std::stol(key);
      if (label < 0 || label >= report.p) {
        throw std::invalid_argument("label out of range in report");
      }
      report.d[static_cast<std::size_t>(label)] =
          parse_rational(value.get<std::string>());
    }
    // Within a prime, the two minmax rows appear tau first, then d.
    long last_minmax_prime = -1;
    for (const auto& entry : doc.at("tests")) {
      ObstructionTest t;
      t.kind = entry.at("kind").get<std::string>();
      t.prime = entry.at("p").get<long>();
      t.k = entry.at("k").get<int>();
      t.value = parse_rational(entry.at("value").get<std::string>());
      t.fired = entry.at("fired").get<bool>();
      if (t.kind == "minmax") {
        t.grading = t.prime == last_minmax_prime ? "d" : "tau";
        last_minmax_prime = t.prime == last_minmax_prime ? -1 : t.prime;
      }
      report.tests.push_back(std::move(t));
    }
    report.infinite_order =
        doc.at("verdict").get<std::string>() == "infinite-order";
    return report;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("invalid report JSON: ") + e.what());
  }
}

std::string render_label_values(long p, long q, const std::string& key,
                                const std::vector<Rational>& values,
                                OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::table: {
      out << "K_{" << p << "," << q << "}  " << key << " by spin^c label\n";
      out << "label\t" << key << "\n";
      for (std::size_t label = 0; label < values.size(); ++label) {
        out << label << "\t" << rational_to_string(values[label]) << "\n";
      }
      break;
    }
    case OutputFormat::csv: {
      out << "label," << key << "\n";
      for (std::size_t label = 0; label < values.size(); ++label) {
        out << label << "," << rational_to_string(values[label]) << "\n";
      }
      break;
    }
    case OutputFormat::json: {
      ordered_json doc;
      doc["p"] = p;
      doc["q"] = q;
      ordered_json map = ordered_json::object();
      for (std::size_t label = 0; label < values.size(); ++label) {
        map[std::to_string(label)] = rational_to_string(values[label]);
      }
      doc[key] = std::move(map);
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string render_hfk(long p, long q, const std::vector<HfkEntry>& entries,
                       OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::table: {
      out << "K_{" << p << "," << q
          << "}  knot homology classes (label, Alexander, Maslov)\n";
      out << "label\tA\tM\n";
      for (const auto& e : entries) {
        out << e.label << "\t" << rational_to_string(e.a) << "\t"
            << rational_to_string(e.m) << "\n";
      }
      break;
    }
    case OutputFormat::csv: {
      out << "label,a,m\n";
      for (const auto& e : entries) {
        out << e.label << "," << rational_to_string(e.a) << ","
            << rational_to_string(e.m) << "\n";
      }
      break;
    }
    case OutputFormat::json: {
      ordered_json doc;
      doc["p"] = p;
      doc["q"] = q;
      ordered_json list = ordered_json::array();
      for (const auto& e : entries) {
        ordered_json item;
        item["label"] = e.label;
        item["a"] = rational_to_string(e.a);
        item["m"] = rational_to_string(e.m);
        list.push_back(std::move(item));
      }
      doc["hfk"] = std::move(list);
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string report_csv_header() {
  return "name,p,q,det,verdict,tests_fired,values\n";
}

std::string report_csv_row(const std::string& name,
                           const ObstructionReport& report) {
  std::string fired;
  std::string values;
  for (const auto& t : report.tests) {
    if (t.fired) {
      if (!fired.empty()) fired += ";";
      fired += t.name();
    }
    if (t.kind == "T" || t.kind == "D") {
      if (!values.empty()) values += ";";
      values += t.name() + "=" + rational_to_string(t.value);
    }
  }
  std::ostringstream out;
  out << csv_escape(name) << "," << report.p << "," << report.q << ","
      << report.p << "," << verdict_string(report.infinite_order) << ","
      << csv_escape(fired) << "," << csv_escape(values) << "\n";
  return out.str();
}

std::string render_report(const ObstructionReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return report_to_json(report);
    case OutputFormat::csv:
      return report_csv_header() +
             report_csv_row("K_{" + std::to_string(report.p) + "," +
                                std::to_string(report.q) + "}",
                            report);
    case OutputFormat::table:
      break;
  }
  std::ostringstream out;
  out << "knot: K_{" << report.p << "," << report.q << "}\n";
  out << "determinant: " << report.p << "\n";
  out << "label\ttau\td\n";
  for (std::size_t label = 0; label < report.tau.size(); ++label) {
    out << label << "\t" << rational_to_string(report.tau[label]) << "\t"
        << rational_to_string(report.d[label]) << "\n";
  }
  out << "tests:\n";
  for (const auto& t : report.tests) {
    out << "  " << t.name() << " = " << rational_to_string(t.value)
        << (t.fired ? "  [fired]" : "") << "\n";
  }
  out << "verdict: " << verdict_string(report.infinite_order) << "\n";
  return out.str();
}

} // namespace twobridge
