#include "mems/runner/record.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mems/error.hpp"

namespace mems::runner {

using json = nlohmann::ordered_json;

namespace {

// Non-finite values have no JSON literal; they travel as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  throw Error(ErrorKind::IoError, "bad number '" + s + "' in record");
}

VerdictStatus status_from(const std::string& s) {
  if (s == "pass") return VerdictStatus::Pass;
  if (s == "fail") return VerdictStatus::Fail;
  if (s == "skipped") return VerdictStatus::Skipped;
  throw Error(ErrorKind::IoError, "bad verdict status '" + s + "'");
}

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Pass: return "pass";
    case VerdictStatus::Fail: return "fail";
    case VerdictStatus::Skipped: return "skipped";
  }
  return "skipped";
}

void ResultRecord::scalar(const std::string& name, double value, std::string units, std::string tag) {
  scalars[name] = {value, std::move(units), std::move(tag)};
}

void ResultRecord::verdict(std::string name, bool passed, std::string detail) {
  verdicts.push_back({std::move(name), passed ? VerdictStatus::Pass : VerdictStatus::Fail, std::move(detail)});
}

void ResultRecord::skip(std::string name, std::string reason) {
  verdicts.push_back({std::move(name), VerdictStatus::Skipped, std::move(reason)});
}

bool ResultRecord::all_passed() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.status == VerdictStatus::Fail; });
}

std::string to_json_text(const ResultRecord& r) {
  json j;
  j["schema"] = r.schema;
  j["experiment"] = r.experiment;
  j["config"] = json::object();
  for (const auto& [k, v] : r.config) j["config"][k] = v;
  j["scalars"] = json::object();
  for (const auto& [k, s] : r.scalars) j["scalars"][k] = {{"value", number(s.value)}, {"units", s.units}, {"tag", s.tag}};
  j["series"] = json::object();
  for (const auto& [k, s] : r.series) {
    json cols = json::object();
    for (std::size_t c = 0; c < s.columns.size(); ++c) {
      json arr = json::array();
      for (double x : s.data[c]) arr.push_back(number(x));
      cols[s.columns[c]] = std::move(arr);
    }
    j["series"][k] = {{"columns", s.columns}, {"data", std::move(cols)}};
  }
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts)
    j["verdicts"].push_back({{"name", v.name}, {"status", to_string(v.status)}, {"detail", v.detail}});
  return j.dump(2) + "\n";
}

ResultRecord from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("malformed record: ") + e.what());
  }
  try {
    ResultRecord r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kSchema) throw Error(ErrorKind::IoError, "unsupported schema " + r.schema);
    r.experiment = j.at("experiment").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("scalars").items())
      r.scalars[k] = {number(v.at("value")), v.at("units").get<std::string>(), v.at("tag").get<std::string>()};
    for (const auto& [k, v] : j.at("series").items()) {
      Series s;
      s.columns = v.at("columns").get<std::vector<std::string>>();
      for (const auto& c : s.columns) {
        std::vector<double> col;
        for (const auto& x : v.at("data").at(c)) col.push_back(number(x));
        s.data.push_back(std::move(col));
      }
      r.series[k] = std::move(s);
    }
    for (const auto& v : j.at("verdicts"))
      r.verdicts.push_back({v.at("name").get<std::string>(), status_from(v.at("status").get<std::string>()),
                            v.at("detail").get<std::string>()});
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("malformed record: ") + e.what());
  }
}

void write_record(const ResultRecord& r, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
  out << to_json_text(r);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + file.string());
}

ResultRecord read_record(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void write_csv(const Series& s, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
  for (std::size_t c = 0; c < s.columns.size(); ++c) out << (c ? "," : "") << s.columns[c];
  out << "\n";
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t c = 0; c < s.columns.size(); ++c) out << (c ? "," : "") << format(s.data[c][i]);
    out << "\n";
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + file.string());
}

const std::vector<std::string>& time_series_columns() {
  static const std::vector<std::string> cols = {"t", "sup_u", "E", "dirichlet", "dissipation_cum", "nonlocal_pot"};
  return cols;
}

}  // namespace mems::runner
