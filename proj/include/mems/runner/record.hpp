#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mems::runner {

inline constexpr const char* kSchema = "mems-result/1";

enum class VerdictStatus { Pass, Fail, Skipped };

struct Verdict {
  std::string name;
  VerdictStatus status = VerdictStatus::Skipped;
  std::string detail;  // measured value against the threshold, or the skip reason
  bool operator==(const Verdict&) const = default;
};

struct Scalar {
  double value = 0.0;
  std::string units;
  std::string tag;  // which quantity of the model this is
  bool operator==(const Scalar&) const = default;
};

/// Column-major table; all columns have the same length.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;
  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  bool operator==(const Series&) const = default;
};

struct ResultRecord {
  std::string schema = kSchema;
  std::string experiment;
  std::map<std::string, std::string> config;
  std::map<std::string, Scalar> scalars;
  std::map<std::string, Series> series;
  std::vector<Verdict> verdicts;

  void scalar(const std::string& name, double value, std::string units, std::string tag);
  void verdict(std::string name, bool passed, std::string detail);
  void skip(std::string name, std::string reason);
  bool all_passed() const;  // no Fail verdicts
  bool operator==(const ResultRecord&) const = default;
};

std::string to_string(VerdictStatus s);

std::string to_json_text(const ResultRecord& r);
ResultRecord from_json_text(const std::string& text);

void write_record(const ResultRecord& r, const std::filesystem::path& file);
ResultRecord read_record(const std::filesystem::path& file);

/// CSV with a header row; numbers printed with 17 significant digits.
void write_csv(const Series& s, const std::filesystem::path& file);

/// Column order of series.csv.
const std::vector<std::string>& time_series_columns();

}  // namespace mems::runner
