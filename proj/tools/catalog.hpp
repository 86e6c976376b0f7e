#ifndef QTVERIFY_CATALOG_HPP
#define QTVERIFY_CATALOG_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtorus/report.hpp"

namespace qtverify {

/// Truncation parameters plus the check's index tuple.
struct Params {
  int T = 3;
  int O = 8;
  int D = 2;
  int P = 4;
  std::vector<int> indices;
};

/// Values supplied by a config file or flags; unset fields keep the defaults.
struct Overrides {
  std::optional<int> T, O, D, P;
  std::optional<std::vector<int>> indices;
  std::optional<std::string> format;

  /// Fields set in `o` win.
  void merge(const Overrides& o);
};

struct CheckEntry {
  std::string name;
  std::string anchor;
  std::vector<std::string> index_names;
  Params defaults;
  std::function<qtorus::Report(const Params&)> run;
};

const std::vector<CheckEntry>& catalog();
const CheckEntry* find_check(const std::string& name);

/// Schema defaults with overrides applied.
Params resolve(const CheckEntry& e, const Overrides& o);

/// Runs one check; unknown names, bad parameters and exceptions become
/// error reports.
qtorus::Report run_check(const std::string& name, const Overrides& o);

struct SuiteItem {
  std::string check;
  Overrides params;
};
/// Named batches; nullopt for an unknown suite.
std::optional<std::vector<SuiteItem>> suite(const std::string& name);
std::vector<std::string> suite_names();

/// Reports sorted by check name (stable), then rendered.
std::string render_json(std::vector<qtorus::Report> reports);
std::string render_text(std::vector<qtorus::Report> reports);
std::string render_catalog_text();
std::string render_catalog_json();

/// Exit status: 0 iff every report is ok().
int exit_code(const std::vector<qtorus::Report>& reports);

/// Flat `key = value` file; '#' starts a comment. Keys: T, O, D, P,
/// indices (comma list), format. Throws std::runtime_error on bad input.
Overrides parse_config(const std::string& text);
Overrides load_config_file(const std::string& path);
std::vector<int> parse_indices(const std::string& s);

}  // namespace qtverify

#endif  // QTVERIFY_CATALOG_HPP
