#ifndef QTORUS_REPORT_HPP
#define QTORUS_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qtorus {

enum class Status { kPass, kFail, kCertifiedRange, kRecorded, kError };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

/// Outcome of one verification check.
///
/// `pass` and `certified-range` both mean every asserted residual was the
/// exact zero polynomial; the latter additionally names the truncation range
/// that was asserted. `recorded` marks probes whose outcome is not adjudicated.
struct Report {
  std::string check;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  Status status = Status::kPass;
  std::optional<nlohmann::ordered_json> certified_range;
  double elapsed_ms = 0;
  std::vector<std::string> details;

  bool ok() const { return status == Status::kPass || status == Status::kCertifiedRange || status == Status::kRecorded; }
  void fail(std::string why) {
    status = Status::kFail;
    details.push_back(std::move(why));
  }

  nlohmann::ordered_json to_json() const;
  static Report from_json(const nlohmann::ordered_json& j);

  friend bool operator==(const Report&, const Report&) = default;
};

}  // namespace qtorus

#endif  // QTORUS_REPORT_HPP
