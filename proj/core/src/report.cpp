#include "qtorus/report.hpp"

#include <stdexcept>

namespace qtorus {

std::string to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kCertifiedRange: return "certified-range";
    case Status::kRecorded: return "recorded";
    case Status::kError: return "error";
  }
  return "error";
}

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::kPass;
  if (s == "fail") return Status::kFail;
  if (s == "certified-range") return Status::kCertifiedRange;
  if (s == "recorded") return Status::kRecorded;
  if (s == "error") return Status::kError;
  throw std::invalid_argument("unknown status '" + s + "'");
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["params"] = params;
  j["status"] = to_string(status);
  if (certified_range) j["certified_range"] = *certified_range;
  j["elapsed_ms"] = elapsed_ms;
  j["details"] = details;
  return j;
}

Report Report::from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.check = j.at("check").get<std::string>();
  r.params = j.at("params");
  r.status = status_from_string(j.at("status").get<std::string>());
  if (j.contains("certified_range")) r.certified_range = j.at("certified_range");
  r.elapsed_ms = j.at("elapsed_ms").get<double>();
  r.details = j.at("details").get<std::vector<std::string>>();
  return r;
}

}  // namespace qtorus
