#include "dgv/report.hpp"

#include <json.hpp>

#include <sstream>

namespace dgv {

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not-applicable";
  }
  return "?";
}

void Report::append(const Report& sub, const std::string& prefix) {
  for (const auto& e : sub.entries) {
    CheckEntry copy = e;
    copy.name = prefix + "." + e.name;
    entries.push_back(std::move(copy));
  }
}

bool Report::passed() const {
  for (const auto& e : entries)
    if (e.status == CheckStatus::Fail) return false;
  return true;
}

bool Report::has_fail() const { return !passed(); }

std::string Report::text() const {
  std::ostringstream os;
  os << "command: " << command << "  (seed=" << seed << ", samples=" << samples << ")\n";
  for (const auto& e : entries) {
    os << "  [" << status_name(e.status) << "] " << e.name;
    if (!e.detail.empty()) os << " — " << e.detail;
    os << "\n";
    for (const auto& w : e.witnesses) os << "      witness: " << w << "\n";
    if (!e.validity_denominator.empty())
      os << "      valid away from zeros of: " << e.validity_denominator << "\n";
  }
  os << (passed() ? "RESULT: pass" : "RESULT: fail") << "\n";
  return os.str();
}

std::string Report::json() const {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  j["samples"] = samples;
  j["result"] = passed() ? "pass" : "fail";
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["name"] = e.name;
    je["status"] = status_name(e.status);
    je["detail"] = e.detail;
    je["witnesses"] = e.witnesses;
    if (!e.validity_denominator.empty())
      je["validity_denominator"] = e.validity_denominator;
    j["entries"].push_back(je);
  }
  return j.dump(2);
}

}  // namespace dgv
