#ifndef DGV_REPORT_HPP
#define DGV_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dgv {

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;                   // human-readable outcome
  std::vector<std::string> witnesses;   // points / identities backing a verdict
  std::string validity_denominator;     // nonempty for generic (dense-open) results
};

// Structured verdict for one command run.  Deterministic for a fixed
// (document, seed, flags) triple; wall-clock timing is deliberately kept
// out of the serialized form.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<CheckEntry> entries;

  CheckEntry& add(const std::string& name) {
    entries.push_back(CheckEntry{name});
    return entries.back();
  }
  void append(const Report& sub, const std::string& prefix);
  bool passed() const;
  bool has_fail() const;
  std::string text() const;
  std::string json() const;
};

std::string status_name(CheckStatus s);

}  // namespace dgv

#endif
