#include "symforge/report.hpp"

#include <exception>

#include <algorithm>

namespace symforge {

const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::discrepancy: return "discrepancy";
  }
  return "fail";
}

bool VerificationReport::passed() const { return count(Status::fail) == 0; }

std::size_t VerificationReport::count(Status s) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [s](const ReportEntry& e) { return e.status == s; }));
}

const ReportEntry* VerificationReport::find(const std::string& identity) const {
  auto it = std::find_if(entries.begin(), entries.end(), [&](const ReportEntry& e) { return e.identity == identity; });
  return it == entries.end() ? nullptr : &*it;
}

void VerificationReport::append(const VerificationReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

std::string witness_text(const std::string& residual, std::size_t limit) {
  if (residual.size() <= limit) return residual;
  return residual.substr(0, limit) + " ... (" + std::to_string(residual.size()) + " chars)";
}

ReportEntry timed_entry(std::string identity, std::string anchor, const std::function<Residual()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Residual r;
  try {
    r = check();
  } catch (const std::exception& ex) {
    // A check that cannot even be evaluated (e.g. an operator that no longer
    // splits) is a failure, not a crash of the whole suite.
    r = {false, std::string("exception: ") + ex.what()};
  }
  const auto stop = std::chrono::steady_clock::now();
  ReportEntry e;
  e.identity = std::move(identity);
  e.anchor = std::move(anchor);
  e.status = r.zero ? Status::pass : Status::fail;
  e.witness = witness_text(r.text);
  e.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return e;
}

}  // namespace symforge
