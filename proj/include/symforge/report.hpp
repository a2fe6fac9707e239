#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace symforge {

enum class Status { pass, fail, discrepancy };

const char* status_name(Status s);

struct ReportEntry {
  std::string identity;
  std::string anchor;  // label of the relation this entry reproduces
  Status status = Status::fail;
  std::string witness;  // canonical residual, or numeric residual as text
  double elapsed_ms = 0.0;
};

struct VerificationReport {
  int m = 0;
  int n = 0;
  std::string k;
  std::string mode = "symbolic";  // symbolic | numeric
  std::vector<ReportEntry> entries;

  bool passed() const;
  std::size_t count(Status s) const;
  const ReportEntry* find(const std::string& identity) const;
  void append(const VerificationReport& other);
};

/// Residual text used as witness; long forms are cut to keep reports readable.
std::string witness_text(const std::string& residual, std::size_t limit = 400);

/// Times `residual_is_zero` and records pass/fail. The callback returns the
/// residual's text and whether it vanished.
struct Residual {
  bool zero = false;
  std::string text;
};

ReportEntry timed_entry(std::string identity, std::string anchor, const std::function<Residual()>& check);

}  // namespace symforge
