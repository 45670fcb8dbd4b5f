#pragma once

// Check records and reports for the suite runner.  A record is one named
// check with its verdict, the corpus it actually ran over, and any guard or
// sampling settings that shaped the run; a report is one suite's worth of
// records plus the settings shared by all of them.  The machine-readable
// rendering is sorted and timing-free so that identical configurations give
// byte-identical output no matter how the suites were scheduled; timings go
// to the human-readable rendering only.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace proftree {

enum class Verdict { Pass, Fail, Inconclusive };

std::string verdict_name(Verdict v);  // "pass" / "fail" / "inconclusive"

struct CheckRecord {
  std::string anchor;   // stable "suite/check" identifier, the sort key
  std::string name;     // one-line description of what was checked
  Verdict verdict = Verdict::Pass;
  std::string inputs;   // corpus and bounds actually used
  std::string witness;  // counterexample (fail) or what was skipped and why
  std::string guards;   // guard, cap, and sampling settings in effect
  std::uint64_t checked = 0;  // individual instances examined
  double millis = 0.0;        // human-readable output only
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t guard = 0;
  std::string corpus;  // shared roster / corpus description
  std::vector<CheckRecord> records;

  // Fail beats Inconclusive beats Pass.
  Verdict verdict() const;
  bool pass() const { return verdict() != Verdict::Fail; }
  bool conclusive() const { return verdict() == Verdict::Pass; }
  double total_millis() const;

  // Rejects fail records without a witness (a fail must name its
  // counterexample) and duplicate anchors within the suite.
  void add(CheckRecord r);
  void sort_records();  // by anchor
};

// Human-readable, includes wall-clock timing.
std::string report_text(const std::vector<Report>& reports);
// Machine-readable JSON: records sorted by anchor, no timing fields.
std::string report_json(const std::vector<Report>& reports);

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double millis() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace proftree
