#include "proftree/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "proftree/errors.hpp"

namespace proftree {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  throw std::logic_error("verdict_name: bad enum value");
}

Verdict Report::verdict() const {
  Verdict worst = Verdict::Pass;
  for (const CheckRecord& r : records) {
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    if (r.verdict == Verdict::Inconclusive) worst = Verdict::Inconclusive;
  }
  return worst;
}

double Report::total_millis() const {
  double sum = 0;
  for (const CheckRecord& r : records) sum += r.millis;
  return sum;
}

void Report::add(CheckRecord r) {
  if (r.verdict == Verdict::Fail && r.witness.empty())
    throw std::logic_error("report: fail record '" + r.anchor +
                           "' has no witness");
  for (const CheckRecord& prev : records)
    if (prev.anchor == r.anchor)
      throw std::logic_error("report: duplicate anchor '" + r.anchor + "'");
  records.push_back(std::move(r));
}

void Report::sort_records() {
  std::sort(records.begin(), records.end(),
            [](const CheckRecord& a, const CheckRecord& b) {
              return a.anchor < b.anchor;
            });
}

static std::string format_millis(double ms) {
  std::ostringstream os;
  if (ms >= 1000.0) {
    os.precision(2);
    os << std::fixed << ms / 1000.0 << " s";
  } else {
    os.precision(1);
    os << std::fixed << ms << " ms";
  }
  return os.str();
}

std::string report_text(const std::vector<Report>& reports) {
  std::ostringstream os;
  Verdict overall = Verdict::Pass;
  for (Report rep : reports) {
    rep.sort_records();
    Verdict v = rep.verdict();
    if (v == Verdict::Fail || (v == Verdict::Inconclusive && overall == Verdict::Pass))
      overall = (v == Verdict::Fail) ? Verdict::Fail : Verdict::Inconclusive;
    os << "== " << rep.suite << ": " << verdict_name(v) << " ("
       << format_millis(rep.total_millis()) << ") ==\n";
    os << "   seed " << rep.seed << ", guard " << rep.guard << "\n";
    if (!rep.corpus.empty()) os << "   corpus: " << rep.corpus << "\n";
    for (const CheckRecord& r : rep.records) {
      os << "   [" << (r.verdict == Verdict::Pass ? "pass"
                       : r.verdict == Verdict::Fail ? "FAIL" : "inco")
         << "] " << r.anchor << " - " << r.name << " (checked "
         << r.checked << ", " << format_millis(r.millis) << ")\n";
      if (!r.inputs.empty()) os << "          inputs: " << r.inputs << "\n";
      if (!r.guards.empty()) os << "          guards: " << r.guards << "\n";
      if (!r.witness.empty()) os << "          witness: " << r.witness << "\n";
    }
  }
  os << "overall: " << verdict_name(overall) << "\n";
  return os.str();
}

std::string report_json(const std::vector<Report>& reports) {
  nlohmann::ordered_json root;
  Verdict overall = Verdict::Pass;
  root["reports"] = nlohmann::ordered_json::array();
  for (Report rep : reports) {
    rep.sort_records();
    Verdict v = rep.verdict();
    if (v == Verdict::Fail) overall = Verdict::Fail;
    else if (v == Verdict::Inconclusive && overall == Verdict::Pass)
      overall = Verdict::Inconclusive;
    nlohmann::ordered_json jr;
    jr["suite"] = rep.suite;
    jr["verdict"] = verdict_name(v);
    jr["seed"] = rep.seed;
    jr["guard"] = rep.guard;
    jr["corpus"] = rep.corpus;
    jr["records"] = nlohmann::ordered_json::array();
    for (const CheckRecord& r : rep.records) {
      nlohmann::ordered_json jrec;
      jrec["anchor"] = r.anchor;
      jrec["name"] = r.name;
      jrec["verdict"] = verdict_name(r.verdict);
      jrec["inputs"] = r.inputs;
      jrec["witness"] = r.witness;
      jrec["guards"] = r.guards;
      jrec["checked"] = r.checked;
      jr["records"].push_back(std::move(jrec));
    }
    root["reports"].push_back(std::move(jr));
  }
  root["verdict"] = verdict_name(overall);
  return root.dump(2) + "\n";
}

}  // namespace proftree
