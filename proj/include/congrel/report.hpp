#ifndef CONGREL_REPORT_HPP
#define CONGREL_REPORT_HPP

#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "binrel.hpp"
#include "relations.hpp"

namespace congrel {

enum class Result { holds, fails };

inline const char *to_string(Result r) { return r == Result::holds ? "holds" : "fails"; }

/// One failed instance of a claim, with enough data to re-run it.
struct Violation {
  std::string theorem;
  /// Quantified symbol -> value, in quantifier order. Names match the
  /// variables of the claim text.
  std::vector<std::pair<std::string, BinRel>> binding;
  /// Generators of the subalgebra of A x A the binding lives on; empty for
  /// claims quantified over A itself.
  std::vector<std::pair<Element, Element>> generators;
  /// A pair in the left side of failed_claim missing from its right side.
  std::pair<std::size_t, std::size_t> missing_pair{0, 0};
  /// Always an inclusion "LHS <= RHS".
  std::string failed_claim;

  const BinRel *find(const std::string &name) const {
    for (const auto &[k, v] : binding)
      if (k == name)
        return &v;
    return nullptr;
  }
};

struct CheckReport {
  std::string algebra;
  std::string theorem;
  std::size_t instances_checked = 0;
  std::vector<Violation> violations;
  std::chrono::milliseconds elapsed{0};

  Result result() const noexcept { return violations.empty() ? Result::holds : Result::fails; }
  bool holds() const noexcept { return violations.empty(); }
};

/// Running tally for sweeps: counts every instance, keeps the first few
/// violations in enumeration order.
struct Tally {
  std::size_t instances = 0;
  std::vector<Violation> violations;

  void absorb(Tally &&other, std::size_t max_violations) {
    instances += other.instances;
    for (auto &v : other.violations) {
      if (violations.size() >= max_violations)
        break;
      violations.push_back(std::move(v));
    }
  }
};

inline nlohmann::ordered_json to_json(const Violation &v) {
  nlohmann::ordered_json binding = nlohmann::ordered_json::object();
  for (const auto &[name, rel] : v.binding)
    binding[name] = relation_to_json(rel);
  nlohmann::ordered_json out;
  out["binding"] = std::move(binding);
  if (!v.generators.empty()) {
    auto gens = nlohmann::ordered_json::array();
    for (auto [x, y] : v.generators)
      gens.push_back({x, y});
    out["generators"] = std::move(gens);
  }
  out["missing_pair"] = {v.missing_pair.first, v.missing_pair.second};
  out["failed_claim"] = v.failed_claim;
  return out;
}

/// Report JSON. With include_timing == false, elapsed_ms is written as 0 so
/// that output is byte-identical across runs.
inline nlohmann::ordered_json to_json(const CheckReport &r, bool include_timing = false) {
  nlohmann::ordered_json out;
  out["algebra"] = r.algebra;
  out["theorem"] = r.theorem;
  out["result"] = to_string(r.result());
  out["instances_checked"] = r.instances_checked;
  auto vs = nlohmann::ordered_json::array();
  for (const auto &v : r.violations)
    vs.push_back(to_json(v));
  out["violations"] = std::move(vs);
  out["elapsed_ms"] = include_timing ? r.elapsed.count() : 0;
  return out;
}

inline std::string to_text(const Violation &v) {
  std::string out = "  violation of " + v.failed_claim + "\n";
  out += "    missing pair (" + std::to_string(v.missing_pair.first) + "," +
         std::to_string(v.missing_pair.second) + ")\n";
  if (!v.generators.empty()) {
    out += "    generators";
    for (auto [x, y] : v.generators)
      out += " (" + std::to_string(x) + "," + std::to_string(y) + ")";
    out += "\n";
  }
  for (const auto &[name, rel] : v.binding) {
    out += "    " + name + " =\n";
    std::string dump = rel.dump();
    std::size_t start = 0;
    while (start < dump.size()) {
      std::size_t end = dump.find('\n', start);
      out += "      " + dump.substr(start, end - start) + "\n";
      start = end + 1;
    }
  }
  return out;
}

inline std::string to_text(const CheckReport &r, bool include_timing = false) {
  std::string out = r.theorem + " on " + r.algebra + ": " + to_string(r.result()) + " (" +
                    std::to_string(r.instances_checked) + " instances";
  if (include_timing)
    out += ", " + std::to_string(r.elapsed.count()) + " ms";
  out += ")\n";
  for (const auto &v : r.violations)
    out += to_text(v);
  return out;
}

} // namespace congrel

#endif // CONGREL_REPORT_HPP
