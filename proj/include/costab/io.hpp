#pragma once

#include <iosfwd>

#include "costab/costab.hpp"

namespace costab {

// Co-slicing files: one "slice:" line per base slice, phases as exact
// rationals/decimals or with a '~' prefix for float-tagged values.
void save_coslicing(const Snapshot& s, const CoSlicing& q, const std::string& path);
CoSlicing load_coslicing(const Snapshot& s, const std::string& path);

// Co-t-structure files: the aisle id list (co-aisle derived as the right
// perp inside the window and cross-checked when present).
void save_cotstructure(const Snapshot& s, const CoTStructure& p, const std::string& path);
CoTStructure load_cotstructure(const Snapshot& s, const std::string& path);

// Charge files: one value per K0 basis element.
void save_charge(const Snapshot& s, const CentralCharge& z, const std::string& path);
CentralCharge load_charge(const Snapshot& s, const std::string& path);

// Condition files: charge values plus a co-slicing file reference (resolved
// relative to the condition file's directory).
void save_condition(const Snapshot& s, const CoStabilityCondition& c, const std::string& path,
                    const std::string& coslicing_relpath);
CoStabilityCondition load_condition(const Snapshot& s, const std::string& path);

/// Structured-text report with a stable schema: "key: value" lines plus
/// machine-readable "check <name>: pass|fail|skip ..." verdict lines.
class Report {
 public:
  explicit Report(std::string scenario);

  void field(const std::string& key, const std::string& value);
  void field(const std::string& key, long value);
  void field(const std::string& key, double value);
  void note(const std::string& text);
  void check(const std::string& name, bool pass, const std::string& detail = "");
  void check(const std::string& name, const Verdict& v);
  void window(const Snapshot& s);

  bool all_passed() const { return failures_ == 0; }
  int failures() const { return failures_; }

  std::string text() const;
  void write(std::ostream& os) const;
  void save(const std::string& path) const;

 private:
  std::vector<std::string> lines_;
  int failures_ = 0;
};

}  // namespace costab
