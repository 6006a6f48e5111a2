#pragma once

#include <string>
#include <vector>

namespace mzlab {

// One named pass/fail line of a verification suite. `margin` is the
// slack left before the check would fail (negative = failed by that
// much). Advisory rows are one-sided sanity probes: they are reported
// in full but do not veto all_pass(), because a certified lower bound
// falling short of an upper-compatible value is not a contradiction.
struct CheckRow {
  std::string name;
  bool pass = true;
  double margin = 0.0;
  bool advisory = false;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckRow> rows;

  bool all_pass() const {
    for (const auto& row : rows)
      if (!row.advisory && !row.pass) return false;
    return true;
  }

  void add(std::string name, bool pass, double margin, bool advisory = false) {
    rows.push_back({std::move(name), pass, margin, advisory});
  }
};

}  // namespace mzlab
