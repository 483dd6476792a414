#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace chj {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// (id, title) of every acceptance criterion, in order.
const std::vector<std::pair<int, std::string>>& acceptance_criteria();

CriterionResult run_criterion(int id);

/// Runs the selected criteria (all when empty), printing one line per
/// criterion as it finishes.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream& out);

/// File name -> CSV text of the artifacts used for the determinism check.
std::map<std::string, std::string> acceptance_artifacts();

void write_acceptance_artifacts(const std::string& dir);

}  // namespace chj
