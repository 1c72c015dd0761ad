#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcause/cause.hpp"
#include "pcause/errors.hpp"
#include "pcause/rational.hpp"

namespace pcause {

enum class CostKind { expcost, pexpcost, maxcost, expcost_inst, pexpcost_inst, maxcost_inst };

std::string to_string(CostKind kind);
std::optional<CostKind> parse_cost_kind(std::string_view text);

struct SolverStats {
  std::size_t iterations = 0;
  std::size_t levels = 0;
  std::vector<std::string> notes;
};

/// Optimal value of one cost kind together with a cause attaining it.
struct CostResult {
  CostKind kind = CostKind::expcost;
  ExtRat value;
  CauseRepr cause;
  SolverStats stats;
};

/// Throws UnsupportedError when a merged error/safe state whose weight enters the cost had
/// conflicting member weights.
inline void require_defined_weights(const PreparedModel& pm, bool error, bool safe) {
  if (error && pm.error_weight_ambiguous()) {
    throw UnsupportedError("merged target states carry different weights; give them a common weight");
  }
  if (safe && pm.safe_weight_ambiguous()) {
    throw UnsupportedError("merged safe states carry different weights; give them a common weight");
  }
}

}  // namespace pcause
