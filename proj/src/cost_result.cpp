#include "pcause/cost_result.hpp"

namespace pcause {

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::expcost: return "expcost";
    case CostKind::pexpcost: return "pexpcost";
    case CostKind::maxcost: return "maxcost";
    case CostKind::expcost_inst: return "expcost_inst";
    case CostKind::pexpcost_inst: return "pexpcost_inst";
    case CostKind::maxcost_inst: return "maxcost_inst";
  }
  return "unknown";
}

std::optional<CostKind> parse_cost_kind(std::string_view text) {
  for (auto k : {CostKind::expcost, CostKind::pexpcost, CostKind::maxcost, CostKind::expcost_inst,
                 CostKind::pexpcost_inst, CostKind::maxcost_inst}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

}  // namespace pcause
