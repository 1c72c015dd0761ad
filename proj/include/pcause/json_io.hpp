#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "pcause/cause.hpp"
#include "pcause/cost_result.hpp"
#include "pcause/model.hpp"
#include "pcause/omega.hpp"

namespace pcause {

using Json = nlohmann::ordered_json;

/// Rationals travel as "num/den" (or "n" when integral); infinities as "inf" and "-inf".
Json rat_json(const Rat& r);
Json ext_rat_json(const ExtRat& r);
Rat rat_from_json(const Json& j);
ExtRat ext_rat_from_json(const Json& j);

using NameOf = std::function<std::string(StateId)>;
using IdOf = std::function<StateId(const std::string&)>;

/// States are written by name. Canonical causes also list their trigger states for readers.
Json cause_json(const CauseRepr& c, const NameOf& name, const std::vector<StateId>* canonical_states = nullptr);
Json cause_json(const PreparedModel& pm, const CauseRepr& c);
/// Throws CauseError on malformed input; unknown names come back through `id`.
CauseRepr cause_from_json(const Json& j, const IdOf& id);
CauseRepr cause_from_json(const PreparedModel& pm, const Json& j);

Json result_json(const CostResult& r, const NameOf& name, const std::vector<StateId>* canonical_states = nullptr);
Json result_json(const PreparedModel& pm, const CostResult& r);

Json verify_json(const PreparedModel& pm, const VerifyReport& rep);
Json projected_json(const Dtmc& m, const ProjectedCause& c, const ProjectedReport& rep);

}  // namespace pcause
