#pragma once

#include <vector>

#include <json.hpp>

#include "arrange/intersection_poset.hpp"
#include "arrange/model.hpp"
#include "arrange/sheaf_decomposition.hpp"

namespace arrange::cli {

using Json = nlohmann::ordered_json;

Json poset_to_json(const IntersectionPoset& p);
IntersectionPoset poset_from_json(const nlohmann::json& j);

Json stalks_to_json(const std::vector<StalkTable>& stalks);
std::vector<StalkTable> stalks_from_json(const nlohmann::json& j);

/**
 * The model re-expressed as an abstract job model section: stratum flats
 * with their codims, members, Betti numbers and strict lower sets.
 */
Json replay_model(const ArrangementModel& model);

} // namespace arrange::cli
