#pragma once

#include <nlohmann/json.hpp>

#include "mblab/blockbasis.hpp"
#include "mblab/characters.hpp"
#include "mblab/conditionality.hpp"
#include "mblab/renorm.hpp"
#include "mblab/seqplan.hpp"
#include "mblab/verify.hpp"

namespace mblab {

using json = nlohmann::json;

// Blocks: {dim, eps_slice, s, offset, materialized, A?}; A is row-major.
void to_json(json& j, const MBasisBlock& block);
MBasisBlock block_from_json(const json& j);

// Systems: {"rows": n, "cols": n, "data": [row-major]} or nested rows [[...], ...].
json system_to_json(const OrderedSystem& system);
OrderedSystem system_from_json(const json& j);

void to_json(json& j, const BlockPlan& plan);
void to_json(json& j, const BlockDiagnostics& report);
void to_json(json& j, const BoundednessReport& report);
void to_json(json& j, const Theorem1Certificate& cert);
void to_json(json& j, const Witness& w);
void to_json(json& j, const WitnessBoundsReport& report);
void to_json(json& j, const PermutationConstant& result);
void to_json(json& j, const AuerbachReport& report);
void to_json(json& j, const AuerbachL1Report& report);
void to_json(json& j, const CharacterOrdering& result);

}  // namespace mblab
