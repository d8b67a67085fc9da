#pragma once

#include "zlab/experiments.hpp"

#include "json.hpp"

#include <string>

namespace zlab {

// Pinned wire format: {"k":2,"classes":[["p0","p1"],["q0","q1"]],"edges":[[0,1],[1,0]]}
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

// Pinned wire format: {"delta":0.1,"lambda":3.0,"c":[1,1],"parts":[...],"sigma":[...]}
nlohmann::json witness_to_json(const RegularityWitness& w);
RegularityWitness witness_from_json(const nlohmann::json& j);

nlohmann::json outcome_to_json(const VerificationOutcome& out);
nlohmann::json report_to_json(const BoundReport& rep);
nlohmann::json estimate_to_json(const TupleEstimate& est);
nlohmann::json audit_to_json(const DecompositionAudit& audit);
nlohmann::json refine_to_json(const RefineResult& res);
nlohmann::json sweep_rows_to_json(const std::vector<SweepRow>& rows);
nlohmann::json incidence_rows_to_json(const std::vector<IncidenceRow>& rows);

SweepConfig sweep_config_from_json(const nlohmann::json& j);
FamilySpec family_spec_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace zlab
