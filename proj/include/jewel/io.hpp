#pragma once

#include <string>

#include <json.hpp>

#include "jewel/bounds.hpp"
#include "jewel/compat.hpp"
#include "jewel/povm.hpp"
#include "jewel/sdp.hpp"
#include "jewel/spectra.hpp"
#include "jewel/witness.hpp"

namespace jewel {

using Json = nlohmann::json;

/// Canonical text form: sorted keys, compact separators, floats printed with
/// %.17g (bit-exact round trips), non-finite numbers as null.
std::string canonical_dump(const Json& j);

// Complex scalars encode as [re, im]; a matrix is an array of rows.
Json to_json(const CMat& m);
Json to_json(const HMat& m);

Json to_json(const Povm& p);
Json to_json(const MeasurementSet& set);
Json to_json(const FreeTuple& t);
Json to_json(const WitnessCandidate& w);
Json to_json(const CompatVerdict& v, bool include_joint = false);
Json to_json(const BoundReport& r);
Json to_json(const SdpProblem& p);

// Parsers raise std::invalid_argument naming the offending JSON path.
CMat cmat_from_json(const Json& j);
HMat hmat_from_json(const Json& j);
Povm povm_from_json(const Json& j);
MeasurementSet set_from_json(const Json& j);
FreeTuple tuple_from_json(const Json& j);
WitnessCandidate witness_from_json(const Json& j);
SdpProblem sdp_problem_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);

/// Debug dump used by SdpOptions::dump_json_path.
void dump_sdp_problem(const SdpProblem& p, const std::string& path);

}  // namespace jewel
