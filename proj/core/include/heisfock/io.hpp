#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "heisfock/fock.hpp"
#include "heisfock/geometry.hpp"
#include "heisfock/structure.hpp"

namespace heisfock {

/// {n, N, omega: flat row-major [re,im] pairs (i, then j, then l), label}.
/// Emission uses shortest round-trip decimals, so emit(parse(emit(s)))
/// reproduces the bytes of emit(s).
nlohmann::json structure_to_json(const HeisenbergStructure& s);
StructurePtr structure_from_json(const nlohmann::json& j);

/// Per-rank dense arrays, row-major over words, complex as [re,im]; ranks
/// above max_rank are omitted.
nlohmann::json tensor_to_json(const GradedTensor& alpha);
GradedTensor tensor_from_json(StructurePtr s, const nlohmann::json& j);

nlohmann::json bracket_to_json(const DistanceBracket& b);

/// One row per grid node: t, then Re/Im of every coordinate.
std::string path_to_csv(const HorizontalPath& p);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace heisfock
