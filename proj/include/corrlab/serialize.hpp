#pragma once

#include "corrlab/extension.hpp"
#include "corrlab/nerve.hpp"
#include "corrlab/subdivision.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace corrlab {

using Json = nlohmann::json;

/// Matrices are arrays of rows; complex entries are [re, im].
Json to_json(const Mat& m);
Mat mat_from_json(const Json& j, int rows, int cols, const std::string& at);

Json to_json(const FdCstarAlgebra& a);
Json to_json(const StarHom& phi);
Json to_json(const HilbertModule& e);
Json to_json(const Correspondence& e);
Json to_json(const CorrIso& u);
Json to_json(const NCorrSimplex& s);
Json to_json(const HornSpec& h);
Json to_json(const K0Simplex& s);
Json to_json(const TraceEntry& t);
Json to_json(const std::vector<TraceEntry>& trace);
/// Vertices S (sorted vertex lists) with A_S, and f_ST for every S < T.
Json to_json(const SubdivisionFunctor& f);

/// `at` is the location used in SchemaError messages.
FdCstarAlgebra algebra_from_json(const Json& j, const std::string& at = "$");
StarHom hom_from_json(const Json& j, const std::string& at = "$");
HilbertModule module_from_json(const Json& j, const std::string& at = "$");
Correspondence corr_from_json(const Json& j, const std::string& at = "$");
CorrIso iso_from_json(const Json& j, const std::string& at = "$");
/// Unit data is filled in; coherence is not checked here.
NCorrSimplex simplex_from_json(const Json& j, const std::string& at = "$");
HornSpec horn_from_json(const Json& j, const std::string& at = "$");
K0Simplex k0_simplex_from_json(const Json& j, const std::string& at = "$");

/// The "kind" field, or a guess from the keys present. Throws SchemaError.
std::string kind_of(const Json& j);

/// Throws ParseError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace corrlab
