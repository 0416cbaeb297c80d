#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffent/agreement.hpp"
#include "diffent/diffraction.hpp"
#include "diffent/entanglement.hpp"
#include "diffent/fock.hpp"
#include "diffent/grid.hpp"
#include "diffent/protocols.hpp"
#include "diffent/separability.hpp"

namespace diffent::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kFieldMagic = "DIFFENT-FIELD v1";

// Text field format: magic line, "nx ny dx dy k", then nx*ny lines "re im"
// in row-major order (y outer, x inner), all doubles printed with %.17g.
void write_field(std::ostream& os, const SampledField& field);
SampledField read_field(std::istream& is);
void write_field_file(const std::filesystem::path& path, const SampledField& field);
SampledField read_field_file(const std::filesystem::path& path);

json matrix_to_json(const MatrixXcd& m);  // rows of [re, im] pairs
MatrixXcd matrix_from_json(const json& j);

json to_json(const Grid2D& g);
json to_json(const Provenance& p);
json to_json(const MaskFunction& m);
json to_json(const UnitaryMatrix& u);
json to_json(const CouplingMatrix& c);
json to_json(const MultimodeFockState& s);
json to_json(const Bipartition& part, const EntanglementReport& r, int top_k = 8);
json to_json(const SeparabilityVerdict& v);
json to_json(const GaussianState& g);
json to_json(const IfmResult& r);
json to_json(const ScanResult& r);
json to_json(const ImpulseResponse& h);
json to_json(const TrialOutcome& t);
json to_json(const AgreementSummary& s);

// Accepts a "unitary" document (row = input mode) or a square "coupling"
// document, which is transposed into the same convention.
UnitaryMatrix unitary_from_json(const json& j);
CouplingMatrix coupling_from_json(const json& j);
MultimodeFockState state_from_json(const json& j);

// CSV (row, col, re, im).
std::string matrix_csv(const MatrixXcd& m);
// CSV (mask, entropy_bits, separable, schmidt_0..schmidt_{k-1}).
std::string scan_csv(const std::vector<ScanEntry>& scan, int top_k = 4);
// CSV (theta, phi, fidelity).
std::string surface_csv(const ScanResult& r);

// "fock:N", "vac", "coh:re[:im]", "sq:lambda".
ModeDescriptor parse_descriptor(const std::string& text);
std::vector<ModeDescriptor> parse_descriptors(const std::string& text);
// "1,0,1" -> {0, 2}; the mask length must equal mode_count when given.
std::vector<int> parse_subset_mask(const std::string& text, int mode_count = -1);
std::vector<double> parse_doubles(const std::string& text);

json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over the target.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace diffent::io
