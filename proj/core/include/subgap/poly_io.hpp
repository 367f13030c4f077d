#pragma once

#include <string>
#include <vector>

#include "subgap/poly.hpp"

namespace subgap::poly {

// On-disk map format, consumed by all CLI subcommands:
//   {"n": int, "homogeneous_degree": int|null,
//    "components": [[{"exp":[e1,...,en], "coef":[re,im]}, ...], ...]}
PolyMap parse_map_json(const std::string& text);
PolyMap load_map(const std::string& path);
std::string map_to_json(const PolyMap& map);
void save_map(const PolyMap& map, const std::string& path);

// Univariate polynomial: JSON array of [re,im] coefficient pairs, constant first.
std::vector<Complex> parse_coeff_list(const std::string& text);
std::vector<Complex> load_coeff_list(const std::string& path);

// Witness disc: base point plus jet coefficients per component, constant first.
//   [{"point": [[re,im],...], "jet": [[[re,im],...], ...]}, ...]
struct WitnessDisc {
    Eigen::VectorXcd point;
    JetVec jet;
};
std::vector<WitnessDisc> parse_witness_discs(const std::string& text, int expected_dim, int K);
std::vector<WitnessDisc> load_witness_discs(const std::string& path, int expected_dim, int K);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace subgap::poly
