// Serialization: line-oriented facet sets, the binary configuration format,
// RFC-4180 CSV emission, and deterministic number formatting.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"
#include "perclab/topology.hpp"

namespace perclab {

inline constexpr const char* kToolVersion = "perclab 1.0.0";

// One facet per line: "c_1,...,c_d;axes_bitmask;lattice_tag". Primal facets
// print plain integer corner coordinates, dual facets print the doubled
// (odd) corner coordinates; round-trips are exact.
std::string facet_to_line(const FacetKey& f);
FacetKey facet_from_line(const std::string& line);

void write_facet_lines(std::ostream& out, const std::vector<FacetKey>& facets);
std::vector<FacetKey> read_facet_lines(std::istream& in);

void write_vertex_lines(std::ostream& out, const VertexSet& set);
VertexSet read_vertex_lines(std::istream& in);

// Binary configuration image: magic, header (d, n, S, F, p, seed, rng id,
// edge count), then the edge bits packed in enumeration order.
void save_configuration(std::ostream& out, const Configuration& c);
Configuration load_configuration(std::istream& in);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// RFC-4180: fields quoted when they contain comma, quote, or newline; rows
// terminated with CRLF.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace perclab
