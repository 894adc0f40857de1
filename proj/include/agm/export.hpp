#pragma once

// Text formats for graphs, censuses and curves.

#include "agm/aquarium.hpp"
#include "agm/legendre.hpp"
#include "agm/taxonomy.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace agm::io {

inline constexpr int kSchemaVersion = 1;

std::string vertex_label(const ff::Field& F, const aq::Vertex& v);  // "a,b"

struct DotOptions {
    // Colors nodes by the type of their component; needs a decomposition.
    const tax::Decomposition* color_by_type = nullptr;
};

void write_dot(std::ostream& out, const aq::Aquarium& A, const DotOptions& opts = {});
void write_graphml(std::ostream& out, const aq::Aquarium& A, const tax::Decomposition* d = nullptr);
/// Header "a,b,a',b'" then one row per edge in source id order.
void write_csv(std::ostream& out, const aq::Aquarium& A);

/// Edges of a CSV edge list as vertex pairs. Throws PreconditionError on
/// malformed rows or non-vertices.
std::vector<std::pair<aq::Vertex, aq::Vertex>> read_csv(std::istream& in, const ff::Field& F);

nlohmann::json census_json(const tax::Census& c, const aq::Aquarium& A);
std::string census_text(const tax::Census& c, const aq::Aquarium& A);

nlohmann::json curve_json(const legendre::LegendreCurve& E);

}  // namespace agm::io
