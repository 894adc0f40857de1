#include "agm/export.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace agm::io {

using nlohmann::json;

namespace {

const char* type_color(tax::ComponentType t) {
    switch (t) {
        case tax::ComponentType::Isolated:
            return "gray60";
        case tax::ComponentType::Fish:
            return "steelblue";
        case tax::ComponentType::Jellyfish:
            return "purple";
        case tax::ComponentType::Turtle:
            return "forestgreen";
        case tax::ComponentType::Acyclic:
            return "darkorange";
    }
    return "black";
}

// Component type per weak component, computed once for all vertices.
std::vector<tax::ComponentType> component_types(const aq::Aquarium& A, const tax::Decomposition& d) {
    std::vector<tax::ComponentType> types(d.weak.count());
    for (std::size_t i = 0; i < d.weak.count(); ++i)
        types[i] = tax::classify(A.graph(), d, i, [&A](aq::VertexId v) { return A.vertex(v); }, &A.field()).type;
    return types;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

}  // namespace

std::string vertex_label(const ff::Field& F, const aq::Vertex& v) { return F.render(v.a) + "," + F.render(v.b); }

void write_dot(std::ostream& out, const aq::Aquarium& A, const DotOptions& opts) {
    const ff::Field& F = A.field();
    const auto& g = A.graph();
    std::vector<tax::ComponentType> types;
    if (opts.color_by_type) types = component_types(A, *opts.color_by_type);
    out << "digraph \"A(F_" << F.spec() << ")\" {\n";
    for (aq::VertexId v = 0; v < g.n; ++v) {
        out << "  n" << v << " [label=\"" << vertex_label(F, A.vertex(v)) << "\"";
        if (opts.color_by_type) out << ", color=" << type_color(types[opts.color_by_type->weak.part_of[v]]);
        out << "];\n";
    }
    for (aq::VertexId v = 0; v < g.n; ++v)
        for (aq::VertexId w : g.children(v))
            if (w != aq::kNone) out << "  n" << v << " -> n" << w << ";\n";
    out << "}\n";
}

void write_graphml(std::ostream& out, const aq::Aquarium& A, const tax::Decomposition* d) {
    const ff::Field& F = A.field();
    const auto& g = A.graph();
    std::vector<tax::ComponentType> types;
    if (d) types = component_types(A, *d);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"a\" for=\"node\" attr.name=\"a\" attr.type=\"string\"/>\n"
        << "  <key id=\"b\" for=\"node\" attr.name=\"b\" attr.type=\"string\"/>\n";
    if (d) out << "  <key id=\"type\" for=\"node\" attr.name=\"type\" attr.type=\"string\"/>\n";
    out << "  <graph id=\"" << xml_escape("A(F_" + F.spec() + ")") << "\" edgedefault=\"directed\">\n";
    for (aq::VertexId v = 0; v < g.n; ++v) {
        const aq::Vertex x = A.vertex(v);
        out << "    <node id=\"n" << v << "\"><data key=\"a\">" << xml_escape(F.render(x.a)) << "</data><data key=\"b\">"
            << xml_escape(F.render(x.b)) << "</data>";
        if (d) out << "<data key=\"type\">" << tax::to_string(types[d->weak.part_of[v]]) << "</data>";
        out << "</node>\n";
    }
    for (aq::VertexId v = 0; v < g.n; ++v)
        for (aq::VertexId w : g.children(v))
            if (w != aq::kNone) out << "    <edge source=\"n" << v << "\" target=\"n" << w << "\"/>\n";
    out << "  </graph>\n</graphml>\n";
}

void write_csv(std::ostream& out, const aq::Aquarium& A) {
    const ff::Field& F = A.field();
    const auto& g = A.graph();
    out << "a,b,a',b'\n";
    for (aq::VertexId v = 0; v < g.n; ++v) {
        if (g.out_degree(v) == 0) continue;
        const std::string from = vertex_label(F, A.vertex(v));
        for (aq::VertexId w : g.children(v))
            if (w != aq::kNone) out << from << ',' << vertex_label(F, A.vertex(w)) << '\n';
    }
}

std::vector<std::pair<aq::Vertex, aq::Vertex>> read_csv(std::istream& in, const ff::Field& F) {
    std::vector<std::pair<aq::Vertex, aq::Vertex>> edges;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (row == 1 && line == "a,b,a',b'")) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 4) throw PreconditionError("row " + std::to_string(row) + ": expected 4 fields");
        std::array<ff::Element, 4> e;
        for (std::size_t i = 0; i < 4; ++i) e[i] = F.parse_element(cells[i]);
        edges.emplace_back(aq::make_vertex(F, e[0], e[1]), aq::make_vertex(F, e[2], e[3]));
    }
    return edges;
}

json census_json(const tax::Census& c, const aq::Aquarium& A) {
    const ff::Field& F = A.field();
    json types = json::object();
    for (auto [t, n] : c.type_counts) types[tax::to_string(t)] = n;
    json sizes = json::array(), heads = json::array();
    for (auto [s, n] : c.size_histogram) sizes.push_back({{"size", s}, {"count", n}});
    for (auto [s, n] : c.head_length_histogram) heads.push_back({{"length", s}, {"count", n}});
    json turtle = json::array();
    for (aq::VertexId v : c.turtle_vertices) turtle.push_back(vertex_label(F, A.vertex(v)));
    json notable = json::array();
    for (const auto& s : c.notable)
        notable.push_back({{"index", s.index},
                           {"type", tax::to_string(s.type)},
                           {"size", s.size},
                           {"first_vertex", vertex_label(F, A.vertex(s.first_vertex))},
                           {"head_lengths", s.head_lengths},
                           {"flagged", s.flagged}});
    return {{"schema", kSchemaVersion},
            {"field", c.field},
            {"vertices", c.vertices},
            {"edges", c.edges},
            {"components", c.components},
            {"jellyfish", c.jellyfish},
            {"types", types},
            {"size_histogram", sizes},
            {"head_length_histogram", heads},
            {"turtle_vertices", turtle},
            {"notable", notable}};
}

std::string census_text(const tax::Census& c, const aq::Aquarium& A) {
    std::ostringstream out;
    out << "field: " << c.field << "\n"
        << "vertices: " << c.vertices << "\n"
        << "edges: " << c.edges << "\n"
        << "components: " << c.components << "\n"
        << "jellyfish: " << c.jellyfish << "\n";
    for (auto [t, n] : c.type_counts) out << "type " << tax::to_string(t) << ": " << n << "\n";
    for (auto [s, n] : c.size_histogram) out << "size " << s << ": " << n << "\n";
    for (auto [s, n] : c.head_length_histogram) out << "head length " << s << ": " << n << "\n";
    out << "turtle vertices: " << c.turtle_vertices.size() << "\n";
    std::map<std::uint64_t, std::uint64_t> acyclic;
    for (const auto& s : c.notable) {
        if (s.type == tax::ComponentType::Acyclic && !s.flagged) {
            ++acyclic[s.size];
            continue;
        }
        out << tax::to_string(s.type) << " #" << s.index << " size " << s.size << " at ("
            << vertex_label(A.field(), A.vertex(s.first_vertex)) << ")";
        if (!s.head_lengths.empty()) {
            out << " heads";
            for (auto h : s.head_lengths) out << ' ' << h;
        }
        if (s.flagged) out << " flagged";
        out << "\n";
    }
    if (!acyclic.empty()) {
        out << "acyclic sizes:";
        for (auto [s, n] : acyclic) out << ' ' << s << 'x' << n;
        out << "\n";
    }
    return out.str();
}

json curve_json(const legendre::LegendreCurve& E) {
    const ff::Field& F = E.field();
    json frob = nullptr;
    if (E.frobenius()) frob = {{"d_K", E.frobenius()->d_K}, {"f", E.frobenius()->f}};
    return {{"schema", kSchemaVersion},
            {"field", F.spec()},
            {"lambda", F.render(E.lambda())},
            {"j", F.render(E.j())},
            {"order", E.order()},
            {"trace", E.trace()},
            {"group", {E.structure().n1, E.structure().n2}},
            {"supersingular", E.supersingular()},
            {"frobenius", frob}};
}

}  // namespace agm::io
