#include "agm/taxonomy.hpp"

#include <algorithm>
#include <numeric>

namespace agm::tax {

namespace {

constexpr std::uint32_t kUnset = ~std::uint32_t{0};

// Renumbers arbitrary labels so parts are ordered by smallest member, then
// lays the partition out as CSR.
Partition from_labels(std::vector<std::uint32_t> labels) {
    const std::size_t n = labels.size();
    std::vector<std::uint32_t> renamed(n, kUnset);
    std::uint32_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        std::uint32_t& r = renamed[labels[v]];
        if (r == kUnset) r = next++;
        labels[v] = r;
    }
    renamed.clear();
    renamed.shrink_to_fit();
    Partition p;
    p.offsets.assign(next + 1, 0);
    for (std::size_t v = 0; v < n; ++v) ++p.offsets[labels[v] + 1];
    std::partial_sum(p.offsets.begin(), p.offsets.end(), p.offsets.begin());
    p.members.resize(n);
    std::vector<std::uint64_t> cursor(p.offsets.begin(), p.offsets.end() - 1);
    for (std::size_t v = 0; v < n; ++v) p.members[cursor[labels[v]]++] = static_cast<VertexId>(v);
    p.part_of = std::move(labels);
    return p;
}

}  // namespace

Partition weak_components(const AdjacencyGraph& g) {
    std::vector<std::uint32_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::uint64_t v = 0; v < g.n; ++v) {
        for (VertexId w : g.children(static_cast<VertexId>(v))) {
            if (w == aq::kNone) continue;
            std::uint32_t a = find(static_cast<std::uint32_t>(v)), b = find(w);
            if (a == b) continue;
            if (a < b) std::swap(a, b);
            parent[a] = b;
        }
    }
    for (std::uint64_t v = 0; v < g.n; ++v) parent[v] = find(static_cast<std::uint32_t>(v));
    return from_labels(std::move(parent));
}

Partition strong_components(const AdjacencyGraph& g) {
    const std::uint64_t n = g.n;
    std::vector<std::uint32_t> index(n, kUnset), low(n, 0), label(n, kUnset);
    std::vector<VertexId> stack;
    struct Frame {
        VertexId v;
        int next;
    };
    std::vector<Frame> frames;
    std::uint32_t counter = 0, scc = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
        if (index[s] != kUnset) continue;
        auto open = [&](VertexId v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            frames.push_back({v, 0});
        };
        open(static_cast<VertexId>(s));
        while (!frames.empty()) {
            Frame& f = frames.back();
            const VertexId v = f.v;
            if (f.next < 2) {
                VertexId w = g.fwd[2 * static_cast<std::uint64_t>(v) + f.next++];
                if (w == aq::kNone) continue;
                if (index[w] == kUnset)
                    open(w);
                else if (label[w] == kUnset)
                    low[v] = std::min(low[v], index[w]);
                continue;
            }
            frames.pop_back();
            if (low[v] == index[v]) {
                VertexId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    label[w] = scc;
                } while (w != v);
                ++scc;
            }
            if (!frames.empty()) {
                VertexId u = frames.back().v;
                low[u] = std::min(low[u], low[v]);
            }
        }
    }
    index.clear();
    index.shrink_to_fit();
    low.clear();
    low.shrink_to_fit();
    return from_labels(std::move(label));
}

std::string to_string(ComponentType t) {
    switch (t) {
        case ComponentType::Isolated:
            return "isolated";
        case ComponentType::Fish:
            return "fish";
        case ComponentType::Jellyfish:
            return "jellyfish";
        case ComponentType::Turtle:
            return "turtle";
        case ComponentType::Acyclic:
            return "acyclic";
    }
    return "unknown";
}

Decomposition decompose(const AdjacencyGraph& g) { return {weak_components(g), strong_components(g)}; }

namespace {

bool is_fish(const AdjacencyGraph& g, std::span<const VertexId> members, const CoordinateLookup& coords,
             const ff::Field* field) {
    if (members.size() != 4) return false;
    std::vector<VertexId> sources, sinks;
    for (VertexId v : members) {
        if (g.in_degree(v) == 0 && g.out_degree(v) == 2)
            sources.push_back(v);
        else if (g.in_degree(v) == 2 && g.out_degree(v) == 0)
            sinks.push_back(v);
    }
    if (sources.size() != 2 || sinks.size() != 2) return false;
    for (VertexId s : sources) {
        auto c = g.children(s);
        std::sort(c.begin(), c.end());
        if (c[0] != sinks[0] || c[1] != sinks[1]) return false;
    }
    if (coords && field) {
        aq::Vertex p = coords(sources[0]), p2 = coords(sources[1]);
        aq::Vertex c = coords(sinks[0]), c2 = coords(sinks[1]);
        if (!(p.a == p2.b && p.b == p2.a)) return false;
        if (!(c.a == c2.a && c.b == field->neg(c2.b))) return false;
    }
    return true;
}

std::string describe(VertexId v, const CoordinateLookup& coords, const ff::Field* field) {
    std::string s = "vertex " + std::to_string(v);
    if (coords && field) {
        aq::Vertex x = coords(v);
        s += " (" + field->render(x.a) + ", " + field->render(x.b) + ")";
    }
    return s;
}

}  // namespace

Component classify(const AdjacencyGraph& g, const Decomposition& d, std::size_t weak_index,
                   const CoordinateLookup& coords, const ff::Field* field) {
    Component c;
    c.index = weak_index;
    auto members = d.weak.part(weak_index);
    c.vertices.assign(members.begin(), members.end());
    if (members.size() == 1) {
        c.type = ComponentType::Isolated;
        return c;
    }
    std::vector<std::uint32_t> nontrivial;
    for (VertexId v : members) {
        std::uint32_t s = d.strong.part_of[v];
        if (d.strong.part_size(s) > 1) nontrivial.push_back(s);
    }
    std::sort(nontrivial.begin(), nontrivial.end());
    nontrivial.erase(std::unique(nontrivial.begin(), nontrivial.end()), nontrivial.end());
    for (std::uint32_t s : nontrivial) {
        auto part = d.strong.part(s);
        c.sccs.emplace_back(part.begin(), part.end());
    }

    if (nontrivial.empty()) {
        if (is_fish(g, members, coords, field)) {
            c.type = ComponentType::Fish;
        } else {
            c.type = ComponentType::Acyclic;
            c.flagged = members.size() <= 4 || members.size() % 4 != 0;
        }
        return c;
    }
    if (c.sccs.size() == 1 && c.sccs[0].size() == members.size()) {
        c.type = ComponentType::Turtle;
        return c;
    }
    c.type = ComponentType::Jellyfish;
    for (const auto& scc : c.sccs) {
        for (VertexId v : scc) {
            int out = 0, in = 0;
            for (VertexId w : g.children(v))
                if (w != aq::kNone && d.strong.part_of[w] == d.strong.part_of[v]) ++out;
            for (VertexId w : g.parents(v))
                if (w != aq::kNone && d.strong.part_of[w] == d.strong.part_of[v]) ++in;
            if (out != 1 || in != 1)
                throw aq::StructuralViolation("jellyfish head is not a simple cycle at " + describe(v, coords, field) +
                                              ": " + std::to_string(out) + " successors and " + std::to_string(in) +
                                              " predecessors inside its strongly connected component");
        }
    }
    c.heads = heads_of(c, g);
    return c;
}

std::vector<std::vector<VertexId>> heads_of(const Component& c, const AdjacencyGraph& g) {
    std::vector<std::vector<VertexId>> out;
    for (const auto& scc : c.sccs) {
        auto inside = [&](VertexId w) { return w != aq::kNone && std::binary_search(scc.begin(), scc.end(), w); };
        std::vector<VertexId> cycle{scc.front()};
        for (;;) {
            auto kids = g.children(cycle.back());
            VertexId next = inside(kids[0]) ? kids[0] : kids[1];
            if (!inside(next))
                throw aq::StructuralViolation("head vertex " + std::to_string(cycle.back()) + " has no successor in its head");
            if (next == cycle.front()) break;
            cycle.push_back(next);
            if (cycle.size() > scc.size())
                throw aq::StructuralViolation("head walk from " + std::to_string(scc.front()) + " does not close");
        }
        if (cycle.size() != scc.size())
            throw aq::StructuralViolation("head containing " + std::to_string(scc.front()) + " is not a single cycle");
        out.push_back(std::move(cycle));
    }
    return out;
}

Orbit orbit_multiplicity(const std::vector<VertexId>& head, const aq::Aquarium& A) {
    const ff::Field& F = A.field();
    std::vector<VertexId> sorted = head;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<ff::Code, ff::Code>> coords;
    for (VertexId v : sorted) coords.push_back(A.index().raw_vertex(v));
    std::uint64_t stabilizer = 0;
    for (ff::Code gamma = 1; gamma < F.order(); ++gamma) {
        bool fixes = true;
        for (auto [a, b] : coords) {
            VertexId w = A.index().raw_id(F.raw_mul(gamma, a), F.raw_mul(gamma, b));
            if (!std::binary_search(sorted.begin(), sorted.end(), w)) {
                fixes = false;
                break;
            }
        }
        stabilizer += fixes;
    }
    return {(F.order() - 1) / stabilizer, stabilizer};
}

Census census(const aq::Aquarium& A) { return census(A, decompose(A.graph())); }

Census census(const aq::Aquarium& A, const Decomposition& d) {
    const AdjacencyGraph& g = A.graph();
    Census out;
    out.field = A.field().spec();
    out.vertices = g.n;
    out.edges = g.edge_count();
    out.components = d.weak.count();
    for (ComponentType t : kAllTypes) out.type_counts[t] = 0;
    CoordinateLookup coords = [&A](VertexId v) { return A.vertex(v); };
    for (std::size_t i = 0; i < d.weak.count(); ++i) {
        const std::uint64_t size = d.weak.part_size(i);
        ++out.size_histogram[size];
        if (size == 1) {
            ++out.type_counts[ComponentType::Isolated];
            continue;
        }
        Component c = classify(g, d, i, coords, &A.field());
        ++out.type_counts[c.type];
        if (c.type == ComponentType::Fish) continue;
        ComponentSummary s{i, c.type, size, c.vertices.front(), {}, c.flagged};
        if (c.type == ComponentType::Jellyfish) {
            ++out.jellyfish;
            for (const auto& h : c.heads) {
                s.head_lengths.push_back(h.size());
                ++out.head_length_histogram[h.size()];
            }
        }
        if (c.type == ComponentType::Turtle)
            out.turtle_vertices.insert(out.turtle_vertices.end(), c.vertices.begin(), c.vertices.end());
        out.notable.push_back(std::move(s));
    }
    std::sort(out.turtle_vertices.begin(), out.turtle_vertices.end());
    return out;
}

}  // namespace agm::tax
