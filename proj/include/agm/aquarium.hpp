#pragma once

// The AGM digraph on V(F_q) = {(a,b) : a, b != 0, a != +-b}.

#include "agm/ff.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <vector>

namespace agm::aq {

using ff::Element;
using ff::Field;

using VertexId = std::uint32_t;
inline constexpr VertexId kNone = ~VertexId{0};

struct Vertex {
    Element a;
    Element b;
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

bool is_vertex(const Field& F, Element a, Element b);
Vertex make_vertex(const Field& F, Element a, Element b);  // throws PreconditionError

/// Children ((a+b)/2, +-sqrt(ab)), canonical root first; empty when ab is a non-square.
std::vector<Vertex> agm_children(const Field& F, const Vertex& v);
/// Parents (a+s, a-s), (a-s, a+s) with s the canonical root of a^2-b^2.
std::vector<Vertex> agm_parents(const Field& F, const Vertex& v);
Vertex scalar_act(const Field& F, Element gamma, const Vertex& v);
Vertex lift(const Field& src, const Vertex& v, const Field& dst);

/// Dense ids in canonical (a, b) order.
class VertexIndex {
  public:
    explicit VertexIndex(const Field& F);

    std::uint64_t size() const noexcept { return size_; }
    VertexId id_of(const Vertex& v) const;  // throws for non-vertices
    Vertex vertex_at(VertexId id) const;
    VertexId raw_id(ff::Code a, ff::Code b) const noexcept;
    std::pair<ff::Code, ff::Code> raw_vertex(VertexId id) const noexcept;

  private:
    Field F_;
    std::uint64_t q_;
    std::uint64_t size_;
};

inline std::uint64_t vertex_count(std::uint64_t q) { return (q - 1) * (q - 3); }

/// All vertices of V(F_q) in id order.
inline auto vertices(const Field& F) {
    auto index = std::make_shared<VertexIndex>(F);
    return std::views::iota(std::uint64_t{0}, index->size()) |
           std::views::transform([index](std::uint64_t id) { return index->vertex_at(static_cast<VertexId>(id)); });
}

/// Out- and in-neighbours in flat arrays of width 2, kNone for absent slots.
struct AdjacencyGraph {
    std::uint64_t n = 0;
    std::vector<VertexId> fwd;
    std::vector<VertexId> bwd;

    std::array<VertexId, 2> children(VertexId v) const { return {fwd[2 * v], fwd[2 * v + 1]}; }
    std::array<VertexId, 2> parents(VertexId v) const { return {bwd[2 * v], bwd[2 * v + 1]}; }
    int out_degree(VertexId v) const { return (fwd[2 * v] != kNone) + (fwd[2 * v + 1] != kNone); }
    int in_degree(VertexId v) const { return (bwd[2 * v] != kNone) + (bwd[2 * v + 1] != kNone); }
    std::uint64_t edge_count() const;
    /// Whether bwd is exactly the transpose of fwd.
    bool transpose_consistent() const;
};

struct BuildOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    std::uint64_t memory_cap = std::uint64_t{4} << 30;
    std::uint64_t max_q = 1'000'000;
};

/// Bytes per vertex budgeted for a build followed by a census.
inline constexpr std::uint64_t kBytesPerVertex = 48;

class StructuralViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Aquarium {
  public:
    /// Throws BudgetError when the graph would not fit the configured caps and
    /// StructuralViolation when the parent lists disagree with the child lists.
    static Aquarium build(const Field& F, const BuildOptions& opts = {});

    const Field& field() const noexcept { return F_; }
    const VertexIndex& index() const noexcept { return index_; }
    const AdjacencyGraph& graph() const noexcept { return g_; }
    std::uint64_t size() const noexcept { return g_.n; }

    Vertex vertex(VertexId id) const { return index_.vertex_at(id); }
    VertexId id_of(const Vertex& v) const { return index_.id_of(v); }

    /// Redirects the first child edge of v to another vertex, leaving the
    /// parent lists untouched. Only for exercising failure paths.
    void perturb_edge_for_testing(VertexId v);

  private:
    Aquarium(Field F, VertexIndex index, AdjacencyGraph g);

    Field F_;
    VertexIndex index_;
    AdjacencyGraph g_;
};

/// A component explored on the fly by undirected search, for fields whose
/// full aquarium is too large to build.
struct LocalComponent {
    std::vector<Vertex> vertices;  // sorted
    AdjacencyGraph graph;          // over positions in `vertices`
    bool complete = true;          // false when the search hit the cap
};

LocalComponent explore_component(const Field& F, const Vertex& start, std::uint64_t cap);

/// Vertices reachable from start by at most `depth` undirected steps.
std::vector<Vertex> neighbourhood(const Field& F, const Vertex& start, unsigned depth);

}  // namespace agm::aq
