#pragma once

// Weak and strong components of an aquarium and their classification.

#include "agm/aquarium.hpp"

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace agm::tax {

using aq::AdjacencyGraph;
using aq::VertexId;

/// A partition of 0..n-1 stored as CSR. Parts are numbered by their smallest
/// member and each member list is ascending.
struct Partition {
    std::vector<std::uint32_t> part_of;
    std::vector<std::uint64_t> offsets;  // size count()+1
    std::vector<VertexId> members;

    std::size_t count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const VertexId> part(std::size_t i) const {
        return {members.data() + offsets[i], members.data() + offsets[i + 1]};
    }
    std::uint64_t part_size(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
};

Partition weak_components(const AdjacencyGraph& g);
/// Iterative Tarjan.
Partition strong_components(const AdjacencyGraph& g);

enum class ComponentType { Isolated, Fish, Jellyfish, Turtle, Acyclic };
inline constexpr std::array<ComponentType, 5> kAllTypes{ComponentType::Isolated, ComponentType::Fish,
                                                        ComponentType::Jellyfish, ComponentType::Turtle,
                                                        ComponentType::Acyclic};
std::string to_string(ComponentType t);

struct Component {
    std::uint64_t index = 0;
    std::vector<VertexId> vertices;
    ComponentType type = ComponentType::Isolated;
    std::vector<std::vector<VertexId>> sccs;   // nontrivial ones only
    std::vector<std::vector<VertexId>> heads;  // jellyfish only: ordered cycles
    bool flagged = false;                      // shape not covered by the taxonomy
};

/// Coordinates of a vertex id, for the fish pattern check.
using CoordinateLookup = std::function<aq::Vertex(VertexId)>;

struct Decomposition {
    Partition weak;
    Partition strong;
};

Decomposition decompose(const AdjacencyGraph& g);

/// Throws aq::StructuralViolation when a jellyfish head is not a simple cycle.
Component classify(const AdjacencyGraph& g, const Decomposition& d, std::size_t weak_index,
                   const CoordinateLookup& coords = {}, const ff::Field* field = nullptr);

/// The nontrivial SCCs of a jellyfish as cycles starting at their smallest id.
std::vector<std::vector<VertexId>> heads_of(const Component& c, const AdjacencyGraph& g);

struct Orbit {
    std::uint64_t multiplicity;  // M_H
    std::uint64_t stabilizer;    // number of scalars fixing the head
};

Orbit orbit_multiplicity(const std::vector<VertexId>& head, const aq::Aquarium& A);

struct ComponentSummary {
    std::uint64_t index;
    ComponentType type;
    std::uint64_t size;
    VertexId first_vertex;
    std::vector<std::uint64_t> head_lengths;
    bool flagged;
};

struct Census {
    std::string field;
    std::uint64_t vertices = 0;
    std::uint64_t edges = 0;
    std::uint64_t components = 0;
    std::map<ComponentType, std::uint64_t> type_counts;
    std::map<std::uint64_t, std::uint64_t> size_histogram;
    std::map<std::uint64_t, std::uint64_t> head_length_histogram;
    std::uint64_t jellyfish = 0;  // d(F_q)
    std::vector<VertexId> turtle_vertices;
    std::vector<ComponentSummary> notable;  // every jellyfish, turtle and acyclic component
};

Census census(const aq::Aquarium& A);
Census census(const aq::Aquarium& A, const Decomposition& d);

}  // namespace agm::tax
