#include "agm/legendre.hpp"
#include "agm/taxonomy.hpp"

#include "doctest.h"

#include <random>
#include <set>

using namespace agm::tax;
using agm::aq::Aquarium;
using agm::aq::kNone;
using agm::aq::Vertex;
using agm::ff::Element;
using agm::ff::Field;

namespace {

Field field_of(std::uint64_t q) {
    auto [p, n] = *agm::ff::prime_power(q);
    return Field(p, n);
}

struct Built {
    Aquarium A;
    Decomposition d;
    std::vector<Component> comps;
};

Built build_all(std::uint64_t q) {
    Aquarium A = Aquarium::build(field_of(q));
    Decomposition d = decompose(A.graph());
    std::vector<Component> comps;
    for (std::size_t i = 0; i < d.weak.count(); ++i)
        comps.push_back(classify(A.graph(), d, i, [&A](VertexId v) { return A.vertex(v); }, &A.field()));
    return {std::move(A), std::move(d), std::move(comps)};
}

// reachability closure on a small graph
std::vector<std::set<VertexId>> reach(const agm::aq::AdjacencyGraph& g) {
    std::vector<std::set<VertexId>> out(g.n);
    for (VertexId s = 0; s < g.n; ++s) {
        std::vector<VertexId> todo{s};
        out[s].insert(s);
        while (!todo.empty()) {
            VertexId v = todo.back();
            todo.pop_back();
            for (VertexId w : g.children(v))
                if (w != kNone && out[s].insert(w).second) todo.push_back(w);
        }
    }
    return out;
}

std::set<ComponentType> types_of(const Built& b) {
    std::set<ComponentType> t;
    for (const auto& c : b.comps) t.insert(c.type);
    return t;
}

}  // namespace

TEST_CASE("partitions agree with brute-force reachability") {
    for (std::uint64_t q : {5, 7, 9, 11, 13, 25, 27}) {
        Aquarium A = Aquarium::build(field_of(q));
        const auto& g = A.graph();
        auto r = reach(g);
        Partition strong = strong_components(g);
        Partition weak = weak_components(g);
        for (VertexId u = 0; u < g.n; ++u) {
            REQUIRE(weak.part_of[u] == weak.part_of[g.children(u)[0] == kNone ? u : g.children(u)[0]]);
            for (VertexId w = 0; w < g.n; w += 3) {
                bool mutual = r[u].count(w) && r[w].count(u);
                REQUIRE(mutual == (strong.part_of[u] == strong.part_of[w]));
            }
        }
        // parts are numbered by smallest member, members ascending
        for (const Partition* p : {&strong, &weak}) {
            VertexId prev_first = 0;
            for (std::size_t i = 0; i < p->count(); ++i) {
                auto part = p->part(i);
                REQUIRE(std::is_sorted(part.begin(), part.end()));
                if (i > 0) REQUIRE(part.front() > prev_first);
                prev_first = part.front();
                for (VertexId v : part) REQUIRE(p->part_of[v] == i);
            }
        }
    }
}

TEST_CASE("A(F_13): isolated points and fish only") {
    Built b = build_all(13);
    std::uint64_t singles = 0, fish = 0;
    for (const auto& c : b.comps) {
        CHECK((c.vertices.size() == 1 || c.vertices.size() == 4));
        singles += c.type == ComponentType::Isolated;
        fish += c.type == ComponentType::Fish;
    }
    CHECK(singles + 4 * fish == 120);
    Census cs = census(b.A, b.d);
    CHECK(cs.jellyfish == 0);
    CHECK(cs.type_counts[ComponentType::Isolated] + cs.type_counts[ComponentType::Fish] == cs.components);

    const Field& F = b.A.field();
    auto comp_of = [&](long x, long y) {
        VertexId id = b.A.id_of({F.from_int(x), F.from_int(y)});
        return b.comps[b.d.weak.part_of[id]];
    };
    Component fishc = comp_of(1, 3);
    CHECK(fishc.type == ComponentType::Fish);
    std::set<Vertex> members;
    for (VertexId v : fishc.vertices) members.insert(b.A.vertex(v));
    std::set<Vertex> expected;
    for (auto [x, y] : std::vector<std::pair<long, long>>{{1, 3}, {3, 1}, {2, 4}, {2, 9}})
        expected.insert({F.from_int(x), F.from_int(y)});
    CHECK(members == expected);
    CHECK(comp_of(1, 5).type == ComponentType::Isolated);
}

TEST_CASE("the turtle of A(F_9)") {
    Built b = build_all(9);
    std::vector<const Component*> turtles;
    for (const auto& c : b.comps)
        if (c.type == ComponentType::Turtle) turtles.push_back(&c);
    REQUIRE(turtles.size() == 1);
    CHECK(turtles[0]->vertices.size() == 16);
    const Field& F = b.A.field();
    std::vector<VertexId> supersingular;
    for (VertexId id = 0; id < b.A.size(); ++id) {
        Vertex v = b.A.vertex(id);
        if (agm::legendre::is_supersingular(F, agm::legendre::lambda_of(F, v.a, v.b))) supersingular.push_back(id);
    }
    CHECK(supersingular == turtles[0]->vertices);
}

TEST_CASE("jellyfish heads in A(F_29) and A(F_125)") {
    Built b29 = build_all(29);
    bool found = false;
    for (const auto& c : b29.comps) {
        if (c.type != ComponentType::Jellyfish || c.vertices.size() != 112) continue;
        REQUIRE(c.heads.size() == 2);
        CHECK(c.heads[0].size() == 7);
        CHECK(c.heads[1].size() == 7);
        std::set<VertexId> h0(c.heads[0].begin(), c.heads[0].end());
        for (VertexId v : c.heads[1]) CHECK(h0.count(v) == 0);
        found = true;
    }
    CHECK(found);

    Built b125 = build_all(125);
    found = false;
    for (const auto& c : b125.comps)
        if (c.type == ComponentType::Jellyfish && c.vertices.size() == 48) {
            REQUIRE(c.heads.size() == 1);
            CHECK(c.heads[0].size() == 6);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("heads are ordered cycles") {
    for (std::uint64_t q : {11, 19, 29}) {
        Built b = build_all(q);
        for (const auto& c : b.comps) {
            for (const auto& h : c.heads) {
                REQUIRE(h.front() == *std::min_element(h.begin(), h.end()));
                for (std::size_t i = 0; i < h.size(); ++i) {
                    auto kids = b.A.graph().children(h[i]);
                    VertexId next = h[(i + 1) % h.size()];
                    REQUIRE((kids[0] == next || kids[1] == next));
                    // the other child leaves the head
                    VertexId other = kids[0] == next ? kids[1] : kids[0];
                    REQUIRE(other != kNone);
                    REQUIRE(std::find(h.begin(), h.end(), other) == h.end());
                }
            }
        }
    }
}

TEST_CASE("A(F_113) has an acyclic component of size 504") {
    Aquarium A = Aquarium::build(Field(113, 1));
    Census cs = census(A);
    bool found = false;
    for (const auto& s : cs.notable) found |= s.type == ComponentType::Acyclic && s.size == 504;
    CHECK(found);
    CHECK(cs.type_counts[ComponentType::Turtle] == 0);
}

TEST_CASE("q = 3 mod 4: jellyfish with length-one tentacles") {
    for (std::uint64_t q : {7, 11, 19, 23, 27}) {
        CAPTURE(q);
        Built b = build_all(q);
        const auto& g = b.A.graph();
        for (const auto& c : b.comps) {
            if (c.type == ComponentType::Isolated) continue;
            REQUIRE(c.type == ComponentType::Jellyfish);
            std::set<VertexId> head;
            for (const auto& h : c.heads) head.insert(h.begin(), h.end());
            for (VertexId v : c.vertices) {
                int head_out = 0, head_in = 0;
                for (VertexId w : g.children(v)) head_out += w != kNone && head.count(w);
                for (VertexId w : g.parents(v)) head_in += w != kNone && head.count(w);
                if (head.count(v)) {
                    // one tentacle leaves and one enters every head vertex
                    REQUIRE(head_out == 1);
                    REQUIRE(head_in == 1);
                    continue;
                }
                // tentacles have length one: pure sources or sinks touching a single head vertex
                REQUIRE((g.in_degree(v) == 0 || g.out_degree(v) == 0));
                REQUIRE(head_out + head_in == 1);
            }
        }
    }
}

TEST_CASE("q = 5 mod 8: isolated points, fish and jellyfish only") {
    for (std::uint64_t q : {13, 29, 37, 53, 61, 125}) {
        CAPTURE(q);
        Built b = build_all(q);
        for (ComponentType t : types_of(b))
            CHECK((t == ComponentType::Isolated || t == ComponentType::Fish || t == ComponentType::Jellyfish));
    }
}

TEST_CASE("turtles exist exactly over square fields and carry the supersingular vertices") {
    for (std::uint64_t q : {9, 25, 49, 81, 121, 169}) {
        CAPTURE(q);
        Built b = build_all(q);
        CHECK(types_of(b).count(ComponentType::Turtle) == 1);
        if (q > 81) continue;
        const Field& F = b.A.field();
        std::set<VertexId> turtle, supersingular;
        for (const auto& c : b.comps)
            if (c.type == ComponentType::Turtle) turtle.insert(c.vertices.begin(), c.vertices.end());
        std::map<Element, bool> ss;
        for (VertexId id = 0; id < b.A.size(); ++id) {
            Vertex v = b.A.vertex(id);
            Element l = agm::legendre::lambda_of(F, v.a, v.b);
            auto it = ss.find(l);
            if (it == ss.end()) it = ss.emplace(l, agm::legendre::is_supersingular(F, l)).first;
            if (it->second) supersingular.insert(id);
        }
        CHECK(turtle == supersingular);
    }
    for (std::uint64_t q = 5; q <= 113; q += 2) {
        auto pp = agm::ff::prime_power(q);
        if (!pp || pp->second % 2 == 0) continue;
        CAPTURE(q);
        Census cs = census(Aquarium::build(field_of(q)));
        CHECK(cs.type_counts[ComponentType::Turtle] == 0);
        CHECK(cs.turtle_vertices.empty());
    }
}

TEST_CASE("every edge sits in a fish configuration") {
    for (std::uint64_t q = 5; q <= 200; q += 2) {
        if (!agm::ff::prime_power(q)) continue;
        Aquarium A = Aquarium::build(field_of(q));
        const auto& g = A.graph();
        bool ok = true;
        for (VertexId u = 0; u < g.n; ++u) {
            if (g.out_degree(u) == 0) continue;
            Vertex v = A.vertex(u);
            VertexId swapped = A.id_of({v.b, v.a});
            auto k1 = g.children(u), k2 = g.children(swapped);
            std::sort(k1.begin(), k1.end());
            std::sort(k2.begin(), k2.end());
            ok &= k1 == k2;
        }
        CAPTURE(q);
        CHECK(ok);
    }
}

TEST_CASE("fish curves over q = 5 mod 8 have 2-adic valuation 4") {
    for (std::uint64_t q : {13, 29, 37, 53}) {
        Built b = build_all(q);
        const Field& F = b.A.field();
        for (const auto& c : b.comps) {
            if (c.type != ComponentType::Fish) continue;
            for (VertexId id : c.vertices) {
                Vertex v = b.A.vertex(id);
                std::uint64_t n = agm::legendre::point_count(F, agm::legendre::lambda_of(F, v.a, v.b));
                REQUIRE(__builtin_ctzll(n) == 4);
            }
        }
    }
}

TEST_CASE("orbit multiplicity of heads") {
    Built b = build_all(29);
    const Field& F = b.A.field();
    bool saw = false;
    for (const auto& c : b.comps) {
        for (const auto& h : c.heads) {
            Orbit o = orbit_multiplicity(h, b.A);
            // oracle: distinct scaled copies of the head vertex set
            std::set<std::vector<VertexId>> images;
            for (Element gamma : F.elements()) {
                if (gamma == F.zero()) continue;
                std::vector<VertexId> img;
                for (VertexId v : h) img.push_back(b.A.id_of(agm::aq::scalar_act(F, gamma, b.A.vertex(v))));
                std::sort(img.begin(), img.end());
                images.insert(img);
            }
            CHECK(o.multiplicity == images.size());
            CHECK(o.multiplicity * o.stabilizer == 28);
            if (h.size() == 7) {
                CHECK(o.multiplicity == 4);
                saw = true;
            }
        }
    }
    CHECK(saw);
}

TEST_CASE("census bookkeeping") {
    for (std::uint64_t q : {11, 25, 29, 49}) {
        Census cs = census(Aquarium::build(field_of(q)));
        std::uint64_t total = 0, sizes = 0;
        for (auto& [t, n] : cs.type_counts) total += n;
        for (auto& [s, n] : cs.size_histogram) sizes += s * n;
        CHECK(total == cs.components);
        CHECK(sizes == agm::aq::vertex_count(q));
        CHECK(cs.jellyfish == cs.type_counts[ComponentType::Jellyfish]);
        for (const auto& s : cs.notable) CHECK(s.size >= 4);
    }
    Census c29 = census(Aquarium::build(Field(29, 1)));
    CHECK(c29.jellyfish >= 1);
}

TEST_CASE("a head that is not a simple cycle aborts classification") {
    // 0 -> {1, 2}, 1 -> {0, 2}, 2 -> {0, 3}: vertex 0 has two successors inside its SCC
    agm::aq::AdjacencyGraph g;
    g.n = 4;
    g.fwd = {1, 2, 0, 2, 0, 3, kNone, kNone};
    g.bwd = {1, 2, 0, kNone, 0, 1, 2, kNone};
    REQUIRE(g.transpose_consistent());
    Decomposition d = decompose(g);
    REQUIRE(d.weak.count() == 1);
    CHECK_THROWS_AS(classify(g, d, 0), agm::aq::StructuralViolation);
}
