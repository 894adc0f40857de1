#include "agm/aquarium.hpp"

#include <algorithm>
#include <deque>
#include <thread>
#include <unordered_map>

namespace agm::aq {

bool is_vertex(const Field& F, Element a, Element b) {
    return F.contains(a) && F.contains(b) && a != F.zero() && b != F.zero() && a != b && a != F.neg(b);
}

Vertex make_vertex(const Field& F, Element a, Element b) {
    if (!is_vertex(F, a, b)) throw PreconditionError("not a vertex: (" + F.render(a) + ", " + F.render(b) + ")");
    return {a, b};
}

std::vector<Vertex> agm_children(const Field& F, const Vertex& v) {
    make_vertex(F, v.a, v.b);
    auto r = F.sqrt(F.mul(v.a, v.b));
    if (!r) return {};
    Element a2 = F.div(F.add(v.a, v.b), F.from_int(2));
    return {{a2, *r}, {a2, F.neg(*r)}};
}

std::vector<Vertex> agm_parents(const Field& F, const Vertex& v) {
    make_vertex(F, v.a, v.b);
    auto s = F.sqrt(F.sub(F.mul(v.a, v.a), F.mul(v.b, v.b)));
    if (!s) return {};
    Element plus = F.add(v.a, *s), minus = F.sub(v.a, *s);
    return {{plus, minus}, {minus, plus}};
}

Vertex scalar_act(const Field& F, Element gamma, const Vertex& v) {
    if (!F.contains(gamma) || gamma == F.zero()) throw PreconditionError("scalar must be a nonzero field element");
    return make_vertex(F, F.mul(gamma, v.a), F.mul(gamma, v.b));
}

Vertex lift(const Field& src, const Vertex& v, const Field& dst) {
    make_vertex(src, v.a, v.b);
    return {ff::embed(src, dst, v.a), ff::embed(src, dst, v.b)};
}

VertexIndex::VertexIndex(const Field& F) : F_(F), q_(F.order()), size_(vertex_count(F.order())) {}

VertexId VertexIndex::raw_id(ff::Code a, ff::Code b) const noexcept {
    ff::Code na = F_.raw_neg(a);
    std::uint64_t rank = (b - 1) - (b > a) - (b > na);
    return static_cast<VertexId>((a - 1) * (q_ - 3) + rank);
}

std::pair<ff::Code, ff::Code> VertexIndex::raw_vertex(VertexId id) const noexcept {
    ff::Code a = id / (q_ - 3) + 1;
    ff::Code b = id % (q_ - 3) + 1;
    ff::Code na = F_.raw_neg(a);
    ff::Code lo = std::min(a, na), hi = std::max(a, na);
    if (b >= lo) ++b;
    if (b >= hi) ++b;
    return {a, b};
}

VertexId VertexIndex::id_of(const Vertex& v) const {
    if (!is_vertex(F_, v.a, v.b)) throw PreconditionError("not a vertex of this field");
    return raw_id(v.a.code, v.b.code);
}

Vertex VertexIndex::vertex_at(VertexId id) const {
    if (id >= size_) throw PreconditionError("vertex id out of range");
    auto [a, b] = raw_vertex(id);
    return {F_.from_code(a), F_.from_code(b)};
}

std::uint64_t AdjacencyGraph::edge_count() const {
    return static_cast<std::uint64_t>(std::count_if(fwd.begin(), fwd.end(), [](VertexId x) { return x != kNone; }));
}

bool AdjacencyGraph::transpose_consistent() const {
    // Every parent entry must be backed by a child entry; with equal edge
    // counts and no repeated slots this makes bwd the exact transpose.
    std::uint64_t back_edges = 0;
    for (std::uint64_t v = 0; v < n; ++v) {
        VertexId p0 = bwd[2 * v], p1 = bwd[2 * v + 1];
        if (p0 != kNone && p0 == p1) return false;
        if (fwd[2 * v] != kNone && fwd[2 * v] == fwd[2 * v + 1]) return false;
        for (VertexId p : {p0, p1}) {
            if (p == kNone) continue;
            ++back_edges;
            if (p >= n || (fwd[2 * p] != v && fwd[2 * p + 1] != v)) return false;
        }
    }
    return back_edges == edge_count();
}

Aquarium::Aquarium(Field F, VertexIndex index, AdjacencyGraph g)
    : F_(std::move(F)), index_(std::move(index)), g_(std::move(g)) {}

Aquarium Aquarium::build(const Field& F, const BuildOptions& opts) {
    const std::uint64_t q = F.order();
    if (q < 5) throw PreconditionError("V(F_3) is empty; need q >= 5");
    if (q > opts.max_q) throw BudgetError("q = " + std::to_string(q) + " exceeds max_q = " + std::to_string(opts.max_q));
    const std::uint64_t n = vertex_count(q);
    if (n >= kNone) throw BudgetError("vertex count does not fit 32-bit ids");
    if (n > opts.memory_cap / kBytesPerVertex)
        throw BudgetError("aquarium over q = " + std::to_string(q) + " needs about " +
                          std::to_string(n * kBytesPerVertex >> 20) + " MiB, cap is " +
                          std::to_string(opts.memory_cap >> 20) + " MiB");

    VertexIndex index(F);
    AdjacencyGraph g;
    g.n = n;
    g.fwd.assign(2 * n, kNone);
    g.bwd.assign(2 * n, kNone);

    auto work = [&](ff::Code a_begin, ff::Code a_end) {
        std::uint64_t id = (a_begin - 1) * (q - 3);
        for (ff::Code a = a_begin; a < a_end; ++a) {
            const ff::Code na = F.raw_neg(a);
            const ff::Code a2 = F.raw_mul(a, a);
            for (ff::Code b = 1; b < q; ++b) {
                if (b == a || b == na) continue;
                ff::Code r = F.raw_sqrt(F.raw_mul(a, b));
                if (r != ff::Field::kNoRoot) {
                    ff::Code h = F.raw_half(F.raw_add(a, b));
                    g.fwd[2 * id] = index.raw_id(h, r);
                    g.fwd[2 * id + 1] = index.raw_id(h, F.raw_neg(r));
                }
                ff::Code s = F.raw_sqrt(F.raw_sub(a2, F.raw_mul(b, b)));
                if (s != ff::Field::kNoRoot) {
                    ff::Code plus = F.raw_add(a, s), minus = F.raw_sub(a, s);
                    g.bwd[2 * id] = index.raw_id(plus, minus);
                    g.bwd[2 * id + 1] = index.raw_id(minus, plus);
                }
                ++id;
            }
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, q - 1));
    if (threads <= 1) {
        work(1, q);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t step = (q - 1 + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            ff::Code lo = 1 + t * step, hi = std::min<ff::Code>(q, lo + step);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    if (!g.transpose_consistent())
        throw StructuralViolation("parent lists are not the transpose of the child lists over " + F.spec());
    return Aquarium(F, std::move(index), std::move(g));
}

void Aquarium::perturb_edge_for_testing(VertexId v) {
    for (std::uint64_t k = 0; k < g_.n; ++k) {
        auto u = static_cast<VertexId>((v + k) % g_.n);
        if (g_.fwd[2 * u] == kNone) continue;
        VertexId target = g_.fwd[2 * u];
        do {
            target = static_cast<VertexId>((target + 1) % g_.n);
        } while (target == g_.fwd[2 * u + 1] || target == u);
        g_.fwd[2 * u] = target;
        return;
    }
}

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<ff::Code, ff::Code>& k) const noexcept {
        return std::hash<std::uint64_t>()(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
    }
};

template <class Visit>
void for_each_neighbour(const Field& F, const Vertex& v, Visit&& visit) {
    for (const Vertex& w : agm_children(F, v)) visit(w);
    for (const Vertex& w : agm_parents(F, v)) visit(w);
}

}  // namespace

LocalComponent explore_component(const Field& F, const Vertex& start, std::uint64_t cap) {
    make_vertex(F, start.a, start.b);
    std::unordered_map<std::pair<ff::Code, ff::Code>, std::uint32_t, PairHash> seen;
    std::vector<Vertex> order{start};
    seen.emplace(std::pair{start.a.code, start.b.code}, 0);
    LocalComponent out;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const Vertex current = order[head];
        for_each_neighbour(F, current, [&](const Vertex& w) {
            if (!out.complete) return;
            std::pair key{w.a.code, w.b.code};
            if (seen.count(key)) return;
            if (order.size() >= cap) {
                out.complete = false;
                return;
            }
            seen.emplace(key, 0);
            order.push_back(w);
        });
        if (!out.complete) break;
    }
    std::sort(order.begin(), order.end());
    for (std::uint32_t i = 0; i < order.size(); ++i) seen[{order[i].a.code, order[i].b.code}] = i;
    out.graph.n = order.size();
    out.graph.fwd.assign(2 * order.size(), kNone);
    out.graph.bwd.assign(2 * order.size(), kNone);
    auto local = [&](const Vertex& w) -> VertexId {
        auto it = seen.find({w.a.code, w.b.code});
        return it == seen.end() ? kNone : it->second;
    };
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        auto kids = agm_children(F, order[i]);
        for (std::size_t k = 0; k < kids.size(); ++k) out.graph.fwd[2 * i + k] = local(kids[k]);
        auto pars = agm_parents(F, order[i]);
        for (std::size_t k = 0; k < pars.size(); ++k) out.graph.bwd[2 * i + k] = local(pars[k]);
    }
    out.vertices = std::move(order);
    return out;
}

std::vector<Vertex> neighbourhood(const Field& F, const Vertex& start, unsigned depth) {
    make_vertex(F, start.a, start.b);
    std::unordered_map<std::pair<ff::Code, ff::Code>, unsigned, PairHash> dist;
    std::deque<Vertex> queue{start};
    dist[{start.a.code, start.b.code}] = 0;
    std::vector<Vertex> out{start};
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        unsigned d = dist[{v.a.code, v.b.code}];
        if (d == depth) continue;
        for_each_neighbour(F, v, [&](const Vertex& w) {
            if (dist.emplace(std::pair{w.a.code, w.b.code}, d + 1).second) {
                queue.push_back(w);
                out.push_back(w);
            }
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace agm::aq
