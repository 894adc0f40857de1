#include "agm/legendre.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace agm::legendre {

namespace {

void require_lambda(const Field& F, Element lambda) {
    if (!F.contains(lambda)) throw PreconditionError("lambda does not belong to the field");
    if (lambda == F.zero() || lambda == F.one()) throw PreconditionError("lambda must not be 0 or 1");
}

void require_budget(const Field& F, std::uint64_t budget) {
    if (F.order() > budget)
        throw BudgetError("point enumeration over q = " + std::to_string(F.order()) + " exceeds budget " +
                          std::to_string(budget));
}

}  // namespace

Element lambda_of(const Field& F, Element a, Element b) {
    if (!F.contains(a) || !F.contains(b)) throw PreconditionError("vertex coordinates not in field");
    if (a == F.zero() || b == F.zero() || a == b || a == F.neg(b))
        throw PreconditionError("not a vertex: need a, b nonzero and a != +-b");
    return F.div(F.mul(b, b), F.mul(a, a));
}

Element j_invariant(const Field& F, Element lambda) {
    require_lambda(F, lambda);
    Element l2 = F.mul(lambda, lambda);
    Element t = F.add(F.sub(l2, lambda), F.one());
    Element num = F.mul(F.from_int(256), F.mul(t, F.mul(t, t)));
    Element lm1 = F.sub(lambda, F.one());
    return F.div(num, F.mul(l2, F.mul(lm1, lm1)));
}

std::vector<Element> lambda_fiber(const Field& F, Element lambda) {
    require_lambda(F, lambda);
    Element one_minus = F.sub(F.one(), lambda);
    Element minus_one = F.sub(lambda, F.one());
    std::vector<Element> out{lambda,
                             F.inv(lambda),
                             one_minus,
                             F.inv(one_minus),
                             F.div(lambda, minus_one),
                             F.div(minus_one, lambda)};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Element rhs(const Field& F, Element lambda, Element x) {
    return F.mul(x, F.mul(F.sub(x, F.one()), F.sub(x, lambda)));
}

bool on_curve(const Field& F, Element lambda, const CurvePoint& P) {
    if (P.infinity) return true;
    if (!F.contains(P.x) || !F.contains(P.y)) return false;
    return F.mul(P.y, P.y) == rhs(F, lambda, P.x);
}

std::uint64_t point_count(const Field& F, Element lambda, std::uint64_t budget) {
    require_lambda(F, lambda);
    require_budget(F, budget);
    const ff::Code one = F.one().code;
    const ff::Code l = lambda.code;
    std::uint64_t count = 1;
    for (ff::Code x = 0; x < F.order(); ++x) {
        ff::Code v = F.raw_mul(x, F.raw_mul(F.raw_sub(x, one), F.raw_sub(x, l)));
        if (v == 0)
            count += 1;
        else if (F.raw_is_square(v))
            count += 2;
    }
    return count;
}

std::int64_t trace(const Field& F, Element lambda, std::uint64_t budget) {
    return static_cast<std::int64_t>(F.order() + 1) - static_cast<std::int64_t>(point_count(F, lambda, budget));
}

bool is_supersingular(const Field& F, Element lambda, std::uint64_t budget) {
    return trace(F, lambda, budget) % static_cast<std::int64_t>(F.characteristic()) == 0;
}

std::vector<CurvePoint> all_points(const Field& F, Element lambda, std::uint64_t budget) {
    require_lambda(F, lambda);
    require_budget(F, budget);
    std::vector<CurvePoint> out{CurvePoint::at_infinity()};
    for (Element x : F.elements()) {
        Element v = rhs(F, lambda, x);
        if (v == F.zero()) {
            out.push_back(CurvePoint::affine(x, v));
        } else if (auto r = F.sqrt(v)) {
            out.push_back(CurvePoint::affine(x, *r));
            out.push_back(CurvePoint::affine(x, F.neg(*r)));
        }
    }
    return out;
}

CurvePoint ec_neg(const Field& F, const CurvePoint& P) {
    if (P.infinity) return P;
    return CurvePoint::affine(P.x, F.neg(P.y));
}

CurvePoint ec_add(const Field& F, Element lambda, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    // y^2 = x^3 + a2 x^2 + a4 x with a2 = -(1 + lambda), a4 = lambda
    Element a2 = F.neg(F.add(F.one(), lambda));
    Element m;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == F.zero()) return CurvePoint::at_infinity();
        Element num = F.add(F.add(F.mul(F.from_int(3), F.mul(P.x, P.x)), F.mul(F.from_int(2), F.mul(a2, P.x))), lambda);
        m = F.div(num, F.add(P.y, P.y));
    } else {
        m = F.div(F.sub(Q.y, P.y), F.sub(Q.x, P.x));
    }
    Element x3 = F.sub(F.sub(F.sub(F.mul(m, m), a2), P.x), Q.x);
    Element y3 = F.sub(F.mul(m, F.sub(P.x, x3)), P.y);
    return CurvePoint::affine(x3, y3);
}

CurvePoint ec_mul(const Field& F, Element lambda, const CurvePoint& P, std::int64_t k) {
    CurvePoint base = k < 0 ? ec_neg(F, P) : P;
    auto e = static_cast<std::uint64_t>(k < 0 ? -k : k);
    CurvePoint acc = CurvePoint::at_infinity();
    while (e) {
        if (e & 1) acc = ec_add(F, lambda, acc, base);
        base = ec_add(F, lambda, base, base);
        e >>= 1;
    }
    return acc;
}

Element doubling_x(const Field& F, Element lambda, const CurvePoint& P) {
    if (P.infinity || P.y == F.zero()) throw PreconditionError("doubling formula needs an affine point with y != 0");
    Element x0 = P.x;
    Element one_plus = F.add(F.one(), lambda);
    Element num = F.add(F.sub(F.mul(F.from_int(3), F.mul(x0, x0)), F.mul(F.from_int(2), F.mul(one_plus, x0))), lambda);
    Element m = F.div(num, F.add(P.y, P.y));
    return F.sub(F.add(F.mul(m, m), one_plus), F.add(x0, x0));
}

std::uint64_t point_order(const Field& F, Element lambda, const CurvePoint& P, std::uint64_t group_order) {
    std::uint64_t order = group_order;
    for (std::uint64_t l : ff::prime_factors(group_order)) {
        while (order % l == 0 && ec_mul(F, lambda, P, static_cast<std::int64_t>(order / l)).infinity) order /= l;
    }
    return order;
}

bool two_descent(const Field& F, Element lambda, const CurvePoint& P) {
    if (P.infinity) throw PreconditionError("two_descent needs an affine point");
    return F.is_square(P.x) && F.is_square(F.sub(P.x, F.one())) && F.is_square(F.sub(P.x, lambda));
}

GroupStructure group_structure(const Field& F, Element lambda, std::uint64_t budget, std::uint64_t seed) {
    const std::uint64_t N = point_count(F, lambda, budget);
    std::uint64_t e = 1;
    if (F.order() <= kFullEnumerationLimit) {
        for (const CurvePoint& P : all_points(F, lambda, budget)) e = std::lcm(e, point_order(F, lambda, P, N));
        return {N / e, e};
    }
    // The exponent is final once it is consistent (n1 | n2, n1 | q-1) and has
    // survived a run of further random points; n1 = 2 needs no confirmation.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<ff::Code> pick(0, F.order() - 1);
    int unchanged = 0;
    while (e * 2 != N) {
        Element x = F.from_code(pick(rng));
        auto r = F.sqrt(rhs(F, lambda, x));
        if (!r) continue;
        CurvePoint P = CurvePoint::affine(x, (rng() & 1) ? *r : F.neg(*r));
        std::uint64_t next = std::lcm(e, point_order(F, lambda, P, N));
        if (next != e) {
            e = next;
            unchanged = 0;
            continue;
        }
        std::uint64_t n1 = N / e;
        if (e % n1 == 0 && (F.order() - 1) % n1 == 0 && ++unchanged >= 32) break;
    }
    return {N / e, e};
}

FourTorsionTable four_torsion_x(const Field& F, Element lambda) {
    require_lambda(F, lambda);
    Field ext(F.characteristic(), 2 * F.degree());
    ff::Embedding emb(F, ext);
    FourTorsionTable table{ext, {}};
    const Element centers[3] = {F.zero(), F.one(), lambda};
    const Element radicands[3] = {lambda, F.sub(F.one(), lambda), F.sub(F.mul(lambda, lambda), lambda)};
    for (int row = 0; row < 3; ++row) {
        if (auto r = F.sqrt(radicands[row])) {
            for (Element s : {*r, F.neg(*r)}) {
                Element xb = F.add(centers[row], s);
                table.rows.push_back({row, emb(xb), true, xb});
            }
        } else {
            Element r2 = *ext.sqrt(emb(radicands[row]));
            for (Element s : {r2, ext.neg(r2)}) {
                table.rows.push_back({row, ext.add(emb(centers[row]), s), false, F.zero()});
            }
        }
    }
    return table;
}

Element isogeny_codomain(const Field& F, Element a, Element b) {
    Element s = F.add(a, b);
    return F.div(F.mul(F.from_int(4), F.mul(a, b)), F.mul(s, s));
}

CurvePoint agm_isogeny(const Field& F, Element a, Element b, const CurvePoint& P) {
    Element lambda = lambda_of(F, a, b);
    if (!F.is_square(F.mul(a, b))) throw PreconditionError("agm_isogeny needs ab to be a square");
    if (!on_curve(F, lambda, P)) throw PreconditionError("point is not on the domain curve");
    if (P.infinity || P.x == F.zero()) return CurvePoint::at_infinity();
    Element s = F.add(a, b);
    Element ax = F.mul(a, P.x);
    Element plus = F.add(ax, b);
    Element minus = F.sub(ax, b);
    Element s2 = F.mul(s, s);
    Element X = F.div(F.mul(plus, plus), F.mul(P.x, s2));
    Element num = F.neg(F.mul(F.mul(a, P.y), F.mul(minus, plus)));
    Element Y = F.div(num, F.mul(F.mul(P.x, P.x), F.mul(s2, s)));
    return CurvePoint::affine(X, Y);
}

cg::Fundamental frobenius_disc(std::uint64_t p, std::uint64_t q, std::int64_t s) {
    if (s % static_cast<std::int64_t>(p) == 0) throw PreconditionError("supersingular trace has no ordinary discriminant");
    if (q >= (std::uint64_t{1} << 60)) throw PreconditionError("q too large for the discriminant");
    std::int64_t D = s * s - 4 * static_cast<std::int64_t>(q);
    return cg::fundamental_part(D);
}

LegendreCurve::LegendreCurve(Field F, Element lambda, std::uint64_t budget) : F_(std::move(F)), lambda_(lambda) {
    require_lambda(F_, lambda_);
    j_ = j_invariant(F_, lambda_);
    order_ = point_count(F_, lambda_, budget);
    trace_ = static_cast<std::int64_t>(F_.order() + 1) - static_cast<std::int64_t>(order_);
    structure_ = group_structure(F_, lambda_, budget);
    supersingular_ = trace_ % static_cast<std::int64_t>(F_.characteristic()) == 0;
    if (!supersingular_) disc_ = frobenius_disc(F_.characteristic(), F_.order(), trace_);
}

}  // namespace agm::legendre
