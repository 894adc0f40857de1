#pragma once

// Legendre curves y^2 = x(x-1)(x-lambda) over F_q.

#include "agm/classgroup.hpp"
#include "agm/ff.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace agm::legendre {

using ff::Element;
using ff::Field;

inline constexpr std::uint64_t kDefaultPointBudget = 1'000'000;

struct CurvePoint {
    bool infinity = true;
    Element x{};
    Element y{};

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(Element x, Element y) { return {false, x, y}; }

    friend bool operator==(const CurvePoint& P, const CurvePoint& Q) {
        if (P.infinity || Q.infinity) return P.infinity == Q.infinity;
        return P.x == Q.x && P.y == Q.y;
    }
    friend bool operator<(const CurvePoint& P, const CurvePoint& Q) {
        if (P.infinity != Q.infinity) return P.infinity;
        if (P.infinity) return false;
        return P.x != Q.x ? P.x < Q.x : P.y < Q.y;
    }
};

/// b^2 / a^2. Throws unless a, b nonzero and a != +-b.
Element lambda_of(const Field& F, Element a, Element b);
Element j_invariant(const Field& F, Element lambda);
/// The distinct values among the six fiber maps, sorted.
std::vector<Element> lambda_fiber(const Field& F, Element lambda);

/// x(x-1)(x-lambda)
Element rhs(const Field& F, Element lambda, Element x);
bool on_curve(const Field& F, Element lambda, const CurvePoint& P);

/// Character sum count of E(F_q). Throws BudgetError when q > budget.
std::uint64_t point_count(const Field& F, Element lambda, std::uint64_t budget = kDefaultPointBudget);
std::int64_t trace(const Field& F, Element lambda, std::uint64_t budget = kDefaultPointBudget);
bool is_supersingular(const Field& F, Element lambda, std::uint64_t budget = kDefaultPointBudget);

/// All rational points, infinity first, then affine points in (x, y) order.
std::vector<CurvePoint> all_points(const Field& F, Element lambda, std::uint64_t budget = kDefaultPointBudget);

CurvePoint ec_neg(const Field& F, const CurvePoint& P);
CurvePoint ec_add(const Field& F, Element lambda, const CurvePoint& P, const CurvePoint& Q);
CurvePoint ec_mul(const Field& F, Element lambda, const CurvePoint& P, std::int64_t k);
/// x(2P) from the closed doubling formula; P affine with y != 0.
Element doubling_x(const Field& F, Element lambda, const CurvePoint& P);
std::uint64_t point_order(const Field& F, Element lambda, const CurvePoint& P, std::uint64_t group_order);

/// x, x-1, x-lambda all squares (zero counts as a square).
bool two_descent(const Field& F, Element lambda, const CurvePoint& P);

struct GroupStructure {
    std::uint64_t n1;
    std::uint64_t n2;
    friend bool operator==(const GroupStructure&, const GroupStructure&) = default;
};

inline constexpr std::uint64_t kFullEnumerationLimit = 2000;

/// E(F_q) = Z/n1 + Z/n2, n1 | n2. Exhaustive for q <= kFullEnumerationLimit,
/// otherwise random points from a fixed seed.
GroupStructure group_structure(const Field& F, Element lambda, std::uint64_t budget = kDefaultPointBudget,
                               std::uint64_t seed = 0x5eed);

struct FourTorsionX {
    int above;        // 0, 1, 2: 2P = (0,0), (1,0), (lambda,0)
    Element x;        // in the quadratic extension
    bool rational;    // x lies in F_q
    Element x_base;   // x as an F_q element when rational
};

struct FourTorsionTable {
    Field extension;  // F_{q^2}
    std::vector<FourTorsionX> rows;  // six entries, two per 2-torsion point
};

FourTorsionTable four_torsion_x(const Field& F, Element lambda);

/// The 2-isogeny E_{lambda(a,b)} -> E_{4ab/(a+b)^2} with kernel <(0,0)>.
CurvePoint agm_isogeny(const Field& F, Element a, Element b, const CurvePoint& P);
/// 4ab / (a+b)^2, the codomain parameter.
Element isogeny_codomain(const Field& F, Element a, Element b);

/// s^2 - 4q = f^2 d_K. Throws PreconditionError when p | s.
cg::Fundamental frobenius_disc(std::uint64_t p, std::uint64_t q, std::int64_t s);

class LegendreCurve {
  public:
    LegendreCurve(Field F, Element lambda, std::uint64_t budget = kDefaultPointBudget);

    const Field& field() const noexcept { return F_; }
    Element lambda() const noexcept { return lambda_; }
    Element j() const noexcept { return j_; }
    std::uint64_t order() const noexcept { return order_; }
    std::int64_t trace() const noexcept { return trace_; }
    GroupStructure structure() const noexcept { return structure_; }
    bool supersingular() const noexcept { return supersingular_; }
    /// nullopt for supersingular curves.
    const std::optional<cg::Fundamental>& frobenius() const noexcept { return disc_; }

  private:
    Field F_;
    Element lambda_;
    Element j_;
    std::uint64_t order_;
    std::int64_t trace_;
    GroupStructure structure_;
    bool supersingular_;
    std::optional<cg::Fundamental> disc_;
};

}  // namespace agm::legendre
