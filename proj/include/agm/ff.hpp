#pragma once

// Arithmetic in odd finite fields F_{p^n}.
//
// Elements are stored as a single integer "code": the coefficient sequence
// (c0, c1, ..., c_{n-1}) of the polynomial-basis representation read as a
// base-p number with c0 as the most significant digit. Comparing codes is
// therefore the lexicographic order on coefficient sequences, and the
// canonical enumeration order of a field is simply 0, 1, ..., q-1.
//
// Fields up to kTableLimit elements carry discrete log / Zech log tables so
// that every operation used by the graph builder is O(1). Larger fields fall
// back to polynomial arithmetic and Tonelli-Shanks.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agm {

/// Raised for malformed input or violated preconditions (CLI exit code 2).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation would exceed a configured size budget.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace agm

namespace agm::ff {

using Code = std::uint64_t;
using Poly = std::vector<std::uint64_t>;  // little-endian coefficients mod p

inline constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 22;

class MixedFieldError : public PreconditionError {
  public:
    MixedFieldError() : PreconditionError("operands belong to different fields") {}
};

class DivisionByZero : public PreconditionError {
  public:
    DivisionByZero() : PreconditionError("division by zero in finite field") {}
};

/// A field element: its canonical code plus the tag of the owning field.
struct Element {
    Code code = 0;
    std::uint32_t tag = 0;

    friend bool operator==(const Element&, const Element&) = default;
    friend std::strong_ordering operator<=>(const Element& x, const Element& y) {
        if (auto c = x.tag <=> y.tag; c != 0) return c;
        return x.code <=> y.code;
    }
};

class Field {
  public:
    /// Builds F_{p^n}. Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree n is used.
    Field(std::uint64_t p, unsigned n, std::optional<Poly> modulus = std::nullopt);

    /// Parses "p", "p^n" or either with a ";modulus=c0,c1,...,1" suffix.
    static Field parse(std::string_view spec);

    std::uint64_t characteristic() const noexcept;
    unsigned degree() const noexcept;
    std::uint64_t order() const noexcept;  // q
    const Poly& modulus() const noexcept;
    std::uint32_t tag() const noexcept;
    bool has_tables() const noexcept;

    /// Canonical spec string. The modulus suffix is omitted when it equals the default.
    std::string spec() const;

    bool operator==(const Field& other) const noexcept { return tag() == other.tag(); }

    // Construction of elements.
    Element zero() const noexcept { return {0, tag()}; }
    Element one() const noexcept;
    Element generator() const;  // the class of t (0 for prime fields)
    Element from_int(std::int64_t v) const;
    Element from_code(Code c) const;
    Element from_coeffs(std::span<const std::uint64_t> coeffs) const;
    std::vector<std::uint64_t> coeffs(Element x) const;

    /// "c0+c1*t+c2*t^2+..." with every coefficient written out; "c0" for prime fields.
    std::string render(Element x) const;
    Element parse_element(std::string_view text) const;

    bool contains(Element x) const noexcept { return x.tag == tag() && x.code < order(); }

    Element add(Element x, Element y) const;
    Element sub(Element x, Element y) const;
    Element mul(Element x, Element y) const;
    Element div(Element x, Element y) const;
    Element neg(Element x) const;
    Element inv(Element x) const;
    Element pow(Element x, std::uint64_t k) const;

    /// Zero counts as a square.
    bool is_square(Element x) const;
    /// The smaller (in canonical order) of the two roots, or nullopt for non-squares.
    std::optional<Element> sqrt(Element x) const;
    /// Tonelli-Shanks, independent of the log tables. Returns some root, not
    /// necessarily the canonical one.
    std::optional<Element> sqrt_tonelli_shanks(Element x) const;

    /// All q elements in canonical order.
    auto elements() const {
        auto t = tag();
        return std::views::iota(Code{0}, order()) |
               std::views::transform([t](Code c) { return Element{c, t}; });
    }

    // Unchecked arithmetic on raw codes for hot loops. Inputs must be < q.
    Code raw_add(Code x, Code y) const noexcept;
    Code raw_sub(Code x, Code y) const noexcept;
    Code raw_neg(Code x) const noexcept;
    Code raw_mul(Code x, Code y) const noexcept;
    Code raw_half(Code x) const noexcept;
    bool raw_is_square(Code x) const noexcept;
    /// Canonical root, or kNoRoot.
    Code raw_sqrt(Code x) const noexcept;
    static constexpr Code kNoRoot = ~Code{0};

    struct Impl;

  private:
    void check(Element x) const;
    Code slow_mul(Code x, Code y) const;
    Code slow_pow(Code x, std::uint64_t k) const;

    std::shared_ptr<const Impl> impl_;
};

/// A fixed embedding F_{p^n} -> F_{p^m}, n | m, sending t to the smallest root
/// of the source modulus in the destination.
class Embedding {
  public:
    Embedding(const Field& src, const Field& dst);

    const Field& source() const noexcept { return src_; }
    const Field& target() const noexcept { return dst_; }
    Element image_of_generator() const noexcept { return root_; }
    Element operator()(Element x) const;

  private:
    Field src_;
    Field dst_;
    Element root_;
    std::vector<Element> powers_;  // root^i, i < n
};

/// Embeds x using a process-wide cache of embeddings keyed by (src, dst).
Element embed(const Field& src, const Field& dst, Element x);

/// x lies in the subfield of order p^k (x^{p^k} == x).
bool in_subfield(const Field& f, Element x, unsigned k);

// Number-theoretic helpers shared by the other modules.
bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);  // distinct, ascending
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Rabin's irreducibility test for a monic polynomial over Z/p.
bool is_irreducible(const Poly& f, std::uint64_t p);
Poly default_modulus(std::uint64_t p, unsigned n);

/// For q = p^n returns (p, n); nullopt when q is not an odd prime power.
std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q);

}  // namespace agm::ff
