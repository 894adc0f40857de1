#pragma once

// Positive definite binary quadratic forms, class groups of imaginary
// quadratic orders, and Hurwitz-Kronecker class numbers.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace agm::cg {

struct QuadForm {
    std::int64_t a = 1;
    std::int64_t b = 1;
    std::int64_t c = 1;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    bool is_primitive() const;
    std::string str() const;

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

/// Whether D < 0 and D = 0, 1 mod 4.
bool is_discriminant(std::int64_t D);

QuadForm reduce(QuadForm f);

/// Primitive reduced forms of discriminant D, ordered by a, then |b|, with
/// positive b first. Throws PreconditionError for invalid D.
const std::vector<QuadForm>& reduced_forms(std::int64_t D);
std::uint64_t class_number(std::int64_t D);

QuadForm identity(std::int64_t D);
QuadForm inverse(const QuadForm& f);
QuadForm compose_reduce(const QuadForm& f, const QuadForm& g);
QuadForm power(const QuadForm& f, std::uint64_t k);
std::uint64_t form_order(const QuadForm& f);

struct Fundamental {
    std::int64_t d_K;
    std::int64_t f;
    friend bool operator==(const Fundamental&, const Fundamental&) = default;
};

/// D = f^2 * d_K with d_K fundamental.
Fundamental fundamental_part(std::int64_t D);
bool is_fundamental(std::int64_t D);

struct ImagQuadOrder {
    std::int64_t d_K;
    std::int64_t f = 1;

    ImagQuadOrder(std::int64_t d_K, std::int64_t f);
    static ImagQuadOrder of_disc(std::int64_t D);

    std::int64_t disc() const { return f * f * d_K; }
    std::uint64_t class_number() const { return cg::class_number(disc()); }
};

/// The form (2, 1, (1-D)/8) above the prime 2; needs D = 1 mod 8.
QuadForm prime_form_2(std::int64_t D);
std::uint64_t h2_order(std::int64_t D);
inline std::uint64_t h2_order(const ImagQuadOrder& O) { return h2_order(O.disc()); }

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    bool is_integer() const { return den == 1; }
    std::string str() const;

    friend Rational operator+(const Rational& x, const Rational& y);
    friend Rational operator*(const Rational& x, const Rational& y);
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Weighted Hurwitz class number; 0 when -N is not a discriminant.
Rational hurwitz(std::int64_t N);
/// The same sum without the 1/3 and 1/2 weights at discriminants -3 and -4.
std::uint64_t hurwitz_unweighted(std::int64_t N);

int kronecker_2(std::int64_t D);

struct TraceCongruence {
    std::uint32_t root;                   // square root of q mod 128
    std::array<std::uint32_t, 2> traces;  // +46*root, -46*root mod 128
};

/// Needs q = 1 mod 8. The root is 1 mod 8 when q = 1 mod 16 and 3 mod 8 when
/// q = 9 mod 16; among the two such roots the smaller is returned (they give
/// the same traces).
TraceCongruence trace_congruence_46(std::uint64_t q);

}  // namespace agm::cg
