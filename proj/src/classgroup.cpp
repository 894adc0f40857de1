#include "agm/classgroup.hpp"

#include "agm/ff.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace agm::cg {

namespace {

std::int64_t floor_div(std::int64_t x, std::int64_t y) {
    std::int64_t q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
}

std::int64_t mod_pos(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

// u*x + v*y = g = gcd(x, y) >= 0
std::int64_t ext_gcd(std::int64_t x, std::int64_t y, std::int64_t& u, std::int64_t& v) {
    std::int64_t u0 = 1, v0 = 0, u1 = 0, v1 = 1;
    while (y != 0) {
        std::int64_t q = floor_div(x, y);
        std::int64_t t = x - q * y;
        x = y;
        y = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
        t = v0 - q * v1;
        v0 = v1;
        v1 = t;
    }
    if (x < 0) {
        x = -x;
        u0 = -u0;
        v0 = -v0;
    }
    u = u0;
    v = v0;
    return x;
}

std::int64_t c_from(std::int64_t a, std::int64_t b, std::int64_t D) {
    __int128 num = static_cast<__int128>(b) * b - D;
    return static_cast<std::int64_t>(num / (4 * static_cast<__int128>(a)));
}

std::mutex memo_mutex;
std::map<std::int64_t, std::vector<QuadForm>> forms_memo;

}  // namespace

bool is_discriminant(std::int64_t D) { return D < 0 && (mod_pos(D, 4) == 0 || mod_pos(D, 4) == 1); }

bool QuadForm::is_reduced() const {
    if (!(std::abs(b) <= a && a <= c)) return false;
    if ((std::abs(b) == a || a == c) && b < 0) return false;
    return true;
}

bool QuadForm::is_primitive() const { return std::gcd(std::gcd(a, b), c) == 1; }

std::string QuadForm::str() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

QuadForm reduce(QuadForm f) {
    if (f.a <= 0 || f.disc() >= 0) throw PreconditionError("reduce: form is not positive definite " + f.str());
    const std::int64_t D = f.disc();
    for (;;) {
        if (f.b <= -f.a || f.b > f.a) {
            // b -> b + 2ka landing in (-a, a]
            std::int64_t k = floor_div(f.a - f.b, 2 * f.a);
            f.b += 2 * k * f.a;
            f.c = c_from(f.a, f.b, D);
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

const std::vector<QuadForm>& reduced_forms(std::int64_t D) {
    if (!is_discriminant(D)) throw PreconditionError("not a negative discriminant: " + std::to_string(D));
    std::lock_guard lock(memo_mutex);
    auto it = forms_memo.find(D);
    if (it != forms_memo.end()) return it->second;
    std::vector<QuadForm> out;
    const std::int64_t N = -D;
    for (std::int64_t a = 1; 3 * a * a <= N; ++a) {
        for (std::int64_t babs = (N & 1); babs <= a; babs += 2) {
            __int128 num = static_cast<__int128>(babs) * babs + N;
            if (num % (4 * a) != 0) continue;
            auto c = static_cast<std::int64_t>(num / (4 * a));
            if (c < a) continue;
            QuadForm f{a, babs, c};
            if (!f.is_primitive()) continue;
            out.push_back(f);
            if (babs != 0 && babs != a && a != c) out.push_back({a, -babs, c});
        }
    }
    return forms_memo.emplace(D, std::move(out)).first->second;
}

std::uint64_t class_number(std::int64_t D) { return reduced_forms(D).size(); }

QuadForm identity(std::int64_t D) {
    if (!is_discriminant(D)) throw PreconditionError("not a negative discriminant: " + std::to_string(D));
    std::int64_t b = mod_pos(D, 4) == 0 ? 0 : 1;
    return {1, b, c_from(1, b, D)};
}

QuadForm inverse(const QuadForm& f) { return reduce({f.a, -f.b, f.c}); }

QuadForm compose_reduce(const QuadForm& f, const QuadForm& g) {
    if (f.disc() != g.disc()) throw PreconditionError("composition of forms with different discriminants");
    const std::int64_t D = f.disc();
    QuadForm f1 = f, f2 = g;
    if (f1.a > f2.a) std::swap(f1, f2);
    const std::int64_t s = (f1.b + f2.b) / 2;
    const std::int64_t n = f2.b - s;
    std::int64_t y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        std::int64_t u, v;
        d = ext_gcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    std::int64_t x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        std::int64_t u, v;
        d1 = ext_gcd(s, d, u, v);
        x2 = u;
        y2 = -v;
    }
    const std::int64_t v1 = f1.a / d1;
    const std::int64_t v2 = f2.a / d1;
    __int128 rr = static_cast<__int128>(y1) * y2 * n - static_cast<__int128>(x2) * f2.c;
    rr %= v1;
    if (rr < 0) rr += v1;
    const auto r = static_cast<std::int64_t>(rr);
    const std::int64_t b3 = f2.b + 2 * v2 * r;
    const std::int64_t a3 = v1 * v2;
    return reduce({a3, b3, c_from(a3, b3, D)});
}

QuadForm power(const QuadForm& f, std::uint64_t k) {
    QuadForm result = identity(f.disc());
    QuadForm base = reduce(f);
    while (k) {
        if (k & 1) result = compose_reduce(result, base);
        base = compose_reduce(base, base);
        k >>= 1;
    }
    return result;
}

std::uint64_t form_order(const QuadForm& f) {
    const QuadForm one = identity(f.disc());
    QuadForm x = reduce(f);
    std::uint64_t k = 1;
    while (x != one) {
        x = compose_reduce(x, f);
        ++k;
    }
    return k;
}

Fundamental fundamental_part(std::int64_t D) {
    if (!is_discriminant(D)) throw PreconditionError("not a negative discriminant: " + std::to_string(D));
    std::uint64_t m = static_cast<std::uint64_t>(-D);
    std::int64_t g = 1;
    std::uint64_t squarefree = 1;
    for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (unsigned i = 0; i + 1 < e; i += 2) g *= static_cast<std::int64_t>(p);
        if (e & 1) squarefree *= p;
    }
    squarefree *= m;
    auto dk = -static_cast<std::int64_t>(squarefree);
    if (mod_pos(dk, 4) == 1) return {dk, g};
    return {4 * dk, g / 2};
}

bool is_fundamental(std::int64_t D) { return is_discriminant(D) && fundamental_part(D).f == 1; }

ImagQuadOrder::ImagQuadOrder(std::int64_t dk, std::int64_t conductor) : d_K(dk), f(conductor) {
    if (f < 1) throw PreconditionError("conductor must be positive");
    if (!is_fundamental(d_K)) throw PreconditionError("not a fundamental discriminant: " + std::to_string(d_K));
}

ImagQuadOrder ImagQuadOrder::of_disc(std::int64_t D) {
    auto [dk, f] = fundamental_part(D);
    return {dk, f};
}

QuadForm prime_form_2(std::int64_t D) {
    if (!is_discriminant(D) || mod_pos(D, 8) != 1)
        throw PreconditionError("2 does not split for discriminant " + std::to_string(D));
    return reduce({2, 1, c_from(2, 1, D)});
}

std::uint64_t h2_order(std::int64_t D) { return form_order(prime_form_2(D)); }

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw PreconditionError("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = std::gcd(n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& x, const Rational& y) {
    std::int64_t l = std::lcm(x.den, y.den);
    return {x.num * (l / x.den) + y.num * (l / y.den), l};
}

Rational operator*(const Rational& x, const Rational& y) { return {x.num * y.num, x.den * y.den}; }

namespace {

template <class Fn>
void for_each_order(std::int64_t N, Fn&& fn) {
    if (N <= 0) return;
    for (std::int64_t g = 1; g * g <= N; ++g) {
        if (N % (g * g) != 0) continue;
        std::int64_t D = -(N / (g * g));
        if (is_discriminant(D)) fn(D);
    }
}

}  // namespace

Rational hurwitz(std::int64_t N) {
    std::int64_t sixths = 0;
    for_each_order(N, [&](std::int64_t D) {
        if (D == -3)
            sixths += 2;
        else if (D == -4)
            sixths += 3;
        else
            sixths += 6 * static_cast<std::int64_t>(class_number(D));
    });
    return {sixths, 6};
}

std::uint64_t hurwitz_unweighted(std::int64_t N) {
    std::uint64_t total = 0;
    for_each_order(N, [&](std::int64_t D) { total += class_number(D); });
    return total;
}

int kronecker_2(std::int64_t D) {
    switch (mod_pos(D, 8)) {
        case 1:
        case 7:
            return 1;
        case 3:
        case 5:
            return -1;
        default:
            return 0;
    }
}

TraceCongruence trace_congruence_46(std::uint64_t q) {
    if (q % 8 != 1) throw PreconditionError("trace congruence needs q = 1 mod 8");
    const std::uint32_t target = q % 128;
    const std::uint32_t want = (q % 16 == 1) ? 1 : 3;
    for (std::uint32_t r = want; r < 128; r += 8) {
        if (r * r % 128 == target) {
            std::uint32_t t = 46 * r % 128;
            return {r, {t, (128 - t) % 128}};
        }
    }
    throw std::logic_error("no 2-adic square root found");
}

}  // namespace agm::cg
