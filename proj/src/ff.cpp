#include "agm/ff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <mutex>
#include <sstream>

namespace agm::ff {

// ---------------------------------------------------------------------------
// Integer helpers

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % small == 0) return n == small;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

bool checked_pow(std::uint64_t base, unsigned e, std::uint64_t& out) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) return false;
    }
    out = r;
    return true;
}

}  // namespace

std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q) {
    if (q < 3 || q % 2 == 0) return std::nullopt;
    if (is_prime(q)) return std::pair{q, 1u};
    for (unsigned n = 2; n < 64; ++n) {
        // integer n-th root by bisection
        std::uint64_t lo = 1, hi = std::uint64_t{1} << (64 / n + 1);
        while (lo < hi) {
            std::uint64_t mid = lo + (hi - lo + 1) / 2;
            std::uint64_t v;
            if (checked_pow(mid, n, v) && v <= q)
                lo = mid;
            else
                hi = mid - 1;
        }
        std::uint64_t v;
        if (lo >= 3 && checked_pow(lo, n, v) && v == q && is_prime(lo)) return std::pair{lo, n};
        if (lo < 3) break;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polynomials over Z/p (little-endian, trimmed)

namespace {

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    const std::uint64_t lead_inv = powmod(f.back(), p - 2, p);
    while (a.size() > df) {
        std::uint64_t c = mulmod(a.back(), lead_inv, p);
        std::size_t shift = a.size() - 1 - df;
        for (std::size_t i = 0; i <= df; ++i) {
            a[shift + i] = (a[shift + i] + p - mulmod(c, f[i], p)) % p;
        }
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
        }
    }
    return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
    Poly r{1};
    base = poly_mod(std::move(base), f, p);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

}  // namespace

bool is_irreducible(const Poly& f_in, std::uint64_t p) {
    Poly f = f_in;
    trim(f);
    if (f.size() < 2 || f.back() != 1) return false;
    const unsigned n = static_cast<unsigned>(f.size() - 1);
    if (n == 1) return true;
    const Poly x{0, 1};
    // frob[k] = x^{p^k} mod f
    std::vector<Poly> frob(n + 1);
    frob[0] = x;
    for (unsigned k = 1; k <= n; ++k) frob[k] = poly_powmod(frob[k - 1], p, f, p);
    if (poly_sub(frob[n], x, p) != Poly{}) return false;
    for (std::uint64_t r : prime_factors(n)) {
        Poly g = poly_gcd(f, poly_sub(frob[n / r], x, p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

Poly default_modulus(std::uint64_t p, unsigned n) {
    if (n == 1) return {0, 1};
    std::uint64_t count;
    if (!checked_pow(p, n, count)) throw PreconditionError("field order overflows 64 bits");
    // candidates in lexicographic order of (c0, c1, ..., c_{n-1})
    for (std::uint64_t m = 0; m < count; ++m) {
        Poly f(n + 1, 0);
        f[n] = 1;
        std::uint64_t v = m;
        for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
            f[static_cast<std::size_t>(i)] = v % p;
            v /= p;
        }
        if (f[0] == 0) continue;
        if (is_irreducible(f, p)) return f;
    }
    throw PreconditionError("no irreducible polynomial found");
}

// ---------------------------------------------------------------------------
// Field

struct Field::Impl {
    std::uint64_t p = 0;
    unsigned n = 0;
    Poly modulus;
    bool default_mod = true;
    std::uint64_t q = 0;
    std::uint64_t half_exponent = 0;
    std::uint64_t top = 1;  // p^{n-1}: code of 1
    std::uint32_t tag = 0;

    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> exp;   // 2(q-1) entries
    std::vector<std::int32_t> zech;   // extension fields only
    Code inv2 = 0;

    // Tonelli-Shanks data: q - 1 = 2^ts_e * ts_m, ts_c = z^ts_m for a non-square z
    unsigned ts_e = 0;
    std::uint64_t ts_m = 0;
    Code ts_c = 0;

    std::vector<std::uint64_t> digits(Code c) const {
        std::vector<std::uint64_t> out(n);
        for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = c % p;
            c /= p;
        }
        return out;
    }
    Code from_digits(std::span<const std::uint64_t> d) const {
        Code c = 0;
        for (unsigned i = 0; i < n; ++i) c = c * p + (i < d.size() ? d[i] : 0);
        return c;
    }
};

namespace {

std::uint32_t field_tag(std::uint64_t p, unsigned n, const Poly& mod) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(p);
    mix(n);
    for (auto c : mod) mix(c);
    auto t = static_cast<std::uint32_t>(h ^ (h >> 32));
    return t == 0 ? 1 : t;
}

}  // namespace

Field::Field(std::uint64_t p, unsigned n, std::optional<Poly> modulus) {
    if (n == 0) throw PreconditionError("extension degree must be at least 1");
    if (!is_prime(p)) throw PreconditionError("p not prime: " + std::to_string(p));
    if (p == 2) throw PreconditionError("p must be odd");
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->n = n;
    if (!checked_pow(p, n, impl->q)) throw PreconditionError("field order overflows 64 bits");
    std::uint64_t top = 1;
    checked_pow(p, n - 1, top);
    impl->top = top;
    impl->half_exponent = (impl->q - 1) / 2;

    Poly def = default_modulus(p, n);
    if (modulus) {
        Poly m = *modulus;
        if (m.size() != n + 1) throw PreconditionError("modulus has wrong degree");
        if (m.back() != 1) throw PreconditionError("modulus must be monic");
        for (auto c : m)
            if (c >= p) throw PreconditionError("modulus coefficient out of range");
        if (!is_irreducible(m, p)) throw PreconditionError("modulus is reducible");
        impl->default_mod = (m == def);
        impl->modulus = std::move(m);
    } else {
        impl->modulus = std::move(def);
    }
    impl->tag = field_tag(p, n, impl->modulus);
    impl_ = impl;  // slow arithmetic is usable from here on

    const std::uint64_t q = impl->q;
    const Code one = impl->top;

    // Tonelli-Shanks constants
    impl->ts_m = q - 1;
    while (impl->ts_m % 2 == 0) {
        impl->ts_m /= 2;
        ++impl->ts_e;
    }
    for (Code z = 1; z < q; ++z) {
        if (slow_pow(z, impl->half_exponent) != one) {
            impl->ts_c = slow_pow(z, impl->ts_m);
            break;
        }
    }

    if (q <= kTableLimit) {
        const auto factors = prime_factors(q - 1);
        Code g = 0;
        for (Code c = 1; c < q; ++c) {
            bool primitive = std::all_of(factors.begin(), factors.end(),
                                         [&](std::uint64_t r) { return slow_pow(c, (q - 1) / r) != one; });
            if (primitive) {
                g = c;
                break;
            }
        }
        impl->log.assign(q, 0);
        impl->exp.assign(2 * (q - 1), 0);
        Code cur = one;
        for (std::uint64_t i = 0; i < q - 1; ++i) {
            impl->exp[i] = static_cast<std::uint32_t>(cur);
            impl->exp[i + q - 1] = static_cast<std::uint32_t>(cur);
            impl->log[cur] = static_cast<std::uint32_t>(i);
            cur = slow_mul(cur, g);
        }
        if (n > 1) {
            impl->zech.assign(q - 1, -1);
            for (std::uint64_t k = 0; k < q - 1; ++k) {
                Code y = impl->exp[k];
                Code c0 = y / one;
                Code s = (c0 == p - 1) ? y - (p - 1) * one : y + one;
                impl->zech[k] = s == 0 ? -1 : static_cast<std::int32_t>(impl->log[s]);
            }
        }
    }
    impl->inv2 = slow_pow(2 % p * one, q - 2);
}

Field Field::parse(std::string_view spec) {
    auto fail = [&]() -> Field { throw PreconditionError("malformed field spec: " + std::string(spec)); };
    std::string_view head = spec;
    std::optional<Poly> modulus;
    if (auto semi = spec.find(';'); semi != std::string_view::npos) {
        head = spec.substr(0, semi);
        std::string_view tail = spec.substr(semi + 1);
        constexpr std::string_view key = "modulus=";
        if (tail.substr(0, key.size()) != key) return fail();
        tail.remove_prefix(key.size());
        Poly m;
        while (!tail.empty()) {
            auto comma = tail.find(',');
            std::string_view tok = tail.substr(0, comma);
            std::uint64_t v;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) return fail();
            m.push_back(v);
            if (comma == std::string_view::npos) break;
            tail.remove_prefix(comma + 1);
        }
        modulus = std::move(m);
    }
    std::uint64_t p;
    unsigned n = 1;
    auto caret = head.find('^');
    std::string_view ps = head.substr(0, caret);
    auto [ptr, ec] = std::from_chars(ps.data(), ps.data() + ps.size(), p);
    if (ps.empty() || ec != std::errc{} || ptr != ps.data() + ps.size()) return fail();
    if (caret != std::string_view::npos) {
        std::string_view ns = head.substr(caret + 1);
        auto [p2, ec2] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
        if (ns.empty() || ec2 != std::errc{} || p2 != ns.data() + ns.size()) return fail();
    }
    return Field(p, n, std::move(modulus));
}

std::uint64_t Field::characteristic() const noexcept { return impl_->p; }
unsigned Field::degree() const noexcept { return impl_->n; }
std::uint64_t Field::order() const noexcept { return impl_->q; }
const Poly& Field::modulus() const noexcept { return impl_->modulus; }
std::uint32_t Field::tag() const noexcept { return impl_->tag; }
bool Field::has_tables() const noexcept { return !impl_->log.empty(); }

std::string Field::spec() const {
    std::string s = std::to_string(impl_->p);
    if (impl_->n > 1) s += "^" + std::to_string(impl_->n);
    if (!impl_->default_mod) {
        s += ";modulus=";
        for (std::size_t i = 0; i < impl_->modulus.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(impl_->modulus[i]);
        }
    }
    return s;
}

void Field::check(Element x) const {
    if (x.tag != impl_->tag) throw MixedFieldError();
}

Element Field::one() const noexcept { return {impl_->top, impl_->tag}; }

Element Field::generator() const {
    if (impl_->n == 1) return from_int(static_cast<std::int64_t>((impl_->p - impl_->modulus[0]) % impl_->p));
    std::vector<std::uint64_t> c(impl_->n, 0);
    c[1] = 1;
    return {impl_->from_digits(c), impl_->tag};
}

Element Field::from_int(std::int64_t v) const {
    const auto p = static_cast<__int128>(impl_->p);
    __int128 m = static_cast<__int128>(v) % p;
    if (m < 0) m += p;
    return {static_cast<std::uint64_t>(m) * impl_->top, impl_->tag};
}

Element Field::from_code(Code c) const {
    if (c >= impl_->q) throw PreconditionError("element code out of range");
    return {c, impl_->tag};
}

Element Field::from_coeffs(std::span<const std::uint64_t> coeffs) const {
    if (coeffs.size() > impl_->n) throw PreconditionError("too many coefficients");
    std::vector<std::uint64_t> d(impl_->n, 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) d[i] = coeffs[i] % impl_->p;
    return {impl_->from_digits(d), impl_->tag};
}

std::vector<std::uint64_t> Field::coeffs(Element x) const {
    check(x);
    return impl_->digits(x.code);
}

std::string Field::render(Element x) const {
    auto c = coeffs(x);
    if (impl_->n == 1) return std::to_string(c[0]);
    std::string s = std::to_string(c[0]);
    for (unsigned i = 1; i < impl_->n; ++i) {
        s += "+" + std::to_string(c[i]) + "*t";
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
}

Element Field::parse_element(std::string_view text) const {
    auto fail = [&]() -> Element { throw PreconditionError("malformed field element: " + std::string(text)); };
    std::string cleaned;
    for (char ch : text)
        if (ch != ' ') cleaned += ch;
    if (cleaned.empty()) return fail();
    std::vector<std::int64_t> acc(impl_->n, 0);
    std::size_t pos = 0;
    bool first = true;
    while (pos < cleaned.size()) {
        std::int64_t sign = 1;
        if (cleaned[pos] == '+' || cleaned[pos] == '-') {
            sign = cleaned[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!first) {
            return fail();
        }
        first = false;
        std::size_t end = cleaned.find_first_of("+-", pos);
        std::string_view term = std::string_view(cleaned).substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? cleaned.size() : end;
        if (term.empty()) return fail();
        std::int64_t coef = 1;
        unsigned power = 0;
        std::string_view rest = term;
        if (std::isdigit(static_cast<unsigned char>(rest.front()))) {
            std::size_t i = 0;
            while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
            std::uint64_t v = 0;
            std::from_chars(rest.data(), rest.data() + i, v);
            coef = static_cast<std::int64_t>(v % impl_->p);
            rest.remove_prefix(i);
            if (!rest.empty()) {
                if (rest.front() != '*') return fail();
                rest.remove_prefix(1);
            }
        }
        if (!rest.empty()) {
            if (rest.front() != 't') return fail();
            rest.remove_prefix(1);
            power = 1;
            if (!rest.empty()) {
                if (rest.front() != '^') return fail();
                rest.remove_prefix(1);
                auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), power);
                if (ec != std::errc{} || ptr != rest.data() + rest.size()) return fail();
            }
            if (power >= impl_->n) return fail();
        }
        const auto p = static_cast<std::int64_t>(impl_->p);
        acc[power] = ((acc[power] + sign * coef) % p + p) % p;
    }
    std::vector<std::uint64_t> d(acc.begin(), acc.end());
    return {impl_->from_digits(d), impl_->tag};
}

// --- slow paths -----------------------------------------------------------

Code Field::slow_mul(Code x, Code y) const {
    const Impl& f = *impl_;
    if (f.n == 1) return mulmod(x, y, f.p);
    Poly a = f.digits(x), b = f.digits(y);
    Poly r = poly_mulmod(a, b, f.modulus, f.p);
    return f.from_digits(r);
}

Code Field::slow_pow(Code x, std::uint64_t k) const {
    Code r = impl_->top;
    while (k) {
        if (k & 1) r = slow_mul(r, x);
        x = slow_mul(x, x);
        k >>= 1;
    }
    return r;
}

// --- raw arithmetic -------------------------------------------------------

Code Field::raw_add(Code x, Code y) const noexcept {
    const Impl& f = *impl_;
    if (f.n == 1) {
        Code s = x + y;
        return s >= f.p ? s - f.p : s;
    }
    if (!f.zech.empty()) {
        if (x == 0) return y;
        if (y == 0) return x;
        const std::uint64_t lx = f.log[x], ly = f.log[y];
        const std::uint64_t k = ly >= lx ? ly - lx : ly + f.q - 1 - lx;
        const std::int32_t z = f.zech[k];
        if (z < 0) return 0;
        return f.exp[lx + static_cast<std::uint64_t>(z)];
    }
    Code r = 0, mult = 1;
    for (unsigned i = 0; i < f.n; ++i) {
        Code a = x % f.p, b = y % f.p;
        x /= f.p;
        y /= f.p;
        Code s = a + b;
        if (s >= f.p) s -= f.p;
        r += s * mult;
        mult *= f.p;
    }
    return r;
}

Code Field::raw_neg(Code x) const noexcept {
    const Impl& f = *impl_;
    if (x == 0) return 0;
    if (f.n == 1) return f.p - x;
    if (!f.log.empty()) return f.exp[f.log[x] + f.half_exponent];
    Code r = 0, mult = 1;
    for (unsigned i = 0; i < f.n; ++i) {
        Code a = x % f.p;
        x /= f.p;
        r += (a == 0 ? 0 : f.p - a) * mult;
        mult *= f.p;
    }
    return r;
}

Code Field::raw_sub(Code x, Code y) const noexcept { return raw_add(x, raw_neg(y)); }

Code Field::raw_mul(Code x, Code y) const noexcept {
    const Impl& f = *impl_;
    if (x == 0 || y == 0) return 0;
    if (f.n == 1) {
        if (f.p < (std::uint64_t{1} << 32)) return x * y % f.p;
        return mulmod(x, y, f.p);
    }
    if (!f.log.empty()) return f.exp[f.log[x] + f.log[y]];
    return slow_mul(x, y);
}

Code Field::raw_half(Code x) const noexcept { return raw_mul(x, impl_->inv2); }

bool Field::raw_is_square(Code x) const noexcept {
    if (x == 0) return true;
    if (!impl_->log.empty()) return (impl_->log[x] & 1) == 0;
    return slow_pow(x, impl_->half_exponent) == impl_->top;
}

Code Field::raw_sqrt(Code x) const noexcept {
    if (x == 0) return 0;
    const Impl& f = *impl_;
    Code r;
    if (!f.log.empty()) {
        std::uint32_t l = f.log[x];
        if (l & 1) return kNoRoot;
        r = f.exp[l / 2];
    } else {
        auto ts = sqrt_tonelli_shanks(Element{x, f.tag});
        if (!ts) return kNoRoot;
        r = ts->code;
    }
    return std::min(r, raw_neg(r));
}

// --- checked arithmetic ---------------------------------------------------

Element Field::add(Element x, Element y) const {
    check(x);
    check(y);
    return {raw_add(x.code, y.code), impl_->tag};
}
Element Field::sub(Element x, Element y) const {
    check(x);
    check(y);
    return {raw_sub(x.code, y.code), impl_->tag};
}
Element Field::mul(Element x, Element y) const {
    check(x);
    check(y);
    return {raw_mul(x.code, y.code), impl_->tag};
}
Element Field::neg(Element x) const {
    check(x);
    return {raw_neg(x.code), impl_->tag};
}
Element Field::inv(Element x) const {
    check(x);
    if (x.code == 0) throw DivisionByZero();
    const Impl& f = *impl_;
    if (!f.log.empty()) {
        std::uint32_t l = f.log[x.code];
        return {f.exp[l == 0 ? 0 : f.q - 1 - l], f.tag};
    }
    if (f.n == 1) return {powmod(x.code, f.p - 2, f.p), f.tag};
    return {slow_pow(x.code, f.q - 2), f.tag};
}
Element Field::div(Element x, Element y) const { return mul(x, inv(y)); }
Element Field::pow(Element x, std::uint64_t k) const {
    check(x);
    const Impl& f = *impl_;
    if (k == 0) return one();
    if (x.code == 0) return zero();
    if (!f.log.empty()) {
        std::uint64_t e = static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(f.log[x.code]) * k % (f.q - 1));
        return {f.exp[e], f.tag};
    }
    return {slow_pow(x.code, k), f.tag};
}

bool Field::is_square(Element x) const {
    check(x);
    return raw_is_square(x.code);
}

std::optional<Element> Field::sqrt(Element x) const {
    check(x);
    Code r = raw_sqrt(x.code);
    if (r == kNoRoot) return std::nullopt;
    return Element{r, impl_->tag};
}

std::optional<Element> Field::sqrt_tonelli_shanks(Element x) const {
    check(x);
    const Impl& f = *impl_;
    if (x.code == 0) return zero();
    if (slow_pow(x.code, f.half_exponent) != f.top) return std::nullopt;
    Code r = slow_pow(x.code, (f.ts_m + 1) / 2);
    Code t = slow_pow(x.code, f.ts_m);
    Code c = f.ts_c;
    unsigned m = f.ts_e;
    while (t != f.top) {
        unsigned i = 0;
        Code t2 = t;
        while (t2 != f.top) {
            t2 = slow_mul(t2, t2);
            ++i;
        }
        Code b = c;
        for (unsigned k = 0; k + i + 1 < m; ++k) b = slow_mul(b, b);
        r = slow_mul(r, b);
        c = slow_mul(b, b);
        t = slow_mul(t, c);
        m = i;
    }
    return Element{r, f.tag};
}

// ---------------------------------------------------------------------------
// Embeddings

Embedding::Embedding(const Field& src, const Field& dst) : src_(src), dst_(dst) {
    if (src.characteristic() != dst.characteristic())
        throw PreconditionError("embedding between fields of different characteristic");
    if (dst.degree() % src.degree() != 0)
        throw PreconditionError("source degree does not divide target degree");
    const Poly& m = src.modulus();
    auto eval = [&](Element z) {
        Element acc = dst.zero();
        for (std::size_t i = m.size(); i-- > 0;) {
            acc = dst.add(dst.mul(acc, z), dst.from_int(static_cast<std::int64_t>(m[i])));
        }
        return acc;
    };
    bool found = false;
    if (src.degree() == 1) {
        root_ = dst.neg(dst.from_int(static_cast<std::int64_t>(m[0])));
        found = true;
    } else {
        for (Element z : dst.elements()) {
            if (eval(z) == dst.zero()) {
                root_ = z;
                found = true;
                break;
            }
        }
    }
    if (!found) throw PreconditionError("no root of source modulus in target field");
    Element pw = dst.one();
    for (unsigned i = 0; i < src.degree(); ++i) {
        powers_.push_back(pw);
        pw = dst.mul(pw, root_);
    }
}

Element Embedding::operator()(Element x) const {
    auto c = src_.coeffs(x);
    Element acc = dst_.zero();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        acc = dst_.add(acc, dst_.mul(dst_.from_int(static_cast<std::int64_t>(c[i])), powers_[i]));
    }
    return acc;
}

Element embed(const Field& src, const Field& dst, Element x) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const Embedding>> cache;
    std::shared_ptr<const Embedding> e;
    {
        std::lock_guard lock(mu);
        auto it = cache.find({src.tag(), dst.tag()});
        if (it != cache.end()) e = it->second;
    }
    if (!e) {
        auto made = std::make_shared<const Embedding>(src, dst);
        std::lock_guard lock(mu);
        e = cache.emplace(std::pair{src.tag(), dst.tag()}, std::move(made)).first->second;
    }
    return (*e)(x);
}

bool in_subfield(const Field& f, Element x, unsigned k) {
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= f.characteristic();
    return f.pow(x, pk) == x;
}

}  // namespace agm::ff
