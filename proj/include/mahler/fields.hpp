#ifndef MAHLER_FIELDS_HPP
#define MAHLER_FIELDS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace mahler {

struct FieldMismatch : std::runtime_error {
    FieldMismatch() : std::runtime_error("operands belong to different fields") {}
    explicit FieldMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Exact rational scalar.  GMP keeps values canonical (reduced, positive
/// denominator) after every arithmetic operation.
using Rat = mpq_class;

inline bool is_zero(const Rat& x) { return sgn(x) == 0; }
inline bool is_one(const Rat& x) { return x == 1; }

/// Element of a prime field F_p with p fitting in a machine word.
/// Values are stored as least nonnegative residues.  A default-constructed
/// element is an unbound zero that binds to a modulus on first contact;
/// this lets generic containers value-initialize.
class Fp {
public:
    Fp() = default;
    Fp(std::uint64_t p, long long v) : p_(p) {
        long long r = v % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        v_ = static_cast<std::uint64_t>(r);
    }

    std::uint64_t residue() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    friend Fp operator+(Fp a, Fp b) {
        std::uint64_t p = bind(a, b);
        if (p == 0) return Fp{};
        std::uint64_t s = a.v_ + b.v_;
        if (s >= p) s -= p;
        return make(p, s);
    }
    friend Fp operator-(Fp a, Fp b) {
        std::uint64_t p = bind(a, b);
        if (p == 0) return Fp{};
        std::uint64_t s = a.v_ + p - b.v_;
        if (s >= p) s -= p;
        return make(p, s);
    }
    friend Fp operator*(Fp a, Fp b) {
        std::uint64_t p = bind(a, b);
        if (p == 0) return Fp{};
        return make(p, static_cast<std::uint64_t>(
                           static_cast<unsigned __int128>(a.v_) * b.v_ % p));
    }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    Fp operator-() const {
        if (p_ == 0) return Fp{};
        return make(p_, v_ == 0 ? 0 : p_ - v_);
    }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }

    friend bool operator==(Fp a, Fp b) {
        bind(a, b);
        return a.v_ == b.v_;
    }
    friend bool operator!=(Fp a, Fp b) { return !(a == b); }

    Fp pow(std::uint64_t e) const {
        if (p_ == 0) throw std::logic_error("pow on unbound Fp");
        Fp r = make(p_, 1 % p_), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    Fp inverse() const {
        if (v_ == 0) throw std::domain_error("division by zero in F_p");
        return pow(p_ - 2);
    }

private:
    static Fp make(std::uint64_t p, std::uint64_t v) {
        Fp r;
        r.p_ = p;
        r.v_ = v;
        return r;
    }
    // Unifies the moduli of two elements; unbound elements adopt the other's.
    static std::uint64_t bind(Fp& a, Fp& b) {
        if (a.p_ == b.p_) return a.p_;
        if (a.p_ == 0) { a.p_ = b.p_; return b.p_; }
        if (b.p_ == 0) { b.p_ = a.p_; return a.p_; }
        throw FieldMismatch("F_p elements with different moduli");
    }

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;
};

inline bool is_zero(const Fp& x) { return x.residue() == 0; }
inline bool is_one(const Fp& x) { return x.modulus() != 0 && x.residue() == 1; }

/// Field descriptor for Q.  Stateless; exists so generic code can ask a
/// field for constants and parsing.
struct QField {
    using Scalar = Rat;
    Rat zero() const { return Rat(0); }
    Rat one() const { return Rat(1); }
    Rat of(long long n) const { return Rat(static_cast<long>(n)); }
    Rat parse(const std::string& s) const {
        Rat r(s);
        r.canonicalize();
        return r;
    }
    static std::string to_string(const Rat& x) { return x.get_str(); }
    friend bool operator==(const QField&, const QField&) { return true; }
    std::string name() const { return "Q"; }
};

/// Field descriptor for F_p.
struct PField {
    std::uint64_t p = 0;

    using Scalar = Fp;
    PField() = default;
    explicit PField(std::uint64_t prime) : p(prime) {
        if (!is_prime(prime)) throw std::invalid_argument("modulus is not prime");
    }
    Fp zero() const { return Fp(p, 0); }
    Fp one() const { return Fp(p, 1); }
    Fp of(long long n) const { return Fp(p, n); }
    Fp parse(const std::string& s) const { return Fp(p, std::stoll(s)); }
    static std::string to_string(const Fp& x) { return std::to_string(x.residue()); }
    friend bool operator==(const PField& a, const PField& b) { return a.p == b.p; }
    std::string name() const { return "F " + std::to_string(p); }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

}  // namespace mahler

#endif
