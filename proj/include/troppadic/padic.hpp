#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>

#include "troppadic/rational.hpp"

namespace troppadic {

// A rational valuation or +infinity.
class ValuationQ {
public:
    ValuationQ() : inf_(true) {}
    ValuationQ(const Rational& q) : inf_(false), q_(q) {}  // NOLINT: implicit by design
    ValuationQ(long q) : inf_(false), q_(q) {}             // NOLINT
    template <class T, class U>
    ValuationQ(const __gmp_expr<T, U>& e) : inf_(false), q_(e) {}  // NOLINT
    static ValuationQ infinity() { return ValuationQ(); }

    bool is_infinite() const { return inf_; }
    const Rational& value() const {
        if (inf_) throw Error("valuation is +inf");
        return q_;
    }

    friend ValuationQ operator+(const ValuationQ& a, const ValuationQ& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ValuationQ(a.q_ + b.q_);
    }
    friend ValuationQ operator-(const ValuationQ& a, const Rational& b) {
        if (a.inf_) return infinity();
        return ValuationQ(a.q_ - b);
    }
    friend bool operator==(const ValuationQ& a, const ValuationQ& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.q_ == b.q_;
    }
    friend std::strong_ordering operator<=>(const ValuationQ& a, const ValuationQ& b) {
        if (a.inf_ && b.inf_) return std::strong_ordering::equal;
        if (a.inf_) return std::strong_ordering::greater;
        if (b.inf_) return std::strong_ordering::less;
        if (a.q_ < b.q_) return std::strong_ordering::less;
        if (a.q_ > b.q_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    std::string str() const { return inf_ ? "inf" : q_.get_str(); }

private:
    bool inf_;
    Rational q_;
};

inline ValuationQ vmin(const ValuationQ& a, const ValuationQ& b) { return a <= b ? a : b; }
inline ValuationQ vmax(const ValuationQ& a, const ValuationQ& b) { return a >= b ? a : b; }

inline std::ostream& operator<<(std::ostream& os, const ValuationQ& v) { return os << v.str(); }

// A p-adic number u * p^v known up to an error of valuation >= v + N, an
// exact value (N = infinity, u an exact rational prime to p), the exact zero,
// or an indeterminate O(p^k) with no certified digit.
//
// Valuations and precisions are rationals so that valuation bookkeeping over
// ramified points (scaling by p^t, t rational) stays representable. Unit
// digits are stored reduced modulo p^floor(N); with floor(N) = 0 the unit is
// only known to be a unit and is stored as 1.
class PadicScaled {
public:
    enum class Kind { Zero, Indeterminate, Normal };

    PadicScaled() : p_(2), kind_(Kind::Zero) {}

    static PadicScaled zero(long p) {
        check_prime(p);
        PadicScaled x;
        x.p_ = p;
        return x;
    }

    static PadicScaled from_rational(long p, const Rational& q) {
        check_prime(p);
        if (q == 0) return zero(p);
        PadicScaled x;
        x.p_ = p;
        x.kind_ = Kind::Normal;
        long k = padic_order(q, p);
        x.val_ = k;
        x.unit_ = q / Rational(k >= 0 ? ipow(p, k) : Integer(1)) * Rational(k < 0 ? ipow(p, -k) : Integer(1));
        x.unit_.canonicalize();
        return x;
    }

    static PadicScaled from_integer(long p, const Integer& z) { return from_rational(p, Rational(z)); }
    static PadicScaled from_long(long p, long z) { return from_rational(p, Rational(z)); }

    // u * p^v with u prime to p; prec = relative precision (nullopt: exact).
    static PadicScaled from_unit(long p, const Rational& u, const Rational& v,
                                 std::optional<Rational> prec = std::nullopt) {
        check_prime(p);
        if (u == 0) throw InputError("unit part must be nonzero");
        if (padic_order(u, p) != 0) throw InputError("unit part " + u.get_str() + " is divisible by p");
        if (prec && *prec <= 0) throw InputError("precision must be positive");
        PadicScaled x;
        x.p_ = p;
        x.kind_ = Kind::Normal;
        x.val_ = v;
        x.unit_ = u;
        x.prec_ = prec;
        x.reduce_unit();
        return x;
    }

    static PadicScaled indeterminate(long p, const Rational& k) {
        check_prime(p);
        PadicScaled x;
        x.p_ = p;
        x.kind_ = Kind::Indeterminate;
        x.val_ = k;
        return x;
    }

    long prime() const { return p_; }
    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    bool is_indeterminate() const { return kind_ == Kind::Indeterminate; }
    bool is_normal() const { return kind_ == Kind::Normal; }
    bool is_exact() const { return kind_ == Kind::Zero || (kind_ == Kind::Normal && !prec_); }

    // Certified valuation; +inf for exact zero.
    ValuationQ valuation() const {
        if (kind_ == Kind::Zero) return ValuationQ::infinity();
        if (kind_ == Kind::Indeterminate)
            throw PrecisionExhausted("valuation of O(p^" + val_.get_str() + ") is not certified");
        return ValuationQ(val_);
    }

    // A certified lower bound for the valuation (exact for normal values).
    ValuationQ valuation_lower_bound() const {
        if (kind_ == Kind::Zero) return ValuationQ::infinity();
        return ValuationQ(val_);
    }

    // Valuation of the representation error (+inf when exact).
    ValuationQ error_valuation() const {
        switch (kind_) {
            case Kind::Zero: return ValuationQ::infinity();
            case Kind::Indeterminate: return ValuationQ(val_);
            case Kind::Normal: return prec_ ? ValuationQ(val_ + *prec_) : ValuationQ::infinity();
        }
        return ValuationQ::infinity();
    }

    const Rational& unit() const {
        require_normal();
        return unit_;
    }
    std::optional<Rational> precision() const {
        require_normal();
        return prec_;
    }

    // Add an error term O(p^k): coarsens the value to absolute precision k.
    PadicScaled capped(const ValuationQ& k) const {
        if (k.is_infinite()) return *this;
        if (error_valuation() <= k) return *this;
        if (kind_ == Kind::Zero || (kind_ == Kind::Normal && k.value() <= val_)) return indeterminate(p_, k.value());
        if (kind_ == Kind::Indeterminate) return *this;
        PadicScaled x = *this;
        x.prec_ = k.value() - val_;
        x.reduce_unit();
        return x;
    }

    // Multiply by p^t (valuation bookkeeping for ramified scalings).
    PadicScaled shifted(const Rational& t) const {
        PadicScaled x = *this;
        if (kind_ != Kind::Zero) x.val_ += t;
        return x;
    }

    PadicScaled operator-() const {
        PadicScaled x = *this;
        if (kind_ == Kind::Normal) {
            x.unit_ = -x.unit_;
            x.reduce_unit();
        }
        return x;
    }

    friend PadicScaled operator+(const PadicScaled& a, const PadicScaled& b) {
        check_same(a, b);
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        ValuationQ err = vmin(a.error_valuation(), b.error_valuation());
        if (a.is_indeterminate() || b.is_indeterminate()) {
            const PadicScaled& other = a.is_indeterminate() ? b : a;
            if (other.is_indeterminate()) return indeterminate(a.p_, err.value());
            return other.capped(err);
        }
        const PadicScaled& lo = a.val_ <= b.val_ ? a : b;
        const PadicScaled& hi = a.val_ <= b.val_ ? b : a;
        Rational delta = hi.val_ - lo.val_;
        if (!is_integer(delta)) {
            // The higher term is not expressible on the lower term's digit
            // grid; it is absorbed as error, the valuation stays certified.
            return lo.capped(vmin(err, ValuationQ(hi.val_)));
        }
        Rational sum = lo.unit_ + hi.unit_ * Rational(ipow(lo.p_, to_long(Integer(delta))));
        if (err.is_infinite()) return from_rational(lo.p_, sum).shifted(lo.val_);
        Rational rel = err.value() - lo.val_;
        if (sum == 0 || Rational(padic_order(sum, lo.p_)) >= rel) return indeterminate(lo.p_, err.value());
        long k = padic_order(sum, lo.p_);
        return from_unit(lo.p_, sum / Rational(ipow(lo.p_, k)), lo.val_ + k, rel - k);
    }

    friend PadicScaled operator-(const PadicScaled& a, const PadicScaled& b) { return a + (-b); }

    friend PadicScaled operator*(const PadicScaled& a, const PadicScaled& b) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero()) return zero(a.p_);
        if (a.is_indeterminate() || b.is_indeterminate()) return indeterminate(a.p_, a.val_ + b.val_);
        std::optional<Rational> prec;
        if (a.prec_ && b.prec_) prec = a.prec_ < b.prec_ ? *a.prec_ : *b.prec_;
        else if (a.prec_) prec = a.prec_;
        else if (b.prec_) prec = b.prec_;
        return from_unit(a.p_, a.unit_ * b.unit_, a.val_ + b.val_, prec);
    }

    friend PadicScaled operator/(const PadicScaled& a, const PadicScaled& b) {
        check_same(a, b);
        if (b.is_zero()) throw DivisionByZero();
        if (b.is_indeterminate()) throw PrecisionExhausted("division by a value with no certified digit");
        if (a.is_zero()) return zero(a.p_);
        if (a.is_indeterminate()) return indeterminate(a.p_, a.val_ - b.val_);
        std::optional<Rational> prec;
        if (a.prec_ && b.prec_) prec = a.prec_ < b.prec_ ? *a.prec_ : *b.prec_;
        else if (a.prec_) prec = a.prec_;
        else if (b.prec_) prec = b.prec_;
        Rational u = b.unit_;
        Rational q;
        if (prec) {
            long m = to_long(floor_q(*prec));
            if (m == 0) q = 1;
            else {
                Integer mod = ipow(a.p_, static_cast<unsigned long>(m));
                Integer inv;
                Integer ur = residue_mod(u, mod);
                mpz_invert(inv.get_mpz_t(), ur.get_mpz_t(), mod.get_mpz_t());
                q = a.unit_ * Rational(inv);
            }
        } else {
            q = a.unit_ / u;
        }
        return from_unit(a.p_, q, a.val_ - b.val_, prec);
    }

    PadicScaled& operator+=(const PadicScaled& o) { return *this = *this + o; }
    PadicScaled& operator-=(const PadicScaled& o) { return *this = *this - o; }
    PadicScaled& operator*=(const PadicScaled& o) { return *this = *this * o; }

    PadicScaled pow(long e) const {
        if (e < 0) return from_long(p_, 1) / pow(-e);
        PadicScaled out = from_long(p_, 1);
        PadicScaled base = *this;
        while (e > 0) {
            if (e & 1) out *= base;
            base *= base;
            e >>= 1;
        }
        return out;
    }

    // True when a - b is certified to vanish up to absolute precision k.
    static bool agree_to(const PadicScaled& a, const PadicScaled& b, const Rational& k) {
        PadicScaled d = a - b;
        return d.valuation_lower_bound() >= ValuationQ(k);
    }

    // Residue of an integral value modulo p^m (requires valuation >= 0 and
    // integer valuation, and enough certified digits).
    Integer residue(long m) const {
        Integer mod = ipow(p_, static_cast<unsigned long>(m));
        if (kind_ == Kind::Zero) return 0;
        if (ValuationQ(m) <= valuation_lower_bound()) return 0;
        if (kind_ == Kind::Indeterminate)
            throw PrecisionExhausted("residue modulo p^" + std::to_string(m) + " not certified");
        if (!is_integer(val_) || val_ < 0) throw DomainViolation("value is not in Z_p");
        if (error_valuation() < ValuationQ(m))
            throw PrecisionExhausted("residue modulo p^" + std::to_string(m) + " not certified");
        Integer r = residue_mod(unit_, mod) * ipow(p_, to_long(Integer(val_)));
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
        return r;
    }

    std::string str() const {
        switch (kind_) {
            case Kind::Zero: return "0";
            case Kind::Indeterminate: return "O(" + std::to_string(p_) + "^" + val_.get_str() + ")";
            case Kind::Normal: {
                std::string s = unit_.get_str() + "*" + std::to_string(p_) + "^" + val_.get_str();
                if (prec_) s += " + O(" + std::to_string(p_) + "^" + Rational(val_ + *prec_).get_str() + ")";
                return s;
            }
        }
        return "";
    }

    // Structural equality of representations (used for round-trip tests).
    friend bool operator==(const PadicScaled& a, const PadicScaled& b) {
        if (a.p_ != b.p_ || a.kind_ != b.kind_) return false;
        if (a.kind_ == Kind::Zero) return true;
        if (a.kind_ == Kind::Indeterminate) return a.val_ == b.val_;
        return a.val_ == b.val_ && a.unit_ == b.unit_ && a.prec_ == b.prec_;
    }

private:
    static void check_prime(long p) {
        if (p < 2) throw InputError("prime must be >= 2");
        for (long q = 2; q * q <= p; ++q)
            if (p % q == 0) throw InputError(std::to_string(p) + " is not prime");
    }
    static void check_same(const PadicScaled& a, const PadicScaled& b) {
        if (a.p_ != b.p_) throw InputError("mixed primes in p-adic arithmetic");
    }
    void require_normal() const {
        if (kind_ != Kind::Normal) throw Error("value has no unit part: " + str());
    }
    void reduce_unit() {
        if (!prec_) return;
        long m = to_long(floor_q(*prec_));
        if (m <= 0) {
            unit_ = 1;
            return;
        }
        unit_ = Rational(residue_mod(unit_, ipow(p_, static_cast<unsigned long>(m))));
    }

    long p_;
    Kind kind_;
    Rational val_;
    Rational unit_;
    std::optional<Rational> prec_;
};

enum class ArithOp { Add, Sub, Mul, Div };

// Field operation that refuses to return a value without certified digits.
inline PadicScaled arith(const PadicScaled& a, const PadicScaled& b, ArithOp op) {
    PadicScaled r;
    switch (op) {
        case ArithOp::Add: r = a + b; break;
        case ArithOp::Sub: r = a - b; break;
        case ArithOp::Mul: r = a * b; break;
        case ArithOp::Div: r = a / b; break;
    }
    if (r.is_indeterminate())
        throw PrecisionExhausted("cancellation left no certified digit (" + r.str() + ")");
    return r;
}

inline ValuationQ valuation(const PadicScaled& x) { return x.valuation(); }

inline std::ostream& operator<<(std::ostream& os, const PadicScaled& x) { return os << x.str(); }

}  // namespace troppadic
