#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "troppadic/series.hpp"
#include "troppadic/weierstrass.hpp"

namespace troppadic {

// Immutable term over variables, integer constants, the symbolic prime p,
// +, *, integer powers and registered function symbols.
class Term {
public:
    enum class Kind { Const, Prime, Var, Add, Mul, Pow, Call };

    Term() : Term(constant(0)) {}

    static Term constant(const Integer& c) { return Term(Kind::Const, c, "", 0, {}); }
    static Term prime() { return Term(Kind::Prime, 0, "p", 0, {}); }
    static Term var(const std::string& name) { return Term(Kind::Var, 0, name, 0, {}); }
    static Term call(const std::string& name, std::vector<Term> args) { return Term(Kind::Call, 0, name, 0, std::move(args)).simplified(); }
    static Term sum(std::vector<Term> ts) { return Term(Kind::Add, 0, "", 0, std::move(ts)).simplified(); }
    static Term product(std::vector<Term> ts) { return Term(Kind::Mul, 0, "", 0, std::move(ts)).simplified(); }
    static Term power(const Term& b, long k) {
        if (k < 0) throw InputError("negative exponent in term");
        return Term(Kind::Pow, 0, "", k, {b}).simplified();
    }

    Kind kind() const { return n_->kind; }
    const Integer& value() const { return n_->value; }
    const std::string& name() const { return n_->name; }
    long exponent() const { return n_->exponent; }
    const std::vector<Term>& args() const { return n_->args; }
    bool is_const(long c) const { return kind() == Kind::Const && value() == c; }

    std::string str() const {
        switch (kind()) {
            case Kind::Const: return value().get_str();
            case Kind::Prime:
            case Kind::Var: return name();
            case Kind::Call: {
                std::string s = name() + "(";
                for (std::size_t i = 0; i < args().size(); ++i) s += (i ? ", " : "") + args()[i].str();
                return s + ")";
            }
            case Kind::Pow: {
                const Term& b = args()[0];
                bool atom = b.kind() == Kind::Var || b.kind() == Kind::Prime || b.kind() == Kind::Call ||
                            (b.kind() == Kind::Const && b.value() >= 0);
                return (atom ? b.str() : "(" + b.str() + ")") + "^" + std::to_string(exponent());
            }
            case Kind::Mul: {
                std::string s;
                for (std::size_t i = 0; i < args().size(); ++i) {
                    const Term& a = args()[i];
                    bool paren = a.kind() == Kind::Add || (i > 0 && a.kind() == Kind::Const && a.value() < 0);
                    s += (i ? "*" : "") + (paren ? "(" + a.str() + ")" : a.str());
                }
                return s;
            }
            case Kind::Add: {
                std::string s = args()[0].str();
                for (std::size_t i = 1; i < args().size(); ++i) {
                    auto [c, rest] = split_coefficient(args()[i]);
                    if (c < 0) s += " - " + with_coefficient(-c, rest).str();
                    else s += " + " + args()[i].str();
                }
                return s;
            }
        }
        return "";
    }

    friend bool operator==(const Term& a, const Term& b) { return a.str() == b.str(); }
    friend Term operator+(const Term& a, const Term& b) { return sum({a, b}); }
    friend Term operator-(const Term& a, const Term& b) { return sum({a, product({constant(-1), b})}); }
    friend Term operator*(const Term& a, const Term& b) { return product({a, b}); }

private:
    struct Node {
        Kind kind;
        Integer value;
        std::string name;
        long exponent;
        std::vector<Term> args;
    };
    std::shared_ptr<const Node> n_;

    Term(Kind k, const Integer& v, std::string name, long e, std::vector<Term> args)
        : n_(std::make_shared<const Node>(Node{k, v, std::move(name), e, std::move(args)})) {}

    // c * rest with rest == nullopt meaning the constant c itself.
    static std::pair<Integer, std::optional<Term>> split_coefficient(const Term& t) {
        if (t.kind() == Kind::Const) return {t.value(), std::nullopt};
        if (t.kind() == Kind::Mul && t.args()[0].kind() == Kind::Const) {
            std::vector<Term> rest(t.args().begin() + 1, t.args().end());
            if (rest.size() == 1) return {t.args()[0].value(), rest[0]};
            return {t.args()[0].value(), Term(Kind::Mul, 0, "", 0, rest)};
        }
        return {Integer(1), t};
    }
    static Term with_coefficient(const Integer& c, const std::optional<Term>& rest) {
        if (!rest) return constant(c);
        if (c == 1) return *rest;
        std::vector<Term> f{constant(c)};
        if (rest->kind() == Kind::Mul) f.insert(f.end(), rest->args().begin(), rest->args().end());
        else f.push_back(*rest);
        return Term(Kind::Mul, 0, "", 0, f);
    }

    // Flattens + and *, folds integer constants and collects equal summands.
    Term simplified() const {
        switch (kind()) {
            case Kind::Const:
            case Kind::Prime:
            case Kind::Var:
            case Kind::Call: return *this;
            case Kind::Pow: {
                const Term& b = args()[0];
                if (exponent() == 0) return constant(1);
                if (exponent() == 1) return b;
                if (b.kind() == Kind::Const) {
                    Integer r = 1;
                    for (long i = 0; i < exponent(); ++i) r *= b.value();
                    return constant(r);
                }
                if (b.kind() == Kind::Pow) return power(b.args()[0], b.exponent() * exponent());
                return *this;
            }
            case Kind::Mul: {
                Integer c = 1;
                std::vector<Term> rest;
                long primes = 0;
                std::function<void(const Term&)> add = [&](const Term& t) {
                    if (t.kind() == Kind::Mul) for (const auto& a : t.args()) add(a);
                    else if (t.kind() == Kind::Const) c *= t.value();
                    else if (t.kind() == Kind::Prime) ++primes;
                    else rest.push_back(t);
                };
                for (const auto& a : args()) add(a);
                // The symbolic p leads the non-integer factors.
                rest.insert(rest.begin(), primes, prime());
                if (c == 0 || rest.empty()) return constant(c);
                if (c == 1 && rest.size() == 1) return rest[0];
                if (c != 1) rest.insert(rest.begin(), constant(c));
                return Term(Kind::Mul, 0, "", 0, rest);
            }
            case Kind::Add: {
                Integer c = 0;
                std::vector<std::string> order;
                std::map<std::string, std::pair<Integer, Term>> acc;
                std::function<void(const Term&)> add = [&](const Term& t) {
                    if (t.kind() == Kind::Add) {
                        for (const auto& a : t.args()) add(a);
                        return;
                    }
                    auto [k, rest] = split_coefficient(t);
                    if (!rest) {
                        c += k;
                        return;
                    }
                    std::string key = rest->str();
                    auto it = acc.find(key);
                    if (it == acc.end()) {
                        order.push_back(key);
                        acc.emplace(key, std::make_pair(k, *rest));
                    } else {
                        it->second.first += k;
                    }
                };
                for (const auto& a : args()) add(a);
                std::vector<Term> out;
                for (const auto& key : order) {
                    const auto& [k, t] = acc.at(key);
                    if (k != 0) out.push_back(with_coefficient(k, t));
                }
                if (c != 0) out.push_back(constant(c));
                if (out.empty()) return constant(0);
                if (out.size() == 1) return out[0];
                return Term(Kind::Add, 0, "", 0, out);
            }
        }
        return *this;
    }
};

// A function symbol: its arity, its series realization at a degree budget,
// and the partial derivatives as terms in the placeholder variables #0, #1, ...
struct FunctionSymbol {
    std::string name;
    int arity = 1;
    std::function<RestrictedSeries(long p, long degree)> realization;
    std::vector<Term> partials;  // empty: no derivative rule registered
};

inline std::string placeholder(int j) { return "#" + std::to_string(j); }

// E_p(x) = exp(px) for odd p and exp(4x) for p = 2.
inline RestrictedSeries exp_series(long p, long degree) {
    long q = p == 2 ? 4 : p;
    RestrictedSeries f(p, 1);
    TailBound t;
    t.cutoff = degree;
    // v(q^k/k!) >= k v(q) - (k-1)/(p-1).
    Rational vq = p == 2 ? 2 : 1;
    t.slope = vq - Rational(1) / (p - 1);
    t.offset = ValuationQ(Rational(1) / (p - 1));
    f.set_tail(t);
    Rational c = 1;
    for (long k = 0; k <= degree; ++k) {
        if (k > 0) c = c * q / k;
        f.set_term({static_cast<int>(k)}, PadicScaled::from_rational(p, c));
    }
    return f;
}

class SymbolTable {
public:
    void register_symbol(FunctionSymbol s) {
        if (s.arity < 1) throw InputError("function symbols need positive arity");
        if (!s.partials.empty() && static_cast<int>(s.partials.size()) != s.arity)
            throw InputError("one partial derivative per argument is required");
        std::string name = s.name;
        table_[name] = std::move(s);
    }
    const FunctionSymbol* find(const std::string& name) const {
        auto it = table_.find(name);
        return it == table_.end() ? nullptr : &it->second;
    }
    const FunctionSymbol& at(const std::string& name) const {
        const FunctionSymbol* s = find(name);
        if (!s) throw InputError("unknown function symbol '" + name + "'");
        return *s;
    }

    // The exponential family {E_p}, closed under derivation: E_p' = q E_p.
    static SymbolTable standard(long p) {
        SymbolTable t;
        Term q = p == 2 ? Term::constant(4) : Term::prime();
        t.register_symbol({"Ep", 1, exp_series, {q * Term::call("Ep", {Term::var(placeholder(0))})}});
        return t;
    }

private:
    std::map<std::string, FunctionSymbol> table_;
};

// Recursive-descent parser for infix terms such as "Ep(x)*Ep(y) + 3*x".
class TermParser {
public:
    TermParser(std::string text, const SymbolTable* symbols) : s_(std::move(text)), symbols_(symbols) {}

    Term parse() {
        Term t = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return t;
    }

private:
    std::string s_;
    std::size_t i_ = 0;
    const SymbolTable* symbols_;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("term parse error at position " + std::to_string(i_ + 1) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    Term expr() {
        std::vector<Term> parts{term()};
        while (true) {
            if (eat('+')) parts.push_back(term());
            else if (eat('-')) parts.push_back(Term::product({Term::constant(-1), term()}));
            else break;
        }
        return Term::sum(parts);
    }
    Term term() {
        std::vector<Term> parts{unary()};
        while (eat('*')) parts.push_back(unary());
        return Term::product(parts);
    }
    Term unary() {
        if (eat('-')) return Term::product({Term::constant(-1), unary()});
        return power();
    }
    Term power() {
        Term b = atom();
        if (eat('^')) {
            skip();
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (st == i_) fail("expected a nonnegative integer exponent");
            return Term::power(b, std::stol(s_.substr(st, i_ - st)));
        }
        return b;
    }
    Term atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return Term::constant(Integer(s_.substr(st, i_ - st)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            std::string id = s_.substr(st, i_ - st);
            if (eat('(')) {
                std::vector<Term> args{expr()};
                while (eat(',')) args.push_back(expr());
                if (!eat(')')) fail("expected ')'");
                if (symbols_) {
                    const FunctionSymbol* f = symbols_->find(id);
                    if (!f) fail("unknown function symbol '" + id + "'");
                    if (static_cast<int>(args.size()) != f->arity) fail("wrong number of arguments for '" + id + "'");
                }
                return Term::call(id, args);
            }
            if (id == "p") return Term::prime();
            return Term::var(id);
        }
        if (eat('(')) {
            Term t = expr();
            if (!eat(')')) fail("expected ')'");
            return t;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

inline Term parse_term(const std::string& text, const SymbolTable* symbols = nullptr) {
    return TermParser(text, symbols).parse();
}

inline Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
    switch (t.kind()) {
        case Term::Kind::Const:
        case Term::Kind::Prime: return t;
        case Term::Kind::Var: {
            auto it = sub.find(t.name());
            return it == sub.end() ? t : it->second;
        }
        case Term::Kind::Pow: return Term::power(substitute(t.args()[0], sub), t.exponent());
        default: {
            std::vector<Term> a;
            for (const auto& x : t.args()) a.push_back(substitute(x, sub));
            if (t.kind() == Term::Kind::Add) return Term::sum(a);
            if (t.kind() == Term::Kind::Mul) return Term::product(a);
            return Term::call(t.name(), a);
        }
    }
}

inline void collect_variables(const Term& t, std::set<std::string>& out) {
    if (t.kind() == Term::Kind::Var) out.insert(t.name());
    for (const auto& a : t.args()) collect_variables(a, out);
}

inline std::set<std::string> variables(const Term& t) {
    std::set<std::string> out;
    collect_variables(t, out);
    return out;
}

inline bool has_calls(const Term& t) {
    if (t.kind() == Term::Kind::Call) return true;
    for (const auto& a : t.args())
        if (has_calls(a)) return true;
    return false;
}

// d^order t / d var^order by the sum, product, power and chain rules.
inline Term derive_term(const Term& t, const std::string& var, long order, const SymbolTable& symbols) {
    if (order < 0) throw InputError("negative derivative order");
    if (order == 0) return t;
    if (order > 1) return derive_term(derive_term(t, var, 1, symbols), var, order - 1, symbols);
    switch (t.kind()) {
        case Term::Kind::Const:
        case Term::Kind::Prime: return Term::constant(0);
        case Term::Kind::Var: return Term::constant(t.name() == var ? 1 : 0);
        case Term::Kind::Add: {
            std::vector<Term> out;
            for (const auto& a : t.args()) out.push_back(derive_term(a, var, 1, symbols));
            return Term::sum(out);
        }
        case Term::Kind::Mul: {
            std::vector<Term> out;
            for (std::size_t i = 0; i < t.args().size(); ++i) {
                std::vector<Term> f = t.args();
                f[i] = derive_term(f[i], var, 1, symbols);
                out.push_back(Term::product(f));
            }
            return Term::sum(out);
        }
        case Term::Kind::Pow: {
            const Term& b = t.args()[0];
            return Term::product({Term::constant(t.exponent()), Term::power(b, t.exponent() - 1),
                                  derive_term(b, var, 1, symbols)});
        }
        case Term::Kind::Call: {
            const FunctionSymbol& f = symbols.at(t.name());
            if (f.partials.empty()) throw NotClosedUnderDerivation(t.name());
            std::map<std::string, Term> sub;
            for (int j = 0; j < f.arity; ++j) sub[placeholder(j)] = t.args()[j];
            std::vector<Term> out;
            for (int j = 0; j < f.arity; ++j)
                out.push_back(Term::product({substitute(f.partials[j], sub), derive_term(t.args()[j], var, 1, symbols)}));
            return Term::sum(out);
        }
    }
    return t;
}

// Numerical value of a term at a point (function symbols realized to the
// given degree budget, their tails bounding the error).
inline PadicScaled evaluate_term(const Term& t, long p, const std::map<std::string, PadicScaled>& at,
                                 const SymbolTable& symbols, long degree) {
    switch (t.kind()) {
        case Term::Kind::Const: return PadicScaled::from_integer(p, t.value());
        case Term::Kind::Prime: return PadicScaled::from_long(p, p);
        case Term::Kind::Var: {
            auto it = at.find(t.name());
            if (it == at.end()) throw InputError("no value for variable '" + t.name() + "'");
            return it->second;
        }
        case Term::Kind::Add: {
            PadicScaled s = PadicScaled::zero(p);
            for (const auto& a : t.args()) s += evaluate_term(a, p, at, symbols, degree);
            return s;
        }
        case Term::Kind::Mul: {
            PadicScaled s = PadicScaled::from_long(p, 1);
            for (const auto& a : t.args()) s *= evaluate_term(a, p, at, symbols, degree);
            return s;
        }
        case Term::Kind::Pow: return evaluate_term(t.args()[0], p, at, symbols, degree).pow(t.exponent());
        case Term::Kind::Call: {
            const FunctionSymbol& f = symbols.at(t.name());
            if (static_cast<int>(t.args().size()) != f.arity) throw InputError("wrong arity for '" + t.name() + "'");
            std::vector<PadicScaled> x;
            for (const auto& a : t.args()) x.push_back(evaluate_term(a, p, at, symbols, degree));
            return evaluate(f.realization(p, degree), x);
        }
    }
    return PadicScaled::zero(p);
}

namespace detail {

inline RestrictedSeries truncated(const RestrictedSeries& f, long degree) {
    std::vector<std::pair<Exponent, PadicScaled>> t;
    for (const auto& [e, c] : f.terms())
        if (troppadic::degree(e) <= degree) t.emplace_back(e, c);
    RestrictedSeries out = RestrictedSeries::polynomial(f.prime(), f.nvars(), t);
    if (out.cutoff() < degree) {
        TailBound tb = out.tail();
        tb.cutoff = degree;
        out.set_tail(tb);
    }
    return out;
}

// F(u_1, ..., u_k) for arguments vanishing at the origin with coefficients in
// Z_p. With v(c_K) >= s|K| + b and v(u_J) >= sigma|J| + L, every coefficient
// of degree m of c_K u^K has valuation >= sigma m + |K|(s + L) + b, |K| <= m.
inline RestrictedSeries compose(const RestrictedSeries& F, const std::vector<RestrictedSeries>& u, long degree) {
    long p = F.prime();
    int n = u.empty() ? 0 : u[0].nvars();
    for (const auto& a : u) {
        if (!a.noise().is_infinite()) throw InputError("function arguments must be exactly known");
        if (!a.coefficient(Exponent(n, 0)).is_zero())
            throw InputError("function arguments must vanish at the origin");
        if (a.gauss_lower_bound() < ValuationQ(0)) throw InputError("function arguments must have coefficients in Z_p");
    }
    bool poly = F.is_polynomial();
    for (const auto& a : u) poly = poly && a.is_polynomial();
    long out_cut = std::min(degree, F.cutoff());
    Rational s = F.is_polynomial() ? Rational(0) : F.tail().slope;
    Rational sigma = s;
    for (const auto& a : u)
        if (!a.is_polynomial()) {
            sigma = std::min(sigma, a.tail().slope);
            out_cut = std::min(out_cut, a.cutoff());
        }
    if (poly) out_cut = degree;
    std::vector<RestrictedSeries> base;
    for (const auto& a : u) base.push_back(truncated(a, out_cut));
    std::vector<std::vector<RestrictedSeries>> pw(u.size());
    auto power = [&](std::size_t j, int k) -> const RestrictedSeries& {
        auto& v = pw[j];
        if (v.empty()) v.push_back(RestrictedSeries::constant(p, n, PadicScaled::from_long(p, 1)));
        while (static_cast<int>(v.size()) <= k) v.push_back(truncated(v.back() * base[j], out_cut));
        return v[k];
    };
    RestrictedSeries acc = RestrictedSeries::polynomial(p, n, {});
    acc = truncated(acc, out_cut);
    for (const auto& [K, c] : F.terms()) {
        if (troppadic::degree(K) > out_cut) continue;
        RestrictedSeries term = RestrictedSeries::constant(p, n, c);
        for (std::size_t j = 0; j < u.size(); ++j)
            if (K[j] > 0) term = truncated(term * power(j, K[j]), out_cut);
        acc = acc + term;
    }
    if (poly) {
        long top = 0;
        for (const auto& [K, c] : F.terms()) top = std::max(top, troppadic::degree(K));
        long udeg = 0;
        for (const auto& a : u) udeg = std::max(udeg, a.max_stored_degree());
        if (top * udeg > degree) throw BudgetExceeded("composition exceeds the degree budget");
        return acc;
    }
    ValuationQ L = ValuationQ::infinity();
    for (const auto& a : u) L = vmin(L, a.linear_floor(sigma));
    Rational slope = sigma;
    if (!L.is_infinite() && s + L.value() < 0) slope += s + L.value();
    // c_0 only reaches degree 0, which is always stored.
    RestrictedSeries nonconstant = F;
    nonconstant.set_term(Exponent(F.nvars(), 0), PadicScaled::zero(p));
    ValuationQ b = nonconstant.linear_floor(s);
    RestrictedSeries out(p, n);
    out.set_tail(TailBound{out_cut, slope, b});
    for (const auto& [e, c] : acc.terms()) out.set_term(e, c);
    return out;
}

inline void check_degree(const RestrictedSeries& f, long degree) {
    if (f.is_polynomial() && f.max_stored_degree() > degree)
        throw BudgetExceeded("term degree " + std::to_string(f.max_stored_degree()) + " exceeds the budget " +
                             std::to_string(degree));
}

inline RestrictedSeries realize_rec(const Term& t, const std::vector<std::string>& vars, long p,
                                    const SymbolTable& symbols, long degree) {
    int n = static_cast<int>(vars.size());
    switch (t.kind()) {
        case Term::Kind::Const: return RestrictedSeries::constant(p, n, PadicScaled::from_integer(p, t.value()));
        case Term::Kind::Prime: return RestrictedSeries::constant(p, n, PadicScaled::from_long(p, p));
        case Term::Kind::Var: {
            auto it = std::find(vars.begin(), vars.end(), t.name());
            if (it == vars.end()) throw InputError("variable '" + t.name() + "' is not in the variable list");
            return RestrictedSeries::polynomial_z(p, n, {{unit_exponent(n, static_cast<int>(it - vars.begin())), 1}});
        }
        case Term::Kind::Add: {
            RestrictedSeries s = realize_rec(t.args()[0], vars, p, symbols, degree);
            for (std::size_t i = 1; i < t.args().size(); ++i) s = s + realize_rec(t.args()[i], vars, p, symbols, degree);
            return s;
        }
        case Term::Kind::Mul: {
            RestrictedSeries s = realize_rec(t.args()[0], vars, p, symbols, degree);
            for (std::size_t i = 1; i < t.args().size(); ++i) {
                s = s * realize_rec(t.args()[i], vars, p, symbols, degree);
                check_degree(s, degree);
            }
            return s;
        }
        case Term::Kind::Pow: {
            RestrictedSeries b = realize_rec(t.args()[0], vars, p, symbols, degree);
            RestrictedSeries s = RestrictedSeries::constant(p, n, PadicScaled::from_long(p, 1));
            for (long i = 0; i < t.exponent(); ++i) {
                s = s * b;
                check_degree(s, degree);
            }
            return s;
        }
        case Term::Kind::Call: {
            const FunctionSymbol& f = symbols.at(t.name());
            if (static_cast<int>(t.args().size()) != f.arity) throw InputError("wrong arity for '" + t.name() + "'");
            std::vector<RestrictedSeries> u;
            for (const auto& a : t.args()) u.push_back(realize_rec(a, vars, p, symbols, degree));
            return compose(f.realization(p, degree), u, degree);
        }
    }
    return RestrictedSeries(p, n);
}

}  // namespace detail

// The series denoted by t in the given variable order: stored terms up to
// budget.degree, a sound composed tail, and BudgetExceeded when the tail does
// not certify precision p^budget.precision beyond the stored degrees.
inline RestrictedSeries realize(const Term& t, const std::vector<std::string>& vars, long p,
                                const SymbolTable& symbols, const Budget& budget) {
    detail::check_budget(budget);
    RestrictedSeries f = detail::realize_rec(t, vars, p, symbols, budget.degree);
    detail::check_degree(f, budget.degree);
    if (!f.is_polynomial() && f.tail().at(f.cutoff() + 1) < ValuationQ(budget.precision))
        throw BudgetExceeded("degree budget " + std::to_string(budget.degree) + " certifies only p^" +
                             f.tail().at(f.cutoff() + 1).str() + " beyond the stored terms");
    return f;
}

// Partitions of d, largest part first, in decreasing lexicographic order.
inline std::vector<std::vector<int>> partitions(int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int maxpart) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(left, maxpart); k >= 1; --k) {
            cur.push_back(k);
            rec(left - k, k);
            cur.pop_back();
        }
    };
    rec(d, d);
    return out;
}

// Polynomial/analytic equations (each "= 0") over named unknowns, with the
// linear block M * unknowns = rhs that determines the coefficient unknowns.
struct DefiningSystem {
    std::string configuration;
    std::vector<int> multiplicities;
    std::vector<std::string> unknowns;
    std::vector<std::string> parameters;
    std::vector<Term> equations;
    std::vector<Term> nonzero;  // each must not vanish
    std::vector<std::vector<Term>> matrix;
    std::vector<std::string> matrix_unknowns;
    std::vector<Term> rhs;
    std::vector<std::string> row_kinds;
};

namespace detail {

inline std::vector<std::string> parameters_of(const std::vector<Term>& ts, const std::set<std::string>& exclude) {
    std::set<std::string> all;
    for (const auto& t : ts) collect_variables(t, all);
    std::vector<std::string> out;
    for (const auto& v : all)
        if (!exclude.count(v)) out.push_back(v);
    return out;
}

inline void check_fresh(const std::vector<std::string>& params, const std::vector<std::string>& unknowns) {
    std::set<std::string> u(unknowns.begin(), unknowns.end());
    for (const auto& v : params)
        if (u.count(v)) throw InputError("variable '" + v + "' clashes with a generated unknown");
}

inline Term linear_row_equation(const std::vector<Term>& row, const std::vector<std::string>& xs, const Term& rhs) {
    std::vector<Term> s;
    for (std::size_t j = 0; j < row.size(); ++j) s.push_back(row[j] * Term::var(xs[j]));
    return Term::sum(s) - rhs;
}

}  // namespace detail

// For f of order d in y and g = Q f + sum_{j<d} A_j y^j: one system per
// multiplicity configuration of the d roots of f(x, .). A root alpha of
// multiplicity m contributes f^(r)(alpha) = 0 and the derivative rows
// sum_j j!/(j-r)! alpha^(j-r) A_j = g^(r)(alpha) for r < m.
inline std::vector<DefiningSystem> coefficient_defining_systems(const Term& f, const Term& g, int d,
                                                                const std::string& y, const SymbolTable& symbols) {
    if (d < 1) throw InputError("order must be at least 1");
    std::vector<DefiningSystem> out;
    for (const auto& parts : partitions(d)) {
        DefiningSystem sys;
        sys.multiplicities = parts;
        for (std::size_t i = 0; i < parts.size(); ++i)
            sys.configuration += (i ? "+" : "") + std::to_string(parts[i]);
        int k = static_cast<int>(parts.size());
        for (int i = 1; i <= k; ++i) sys.unknowns.push_back("alpha_" + std::to_string(i));
        for (int j = 0; j < d; ++j) sys.matrix_unknowns.push_back("A_" + std::to_string(j));
        sys.unknowns.insert(sys.unknowns.end(), sys.matrix_unknowns.begin(), sys.matrix_unknowns.end());
        sys.parameters = detail::parameters_of({f, g}, {y});
        detail::check_fresh(sys.parameters, sys.unknowns);
        for (int i = 0; i < k; ++i) {
            Term a = Term::var(sys.unknowns[i]);
            std::map<std::string, Term> at{{y, a}};
            for (int r = 0; r < parts[i]; ++r) {
                sys.equations.push_back(substitute(derive_term(f, y, r, symbols), at));
                std::vector<Term> row;
                for (int j = 0; j < d; ++j) {
                    if (j < r) {
                        row.push_back(Term::constant(0));
                        continue;
                    }
                    Integer ff = 1;
                    for (int q = 0; q < r; ++q) ff *= j - q;
                    row.push_back(Term::constant(ff) * Term::power(a, j - r));
                }
                sys.matrix.push_back(row);
                sys.rhs.push_back(substitute(derive_term(g, y, r, symbols), at));
                sys.row_kinds.push_back(r == 0 ? "root " + sys.unknowns[i]
                                               : "derivative " + std::to_string(r) + " at " + sys.unknowns[i]);
            }
        }
        for (std::size_t r = 0; r < sys.matrix.size(); ++r)
            sys.equations.push_back(detail::linear_row_equation(sys.matrix[r], sys.matrix_unknowns, sys.rhs[r]));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) sys.nonzero.push_back(Term::var(sys.unknowns[i]) - Term::var(sys.unknowns[j]));
        out.push_back(std::move(sys));
    }
    return out;
}

// Roots z of P(z, a_0(z, y), ..., a_s(z, y), y) through the s+1 distinct roots
// t_i of f(., z, y): root equations, the Vandermonde block for the a_j, the
// P-equation and t_ij (t_i - t_j) - 1 = 0 forcing distinctness.
inline DefiningSystem distinctness_root_system(const Term& P, const Term& f, const Term& g, int s,
                                               const std::string& root = "t", const std::string& z = "z") {
    if (s < 0) throw InputError("s must be nonnegative");
    if (has_calls(P)) throw InputError("P must be a polynomial over Z");
    DefiningSystem sys;
    sys.configuration = "distinct s=" + std::to_string(s);
    sys.multiplicities.assign(s + 1, 1);
    std::vector<std::string> ts, as;
    for (int i = 0; i <= s; ++i) ts.push_back("t_" + std::to_string(i));
    for (int j = 0; j <= s; ++j) as.push_back("a_" + std::to_string(j));
    sys.unknowns.push_back(z);
    sys.unknowns.insert(sys.unknowns.end(), ts.begin(), ts.end());
    sys.unknowns.insert(sys.unknowns.end(), as.begin(), as.end());
    std::vector<std::string> tij;
    for (int i = 0; i <= s; ++i)
        for (int j = i + 1; j <= s; ++j) tij.push_back("t_" + std::to_string(i) + "_" + std::to_string(j));
    sys.unknowns.insert(sys.unknowns.end(), tij.begin(), tij.end());
    std::set<std::string> excl(sys.unknowns.begin(), sys.unknowns.end());
    excl.insert(root);
    sys.parameters = detail::parameters_of({P, f, g}, excl);
    detail::check_fresh(sys.parameters, sys.unknowns);
    if (root == z) throw InputError("root and z variables must differ");
    sys.matrix_unknowns = as;
    for (int i = 0; i <= s; ++i) sys.equations.push_back(substitute(f, {{root, Term::var(ts[i])}}));
    for (int i = 0; i <= s; ++i) {
        std::vector<Term> row;
        for (int j = 0; j <= s; ++j) row.push_back(Term::power(Term::var(ts[i]), j));
        sys.matrix.push_back(row);
        sys.rhs.push_back(substitute(g, {{root, Term::var(ts[i])}}));
        sys.row_kinds.push_back("root " + ts[i]);
        sys.equations.push_back(detail::linear_row_equation(row, as, sys.rhs.back()));
    }
    sys.equations.push_back(P);
    std::size_t q = 0;
    for (int i = 0; i <= s; ++i)
        for (int j = i + 1; j <= s; ++j)
            sys.equations.push_back(Term::var(tij[q++]) * (Term::var(ts[i]) - Term::var(ts[j])) - Term::constant(1));
    return sys;
}

}  // namespace troppadic
