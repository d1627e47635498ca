#include "vgitk3/polynomial.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace vgitk3 {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars)
        throw std::invalid_argument("variable index out of range");
    Polynomial p(nvars);
    Exponent e(nvars, 0);
    e[i] = 1;
    p.add_term(e, 1);
    return p;
}

Polynomial Polynomial::linear(const RatVector& coeffs) {
    Polynomial p(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        Exponent e(coeffs.size(), 0);
        e[i] = 1;
        p.add_term(e, coeffs[i]);
    }
    return p;
}

bool Polynomial::is_constant() const {
    for (const auto& [e, c] : terms_)
        for (auto x : e)
            if (x != 0)
                return false;
    return true;
}

std::int64_t Polynomial::homogeneous_degree() const {
    if (terms_.empty())
        throw std::invalid_argument("zero polynomial has no degree");
    std::int64_t deg = -1;
    for (const auto& [e, c] : terms_) {
        std::int64_t s = 0;
        for (auto x : e)
            s += x;
        if (deg >= 0 && s != deg)
            throw std::invalid_argument("polynomial is not homogeneous");
        deg = s;
    }
    return deg;
}

std::vector<Exponent> Polynomial::support() const {
    std::vector<Exponent> s;
    for (const auto& [e, c] : terms_)
        s.push_back(e);
    return s;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
    if (e.size() != nvars_)
        throw std::invalid_argument("exponent length does not match variable count");
    if (c == 0)
        return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0)
        terms_.erase(it);
}

void Polynomial::check_compatible(const Polynomial& o) const {
    if (nvars_ != o.nvars_)
        throw std::invalid_argument("polynomials in different numbers of variables");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r(*this);
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_)
        r.terms_.emplace(e, -c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Exponent e(nvars_);
            for (std::size_t i = 0; i < nvars_; ++i)
                e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    Polynomial r(nvars_);
    if (c == 0)
        return r;
    for (const auto& [e, x] : terms_)
        r.terms_.emplace(e, x * c);
    return r;
}

Polynomial Polynomial::pow(std::uint64_t e) const {
    Polynomial result = constant(nvars_, 1);
    Polynomial base = *this;
    while (e) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return result;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
    if (images.size() != nvars_)
        throw std::invalid_argument("substitute: wrong number of images");
    std::size_t m = images.empty() ? 0 : images.front().nvars();
    Polynomial r(m);
    for (const auto& [e, c] : terms_) {
        Polynomial term = constant(m, c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] > 0)
                term = term * images[i].pow(static_cast<std::uint64_t>(e[i]));
        r = r + term;
    }
    return r;
}

std::string Polynomial::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = abs(c);
        bool mono = false;
        for (auto x : e)
            if (x)
                mono = true;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        bool wrote = false;
        if (a != 1 || !mono) {
            os << a.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i])
                continue;
            if (wrote)
                os << "*";
            os << "x" << i;
            if (e[i] > 1)
                os << "^" << e[i];
            wrote = true;
        }
    }
    return os.str();
}

namespace {

class Parser {
public:
    Parser(const std::string& s, std::size_t nvars, const std::map<std::string, Rational>& params)
        : s_(s), nvars_(nvars), params_(params) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " +
                                    what + " in '" + s_ + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool starts_atom() {
        skip();
        if (pos_ >= s_.size())
            return false;
        unsigned char c = static_cast<unsigned char>(s_[pos_]);
        return std::isalnum(c) || c == '(' || c == '_';
    }

    Polynomial expr() {
        Polynomial acc = term();
        for (;;) {
            if (peek('+')) {
                ++pos_;
                acc = acc + term();
            } else if (peek('-')) {
                ++pos_;
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term() {
        Polynomial acc = unary();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                acc = acc * unary();
            } else if (peek('/')) {
                ++pos_;
                Polynomial d = unary();
                if (!d.is_constant() || d.is_zero())
                    fail("division by a non-constant or zero expression");
                acc = acc * (Rational(1) / d.terms().begin()->second);
            } else if (starts_atom()) {
                acc = acc * unary();
            } else {
                return acc;
            }
        }
    }

    Polynomial unary() {
        if (peek('-')) {
            ++pos_;
            return -unary();
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return power();
    }

    Polynomial power() {
        Polynomial base = atom();
        if (peek('^')) {
            ++pos_;
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected a nonnegative integer exponent");
            if (pos_ - start > 6)
                fail("exponent too large");
            base = base.pow(std::stoull(s_.substr(start, pos_ - start)));
        }
        return base;
    }

    Polynomial atom() {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!peek(')'))
                fail("expected ')'");
            ++pos_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            return Polynomial::constant(nvars_, Rational(Integer(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            // variables are x followed by digits; anything else is a parameter name
            if (c == 'x' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                std::size_t start = ++pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
                std::size_t idx = std::stoul(s_.substr(start, pos_ - start));
                if (idx >= nvars_)
                    fail("variable x" + std::to_string(idx) + " out of range");
                return Polynomial::variable(nvars_, idx);
            }
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto it = params_.find(name);
            if (it == params_.end())
                fail("unknown symbol '" + name + "'");
            return Polynomial::constant(nvars_, it->second);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    std::size_t nvars_;
    const std::map<std::string, Rational>& params_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, std::size_t nvars,
                            const std::map<std::string, Rational>& params) {
    return Parser(text, nvars, params).parse();
}

}  // namespace vgitk3
