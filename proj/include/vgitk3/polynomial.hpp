#pragma once

#include "vgitk3/exact.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vgitk3 {

using Exponent = std::vector<std::int64_t>;

// Polynomial over Q in a fixed number of variables x0, x1, ...
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t i);
    static Polynomial linear(const RatVector& coeffs);

    std::size_t nvars() const { return nvars_; }
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Degree of a homogeneous polynomial; throws if the polynomial is zero or not homogeneous.
    std::int64_t homogeneous_degree() const;
    std::vector<Exponent> support() const;

    void add_term(const Exponent& e, const Rational& c);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rational& c) const;
    Polynomial pow(std::uint64_t e) const;
    bool operator==(const Polynomial& o) const = default;

    // Replace x_i by images[i].
    Polynomial substitute(const std::vector<Polynomial>& images) const;

    std::string str() const;

private:
    void check_compatible(const Polynomial& o) const;

    std::size_t nvars_ = 0;
    std::map<Exponent, Rational> terms_;
};

// Parses expressions in x0..x{nvars-1}, rational constants and named parameters,
// with + - * / ^ and parentheses. Division is by constants only.
Polynomial parse_polynomial(const std::string& text, std::size_t nvars,
                            const std::map<std::string, Rational>& params = {});

}  // namespace vgitk3
