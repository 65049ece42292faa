// Sparse multivariate polynomials over exact rationals, plus the bivariate
// rational functions used for the Moser coefficient r_t(f).
//
// Terms are kept in graded-lexicographic order with no zero coefficients, so
// structural equality coincides with mathematical equality.  All values are
// immutable in practice: operations return new polynomials.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "nambu/rational.hpp"

namespace nambu {

// Exponent vector of one monomial; length == num_vars of the polynomial.
using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    return d;
}

struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;  // lexicographic tie-break
    }
};

class Poly {
public:
    using TermMap = std::map<Exponents, Rational, GrlexLess>;

    explicit Poly(int num_vars = 0) : nv_(check_nv(num_vars)) {}

    static Poly constant(int nv, const Rational& c);
    static Poly variable(int nv, int index);
    static Poly monomial(int nv, Exponents e, const Rational& c);

    int num_vars() const { return nv_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    Rational coeff(const Exponents& e) const;
    Rational constant_term() const { return coeff(Exponents(nv_, 0u)); }
    // Degree of the zero polynomial is -1.
    int degree() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& p, const Rational& c);
    friend Poly operator*(const Rational& c, const Poly& p) { return p * c; }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nv_ == b.nv_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(unsigned e) const;
    Poly diff(int var) const;
    Rational eval(const std::vector<Rational>& point) const;
    double eval(const std::vector<double>& point) const;
    Poly homogeneous_part(unsigned deg) const;

    // Divides by the single variable x_var; every term must contain it.
    Poly exact_divide_by_variable(int var) const;

    void add_term(const Exponents& e, const Rational& c);

private:
    static int check_nv(int nv);
    int nv_;
    TermMap terms_;
};

// k(f) for univariate k; exact substitution by Horner's scheme.
Poly compose_univariate(const Poly& k, const Poly& f);

// Simultaneous substitution x_i -> images[i]; all images share a variable count.
Poly substitute(const Poly& p, const std::vector<Poly>& images);

// Reinterprets p in a larger variable ring (new variables get exponent 0).
Poly lift_vars(const Poly& p, int new_num_vars);

// Quotient of two polynomials in the fixed symbol pair (f, t).  Never reduced
// by gcd cancellation; zero-testing is `num.is_zero()`.
struct RationalFunc {
    Poly num;
    Poly den;

    RationalFunc(Poly n, Poly d);

    bool is_zero() const { return num.is_zero(); }
    double eval(double f, double t) const;
    double eval_den(double f, double t) const;
    // d/d(var) by the quotient rule; denominator becomes den^2.
    RationalFunc partial(int var) const;
};

}  // namespace nambu
