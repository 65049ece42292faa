#include "nambu/poly.hpp"

#include <stdexcept>

namespace nambu {

int Poly::check_nv(int nv) {
    if (nv < 0) throw std::invalid_argument("Poly: negative variable count");
    return nv;
}

Poly Poly::constant(int nv, const Rational& c) {
    Poly p(nv);
    p.add_term(Exponents(nv, 0u), c);
    return p;
}

Poly Poly::variable(int nv, int index) {
    if (index < 0 || index >= nv) throw std::out_of_range("Poly::variable: index out of range");
    Exponents e(nv, 0u);
    e[index] = 1;
    return monomial(nv, std::move(e), Rational(1));
}

Poly Poly::monomial(int nv, Exponents e, const Rational& c) {
    if (static_cast<int>(e.size()) != nv)
        throw std::invalid_argument("Poly::monomial: exponent vector length mismatch");
    Poly p(nv);
    p.add_term(e, c);
    return p;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nv_)
        throw std::invalid_argument("Poly::add_term: exponent vector length mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Rational Poly::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(total_degree(terms_.rbegin()->first));
}

Poly Poly::operator-() const {
    Poly r(nv_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (nv_ != o.nv_) throw std::invalid_argument("Poly: variable count mismatch in +");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (nv_ != o.nv_) throw std::invalid_argument("Poly: variable count mismatch in -");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.nv_ != b.nv_) throw std::invalid_argument("Poly: variable count mismatch in *");
    Poly r(a.nv_);
    Exponents e(a.nv_, 0u);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.nv_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly operator*(const Poly& p, const Rational& c) {
    Poly r(p.nv_);
    if (c.is_zero()) return r;
    for (const auto& [e, pc] : p.terms_) r.terms_.emplace(e, pc * c);
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = Poly::constant(nv_, Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * (*this);
    return r;
}

Poly Poly::diff(int var) const {
    if (var < 0 || var >= nv_) throw std::out_of_range("Poly::diff: variable index out of range");
    Poly r(nv_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        r.add_term(d, c * Rational(static_cast<long>(e[var])));
    }
    return r;
}

Rational Poly::eval(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != nv_)
        throw std::invalid_argument("Poly::eval: point length mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < nv_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
        acc += term;
    }
    return acc;
}

double Poly::eval(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != nv_)
        throw std::invalid_argument("Poly::eval: point length mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.to_double();
        for (int i = 0; i < nv_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
        acc += term;
    }
    return acc;
}

Poly Poly::homogeneous_part(unsigned deg) const {
    Poly r(nv_);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) == deg) r.terms_.emplace(e, c);
    return r;
}

Poly Poly::exact_divide_by_variable(int var) const {
    if (var < 0 || var >= nv_) throw std::out_of_range("Poly: variable index out of range");
    Poly r(nv_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0)
            throw std::domain_error("Poly: term not divisible by requested variable");
        Exponents d = e;
        d[var] -= 1;
        r.terms_.emplace(d, c);
    }
    return r;
}

Poly compose_univariate(const Poly& k, const Poly& f) {
    if (k.num_vars() != 1) throw std::invalid_argument("compose_univariate: k must be univariate");
    int d = k.degree();
    Poly r(f.num_vars());
    if (d < 0) return r;
    for (int j = d; j >= 0; --j) {
        r = r * f;
        r += Poly::constant(f.num_vars(), k.coeff(Exponents{static_cast<unsigned>(j)}));
    }
    return r;
}

Poly substitute(const Poly& p, const std::vector<Poly>& images) {
    if (static_cast<int>(images.size()) != p.num_vars())
        throw std::invalid_argument("substitute: image count mismatch");
    if (p.num_vars() == 0) return p;
    int out_nv = images[0].num_vars();
    for (const Poly& im : images)
        if (im.num_vars() != out_nv)
            throw std::invalid_argument("substitute: images disagree on variable count");

    // Cache powers of each image up to the largest exponent used.
    std::vector<unsigned> max_exp(p.num_vars(), 0u);
    for (const auto& [e, c] : p.terms())
        for (int i = 0; i < p.num_vars(); ++i) max_exp[i] = std::max(max_exp[i], e[i]);
    std::vector<std::vector<Poly>> powers(p.num_vars());
    for (int i = 0; i < p.num_vars(); ++i) {
        powers[i].push_back(Poly::constant(out_nv, Rational(1)));
        for (unsigned k = 1; k <= max_exp[i]; ++k) powers[i].push_back(powers[i].back() * images[i]);
    }

    Poly r(out_nv);
    for (const auto& [e, c] : p.terms()) {
        Poly term = Poly::constant(out_nv, c);
        for (int i = 0; i < p.num_vars(); ++i)
            if (e[i] > 0) term = term * powers[i][e[i]];
        r += term;
    }
    return r;
}

Poly lift_vars(const Poly& p, int new_num_vars) {
    if (new_num_vars < p.num_vars())
        throw std::invalid_argument("lift_vars: cannot shrink variable count");
    Poly r(new_num_vars);
    for (const auto& [e, c] : p.terms()) {
        Exponents d = e;
        d.resize(new_num_vars, 0u);
        r.add_term(d, c);
    }
    return r;
}

RationalFunc::RationalFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::invalid_argument("RationalFunc: zero denominator");
    if (num.num_vars() != den.num_vars())
        throw std::invalid_argument("RationalFunc: variable count mismatch");
}

double RationalFunc::eval(double f, double t) const {
    return num.eval(std::vector<double>{f, t}) / den.eval(std::vector<double>{f, t});
}

double RationalFunc::eval_den(double f, double t) const {
    return den.eval(std::vector<double>{f, t});
}

RationalFunc RationalFunc::partial(int var) const {
    Poly dn = num.diff(var) * den - num * den.diff(var);
    return RationalFunc(std::move(dn), den * den);
}

}  // namespace nambu
