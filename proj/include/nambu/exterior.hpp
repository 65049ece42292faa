// Exterior calculus on coordinate n-space with polynomial coefficients:
// multivector fields and differential forms as sparse alternating tensors,
// wedge products, exterior derivative, interior products, and the
// Schouten-Nijenhuis bracket.
//
// Conventions fixed once for the whole project:
//   * components are stored on strictly increasing index tuples (0-based);
//   * a wedge of basis covectors acts as the determinant
//       (dx_{i1} ^ ... ^ dx_{ip})(v_1, ..., v_p) = det[dx_{i_a}(v_b)];
//   * interior product of a multivector into a form fills the FIRST slots:
//       (iota_{X1^...^Xk} w)(Y...) = w(X1, ..., Xk, Y...);
//   * the Schouten bracket is normalized by [X, Q] = L_X Q for vector
//     fields X and [P, g] = iota_dg P for functions g, where a 1-form
//     contracts a multivector in its LAST slot.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "nambu/poly.hpp"

namespace nambu {

// Strictly increasing list of 0-based coordinate indices.
using IndexTuple = std::vector<int>;

// Sorts t ascending in place; returns the permutation parity (+1/-1),
// or 0 if an index repeats.
int sort_index_tuple(IndexTuple& t);

// Merges two increasing tuples into `out`; returns the sign of the shuffle
// permutation, or 0 when they overlap.
int merge_index_tuples(const IndexTuple& a, const IndexTuple& b, IndexTuple& out);

namespace detail {
struct VectorKind {};
struct FormKind {};
}  // namespace detail

// Sparse alternating tensor: a degree-`deg` multivector field or differential
// form on n-space, with Poly coefficients on increasing index tuples.  The
// zero tensor is an empty component map; equality ignores the declared degree
// of a zero value (the zero form/multivector is unique per dimension).
template <class Kind>
class Alternating {
public:
    using Components = std::map<IndexTuple, Poly>;

    Alternating(int n, int degree) : n_(n), deg_(degree) {
        if (n < 0 || degree < 0 || degree > n)
            throw std::invalid_argument("Alternating: bad dimension/degree");
    }

    static Alternating basis(int n, IndexTuple idx) {
        Alternating a(n, static_cast<int>(idx.size()));
        a.add_term(std::move(idx), Poly::constant(n, Rational(1)));
        return a;
    }

    int dim() const { return n_; }
    int degree() const { return deg_; }
    bool is_zero() const { return comps_.empty(); }
    const Components& comps() const { return comps_; }

    // Adds c on the (arbitrarily ordered) tuple idx, normalizing the order
    // and sign; repeated indices contribute nothing.
    void add_term(IndexTuple idx, const Poly& c) {
        if (static_cast<int>(idx.size()) != deg_)
            throw std::invalid_argument("Alternating::add_term: tuple length != degree");
        if (c.num_vars() != n_)
            throw std::invalid_argument("Alternating::add_term: coefficient variable count != dimension");
        if (c.is_zero()) return;
        for (int i : idx)
            if (i < 0 || i >= n_) throw std::out_of_range("Alternating::add_term: index out of range");
        int sign = sort_index_tuple(idx);
        if (sign == 0) return;
        Poly val = sign > 0 ? c : -c;
        auto it = comps_.find(idx);
        if (it == comps_.end()) {
            comps_.emplace(std::move(idx), std::move(val));
        } else {
            it->second += val;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    // Coefficient on an increasing tuple (zero polynomial when absent).
    Poly component(const IndexTuple& idx) const {
        auto it = comps_.find(idx);
        return it == comps_.end() ? Poly(n_) : it->second;
    }

    Alternating operator-() const {
        Alternating r(n_, deg_);
        for (const auto& [i, c] : comps_) r.comps_.emplace(i, -c);
        return r;
    }

    Alternating& operator+=(const Alternating& o) {
        require_same_shape(o, "+");
        if (comps_.empty()) deg_ = o.deg_;
        for (const auto& [i, c] : o.comps_) add_term(i, c);
        return *this;
    }
    Alternating& operator-=(const Alternating& o) {
        require_same_shape(o, "-");
        if (comps_.empty()) deg_ = o.deg_;
        for (const auto& [i, c] : o.comps_) add_term(i, -c);
        return *this;
    }
    friend Alternating operator+(Alternating a, const Alternating& b) { return a += b; }
    friend Alternating operator-(Alternating a, const Alternating& b) { return a -= b; }

    Alternating scaled(const Poly& g) const {
        if (g.num_vars() != n_)
            throw std::invalid_argument("Alternating::scaled: variable count mismatch");
        Alternating r(n_, deg_);
        for (const auto& [i, c] : comps_) {
            Poly p = c * g;
            if (!p.is_zero()) r.comps_.emplace(i, std::move(p));
        }
        return r;
    }
    Alternating scaled(const Rational& g) const {
        Alternating r(n_, deg_);
        if (g.is_zero()) return r;
        for (const auto& [i, c] : comps_) r.comps_.emplace(i, c * g);
        return r;
    }

    friend bool operator==(const Alternating& a, const Alternating& b) {
        // Degree intentionally not compared when both are zero.
        return a.n_ == b.n_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const Alternating& a, const Alternating& b) { return !(a == b); }

    std::map<IndexTuple, double> eval(const std::vector<double>& point) const {
        if (static_cast<int>(point.size()) != n_)
            throw std::invalid_argument("Alternating::eval: point length mismatch");
        std::map<IndexTuple, double> out;
        for (const auto& [i, c] : comps_) out[i] = c.eval(point);
        return out;
    }

private:
    void require_same_shape(const Alternating& o, const char* op) const {
        if (n_ != o.n_) throw std::invalid_argument(std::string("Alternating: dimension mismatch in ") + op);
        if (!comps_.empty() && !o.comps_.empty() && deg_ != o.deg_)
            throw std::invalid_argument(std::string("Alternating: degree mismatch in ") + op);
    }

    int n_;
    int deg_;
    Components comps_;
};

using MultiVector = Alternating<detail::VectorKind>;
using DiffForm = Alternating<detail::FormKind>;

// Graded-antisymmetric product; degrees add (a zero value of capped degree
// results when deg a + deg b > n).
template <class Kind>
Alternating<Kind> wedge(const Alternating<Kind>& a, const Alternating<Kind>& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    int n = a.dim();
    int deg = a.degree() + b.degree();
    Alternating<Kind> r(n, std::min(deg, n));
    if (deg > n) return r;
    IndexTuple merged;
    for (const auto& [ia, ca] : a.comps())
        for (const auto& [ib, cb] : b.comps()) {
            int sign = merge_index_tuples(ia, ib, merged);
            if (sign == 0) continue;
            Poly c = ca * cb;
            if (sign < 0) c = -c;
            r.add_term(merged, c);
        }
    return r;
}

// Volume density h * dx_1 ^ ... ^ dx_n; h must not vanish at the origin.
struct VolumeDensity {
    int n;
    Poly h;

    VolumeDensity(int n_, Poly h_) : n(n_), h(std::move(h_)) {
        if (h.num_vars() != n)
            throw std::invalid_argument("VolumeDensity: variable count mismatch");
        if (h.constant_term().is_zero())
            throw std::invalid_argument("VolumeDensity: density vanishes at the origin");
    }

    static VolumeDensity standard(int n_) {
        return VolumeDensity(n_, Poly::constant(n_, Rational(1)));
    }
};

// Exterior derivative.
DiffForm exterior_d(const DiffForm& w);

// iota_xi w, contracting xi into the first deg(xi) slots of w.
DiffForm interior(const MultiVector& xi, const DiffForm& w);

// Contraction of a 1-form into the first / last slot of a multivector:
// alpha in slot 1 gives P(alpha, ., ..., .), alpha in the last slot gives
// P(., ..., ., alpha).
MultiVector contract_first(const DiffForm& alpha, const MultiVector& P);
MultiVector contract_last(const DiffForm& alpha, const MultiVector& P);

// Schouten-Nijenhuis bracket, degree deg P + deg Q - 1.
MultiVector schouten(const MultiVector& P, const MultiVector& Q);

// L_X P = [X, P] for a vector field X (degree-1 multivector).
MultiVector lie_derivative(const MultiVector& X, const MultiVector& P);

// Euler field E = sum_i x_i d/dx_i.
MultiVector euler_field(int n);

// d(g) as a 1-form.
DiffForm differential(const Poly& g);

// Potential of a closed 1-form by the radial homotopy of the Poincare lemma:
// the monomial c x^a dx_i contributes c x_i x^a / (|a| + 1), so the result g
// satisfies g(0) = 0 and, when omega is closed, d(g) = omega exactly.
Poly radial_potential(const DiffForm& omega);

// Reinterprets a tensor in a larger ambient variable ring (used to treat a
// deformation parameter as an inert extra coordinate).
template <class Kind>
Alternating<Kind> lift_ambient(const Alternating<Kind>& a, int new_n) {
    Alternating<Kind> r(new_n, a.degree());
    for (const auto& [i, c] : a.comps()) r.add_term(i, lift_vars(c, new_n));
    return r;
}

}  // namespace nambu
