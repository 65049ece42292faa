#include "nambu/exterior.hpp"

namespace nambu {

int sort_index_tuple(IndexTuple& t) {
    // Insertion sort, counting transpositions; tuples have at most ~6 entries.
    int sign = 1;
    for (size_t i = 1; i < t.size(); ++i) {
        int v = t[i];
        size_t j = i;
        while (j > 0 && t[j - 1] > v) {
            t[j] = t[j - 1];
            --j;
            sign = -sign;
        }
        t[j] = v;
    }
    for (size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1]) return 0;
    return sign;
}

int merge_index_tuples(const IndexTuple& a, const IndexTuple& b, IndexTuple& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a.
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return sign;
}

DiffForm exterior_d(const DiffForm& w) {
    int n = w.dim();
    DiffForm r(n, std::min(w.degree() + 1, n));
    if (w.degree() + 1 > n) return r;
    for (const auto& [idx, c] : w.comps()) {
        for (int i = 0; i < n; ++i) {
            Poly dc = c.diff(i);
            if (dc.is_zero()) continue;
            IndexTuple t;
            t.reserve(idx.size() + 1);
            t.push_back(i);
            t.insert(t.end(), idx.begin(), idx.end());
            r.add_term(std::move(t), dc);
        }
    }
    return r;
}

namespace {

// Single contraction iota_{d/dx_j} into the first slot of a form.
DiffForm contract_vector_first(int j, const DiffForm& w) {
    DiffForm r(w.dim(), std::max(w.degree() - 1, 0));
    for (const auto& [idx, c] : w.comps()) {
        for (size_t pos = 0; pos < idx.size(); ++pos) {
            if (idx[pos] != j) continue;
            IndexTuple rest;
            rest.reserve(idx.size() - 1);
            for (size_t k = 0; k < idx.size(); ++k)
                if (k != pos) rest.push_back(idx[k]);
            r.add_term(std::move(rest), pos % 2 == 0 ? c : -c);
            break;  // indices are strict, j occurs at most once
        }
    }
    return r;
}

}  // namespace

DiffForm interior(const MultiVector& xi, const DiffForm& w) {
    if (xi.dim() != w.dim()) throw std::invalid_argument("interior: dimension mismatch");
    if (xi.degree() > w.degree())
        throw std::invalid_argument("interior: multivector degree exceeds form degree");
    DiffForm r(w.dim(), w.degree() - xi.degree());
    for (const auto& [J, cxi] : xi.comps()) {
        // w(X_{j1}, ..., X_{jk}, ...) = iota_{jk}( ... iota_{j1} w ).
        DiffForm cur = w;
        for (int j : J) cur = contract_vector_first(j, cur);
        r += cur.scaled(cxi);
    }
    return r;
}

MultiVector contract_first(const DiffForm& alpha, const MultiVector& P) {
    if (alpha.dim() != P.dim()) throw std::invalid_argument("contract_first: dimension mismatch");
    if (alpha.degree() != 1) throw std::invalid_argument("contract_first: form degree must be 1");
    if (P.degree() < 1) throw std::invalid_argument("contract_first: multivector degree must be >= 1");
    MultiVector r(P.dim(), P.degree() - 1);
    for (const auto& [I, cP] : P.comps()) {
        for (size_t pos = 0; pos < I.size(); ++pos) {
            Poly a = alpha.component({I[pos]});
            if (a.is_zero()) continue;
            IndexTuple rest;
            rest.reserve(I.size() - 1);
            for (size_t k = 0; k < I.size(); ++k)
                if (k != pos) rest.push_back(I[k]);
            Poly c = a * cP;
            r.add_term(std::move(rest), pos % 2 == 0 ? c : -c);
        }
    }
    return r;
}

MultiVector contract_last(const DiffForm& alpha, const MultiVector& P) {
    if (alpha.dim() != P.dim()) throw std::invalid_argument("contract_last: dimension mismatch");
    if (alpha.degree() != 1) throw std::invalid_argument("contract_last: form degree must be 1");
    if (P.degree() < 1) throw std::invalid_argument("contract_last: multivector degree must be >= 1");
    int p = P.degree();
    MultiVector r(P.dim(), p - 1);
    for (const auto& [I, cP] : P.comps()) {
        for (size_t pos = 0; pos < I.size(); ++pos) {
            Poly a = alpha.component({I[pos]});
            if (a.is_zero()) continue;
            IndexTuple rest;
            rest.reserve(I.size() - 1);
            for (size_t k = 0; k < I.size(); ++k)
                if (k != pos) rest.push_back(I[k]);
            Poly c = a * cP;
            r.add_term(std::move(rest), (p - 1 - pos) % 2 == 0 ? c : -c);
        }
    }
    return r;
}

namespace {

// Right derivative with respect to the odd coordinate xi_i: each term
// c * xi_{i1}...xi_{ip} with i at position r contributes (-1)^{p-1-r} c on the
// remaining tuple.
MultiVector xi_right_derivative(const MultiVector& P, int i) {
    int p = P.degree();
    MultiVector r(P.dim(), std::max(p - 1, 0));
    for (const auto& [I, c] : P.comps()) {
        for (size_t pos = 0; pos < I.size(); ++pos) {
            if (I[pos] != i) continue;
            IndexTuple rest;
            rest.reserve(I.size() - 1);
            for (size_t k = 0; k < I.size(); ++k)
                if (k != pos) rest.push_back(I[k]);
            int par = (p - 1 - static_cast<int>(pos)) % 2;
            r.add_term(std::move(rest), par == 0 ? c : -c);
            break;
        }
    }
    return r;
}

MultiVector coefficient_derivative(const MultiVector& P, int i) {
    MultiVector r(P.dim(), P.degree());
    for (const auto& [I, c] : P.comps()) {
        Poly dc = c.diff(i);
        if (!dc.is_zero()) r.add_term(I, dc);
    }
    return r;
}

// P o Q = sum_i (P dbar/dxi_i) ^ (d/dx_i Q), the interior composition of the
// odd-coordinate calculus.
MultiVector odd_composition(const MultiVector& P, const MultiVector& Q) {
    int n = P.dim();
    int deg = P.degree() + Q.degree() - 1;
    MultiVector r(n, std::min(std::max(deg, 0), n));
    if (P.degree() == 0) return r;
    for (int i = 0; i < n; ++i) {
        MultiVector pd = xi_right_derivative(P, i);
        if (pd.is_zero()) continue;
        MultiVector qd = coefficient_derivative(Q, i);
        if (qd.is_zero()) continue;
        r += wedge(pd, qd);
    }
    return r;
}

}  // namespace

MultiVector schouten(const MultiVector& P, const MultiVector& Q) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("schouten: dimension mismatch");
    int p = P.degree(), q = Q.degree();
    MultiVector r = odd_composition(P, Q);
    MultiVector qp = odd_composition(Q, P);
    // [P,Q] = P o Q - (-1)^{(p-1)(q-1)} Q o P.
    bool odd = ((p - 1) * (q - 1)) % 2 != 0;
    r += odd ? qp : -qp;
    return r;
}

MultiVector lie_derivative(const MultiVector& X, const MultiVector& P) {
    if (X.degree() != 1) throw std::invalid_argument("lie_derivative: X must be a vector field");
    return schouten(X, P);
}

MultiVector euler_field(int n) {
    MultiVector e(n, 1);
    for (int i = 0; i < n; ++i) e.add_term({i}, Poly::variable(n, i));
    return e;
}

DiffForm differential(const Poly& g) {
    int n = g.num_vars();
    DiffForm r(n, 1);
    for (int i = 0; i < n; ++i) {
        Poly d = g.diff(i);
        if (!d.is_zero()) r.add_term({i}, d);
    }
    return r;
}

Poly radial_potential(const DiffForm& omega) {
    if (omega.degree() != 1) throw std::invalid_argument("radial_potential: need a 1-form");
    int n = omega.dim();
    Poly g(n);
    for (const auto& [idx, a] : omega.comps()) {
        int i = idx[0];
        for (const auto& [e, c] : a.terms()) {
            Exponents d = e;
            d[i] += 1;
            g.add_term(d, c / Rational(static_cast<long>(total_degree(e)) + 1));
        }
    }
    return g;
}

}  // namespace nambu
