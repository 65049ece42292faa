#include "nambu/nambu.hpp"

#include <algorithm>

namespace nambu {

std::vector<IndexTuple> increasing_tuples(int n, int k) {
    std::vector<IndexTuple> out;
    if (k < 0 || k > n) return out;
    IndexTuple cur(k);
    // Standard combination enumeration in lexicographic order.
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

StructureConstants::StructureConstants(int n, std::vector<Rational> c) : n_(n), c_(std::move(c)) {
    if (n < 1 || static_cast<int>(c_.size()) != n * n * n)
        throw std::invalid_argument("StructureConstants: need n^3 entries");
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (at(k, i, j) != -at(k, j, i))
                    throw std::invalid_argument("StructureConstants: antisymmetry violated");
    // Jacobi: sum_m c^m_{ij} c^l_{mk} + c^m_{jk} c^l_{mi} + c^m_{ki} c^l_{mj} = 0.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational acc(0);
                    for (int m = 0; m < n; ++m)
                        acc += at(m, i, j) * at(l, m, k) + at(m, j, k) * at(l, m, i) +
                               at(m, k, i) * at(l, m, j);
                    if (!acc.is_zero())
                        throw std::invalid_argument("StructureConstants: Jacobi identity fails");
                }
}

StructureConstants StructureConstants::zero(int n) {
    return StructureConstants(n, std::vector<Rational>(n * n * n, Rational(0)));
}

StructureConstants StructureConstants::from_upper(
    int n, const std::vector<std::pair<std::pair<int, int>, std::vector<Rational>>>& brackets) {
    std::vector<Rational> c(n * n * n, Rational(0));
    auto idx = [n](int k, int i, int j) { return (k * n + i) * n + j; };
    for (const auto& [ij, vals] : brackets) {
        auto [i, j] = ij;
        if (i < 0 || j < 0 || i >= n || j >= n || i >= j)
            throw std::invalid_argument("StructureConstants::from_upper: need i < j");
        if (static_cast<int>(vals.size()) != n)
            throw std::invalid_argument("StructureConstants::from_upper: bracket value length");
        for (int k = 0; k < n; ++k) {
            c[idx(k, i, j)] = vals[k];
            c[idx(k, j, i)] = -vals[k];
        }
    }
    return StructureConstants(n, std::move(c));
}

bool StructureConstants::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r.is_zero(); });
}

DiffForm dual_form(const NambuCandidate& c, const VolumeDensity& mu) {
    if (mu.n != c.dim()) throw std::invalid_argument("dual_form: dimension mismatch");
    int n = c.dim();
    DiffForm vol(n, n);
    IndexTuple all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    vol.add_term(all, mu.h);
    return interior(c.P, vol);
}

IntegrabilityVerdict is_integrable(const DiffForm& w) {
    int n = w.dim();
    int p = w.degree();
    if (p < 1 || p > n)
        throw std::invalid_argument("is_integrable: form degree must satisfy 0 < p <= n");
    DiffForm dw = exterior_d(w);
    for (const IndexTuple& J : increasing_tuples(n, p - 1)) {
        MultiVector xi(n, p - 1);
        xi.add_term(J, Poly::constant(n, Rational(1)));
        DiffForm eta = interior(xi, w);
        DiffForm c1 = wedge(eta, w);
        if (!c1.is_zero()) return {false, IntegrabilityWitness{J, 1, std::move(c1)}};
        DiffForm c2 = wedge(eta, dw);
        if (!c2.is_zero()) return {false, IntegrabilityWitness{J, 2, std::move(c2)}};
    }
    return {true, std::nullopt};
}

IntegrabilityVerdict is_nambu(const NambuCandidate& c, const VolumeDensity& mu) {
    if (c.order() == 2 && c.coorder() >= 2)
        throw std::invalid_argument(
            "is_nambu: the duality criterion characterizes decomposability for bivectors of "
            "coorder >= 2; use jacobi_residual for the Poisson condition");
    return is_integrable(dual_form(c, mu));
}

MultiVector jacobi_residual(const NambuCandidate& c) {
    if (c.order() != 2) throw std::invalid_argument("jacobi_residual: order must be 2");
    return schouten(c.P, c.P);
}

MultiVector hamiltonian_vf(const NambuCandidate& c, const std::vector<Poly>& fs) {
    if (static_cast<int>(fs.size()) != c.order() - 1)
        throw std::invalid_argument("hamiltonian_vf: need exactly q-1 functions");
    MultiVector x = c.P;
    for (const Poly& f : fs) {
        if (f.num_vars() != c.dim())
            throw std::invalid_argument("hamiltonian_vf: function variable count mismatch");
        x = contract_first(differential(f), x);
    }
    return x;
}

MultiVector fundamental_identity_residual(const NambuCandidate& c, const std::vector<Poly>& fs) {
    return lie_derivative(hamiltonian_vf(c, fs), c.P);
}

UnimodularVerdict is_unimodular(const NambuCandidate& c, const Poly& h) {
    if (h.constant_term().is_zero())
        throw std::invalid_argument("is_unimodular: density must not vanish at the origin");
    DiffForm defect = exterior_d(dual_form(c, VolumeDensity(c.dim(), h)));
    bool ok = defect.is_zero();
    return {ok, std::move(defect)};
}

MultiVector linear_type1(const LinearType1Spec& spec) {
    int n = spec.n, q = spec.q, r = spec.r, s = spec.s;
    if (q < 1 || q > n - 1) throw std::invalid_argument("linear_type1: need 1 <= q <= n-1");
    if (r < 0 || r > q + 1) throw std::invalid_argument("linear_type1: need 0 <= r <= q+1");
    if (s < 0 || s > std::min(n - q - 1, q + 1 - r))
        throw std::invalid_argument("linear_type1: need 0 <= s <= min(n-q-1, q+1-r)");
    int first = spec.first_terms();
    if (static_cast<int>(spec.signs.size()) != first + s)
        throw std::invalid_argument("linear_type1: sign list must have one entry per term");
    for (int e : spec.signs)
        if (e != 1 && e != -1) throw std::invalid_argument("linear_type1: signs must be +-1");

    MultiVector p(n, q);
    auto hat_tuple = [q](int hat /*0-based*/) {
        IndexTuple t;
        for (int a = 0; a <= q; ++a)
            if (a != hat) t.push_back(a);
        return t;
    };
    for (int i = 1; i <= first; ++i) {
        Poly coeff = Poly::variable(n, i - 1) * Rational(spec.signs[i - 1]);
        p.add_term(hat_tuple(i - 1), coeff);
    }
    for (int i = 1; i <= s; ++i) {
        Poly coeff = Poly::variable(n, q + i) * Rational(spec.signs[first + i - 1]);
        p.add_term(hat_tuple(r + i - 1), coeff);
    }
    return p;
}

MultiVector linear_type2(const LinearType2Spec& spec) {
    int n = spec.n, q = spec.q;
    if (q < 1 || q > n - 1) throw std::invalid_argument("linear_type2: need 1 <= q <= n-1");
    int m = n - q + 1;
    if (spec.b.rows() != m || spec.b.cols() != m)
        throw std::invalid_argument("linear_type2: matrix must be (n-q+1) x (n-q+1)");

    MultiVector last(n, 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Rational& bij = spec.b.at(i, j);
            if (bij.is_zero()) continue;
            // coordinates x_{q..n} (1-based) are variables q-1..n-1 (0-based)
            last.add_term({q - 1 + i}, Poly::variable(n, q - 1 + j) * bij);
        }

    IndexTuple prefix;
    for (int a = 0; a + 1 <= q - 1; ++a) prefix.push_back(a);
    MultiVector head = MultiVector::basis(n, prefix);
    return wedge(head, last);
}

MultiVector linear_part(const NambuCandidate& c) {
    if (!c.vanishes_at_origin())
        throw std::domain_error("linear_part: structure does not vanish at the origin");
    MultiVector r(c.dim(), c.order());
    for (const auto& [i, coeff] : c.P.comps()) {
        Poly lin = coeff.homogeneous_part(1);
        if (!lin.is_zero()) r.add_term(i, lin);
    }
    return r;
}

NondegSignatureResult nondeg_signature(const MultiVector& P_l) {
    int n = P_l.dim();
    if (P_l.degree() != n - 1)
        throw std::invalid_argument("nondeg_signature: structure must have coorder 1");
    for (const auto& [i, coeff] : P_l.comps())
        if (coeff != coeff.homogeneous_part(1))
            throw std::invalid_argument("nondeg_signature: structure is not linear");

    DiffForm omega = dual_form(NambuCandidate(P_l), VolumeDensity::standard(n));
    if (!exterior_d(omega).is_zero())
        throw std::domain_error("nondeg_signature: dual form is not closed");

    Poly F = radial_potential(omega);
    RatMat hess(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) hess.at(i, j) = F.diff(i).diff(j).constant_term();
    CongruenceDiag cd = congruence_diagonalize(hess);
    if (cd.signature.rank() < n)
        throw std::domain_error("nondeg_signature: singular Hessian (degenerate linear part)");
    return {cd.signature, std::move(cd.congruence), std::move(cd.diag), std::move(F)};
}

MultiVector lie_poisson(const StructureConstants& cs) {
    int n = cs.dim();
    MultiVector pi(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Poly coeff(n);
            for (int k = 0; k < n; ++k) {
                const Rational& c = cs.at(k, i, j);
                if (!c.is_zero()) coeff += Poly::variable(n, k) * c;
            }
            if (!coeff.is_zero()) pi.add_term({i, j}, coeff);
        }
    return pi;
}

StructureConstants isotropy_constants(const MultiVector& pi) {
    if (pi.degree() != 2) throw std::invalid_argument("isotropy_constants: need a bivector");
    int n = pi.dim();
    for (const auto& [i, c] : pi.comps())
        if (!c.constant_term().is_zero())
            throw std::domain_error("isotropy_constants: bivector does not vanish at the origin");
    std::vector<Rational> c(n * n * n, Rational(0));
    auto idx = [n](int k, int i, int j) { return (k * n + i) * n + j; };
    for (const auto& [ij, coeff] : pi.comps()) {
        Poly lin = coeff.homogeneous_part(1);
        for (int k = 0; k < n; ++k) {
            Exponents e(n, 0u);
            e[k] = 1;
            Rational v = lin.coeff(e);
            c[idx(k, ij[0], ij[1])] = v;
            c[idx(k, ij[1], ij[0])] = -v;
        }
    }
    return StructureConstants(n, std::move(c));
}

Algebra3Classification classify_3d_algebra(const StructureConstants& cs) {
    if (cs.dim() != 3) throw std::invalid_argument("classify_3d_algebra: need a 3-dimensional algebra");
    int n = 3;
    RatMat killing(n, n);
    // K(x,y) = tr(ad_x ad_y); (ad_i)^a_b = c^a_{ib}.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational acc(0);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) acc += cs.at(a, i, b) * cs.at(b, j, a);
            killing.at(i, j) = acc;
        }
    CongruenceDiag cd = congruence_diagonalize(killing);

    AlgebraClass label = AlgebraClass::other;
    if (cs.is_zero())
        label = AlgebraClass::abelian;
    else if (cd.signature == Signature{2, 1})
        label = AlgebraClass::sl2;
    else if (cd.signature == Signature{0, 3})
        label = AlgebraClass::so3;
    return {label, cd.signature, std::move(killing)};
}

MultiVector type1_nondegenerate(int n, const Signature& sig) {
    if (sig.pos + sig.neg != n)
        throw std::invalid_argument("type1_nondegenerate: signature rank must equal dimension");
    if (n < 2) throw std::invalid_argument("type1_nondegenerate: need n >= 2");
    std::vector<int> signs(n);
    for (int i = 1; i <= n; ++i) {
        int eps = ((n - i) % 2 == 0) ? 1 : -1;    // contraction parity
        signs[i - 1] = (i <= sig.pos) ? eps : -eps;
    }
    return linear_type1({n, n - 1, n, 0, std::move(signs)});
}

Poly signature_quadratic(int n, const Signature& sig) {
    if (sig.pos + sig.neg != n)
        throw std::invalid_argument("signature_quadratic: signature rank must equal dimension");
    Poly f(n);
    Rational half(1, 2);
    for (int i = 0; i < n; ++i) {
        Exponents e(n, 0u);
        e[i] = 2;
        f.add_term(e, i < sig.pos ? half : -half);
    }
    return f;
}

NambuCandidate candidate_from_dual_form(const DiffForm& omega) {
    if (omega.degree() != 1)
        throw std::invalid_argument("candidate_from_dual_form: need a 1-form");
    int n = omega.dim();
    MultiVector p(n, n - 1);
    for (const auto& [idx, a] : omega.comps()) {
        int i = idx[0];
        IndexTuple t;
        for (int k = 0; k < n; ++k)
            if (k != i) t.push_back(k);
        // iota_{d_{complement(i)}} mu_std = (-1)^{n-1-i} dx_i
        bool flip = (n - 1 - i) % 2 != 0;
        p.add_term(std::move(t), flip ? -a : a);
    }
    return NambuCandidate(std::move(p));
}

}  // namespace nambu
