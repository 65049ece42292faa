// Nambu structure semantics: the duality-based decision procedure,
// Hamiltonian vector fields, unimodularity, linear normal forms of both
// types, linear part extraction, exact signature classification, and the
// Lie-Poisson / isotropy machinery for 3-dimensional algebras.
#pragma once

#include <optional>
#include <vector>

#include "nambu/exterior.hpp"
#include "nambu/ratmat.hpp"

namespace nambu {

// All increasing index tuples of length k drawn from {0, ..., n-1}.
std::vector<IndexTuple> increasing_tuples(int n, int k);

// A q-vector field on n-space subject to the Nambu decision procedure.
struct NambuCandidate {
    MultiVector P;

    explicit NambuCandidate(MultiVector P_) : P(std::move(P_)) {
        if (P.degree() < 1 || P.degree() > P.dim() - 1)
            throw std::invalid_argument("NambuCandidate: order must satisfy 1 <= q <= n-1");
    }

    int dim() const { return P.dim(); }
    int order() const { return P.degree(); }
    int coorder() const { return P.dim() - P.degree(); }
    bool vanishes_at_origin() const {
        for (const auto& [i, c] : P.comps())
            if (!c.constant_term().is_zero()) return false;
        return true;
    }
};

// Type 1 linear normal form
//   Pi_l = sum_{i=1}^{r+1} eps_i x_i d1^...^hat(di)^...^d(q+1)
//        + sum_{i=1}^{s} eps_{r+1+i} x_{q+1+i} d1^...^hat(d(r+i))^...^d(q+1).
// The classification states 0 <= r <= q+1, which for r = q+1 would push the
// first sum past its own index range; this constructor caps the first sum at
// min(r+1, q+1) terms and accepts a sign list for exactly the terms built.
struct LinearType1Spec {
    int n, q, r, s;
    std::vector<int> signs;  // entries +1 / -1

    int first_terms() const { return std::min(r + 1, q + 1); }
};

// Type 2 linear normal form d1 ^ ... ^ d(q-1) ^ (sum_{i,j=q}^{n} b_i^j x_j di).
// The matrix b is addressed with 0-based offsets into the index range q..n
// (1-based coordinates).
struct LinearType2Spec {
    int n, q;
    RatMat b;
};

// Structure constants c^k_{ij} of an n-dimensional Lie algebra; antisymmetry
// and the Jacobi identity are validated on construction.
class StructureConstants {
public:
    StructureConstants(int n, std::vector<Rational> c);
    static StructureConstants zero(int n);
    // Builds from the strictly upper triangle: brackets[(i,j)] = [e_i, e_j].
    static StructureConstants from_upper(
        int n, const std::vector<std::pair<std::pair<int, int>, std::vector<Rational>>>& brackets);

    int dim() const { return n_; }
    const Rational& at(int k, int i, int j) const { return c_[(k * n_ + i) * n_ + j]; }
    bool is_zero() const;
    friend bool operator==(const StructureConstants& a, const StructureConstants& b) {
        return a.n_ == b.n_ && a.c_ == b.c_;
    }

private:
    int n_;
    std::vector<Rational> c_;  // c[k][i][j]
};

struct IntegrabilityWitness {
    IndexTuple xi;      // failing constant basis multivector
    int condition;      // 1: iota_xi w ^ w != 0, 2: iota_xi w ^ dw != 0
    DiffForm defect;    // the nonzero wedge
};

struct IntegrabilityVerdict {
    bool integrable = false;
    std::optional<IntegrabilityWitness> witness;
};

struct UnimodularVerdict {
    bool unimodular = false;
    DiffForm defect;  // d iota_P (h mu_std); zero iff unimodular
};

// Exact potential data recovered from a linear coorder-1 structure: the
// quadratic F with dF = iota_P mu_std, its Sylvester signature, and a
// rational congruence C with C^T Hess(F) C = diag (positives first).
struct NondegSignatureResult {
    Signature signature;
    RatMat congruence;
    std::vector<Rational> diag;
    Poly potential;
};

enum class AlgebraClass { abelian, so3, sl2, other };

struct Algebra3Classification {
    AlgebraClass label;
    Signature killing_signature;
    RatMat killing;
};

// omega = iota_P (h mu_std), the dual form of the candidate.
DiffForm dual_form(const NambuCandidate& c, const VolumeDensity& mu);

// Both integrability conditions of a p-form, with xi swept over the constant
// basis multivectors of degree p-1 (function-linearity of the interior
// product makes this equivalent to the universal statement).
IntegrabilityVerdict is_integrable(const DiffForm& w);

// Duality decision procedure; restricted to order >= 3 or coorder 1 (for
// bivectors of coorder >= 2 the conditions characterize decomposability, not
// the Poisson identity; use jacobi_residual there).
IntegrabilityVerdict is_nambu(const NambuCandidate& c, const VolumeDensity& mu);

// [P, P] for a bivector; zero iff Poisson.
MultiVector jacobi_residual(const NambuCandidate& c);

// X_{f1,...,f_{q-1}} = P(df1, ..., df_{q-1}, .): contraction into the first
// q-1 slots.
MultiVector hamiltonian_vf(const NambuCandidate& c, const std::vector<Poly>& fs);

// L_{X_{fs}} P; vanishes identically for Nambu structures.
MultiVector fundamental_identity_residual(const NambuCandidate& c, const std::vector<Poly>& fs);

// d iota_P (h mu_std) == 0, exactly; h(0) must be nonzero.
UnimodularVerdict is_unimodular(const NambuCandidate& c, const Poly& h);

MultiVector linear_type1(const LinearType1Spec& spec);
MultiVector linear_type2(const LinearType2Spec& spec);

// Degree-1 truncation of every coefficient; requires P(0) = 0.
MultiVector linear_part(const NambuCandidate& c);

// Signature of the quadratic potential of a linear coorder-1 structure whose
// dual form is closed.  Throws when the dual form is not closed or the
// Hessian is singular.
NondegSignatureResult nondeg_signature(const MultiVector& P_l);

// Linear Poisson structure pi(x) = sum_{i<j,k} c^k_{ij} x_k di^dj on the dual
// of the algebra.
MultiVector lie_poisson(const StructureConstants& cs);

// Inverse of lie_poisson on the linear part: c^k_{ij} = d/dx_k of component
// (i,j) at 0; requires pi(0) = 0 and validates the Jacobi identity.
StructureConstants isotropy_constants(const MultiVector& pi);

// Killing-form classification of a 3-dimensional algebra.
Algebra3Classification classify_3d_algebra(const StructureConstants& cs);

// Convenience constructors used throughout the linearization pipeline: the
// nondegenerate Type 1 structure whose dual form is exactly df, and the
// matching quadratic f = (x_1^2+...+x_l^2 - x_{l+1}^2-...-x_n^2)/2.
MultiVector type1_nondegenerate(int n, const Signature& sig);
Poly signature_quadratic(int n, const Signature& sig);

// Coorder-1 inverse of dual_form with the standard volume: the unique
// (n-1)-vector P with iota_P mu_std = omega.
NambuCandidate candidate_from_dual_form(const DiffForm& omega);

}  // namespace nambu
