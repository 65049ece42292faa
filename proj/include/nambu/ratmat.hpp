// Small dense matrices over exact rationals: congruence diagonalization of
// symmetric forms (Sylvester signatures), inversion, and linear solving.
// Dimensions here are tiny (ambient dimension or a handful of monomial
// coefficients), so everything is plain Gaussian elimination.
#pragma once

#include <optional>
#include <vector>

#include "nambu/rational.hpp"

namespace nambu {

// Inertia of a quadratic form: number of positive and negative squares.
struct Signature {
    int pos = 0;
    int neg = 0;

    int rank() const { return pos + neg; }
    friend bool operator==(const Signature& a, const Signature& b) {
        return a.pos == b.pos && a.neg == b.neg;
    }
    // Equality of the unordered pair {pos, neg}.
    bool same_up_to_swap(const Signature& o) const {
        return (*this == o) || (pos == o.neg && neg == o.pos);
    }
};

class RatMat {
public:
    RatMat(int rows, int cols) : r_(rows), c_(cols), a_(rows * cols, Rational(0)) {}
    static RatMat identity(int n);
    static RatMat from_rows(const std::vector<std::vector<Rational>>& rows);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Rational& at(int i, int j) { return a_[i * c_ + j]; }
    const Rational& at(int i, int j) const { return a_[i * c_ + j]; }

    RatMat transpose() const;
    RatMat operator*(const RatMat& o) const;
    friend bool operator==(const RatMat& a, const RatMat& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }

    Rational det() const;
    // Throws std::domain_error when singular.
    RatMat inverse() const;
    std::vector<std::vector<double>> to_double() const;

private:
    int r_, c_;
    std::vector<Rational> a_;
};

// Result of exact congruence diagonalization of a symmetric matrix H:
// C^T H C = diag(d), with positive diagonal entries placed first.
struct CongruenceDiag {
    RatMat congruence;            // C
    std::vector<Rational> diag;   // d
    Signature signature;          // zero entries counted in neither pos nor neg
};

CongruenceDiag congruence_diagonalize(const RatMat& H);

// One solution of Ax = b if the system is consistent (free variables set to 0).
std::optional<std::vector<Rational>> solve_linear(const RatMat& A, const std::vector<Rational>& b);

}  // namespace nambu
