#include "nambu/ratmat.hpp"

#include <stdexcept>

namespace nambu {

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RatMat RatMat::from_rows(const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) return RatMat(0, 0);
    RatMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw std::invalid_argument("RatMat::from_rows: ragged rows");
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

RatMat RatMat::transpose() const {
    RatMat m(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
    return m;
}

RatMat RatMat::operator*(const RatMat& o) const {
    if (c_ != o.r_) throw std::invalid_argument("RatMat: dimension mismatch in *");
    RatMat m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.c_; ++j) m.at(i, j) += at(i, k) * o.at(k, j);
        }
    return m;
}

Rational RatMat::det() const {
    if (r_ != c_) throw std::invalid_argument("RatMat::det: not square");
    RatMat a = *this;
    Rational d(1);
    for (int col = 0; col < c_; ++col) {
        int pivot = -1;
        for (int i = col; i < r_; ++i)
            if (!a.at(i, col).is_zero()) { pivot = i; break; }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            for (int j = 0; j < c_; ++j) std::swap(a.at(pivot, j), a.at(col, j));
            d = -d;
        }
        d *= a.at(col, col);
        for (int i = col + 1; i < r_; ++i) {
            if (a.at(i, col).is_zero()) continue;
            Rational f = a.at(i, col) / a.at(col, col);
            for (int j = col; j < c_; ++j) a.at(i, j) -= f * a.at(col, j);
        }
    }
    return d;
}

RatMat RatMat::inverse() const {
    if (r_ != c_) throw std::invalid_argument("RatMat::inverse: not square");
    RatMat a = *this;
    RatMat inv = identity(r_);
    for (int col = 0; col < c_; ++col) {
        int pivot = -1;
        for (int i = col; i < r_; ++i)
            if (!a.at(i, col).is_zero()) { pivot = i; break; }
        if (pivot < 0) throw std::domain_error("RatMat::inverse: singular matrix");
        if (pivot != col)
            for (int j = 0; j < c_; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        Rational p = a.at(col, col).reciprocal();
        for (int j = 0; j < c_; ++j) {
            a.at(col, j) *= p;
            inv.at(col, j) *= p;
        }
        for (int i = 0; i < r_; ++i) {
            if (i == col || a.at(i, col).is_zero()) continue;
            Rational f = a.at(i, col);
            for (int j = 0; j < c_; ++j) {
                a.at(i, j) -= f * a.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

std::vector<std::vector<double>> RatMat::to_double() const {
    std::vector<std::vector<double>> m(r_, std::vector<double>(c_, 0.0));
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) m[i][j] = at(i, j).to_double();
    return m;
}

CongruenceDiag congruence_diagonalize(const RatMat& H) {
    if (H.rows() != H.cols()) throw std::invalid_argument("congruence_diagonalize: not square");
    int n = H.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (H.at(i, j) != H.at(j, i))
                throw std::invalid_argument("congruence_diagonalize: matrix not symmetric");

    RatMat a = H;
    RatMat c = RatMat::identity(n);

    // Symmetric column operation x_j -> x_j + f * x_i, mirrored on rows.
    auto add_col = [&](int j, int i, const Rational& f) {
        for (int k = 0; k < n; ++k) a.at(k, j) += f * a.at(k, i);
        for (int k = 0; k < n; ++k) a.at(j, k) += f * a.at(i, k);
        for (int k = 0; k < n; ++k) c.at(k, j) += f * c.at(k, i);
    };
    auto swap_cols = [&](int i, int j) {
        for (int k = 0; k < n; ++k) std::swap(a.at(k, i), a.at(k, j));
        for (int k = 0; k < n; ++k) std::swap(a.at(i, k), a.at(j, k));
        for (int k = 0; k < n; ++k) std::swap(c.at(k, i), c.at(k, j));
    };

    for (int i = 0; i < n; ++i) {
        if (a.at(i, i).is_zero()) {
            int d = -1;
            for (int j = i + 1; j < n; ++j)
                if (!a.at(j, j).is_zero()) { d = j; break; }
            if (d >= 0) {
                swap_cols(i, d);
            } else {
                int od = -1;
                for (int j = i + 1; j < n; ++j)
                    if (!a.at(i, j).is_zero()) { od = j; break; }
                if (od < 0) continue;  // row/col i already clear: zero diagonal entry
                add_col(i, od, Rational(1));  // makes a(i,i) = 2*a(i,od) != 0
            }
        }
        for (int j = i + 1; j < n; ++j) {
            if (a.at(i, j).is_zero()) continue;
            add_col(j, i, -(a.at(i, j) / a.at(i, i)));
        }
    }

    // Permute positive entries first, then negative, then zero.
    std::vector<int> order;
    for (int pass = 0; pass < 3; ++pass)
        for (int i = 0; i < n; ++i) {
            int s = a.at(i, i).sign();
            if ((pass == 0 && s > 0) || (pass == 1 && s < 0) || (pass == 2 && s == 0))
                order.push_back(i);
        }
    RatMat perm(n, n);
    for (int j = 0; j < n; ++j) perm.at(order[j], j) = Rational(1);

    CongruenceDiag out{c * perm, {}, {}};
    for (int j = 0; j < n; ++j) {
        Rational d = a.at(order[j], order[j]);
        out.diag.push_back(d);
        if (d.sign() > 0) out.signature.pos++;
        if (d.sign() < 0) out.signature.neg++;
    }
    return out;
}

std::optional<std::vector<Rational>> solve_linear(const RatMat& A, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != A.rows())
        throw std::invalid_argument("solve_linear: rhs length mismatch");
    int m = A.rows(), n = A.cols();
    RatMat a(m, n + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) a.at(i, j) = A.at(i, j);
        a.at(i, n) = b[i];
    }

    std::vector<int> pivot_col(m, -1);
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int p = -1;
        for (int i = row; i < m; ++i)
            if (!a.at(i, col).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j <= n; ++j) std::swap(a.at(p, j), a.at(row, j));
        Rational inv = a.at(row, col).reciprocal();
        for (int j = col; j <= n; ++j) a.at(row, j) *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || a.at(i, col).is_zero()) continue;
            Rational f = a.at(i, col);
            for (int j = col; j <= n; ++j) a.at(i, j) -= f * a.at(row, j);
        }
        pivot_col[row] = col;
        ++row;
    }
    for (int i = row; i < m; ++i)
        if (!a.at(i, n).is_zero()) return std::nullopt;  // inconsistent

    std::vector<Rational> x(n, Rational(0));
    for (int i = 0; i < row; ++i) x[pivot_col[i]] = a.at(i, n);
    return x;
}

}  // namespace nambu
