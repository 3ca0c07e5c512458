#include "germcalc/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace germcalc {

Matrix::Matrix(int rows, int cols, const FieldSpec& field)
    : rows_(rows), cols_(cols), field_(field),
      a_(static_cast<size_t>(rows) * cols, Scalar::zero(field)) {}

Matrix Matrix::identity(int n, const FieldSpec& field) {
    Matrix m(n, n, field);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(field);
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("matrix shape mismatch");
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] + o.a_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("matrix shape mismatch");
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] - o.a_[i];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw error("matrix shape mismatch");
    Matrix r(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Scalar& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Scalar& bkj = o.at(k, j);
                if (bkj.is_zero()) continue;
                r.at(i, j) += aik * bkj;
            }
        }
    return r;
}

Matrix Matrix::operator*(const Scalar& c) const {
    Matrix r = *this;
    for (auto& x : r.a_) x = x * c;
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && a_ == o.a_;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Matrix::is_identity() const { return *this == identity(rows_, field_); }

bool Matrix::is_diagonal() const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (i != j && !at(i, j).is_zero()) return false;
    return true;
}

bool Matrix::is_scalar_multiple_of_identity() const {
    if (rows_ != cols_ || rows_ == 0) return false;
    if (!is_diagonal()) return false;
    for (int i = 1; i < rows_; ++i)
        if (at(i, i) != at(0, 0)) return false;
    return true;
}

Matrix Matrix::pow(long e) const {
    if (rows_ != cols_) throw error("pow of non-square matrix");
    if (e < 0) {
        auto inv = inverse(*this);
        if (!inv) throw error("pow of singular matrix");
        return inv->pow(-e);
    }
    Matrix acc = identity(rows_, field_);
    Matrix base = *this;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

std::string Matrix::str() const {
    std::ostringstream out;
    out << "[";
    for (int i = 0; i < rows_; ++i) {
        out << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j) out << (j ? "," : "") << at(i, j).str();
    }
    out << "]";
    return out.str();
}

std::vector<Scalar> mat_vec(const Matrix& m, const std::vector<Scalar>& v) {
    if (static_cast<int>(v.size()) != m.cols()) throw error("mat_vec shape mismatch");
    std::vector<Scalar> r(m.rows(), Scalar::zero(m.field()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero() && !v[j].is_zero()) r[i] += m.at(i, j) * v[j];
    return r;
}

namespace {

// Gaussian elimination to row echelon form; returns pivot columns.
// Operates in place, with field divisions.
std::vector<int> row_echelon(Matrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int p = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!m.at(i, col).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(row, j));
        Scalar inv = m.at(row, col).inverse();
        for (int j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            Scalar f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

Scalar det(const Matrix& m) {
    if (m.rows() != m.cols()) throw error("det of non-square matrix");
    Matrix w = m;
    Scalar d = Scalar::one(m.field());
    int n = m.rows();
    for (int col = 0; col < n; ++col) {
        int p = -1;
        for (int i = col; i < n; ++i)
            if (!w.at(i, col).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) return Scalar::zero(m.field());
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(w.at(p, j), w.at(col, j));
            d = -d;
        }
        d = d * w.at(col, col);
        Scalar inv = w.at(col, col).inverse();
        for (int i = col + 1; i < n; ++i) {
            if (w.at(i, col).is_zero()) continue;
            Scalar f = w.at(i, col) * inv;
            for (int j = col; j < n; ++j) w.at(i, j) = w.at(i, j) - f * w.at(col, j);
        }
    }
    return d;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw error("inverse of non-square matrix");
    int n = m.rows();
    Matrix aug(n, 2 * n, m.field());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = Scalar::one(m.field());
    }
    auto pivots = row_echelon(aug);
    // invertible iff the left block contributes all n pivots
    if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1) return std::nullopt;
    Matrix r(n, n, m.field());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
    return r;
}

std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw error("solve shape mismatch");
    Matrix aug(a.rows(), a.cols() + 1, a.field());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    auto pivots = row_echelon(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt; // 0 = 1 row
    std::vector<Scalar> x(a.cols(), Scalar::zero(a.field()));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), a.cols());
    return x;
}

std::vector<std::vector<Scalar>> nullspace(const Matrix& a) {
    // Bareiss fraction-free forward elimination
    Matrix w = a;
    int rows = a.rows(), cols = a.cols();
    Scalar prev = Scalar::one(a.field());
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int p = -1;
        for (int i = row; i < rows; ++i)
            if (!w.at(i, col).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < cols; ++j) std::swap(w.at(p, j), w.at(row, j));
        for (int i = row + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                w.at(i, j) = (w.at(row, col) * w.at(i, j) - w.at(i, col) * w.at(row, j)) / prev;
            w.at(i, col) = Scalar::zero(a.field());
        }
        prev = w.at(row, col);
        pivots.push_back(col);
        ++row;
    }
    // back substitution over the field, one basis vector per free column
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Scalar> v(cols, Scalar::zero(a.field()));
        v[free_col] = Scalar::one(a.field());
        for (int r = static_cast<int>(pivots.size()) - 1; r >= 0; --r) {
            int pc = pivots[r];
            Scalar s = Scalar::zero(a.field());
            for (int j = pc + 1; j < cols; ++j)
                if (!w.at(r, j).is_zero() && !v[j].is_zero()) s += w.at(r, j) * v[j];
            v[pc] = -(s / w.at(r, pc));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Scalar> charpoly(const Matrix& a) {
    if (a.rows() != a.cols()) throw error("charpoly of non-square matrix");
    int n = a.rows();
    const FieldSpec& f = a.field();
    if (n == 0) return {Scalar::one(f)};
    // reduce to upper Hessenberg by similarity
    Matrix h = a;
    for (int col = 0; col < n - 2; ++col) {
        int p = -1;
        for (int i = col + 1; i < n; ++i)
            if (!h.at(i, col).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != col + 1) {
            for (int j = 0; j < n; ++j) std::swap(h.at(p, j), h.at(col + 1, j));
            for (int i = 0; i < n; ++i) std::swap(h.at(i, p), h.at(i, col + 1));
        }
        Scalar inv = h.at(col + 1, col).inverse();
        for (int i = col + 2; i < n; ++i) {
            if (h.at(i, col).is_zero()) continue;
            Scalar f2 = h.at(i, col) * inv;
            for (int j = 0; j < n; ++j) h.at(i, j) = h.at(i, j) - f2 * h.at(col + 1, j);
            for (int j = 0; j < n; ++j) h.at(j, col + 1) = h.at(j, col + 1) + f2 * h.at(j, i);
        }
    }
    // recurrence: p_k = charpoly of leading k x k block of the Hessenberg form
    std::vector<SPoly> p(n + 1);
    p[0] = {Scalar::one(f)};
    for (int k = 1; k <= n; ++k) {
        // p_k(x) = (x - h[k-1][k-1]) p_{k-1}(x) - sum_{i=1}^{k-1} h[k-1-i][k-1] (prod of subdiag) p_{k-1-i}(x)
        SPoly term(p[k - 1].size() + 1, Scalar::zero(f));
        for (size_t j = 0; j < p[k - 1].size(); ++j) {
            term[j + 1] += p[k - 1][j];
            term[j] -= h.at(k - 1, k - 1) * p[k - 1][j];
        }
        Scalar beta = Scalar::one(f);
        for (int i = 1; i <= k - 1; ++i) {
            beta = beta * h.at(k - i, k - i - 1);
            if (beta.is_zero()) break;
            Scalar c = h.at(k - 1 - i, k - 1) * beta;
            if (c.is_zero()) continue;
            for (size_t j = 0; j < p[k - 1 - i].size(); ++j) term[j] -= c * p[k - 1 - i][j];
        }
        p[k] = std::move(term);
    }
    return p[n];
}

static void spoly_trim(SPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

SPoly spoly_mul(const SPoly& a, const SPoly& b) {
    if (a.empty() || b.empty()) return {};
    SPoly r(a.size() + b.size() - 1, Scalar::zero(a[0].field()));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    spoly_trim(r);
    return r;
}

SPoly spoly_derivative(const SPoly& a) {
    if (a.size() <= 1) return {};
    SPoly r(a.size() - 1, Scalar::zero(a[0].field()));
    for (size_t i = 1; i < a.size(); ++i)
        r[i - 1] = a[i] * Scalar::integer(a[i].field(), static_cast<long>(i));
    spoly_trim(r);
    return r;
}

std::pair<SPoly, SPoly> spoly_divmod(const SPoly& a, const SPoly& b) {
    SPoly r = a, q;
    spoly_trim(r);
    SPoly bb = b;
    spoly_trim(bb);
    if (bb.empty()) throw error("polynomial division by zero");
    if (r.size() >= bb.size()) q.assign(r.size() - bb.size() + 1, Scalar::zero(bb[0].field()));
    while (r.size() >= bb.size()) {
        Scalar c = r.back() / bb.back();
        size_t shift = r.size() - bb.size();
        q[shift] += c;
        for (size_t j = 0; j < bb.size(); ++j) r[shift + j] -= c * bb[j];
        spoly_trim(r);
    }
    return {q, r};
}

SPoly spoly_gcd(SPoly a, SPoly b) {
    spoly_trim(a);
    spoly_trim(b);
    while (!b.empty()) {
        auto [q, r] = spoly_divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Scalar inv = a.back().inverse();
        for (auto& c : a) c = c * inv;
    }
    return a;
}

Matrix spoly_eval_matrix(const SPoly& p, const Matrix& m) {
    Matrix acc(m.rows(), m.cols(), m.field());
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * m;
        if (!p[i].is_zero())
            acc = acc + Matrix::identity(m.rows(), m.field()) * p[i];
    }
    return acc;
}

JordanChevalley jordan_chevalley(const Matrix& a) {
    if (a.rows() != a.cols()) throw error("jordan_chevalley of non-square matrix");
    if (det(a).is_zero()) throw error("jordan_chevalley needs an invertible matrix");
    SPoly p = charpoly(a);
    SPoly q = spoly_gcd(p, spoly_derivative(p));
    SPoly sf = spoly_divmod(p, q).first; // squarefree part
    Matrix s = a;
    // Newton: S <- S - sf(S) sf'(S)^{-1}; terminates in <= log2(n)+1 steps
    SPoly sfd = spoly_derivative(sf);
    int guard = 0;
    while (true) {
        Matrix val = spoly_eval_matrix(sf, s);
        if (val.is_zero()) break;
        Matrix dval = spoly_eval_matrix(sfd, s);
        auto dinv = inverse(dval);
        if (!dinv) throw error("jordan_chevalley: Newton step not invertible");
        s = s - val * *dinv;
        if (++guard > 64) throw error("jordan_chevalley: no convergence");
    }
    auto sinv = inverse(s);
    if (!sinv) throw error("jordan_chevalley: semisimple part singular");
    return {s, *sinv * a};
}

bool is_nilpotent(const Matrix& a) {
    if (a.rows() != a.cols()) throw error("is_nilpotent of non-square matrix");
    return a.pow(a.rows()).is_zero();
}

bool is_unipotent(const Matrix& a) {
    return is_nilpotent(a - Matrix::identity(a.rows(), a.field()));
}

} // namespace germcalc
