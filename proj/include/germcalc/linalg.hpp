#pragma once

#include <optional>
#include <vector>

#include "germcalc/scalar.hpp"

namespace germcalc {

// Dense matrix over one coefficient field.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const FieldSpec& field);
    static Matrix identity(int n, const FieldSpec& field);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(const Scalar& c) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_identity() const;
    bool is_diagonal() const;
    bool is_scalar_multiple_of_identity() const;
    Matrix pow(long e) const;
    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    FieldSpec field_;
    std::vector<Scalar> a_;
};

std::vector<Scalar> mat_vec(const Matrix& m, const std::vector<Scalar>& v);

Scalar det(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);

// One solution of A x = b, or nullopt when inconsistent. Free coordinates are
// set to zero.
std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b);

// Basis of ker(A). Forward elimination is fraction-free (Bareiss); the back
// substitution normalizes over the field.
std::vector<std::vector<Scalar>> nullspace(const Matrix& a);

// Characteristic polynomial det(xI - A), little-endian coefficients, via the
// Hessenberg recurrence.
std::vector<Scalar> charpoly(const Matrix& a);

// Univariate polynomial helpers over a field (little-endian, trimmed).
using SPoly = std::vector<Scalar>;
SPoly spoly_mul(const SPoly& a, const SPoly& b);
SPoly spoly_derivative(const SPoly& a);
std::pair<SPoly, SPoly> spoly_divmod(const SPoly& a, const SPoly& b);
SPoly spoly_gcd(SPoly a, SPoly b); // monic
Matrix spoly_eval_matrix(const SPoly& p, const Matrix& m);

// Multiplicative Jordan-Chevalley decomposition A = S * U with S semisimple,
// U unipotent, S U = U S; exact over the field, no factorization needed
// (Newton iteration on the squarefree part of the characteristic polynomial).
// Requires A invertible.
struct JordanChevalley {
    Matrix semisimple;
    Matrix unipotent;
};
JordanChevalley jordan_chevalley(const Matrix& a);

bool is_nilpotent(const Matrix& a);
bool is_unipotent(const Matrix& a);

} // namespace germcalc
