#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "germcalc/scalar.hpp"

namespace germcalc {

using Exponents = std::vector<int>;

// Monomials of fixed total degree in n variables, graded-lex ordered
// ((d,0,...) first). Tables are built once per (n, d) and cached.
struct MonoTable {
    int nvars = 0;
    int degree = 0;
    std::vector<Exponents> exps;
    int rank(const Exponents& e) const; // -1 when absent
    int size() const { return static_cast<int>(exps.size()); }
};

const MonoTable& mono_table(int nvars, int degree);

constexpr int kValInfinity = std::numeric_limits<int>::max();

// Truncated multivariate power series: an element of O_n / m^{N+1}.
// Coefficients are bucketed by total degree; an empty bucket means the
// whole degree vanishes.
class Jet {
public:
    Jet() = default;
    Jet(int nvars, int order, const FieldSpec& field);

    static Jet zero(int nvars, int order, const FieldSpec& field) {
        return Jet(nvars, order, field);
    }
    static Jet constant(int nvars, int order, const Scalar& c);
    static Jet variable(int nvars, int order, const FieldSpec& field, int index);
    static Jet monomial(int nvars, int order, const Exponents& e, const Scalar& c);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const FieldSpec& field() const { return field_; }
    bool warned() const { return warn_; }
    Jet& set_warn(bool w) { warn_ = w; return *this; }

    bool is_zero() const;
    int valuation() const; // lowest degree with a nonzero coefficient; kValInfinity if zero
    Scalar coeff(const Exponents& e) const;
    Scalar constant_term() const;
    void set_coeff(const Exponents& e, const Scalar& c);

    // copy truncated/extended to a different order; an extension marks the
    // new buckets as zero, so use it only when that is actually known
    Jet truncated(int order) const;

    Jet operator-() const;
    Jet operator+(const Jet& o) const;
    Jet operator-(const Jet& o) const;
    Jet operator*(const Jet& o) const;
    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet operator*(const Scalar& c) const;
    bool operator==(const Jet& o) const;
    bool operator!=(const Jet& o) const { return !(*this == o); }

    Jet derivative(int var) const; // order drops by one

    // iteration over nonzero coefficients, degree by degree
    void for_each(const std::function<void(const Exponents&, const Scalar&)>& fn) const;

    std::string str(const std::vector<std::string>& var_names = {}) const;

private:
    friend Jet jet_mul_capped(const Jet& a, const Jet& b, int cap);
    void ensure_block(int d);
    void prune();

    int nvars_ = 0;
    int order_ = 0;
    FieldSpec field_;
    bool warn_ = false;
    std::vector<std::vector<Scalar>> blocks_;
};

// equality of the truncations to min(a.order, b.order)
bool jet_equal_to_min_order(const Jet& a, const Jet& b);
bool jet_approx_zero(const Jet& a, double tol = 1e-9);

// f(map_1, ..., map_n) truncated; each substituted jet needs a zero
// constant term and they must share nvars/order/field.
Jet jet_compose(const Jet& f, const std::vector<Jet>& map);

// multiplicative inverse of a unit (u(0) != 0), solved degree by degree
Jet jet_unit_inverse(const Jet& u);

Jet jet_exp(const Jet& f); // needs f(0) = 0
Jet jet_log(const Jet& u); // needs u(0) = 1

// u^{p/q} for a unit u with u(0) = 1 (exp((p/q) log u))
Jet jet_pow_rational(const Jet& u, const Rational& e);

std::string default_var_name(int nvars, int i);

} // namespace germcalc
