#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "germcalc/rational.hpp"

namespace germcalc {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic on scalars from different fields. Callers embed explicitly.
struct field_mismatch : error {
    using error::error;
};

enum class FieldKind { gaussian, cyclotomic, f64 };

struct FieldSpec {
    FieldKind kind = FieldKind::gaussian;
    int m = 0; // cyclotomic order, used iff kind == cyclotomic

    bool operator==(const FieldSpec& o) const { return kind == o.kind && m == o.m; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }
    bool exact() const { return kind != FieldKind::f64; }
    std::string str() const;

    static FieldSpec gaussian() { return {FieldKind::gaussian, 0}; }
    static FieldSpec cyclotomic(int m);
    static FieldSpec f64() { return {FieldKind::f64, 0}; }
};

int euler_phi(int m);
int mobius(int m);

// Coefficients of the m-th cyclotomic polynomial (monic, degree phi(m)),
// computed once per m from the Moebius factorization of x^m - 1 and cached.
const std::vector<Rational>& cyclotomic_polynomial(int m);

// Element of Q(i), Q(zeta_m) or C (doubles). Exact variants carry their
// coordinates over Q in the canonical power basis; all operations between
// scalars require identical field specs.
class Scalar {
public:
    Scalar() : Scalar(FieldSpec::gaussian()) {}
    explicit Scalar(const FieldSpec& f); // zero of the field
    Scalar(const FieldSpec& f, const Rational& re);

    static Scalar zero(const FieldSpec& f) { return Scalar(f); }
    static Scalar one(const FieldSpec& f) { return Scalar(f, Rational(1)); }
    static Scalar integer(const FieldSpec& f, long v) { return Scalar(f, Rational(v)); }
    static Scalar rational(const FieldSpec& f, const Rational& v) { return Scalar(f, v); }
    static Scalar gaussian(const Rational& re, const Rational& im);
    static Scalar imaginary_unit() { return gaussian(0, 1); }
    // zeta_m^k in Q(zeta_m)
    static Scalar root_of_unity(int m, long k = 1);
    static Scalar cyclotomic(int m, std::vector<Rational> coords);
    static Scalar complex(std::complex<double> z);

    const FieldSpec& field() const { return field_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const; // exact fields only
    Rational rational_value() const;
    const std::vector<Rational>& coords() const { return c_; }
    std::complex<double> to_complex() const; // numeric image (embedding zeta_m -> e^{2 pi i/m})

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inverse() const;
    Scalar pow(long e) const;
    Scalar conj() const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const;

private:
    void check_same(const Scalar& o) const;
    void reduce(); // cyclotomic canonical form

    FieldSpec field_;
    std::vector<Rational> c_;    // gaussian: {re, im}; cyclotomic: phi(m) coords
    std::complex<double> z_{};   // f64
};

// Least k >= 1 with s^k = 1, or nullopt when s is provably not a root of
// unity of the field (exact) / none found up to the bound (floats, |s^k-1|
// tested against 1e-9 for k <= 720).
std::optional<long> root_of_unity_order(const Scalar& s);

// Canonical embedding into Q(zeta_target_m). Throws when none exists.
Scalar embed(const Scalar& s, int target_m);

// Print/parse round-trip: "a+bi" (gaussian), "poly(m; c0,c1,...)" (cyclotomic),
// "a+bj" (floats).
Scalar scalar_from_string(const std::string& s);

} // namespace germcalc
