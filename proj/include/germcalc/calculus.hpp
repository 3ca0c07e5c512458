#pragma once

#include <map>
#include <optional>

#include "germcalc/jet.hpp"
#include "germcalc/linalg.hpp"

namespace germcalc {

using IndexTuple = std::vector<int>; // strictly increasing, 0-based

// Exterior p-form with Jet coefficients. Degree-0 forms are plain jets
// keyed by the empty tuple. Forms of degree > n normalize to zero.
class PForm {
public:
    PForm() = default;
    PForm(int degree, int nvars, int order, const FieldSpec& field);

    static PForm from_jet(const Jet& f); // degree 0
    static PForm basis(int nvars, int order, const FieldSpec& field, const IndexTuple& idx);

    int degree() const { return degree_; }
    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const FieldSpec& field() const { return field_; }
    const std::map<IndexTuple, Jet>& components() const { return comps_; }

    bool is_zero() const;
    Jet component(const IndexTuple& idx) const;
    void add_term(const IndexTuple& idx, const Jet& coeff); // sorts, tracks the sign
    PForm truncated(int order) const;

    PForm operator+(const PForm& o) const;
    PForm operator-(const PForm& o) const;
    PForm operator-() const;
    PForm operator*(const Jet& f) const;
    PForm operator*(const Scalar& c) const;
    bool operator==(const PForm& o) const;
    bool operator!=(const PForm& o) const { return !(*this == o); }

    std::string str() const;

private:
    void prune();

    int degree_ = 0;
    int nvars_ = 1;
    int order_ = 0;
    FieldSpec field_;
    std::map<IndexTuple, Jet> comps_;
};

// n-tuple of jets, the coefficients of sum_j X_j d/dz_j.
class VectorField {
public:
    VectorField() = default;
    VectorField(int nvars, int order, const FieldSpec& field);
    explicit VectorField(std::vector<Jet> comps);
    static VectorField radial(int nvars, int order, const FieldSpec& field);
    static VectorField linear(const Matrix& a, int order); // X_A, A an n x n matrix

    int nvars() const { return static_cast<int>(comps_.size()); }
    int order() const { return comps_[0].order(); }
    const FieldSpec& field() const { return comps_[0].field(); }
    const Jet& component(int i) const { return comps_[i]; }
    Jet& component(int i) { return comps_[i]; }
    const std::vector<Jet>& components() const { return comps_; }

    bool is_zero() const;
    Matrix linear_part() const;
    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator*(const Scalar& c) const;
    VectorField operator*(const Jet& f) const;
    bool operator==(const VectorField& o) const;
    VectorField truncated(int order) const;

    // X(f) = sum_j X_j df/dz_j; reliable to order min(N_f - 1 + val X, ...)
    // and to full order when X vanishes at 0
    Jet apply(const Jet& f) const;

    std::string str() const;

private:
    std::vector<Jet> comps_;
};

// Diffeomorphism germ: components vanish at 0 and the linear part is
// invertible.
class DiffeoJet {
public:
    DiffeoJet() = default;
    explicit DiffeoJet(std::vector<Jet> comps);
    static DiffeoJet identity(int nvars, int order, const FieldSpec& field);
    static DiffeoJet linear(const Matrix& a, int order);
    static DiffeoJet scalar_multiple(const Scalar& rho, int nvars, int order);

    int nvars() const { return static_cast<int>(comps_.size()); }
    int order() const { return comps_[0].order(); }
    const FieldSpec& field() const { return comps_[0].field(); }
    const Jet& component(int i) const { return comps_[i]; }
    const std::vector<Jet>& components() const { return comps_; }
    const Matrix& linear_part() const { return linear_; }

    bool is_identity() const;
    bool is_unipotent() const;
    DiffeoJet truncated(int order) const;

    std::string str() const;

private:
    std::vector<Jet> comps_;
    Matrix linear_;
};

DiffeoJet compose(const DiffeoJet& phi, const DiffeoJet& psi); // phi after psi
DiffeoJet diffeo_inverse(const DiffeoJet& phi);
DiffeoJet diffeo_power(const DiffeoJet& phi, long k);
Jet compose_jet(const Jet& f, const DiffeoJet& phi);

PForm wedge(const PForm& a, const PForm& b);
PForm exterior_d(const PForm& a);                             // order drops by one
PForm interior_product(const VectorField& x, const PForm& a); // degree drops by one
PForm lie_derivative(const VectorField& x, const PForm& a);   // Cartan formula

// pullback under an arbitrary analytic map germ (components vanish at 0);
// used by diffeos and by the blow-up chart
PForm pullback_map(const std::vector<Jet>& comps, const PForm& a);
PForm pullback(const DiffeoJet& phi, const PForm& a);
VectorField pushforward_field(const DiffeoJet& phi, const VectorField& x);

struct IntegrabilityReport {
    bool integrable = false;
    int checked_order = 0;
    PForm residual; // zero iff integrable
};
IntegrabilityReport integrability_check(const PForm& omega);
// general p: requires a decomposition list and checks each d(omega_j) ^ Omega
IntegrabilityReport integrability_check(const PForm& omega, const std::vector<PForm>& decomposition);

struct QuasiHomogeneity {
    std::optional<long> weight; // k with L_S eta = k eta
    bool conical = false;       // i_S eta = 0
};
QuasiHomogeneity quasi_homogeneity_check(const PForm& eta, const VectorField& s);

bool form_equal_to_min_order(const PForm& a, const PForm& b);
bool form_approx_zero(const PForm& a, double tol = 1e-9);

} // namespace germcalc
