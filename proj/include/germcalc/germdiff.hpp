#pragma once

#include <map>

#include "germcalc/calculus.hpp"

namespace germcalc {

// Formal flow exp(tX) with each multi-index coefficient a polynomial in t.
// Produced only for fields with nilpotent linear part, where the Lie series
// terminates on every jet.
struct PolyFlow {
    int nvars = 0;
    int order = 0;
    FieldSpec field;
    std::vector<std::map<Exponents, SPoly>> comps; // per component: sigma -> P_sigma(t)

    DiffeoJet eval(const Scalar& t) const;
    int max_t_degree() const;
};

// exp(tX) to jet order N for X with X(0) = 0 and nilpotent DX(0); satisfies
// the flow ODE d/dt exp(tX) = X o exp(tX) coefficientwise.
PolyFlow formal_flow(const VectorField& x);

// Numeric flow at an explicit scalar time for general linear parts
// (float coefficients only): exponential of the derivation operator on the
// truncated jet space.
DiffeoJet flow_eval_numeric(const VectorField& x, std::complex<double> t);

// Logarithm of a unipotent diffeomorphism: the nilpotent X with
// exp(X) = phi mod m^{N+1}.
VectorField diffeo_log(const DiffeoJet& phi);

struct JordanDecomposition {
    DiffeoJet phi_s;
    DiffeoJet phi_u;
    // conjugator g with g^{-1} o phi_s o g linear, produced when the
    // semisimple linear part is diagonal and non-resonant up to order N
    std::optional<DiffeoJet> conjugator;
};

// phi = phi_s o phi_u = phi_u o phi_s mod m^{N+1}; phi_u unipotent, phi_s
// semisimple. Computed through the multiplicative Jordan-Chevalley
// decomposition of the composition operator f -> f o phi on the truncated
// jet space, which needs no eigenvalue computation and is exact over the
// coefficient field.
JordanDecomposition jordan_decompose(const DiffeoJet& phi);

// g with Dg(0) = I and g^{-1} o phi o g = D phi(0) mod m^{N+1}, for phi with
// diagonal non-resonant linear part; nullopt on resonance.
std::optional<DiffeoJet> linearize_diagonal(const DiffeoJet& phi);

// Scalar case D phi(0) = rho I with rho not a root of unity; unique g with
// Dg(0) = I. Throws on a root of unity or on resonance (floats).
DiffeoJet poincare_linearize(const DiffeoJet& phi);

// Solves v o S = w . v with v(0) = 1 for S = lambda I, lambda a primitive
// r-th root of unity, given prod_{j<r} w o S^j = 1. v = exp(theta) with
// theta = (1/r) sum_j j . (log w) o S^j.
Jet solve_twisted_equation(const Scalar& lambda, int nvars, const Jet& w);

// f(lambda z1, ..., lambda zn): monomial scaling by powers of lambda
Jet scale_argument(const Jet& f, const Scalar& lambda);

struct GradedSplit {
    std::vector<VectorField> classes; // r residue classes of degree mod r
    int lowest_degree = 0;
    std::optional<int> single_class; // set when exactly one class is nonzero
    // the eigenvalue S^*(X) = delta X for S = lambda I when single_class holds
    Scalar delta_for(const Scalar& lambda) const;
};

GradedSplit graded_split(const VectorField& x, int r, int lowest_degree);

// S^*(X) for S = lambda I: lambda^{-1} X(lambda z)
VectorField scale_pullback_field(const VectorField& x, const Scalar& lambda);

} // namespace germcalc
