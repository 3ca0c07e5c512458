#include "germcalc/germdiff.hpp"

#include <algorithm>

namespace germcalc {

namespace {

int jetspace_dim(int nvars, int order) {
    int dim = 0;
    for (int d = 1; d <= order; ++d) dim += mono_table(nvars, d).size();
    return dim;
}

// flat index of a degree-d monomial inside the space of monomials of
// degree 1..N
struct JetBasis {
    int nvars, order;
    std::vector<int> offsets; // offsets[d] = first index of degree d (d >= 1)
    explicit JetBasis(int n, int N) : nvars(n), order(N), offsets(N + 1, 0) {
        int acc = 0;
        for (int d = 1; d <= N; ++d) {
            offsets[d] = acc;
            acc += mono_table(n, d).size();
        }
        dim = acc;
    }
    int dim = 0;
    int index(const Exponents& e) const {
        int d = 0;
        for (int v : e) d += v;
        return offsets[d] + mono_table(nvars, d).rank(e);
    }
    std::vector<Scalar> to_vector(const Jet& f) const {
        std::vector<Scalar> v(dim, Scalar::zero(f.field()));
        f.for_each([&](const Exponents& e, const Scalar& c) {
            int d = 0;
            for (int x : e) d += x;
            if (d >= 1 && d <= order) v[index(e)] = c;
        });
        return v;
    }
    Jet to_jet(const std::vector<Scalar>& v, const FieldSpec& field) const {
        Jet f(nvars, order, field);
        for (int d = 1; d <= order; ++d) {
            const MonoTable& t = mono_table(nvars, d);
            for (int r = 0; r < t.size(); ++r) {
                const Scalar& c = v[offsets[d] + r];
                if (!c.is_zero()) f.set_coeff(t.exps[r], c);
            }
        }
        return f;
    }
};

// matrix of the composition operator f -> f o phi on monomials of degree 1..N
Matrix composition_operator(const DiffeoJet& phi, const JetBasis& basis) {
    int n = phi.nvars(), N = phi.order();
    Matrix t(basis.dim, basis.dim, phi.field());
    // memoized powers of the components
    std::vector<std::vector<Jet>> pw(n);
    for (int i = 0; i < n; ++i)
        pw[i].push_back(Jet::constant(n, N, Scalar::one(phi.field())));
    auto power = [&](int i, int e) -> const Jet& {
        while (static_cast<int>(pw[i].size()) <= e)
            pw[i].push_back(jet_mul_capped(pw[i].back(), phi.component(i), N));
        return pw[i][e];
    };
    for (int d = 1; d <= N; ++d) {
        const MonoTable& tab = mono_table(n, d);
        for (int r = 0; r < tab.size(); ++r) {
            Jet img = Jet::constant(n, N, Scalar::one(phi.field()));
            for (int i = 0; i < n; ++i)
                if (tab.exps[r][i] > 0) img = jet_mul_capped(img, power(i, tab.exps[r][i]), N);
            std::vector<Scalar> col = basis.to_vector(img);
            int j = basis.offsets[d] + r;
            for (int i = 0; i < basis.dim; ++i)
                if (!col[i].is_zero()) t.at(i, j) = col[i];
        }
    }
    return t;
}

DiffeoJet operator_to_diffeo(const Matrix& t, const JetBasis& basis, const FieldSpec& field) {
    std::vector<Jet> comps;
    for (int i = 0; i < basis.nvars; ++i) {
        Exponents e(basis.nvars, 0);
        e[i] = 1;
        int col = basis.index(e);
        std::vector<Scalar> v(basis.dim, Scalar::zero(field));
        for (int r = 0; r < basis.dim; ++r) v[r] = t.at(r, col);
        comps.push_back(basis.to_jet(v, field));
    }
    return DiffeoJet(std::move(comps));
}

} // namespace

DiffeoJet PolyFlow::eval(const Scalar& t) const {
    std::vector<Jet> out;
    for (int i = 0; i < nvars; ++i) {
        Jet f(nvars, order, field);
        for (const auto& [e, poly] : comps[i]) {
            // Horner evaluation of P_sigma(t)
            Scalar acc = Scalar::zero(field);
            for (size_t k = poly.size(); k-- > 0;) acc = acc * t + poly[k];
            if (!acc.is_zero()) f.set_coeff(e, acc);
        }
        out.push_back(f);
    }
    return DiffeoJet(std::move(out));
}

int PolyFlow::max_t_degree() const {
    int deg = 0;
    for (const auto& comp : comps)
        for (const auto& [e, poly] : comp)
            deg = std::max(deg, static_cast<int>(poly.size()) - 1);
    return deg;
}

PolyFlow formal_flow(const VectorField& x) {
    int n = x.nvars(), N = x.order();
    const FieldSpec& F = x.field();
    for (int i = 0; i < n; ++i)
        if (!x.component(i).constant_term().is_zero())
            throw error("formal_flow: field must vanish at the origin");
    if (!is_nilpotent(x.linear_part()))
        throw error("formal_flow: polynomial flow needs a nilpotent linear part; "
                    "use flow_eval_numeric for general linear parts");
    PolyFlow flow;
    flow.nvars = n;
    flow.order = N;
    flow.field = F;
    flow.comps.resize(n);
    int kmax = jetspace_dim(n, N) + 2;
    Rational factorial(1);
    for (int i = 0; i < n; ++i) {
        Jet term = Jet::variable(n, N, F, i);
        factorial = 1;
        for (int k = 0; k <= kmax; ++k) {
            if (term.is_zero()) break;
            if (k > 0) factorial *= k;
            Scalar inv_fact = Scalar::rational(F, Rational(1) / factorial);
            term.for_each([&](const Exponents& e, const Scalar& c) {
                SPoly& p = flow.comps[i][e];
                if (static_cast<int>(p.size()) <= k) p.resize(k + 1, Scalar::zero(F));
                p[k] = c * inv_fact;
            });
            if (k == kmax)
                throw error("formal_flow: Lie series did not terminate"); // unreachable
            term = x.apply(term);
        }
    }
    return flow;
}

DiffeoJet flow_eval_numeric(const VectorField& x, std::complex<double> t) {
    int n = x.nvars(), N = x.order();
    if (x.field().kind != FieldKind::f64)
        throw error("flow_eval_numeric needs float coefficients; exact flows require a "
                    "nilpotent linear part (formal_flow)");
    for (int i = 0; i < n; ++i)
        if (!x.component(i).constant_term().is_zero())
            throw error("flow_eval_numeric: field must vanish at the origin");
    JetBasis basis(n, N);
    int m = basis.dim;
    // derivation matrix on the jet space
    std::vector<std::vector<std::complex<double>>> a(m,
        std::vector<std::complex<double>>(m, 0.0));
    for (int d = 1; d <= N; ++d) {
        const MonoTable& tab = mono_table(n, d);
        for (int r = 0; r < tab.size(); ++r) {
            Jet img = x.apply(Jet::monomial(n, N, tab.exps[r], Scalar::one(x.field())));
            std::vector<Scalar> col = basis.to_vector(img);
            for (int i = 0; i < m; ++i) {
                std::complex<double> z = col[i].to_complex();
                if (z != 0.0) a[i][basis.offsets[d] + r] = t * z;
            }
        }
    }
    // scaling and squaring with a plain Taylor core
    double norm = 0.0;
    for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j) row += std::abs(a[i][j]);
        norm = std::max(norm, row);
    }
    int squarings = 0;
    while (norm > 0.5 && squarings < 60) {
        norm /= 2;
        ++squarings;
    }
    double scale = std::ldexp(1.0, -squarings);
    auto matmul = [&](const auto& p, const auto& q) {
        std::vector<std::vector<std::complex<double>>> r(m,
            std::vector<std::complex<double>>(m, 0.0));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) {
                if (p[i][k] == 0.0) continue;
                for (int j = 0; j < m; ++j) r[i][j] += p[i][k] * q[k][j];
            }
        return r;
    };
    std::vector<std::vector<std::complex<double>>> expa(m,
        std::vector<std::complex<double>>(m, 0.0));
    std::vector<std::vector<std::complex<double>>> term = expa;
    for (int i = 0; i < m; ++i) expa[i][i] = term[i][i] = 1.0;
    std::vector<std::vector<std::complex<double>>> scaled = a;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) scaled[i][j] *= scale;
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, scaled);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) term[i][j] /= static_cast<double>(k);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) expa[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) expa = matmul(expa, expa);

    std::vector<Jet> comps;
    for (int i = 0; i < n; ++i) {
        Exponents e(n, 0);
        e[i] = 1;
        int col = basis.index(e);
        std::vector<Scalar> v;
        v.reserve(m);
        for (int r = 0; r < m; ++r) v.push_back(Scalar::complex(expa[r][col]));
        comps.push_back(basis.to_jet(v, x.field()));
    }
    return DiffeoJet(std::move(comps));
}

VectorField diffeo_log(const DiffeoJet& phi) {
    int n = phi.nvars(), N = phi.order();
    const FieldSpec& F = phi.field();
    if (!phi.is_unipotent()) throw error("diffeo_log: non-unipotent linear part");
    int kmax = jetspace_dim(n, N) + 2;
    std::vector<Jet> out;
    for (int i = 0; i < n; ++i) {
        // X_i = sum_k (-1)^{k+1}/k (C-I)^k (z_i), C f = f o phi
        Jet a = phi.component(i) - Jet::variable(n, N, F, i);
        Jet acc(n, N, F);
        for (int k = 1; k <= kmax; ++k) {
            if (a.is_zero()) break;
            Rational c = Rational(k % 2 == 1 ? 1 : -1) / Rational(k);
            acc += a * Scalar::rational(F, c);
            if (k == kmax) throw error("diffeo_log: series did not terminate");
            a = jet_compose(a, phi.components()) - a;
        }
        out.push_back(acc);
    }
    return VectorField(std::move(out));
}

JordanDecomposition jordan_decompose(const DiffeoJet& phi) {
    JetBasis basis(phi.nvars(), phi.order());
    Matrix t = composition_operator(phi, basis);
    auto [ts, tu] = jordan_chevalley(t);
    // T = T_S T_U with T(f) = f o phi gives phi = phi_u o phi_s in map order
    // and both commute, so the labels line up with the spec's phi_s o phi_u.
    JordanDecomposition out;
    out.phi_s = operator_to_diffeo(ts, basis, phi.field());
    out.phi_u = operator_to_diffeo(tu, basis, phi.field());
    if (out.phi_s.linear_part().is_diagonal()) out.conjugator = linearize_diagonal(out.phi_s);
    return out;
}

std::optional<DiffeoJet> linearize_diagonal(const DiffeoJet& phi) {
    int n = phi.nvars(), N = phi.order();
    const FieldSpec& F = phi.field();
    Matrix l = phi.linear_part();
    if (!l.is_diagonal()) throw error("linearize_diagonal: linear part must be diagonal");
    std::vector<Scalar> lam;
    for (int i = 0; i < n; ++i) lam.push_back(l.at(i, i));
    DiffeoJet lin = DiffeoJet::linear(l, N);
    std::vector<Jet> g;
    for (int i = 0; i < n; ++i) g.push_back(Jet::variable(n, N, F, i));
    for (int k = 2; k <= N; ++k) {
        DiffeoJet gd(std::vector<Jet>(g));
        // residual of phi o g - g o L at degree k
        const MonoTable& tab = mono_table(n, k);
        for (int i = 0; i < n; ++i) {
            Jet lhs = jet_compose(phi.component(i), gd.components());
            Jet rhs = jet_compose(g[i], lin.components());
            Jet res = lhs - rhs;
            for (int r = 0; r < tab.size(); ++r) {
                Scalar c = res.coeff(tab.exps[r]);
                if (c.is_zero()) continue;
                Scalar lpow = Scalar::one(F);
                for (int v = 0; v < n; ++v) lpow = lpow * lam[v].pow(tab.exps[r][v]);
                Scalar denom = lpow - lam[i];
                if (denom.is_zero()) return std::nullopt; // resonance at this order
                g[i].set_coeff(tab.exps[r], g[i].coeff(tab.exps[r]) + c / denom);
            }
        }
    }
    return DiffeoJet(std::move(g));
}

DiffeoJet poincare_linearize(const DiffeoJet& phi) {
    Matrix l = phi.linear_part();
    if (!l.is_scalar_multiple_of_identity())
        throw error("poincare_linearize: linear part must be rho I");
    Scalar rho = l.at(0, 0);
    if (phi.field().exact()) {
        if (root_of_unity_order(rho).has_value())
            throw error("poincare_linearize: rho is a root of unity");
    } else {
        for (int k = 2; k <= phi.order(); ++k)
            if (std::abs((rho.pow(k - 1) - Scalar::one(phi.field())).to_complex()) < 1e-9)
                throw error("poincare_linearize: numerically resonant multiplier");
    }
    auto g = linearize_diagonal(phi);
    if (!g) throw error("poincare_linearize: resonance encountered");
    return *g;
}

Jet scale_argument(const Jet& f, const Scalar& lambda) {
    Jet r(f.nvars(), f.order(), f.field());
    f.for_each([&](const Exponents& e, const Scalar& c) {
        int d = 0;
        for (int v : e) d += v;
        r.set_coeff(e, c * lambda.pow(d));
    });
    return r;
}

Jet solve_twisted_equation(const Scalar& lambda, int nvars, const Jet& w) {
    const FieldSpec& F = w.field();
    if (lambda.field() != F) throw field_mismatch("twisted equation: field mismatch");
    auto ord = root_of_unity_order(lambda);
    if (!ord || *ord < 1) throw error("twisted equation: lambda must be a root of unity");
    long r = *ord;
    int N = w.order();
    Scalar w0 = w.constant_term();
    if (!w0.pow(r).is_one())
        throw error("twisted equation: w(0)^r != 1");
    if (!w0.is_one())
        throw error("twisted equation: no unit solution unless w(0) = 1");
    // product condition prod_j w o S^j = 1
    Jet prod = Jet::constant(nvars, N, Scalar::one(F));
    for (long j = 0; j < r; ++j) prod = prod * scale_argument(w, lambda.pow(j));
    if (prod != Jet::constant(nvars, N, Scalar::one(F)))
        throw error("twisted equation: product condition violated");
    Jet phat = jet_log(w);
    Jet theta(nvars, N, F);
    for (long j = 1; j < r; ++j) {
        Jet term = scale_argument(phat, lambda.pow(j));
        theta += term * Scalar::rational(F, Rational(j) / Rational(r));
    }
    Jet v = jet_exp(theta);
    Jet residual = scale_argument(v, lambda) - w * v;
    if (!residual.is_zero()) throw error("twisted equation: residual check failed");
    return v;
}

VectorField scale_pullback_field(const VectorField& x, const Scalar& lambda) {
    std::vector<Jet> out;
    Scalar inv = lambda.inverse();
    for (int i = 0; i < x.nvars(); ++i) out.push_back(scale_argument(x.component(i), lambda) * inv);
    return VectorField(std::move(out));
}

GradedSplit graded_split(const VectorField& x, int r, int lowest_degree) {
    if (r < 1) throw error("graded_split: r must be positive");
    int n = x.nvars(), N = x.order();
    const FieldSpec& F = x.field();
    GradedSplit out;
    int val = kValInfinity;
    for (int i = 0; i < n; ++i) val = std::min(val, x.component(i).valuation());
    out.lowest_degree = val == kValInfinity ? lowest_degree : val;
    if (val != kValInfinity && val != lowest_degree)
        throw error("graded_split: lowest homogeneous degree is " + std::to_string(val) +
                    ", not " + std::to_string(lowest_degree));
    for (int c = 0; c < r; ++c) out.classes.emplace_back(n, N, F);
    for (int d = 0; d <= N; ++d) {
        int cls = ((d - 1) % r + r) % r;
        for (int i = 0; i < n; ++i) {
            const MonoTable& tab = mono_table(n, d);
            for (int rk = 0; rk < tab.size(); ++rk) {
                Scalar c = x.component(i).coeff(tab.exps[rk]);
                if (!c.is_zero()) out.classes[cls].component(i).set_coeff(tab.exps[rk], c);
            }
        }
    }
    int nonzero = 0, which = -1;
    for (int c = 0; c < r; ++c)
        if (!out.classes[c].is_zero()) {
            ++nonzero;
            which = c;
        }
    if (nonzero == 1) out.single_class = which;
    return out;
}

Scalar GradedSplit::delta_for(const Scalar& lambda) const {
    return lambda.pow(lowest_degree - 1);
}

} // namespace germcalc
