#include "germcalc/calculus.hpp"

#include <algorithm>
#include <sstream>

namespace germcalc {

namespace {

// sorts idx ascending; returns the permutation sign, 0 on a repeated index
int sort_sign(IndexTuple& idx) {
    int sign = 1;
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) {
                std::swap(idx[i], idx[j]);
                sign = -sign;
            }
        }
    return sign;
}

std::string index_str(int nvars, const IndexTuple& idx) {
    std::string s;
    for (size_t k = 0; k < idx.size(); ++k) {
        if (k) s += "^";
        s += "d" + default_var_name(nvars, idx[k]);
    }
    return s;
}

} // namespace

PForm::PForm(int degree, int nvars, int order, const FieldSpec& field)
    : degree_(degree), nvars_(nvars), order_(order), field_(field) {
    if (degree < 0) throw error("negative form degree");
    if (nvars < 1) throw error("form needs at least one variable");
}

PForm PForm::from_jet(const Jet& f) {
    PForm a(0, f.nvars(), f.order(), f.field());
    if (!f.is_zero()) a.comps_.emplace(IndexTuple{}, f);
    return a;
}

PForm PForm::basis(int nvars, int order, const FieldSpec& field, const IndexTuple& idx) {
    PForm a(static_cast<int>(idx.size()), nvars, order, field);
    a.add_term(idx, Jet::constant(nvars, order, Scalar::one(field)));
    return a;
}

bool PForm::is_zero() const {
    for (const auto& [idx, f] : comps_)
        if (!f.is_zero()) return false;
    return true;
}

Jet PForm::component(const IndexTuple& idx) const {
    auto it = comps_.find(idx);
    if (it == comps_.end()) return Jet::zero(nvars_, order_, field_);
    return it->second;
}

void PForm::add_term(const IndexTuple& idx, const Jet& coeff) {
    if (static_cast<int>(idx.size()) != degree_) throw error("index tuple arity mismatch");
    if (coeff.nvars() != nvars_ || coeff.field() != field_)
        throw error("form coefficient ambient mismatch");
    if (degree_ > nvars_) return; // normalizes to the zero form
    IndexTuple key = idx;
    int sign = sort_sign(key);
    if (sign == 0 || coeff.is_zero()) return;
    for (int v : key)
        if (v < 0 || v >= nvars_) throw error("form index out of range");
    Jet add = sign == 1 ? coeff : -coeff;
    auto it = comps_.find(key);
    if (it == comps_.end())
        comps_.emplace(key, add.truncated(order_));
    else {
        it->second += add.truncated(order_);
        if (it->second.is_zero()) comps_.erase(it);
    }
}

PForm PForm::truncated(int order) const {
    PForm r(degree_, nvars_, order, field_);
    for (const auto& [idx, f] : comps_) {
        Jet t = f.truncated(order);
        if (!t.is_zero()) r.comps_.emplace(idx, t);
    }
    return r;
}

void PForm::prune() {
    for (auto it = comps_.begin(); it != comps_.end();) {
        if (it->second.is_zero())
            it = comps_.erase(it);
        else
            ++it;
    }
}

PForm PForm::operator+(const PForm& o) const {
    if (degree_ != o.degree_ || nvars_ != o.nvars_ || field_ != o.field_)
        throw error("form ambient mismatch");
    int ord = std::min(order_, o.order_);
    PForm r = truncated(ord);
    for (const auto& [idx, f] : o.comps_) {
        auto it = r.comps_.find(idx);
        if (it == r.comps_.end())
            r.comps_.emplace(idx, f.truncated(ord));
        else
            it->second += f.truncated(ord);
    }
    r.prune();
    return r;
}

PForm PForm::operator-() const {
    PForm r = *this;
    for (auto& [idx, f] : r.comps_) f = -f;
    return r;
}

PForm PForm::operator-(const PForm& o) const { return *this + (-o); }

PForm PForm::operator*(const Jet& f) const {
    PForm r(degree_, nvars_, std::min(order_, f.order()), field_);
    for (const auto& [idx, g] : comps_) r.add_term(idx, g.truncated(r.order_) * f.truncated(r.order_));
    return r;
}

PForm PForm::operator*(const Scalar& c) const {
    PForm r(degree_, nvars_, order_, field_);
    for (const auto& [idx, g] : comps_) r.add_term(idx, g * c);
    return r;
}

bool PForm::operator==(const PForm& o) const {
    if (degree_ != o.degree_ || nvars_ != o.nvars_ || field_ != o.field_ || order_ != o.order_)
        return false;
    // canonical: pruned maps compare directly
    if (comps_.size() != o.comps_.size()) return false;
    for (const auto& [idx, f] : comps_) {
        auto it = o.comps_.find(idx);
        if (it == o.comps_.end() || !(it->second == f)) return false;
    }
    return true;
}

std::string PForm::str() const {
    if (comps_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [idx, f] : comps_) {
        if (!first) out << " + ";
        first = false;
        if (degree_ == 0) {
            out << f.str();
            continue;
        }
        out << "(" << f.str() << ")*" << index_str(nvars_, idx);
    }
    return out.str();
}

VectorField::VectorField(int nvars, int order, const FieldSpec& field)
    : comps_(nvars, Jet::zero(nvars, order, field)) {}

VectorField::VectorField(std::vector<Jet> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw error("empty vector field");
    for (const auto& c : comps_)
        if (c.nvars() != nvars() || c.field() != field() || c.order() != order())
            throw error("vector field component ambient mismatch");
}

VectorField VectorField::radial(int nvars, int order, const FieldSpec& field) {
    VectorField x(nvars, order, field);
    for (int i = 0; i < nvars; ++i) x.comps_[i] = Jet::variable(nvars, order, field, i);
    return x;
}

VectorField VectorField::linear(const Matrix& a, int order) {
    int n = a.rows();
    VectorField x(n, order, a.field());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!a.at(i, j).is_zero())
                x.comps_[i] += Jet::variable(n, order, a.field(), j) * a.at(i, j);
    return x;
}

bool VectorField::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const Jet& j) { return j.is_zero(); });
}

Matrix VectorField::linear_part() const {
    int n = nvars();
    Matrix a(n, n, field());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Exponents e(n, 0);
            e[j] = 1;
            a.at(i, j) = comps_[i].coeff(e);
        }
    return a;
}

VectorField VectorField::operator+(const VectorField& o) const {
    if (nvars() != o.nvars()) throw error("vector field ambient mismatch");
    std::vector<Jet> c;
    for (int i = 0; i < nvars(); ++i) c.push_back(comps_[i] + o.comps_[i]);
    return VectorField(std::move(c));
}

VectorField VectorField::operator-(const VectorField& o) const {
    if (nvars() != o.nvars()) throw error("vector field ambient mismatch");
    std::vector<Jet> c;
    for (int i = 0; i < nvars(); ++i) c.push_back(comps_[i] - o.comps_[i]);
    return VectorField(std::move(c));
}

VectorField VectorField::operator*(const Scalar& k) const {
    std::vector<Jet> c;
    for (const auto& j : comps_) c.push_back(j * k);
    return VectorField(std::move(c));
}

VectorField VectorField::operator*(const Jet& f) const {
    std::vector<Jet> c;
    for (const auto& j : comps_) c.push_back(j * f);
    return VectorField(std::move(c));
}

bool VectorField::operator==(const VectorField& o) const { return comps_ == o.comps_; }

VectorField VectorField::truncated(int order) const {
    std::vector<Jet> c;
    for (const auto& j : comps_) c.push_back(j.truncated(order));
    return VectorField(std::move(c));
}

Jet VectorField::apply(const Jet& f) const {
    if (f.order() == 0) return Jet::zero(f.nvars(), 0, f.field());
    // X_j df/dz_j: when every X_j vanishes at 0, the products never touch
    // the unknown top-degree slice of df/dz_j, so the result keeps f's order
    bool vanishes = true;
    for (const auto& c : comps_)
        if (!c.constant_term().is_zero()) vanishes = false;
    int target = vanishes ? std::min(f.order(), order()) : std::min(f.order() - 1, order());
    Jet acc(f.nvars(), target, f.field());
    for (int j = 0; j < nvars(); ++j) {
        if (comps_[j].is_zero()) continue;
        acc += jet_mul_capped(comps_[j], f.derivative(j), target);
    }
    return acc;
}

DiffeoJet::DiffeoJet(std::vector<Jet> comps) {
    if (comps.empty()) throw error("empty diffeomorphism");
    comps_ = std::move(comps);
    int n = static_cast<int>(comps_.size());
    for (const auto& c : comps_) {
        if (c.nvars() != n || c.field() != field() || c.order() != order())
            throw error("diffeo component ambient mismatch");
        if (!c.constant_term().is_zero()) throw error("diffeo must fix the origin");
    }
    linear_ = Matrix(n, n, field());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Exponents e(n, 0);
            e[j] = 1;
            linear_.at(i, j) = comps_[i].coeff(e);
        }
    if (det(linear_).is_zero()) throw error("diffeo has a singular linear part");
}

DiffeoJet DiffeoJet::identity(int nvars, int order, const FieldSpec& field) {
    std::vector<Jet> c;
    for (int i = 0; i < nvars; ++i) c.push_back(Jet::variable(nvars, order, field, i));
    return DiffeoJet(std::move(c));
}

DiffeoJet DiffeoJet::linear(const Matrix& a, int order) {
    int n = a.rows();
    std::vector<Jet> c;
    for (int i = 0; i < n; ++i) {
        Jet f(n, order, a.field());
        for (int j = 0; j < n; ++j)
            if (!a.at(i, j).is_zero())
                f += Jet::variable(n, order, a.field(), j) * a.at(i, j);
        c.push_back(f);
    }
    return DiffeoJet(std::move(c));
}

DiffeoJet DiffeoJet::scalar_multiple(const Scalar& rho, int nvars, int order) {
    return linear(Matrix::identity(nvars, rho.field()) * rho, order);
}

bool DiffeoJet::is_identity() const {
    for (int i = 0; i < nvars(); ++i)
        if (comps_[i] != Jet::variable(nvars(), order(), field(), i)) return false;
    return true;
}

bool DiffeoJet::is_unipotent() const { return germcalc::is_unipotent(linear_); }

DiffeoJet DiffeoJet::truncated(int order) const {
    std::vector<Jet> c;
    for (const auto& j : comps_) c.push_back(j.truncated(order));
    return DiffeoJet(std::move(c));
}

std::string DiffeoJet::str() const {
    std::string s = "[";
    for (int i = 0; i < nvars(); ++i) s += (i ? ", " : "") + comps_[i].str();
    return s + "]";
}

DiffeoJet compose(const DiffeoJet& phi, const DiffeoJet& psi) {
    std::vector<Jet> c;
    for (int i = 0; i < phi.nvars(); ++i) c.push_back(jet_compose(phi.component(i), psi.components()));
    return DiffeoJet(std::move(c));
}

Jet compose_jet(const Jet& f, const DiffeoJet& phi) { return jet_compose(f, phi.components()); }

DiffeoJet diffeo_inverse(const DiffeoJet& phi) {
    int n = phi.nvars(), N = phi.order();
    const FieldSpec& F = phi.field();
    Matrix linv_m = *inverse(phi.linear_part());
    // psi_1 = L^{-1}; at each degree k >= 2 correct by -L^{-1} [phi(psi)]_k
    DiffeoJet psi = DiffeoJet::linear(linv_m, N);
    for (int k = 2; k <= N; ++k) {
        std::vector<Jet> resid;
        for (int i = 0; i < n; ++i)
            resid.push_back(jet_compose(phi.component(i), psi.components()));
        // residual_k of phi(psi) - id
        std::vector<Jet> cur = psi.components();
        bool changed = false;
        const MonoTable& t = mono_table(n, k);
        for (int r = 0; r < t.size(); ++r) {
            std::vector<Scalar> v(n, Scalar::zero(F));
            bool nz = false;
            for (int i = 0; i < n; ++i) {
                Scalar c = resid[i].coeff(t.exps[r]);
                if (!c.is_zero()) nz = true;
                v[i] = c;
            }
            if (!nz) continue;
            std::vector<Scalar> w = mat_vec(linv_m, v);
            for (int i = 0; i < n; ++i)
                if (!w[i].is_zero())
                    cur[i].set_coeff(t.exps[r], cur[i].coeff(t.exps[r]) - w[i]);
            changed = true;
        }
        if (changed) psi = DiffeoJet(std::move(cur));
    }
    return psi;
}

DiffeoJet diffeo_power(const DiffeoJet& phi, long k) {
    if (k < 0) return diffeo_power(diffeo_inverse(phi), -k);
    DiffeoJet acc = DiffeoJet::identity(phi.nvars(), phi.order(), phi.field());
    for (long i = 0; i < k; ++i) acc = compose(phi, acc);
    return acc;
}

PForm wedge(const PForm& a, const PForm& b) {
    if (a.nvars() != b.nvars() || a.field() != b.field()) throw error("wedge ambient mismatch");
    int ord = std::min(a.order(), b.order());
    PForm r(a.degree() + b.degree(), a.nvars(), ord, a.field());
    if (a.degree() + b.degree() > a.nvars()) return r; // zero form beyond top degree
    for (const auto& [ia, fa] : a.components())
        for (const auto& [ib, fb] : b.components()) {
            IndexTuple idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(idx, jet_mul_capped(fa, fb, ord));
        }
    return r;
}

PForm exterior_d(const PForm& a) {
    PForm r(a.degree() + 1, a.nvars(), a.order() - 1, a.field());
    if (a.degree() + 1 > a.nvars()) return r; // flagged off as the zero form
    for (const auto& [idx, f] : a.components())
        for (int v = 0; v < a.nvars(); ++v) {
            Jet df = f.derivative(v);
            if (df.is_zero()) continue;
            IndexTuple nidx;
            nidx.push_back(v);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            r.add_term(nidx, df);
        }
    return r;
}

PForm interior_product(const VectorField& x, const PForm& a) {
    if (a.degree() < 1) throw error("interior product needs degree >= 1");
    if (x.nvars() != a.nvars() || x.field() != a.field())
        throw error("interior product ambient mismatch");
    int ord = std::min(a.order(), x.order());
    PForm r(a.degree() - 1, a.nvars(), ord, a.field());
    for (const auto& [idx, f] : a.components()) {
        for (size_t k = 0; k < idx.size(); ++k) {
            const Jet& xk = x.component(idx[k]);
            if (xk.is_zero()) continue;
            IndexTuple rest;
            for (size_t j = 0; j < idx.size(); ++j)
                if (j != k) rest.push_back(idx[j]);
            Jet term = jet_mul_capped(xk, f, ord);
            if (k % 2 == 1) term = -term;
            r.add_term(rest, term);
        }
    }
    return r;
}

PForm lie_derivative(const VectorField& x, const PForm& a) {
    if (a.degree() == 0) {
        // L_X f = X(f)
        Jet f = a.component({});
        return PForm::from_jet(x.apply(f).truncated(std::min(a.order(), x.order()) - 1));
    }
    PForm d_ixa = exterior_d(interior_product(x, a));
    if (a.degree() < a.nvars()) {
        PForm ix_da = interior_product(x, exterior_d(a));
        return ix_da + d_ixa;
    }
    return d_ixa; // da vanishes beyond top degree
}

PForm pullback_map(const std::vector<Jet>& comps, const PForm& a) {
    if (comps.empty() || static_cast<int>(comps.size()) != a.nvars())
        throw error("pullback map arity mismatch");
    int k = comps[0].nvars();
    int ord = a.order();
    for (const auto& c : comps) ord = std::min(ord, c.order());
    if (a.degree() > 0) ord -= 1; // differentials of the map components
    if (a.degree() == 0) {
        Jet f = a.component({});
        std::vector<Jet> m;
        for (const auto& c : comps) m.push_back(c.truncated(ord));
        return PForm::from_jet(jet_compose(f.truncated(ord), m));
    }
    std::vector<Jet> sub;
    for (const auto& c : comps) sub.push_back(c.truncated(ord));
    // d(comp_i) as 1-forms in the target variables
    std::vector<PForm> dcomp;
    for (const auto& c : comps) {
        PForm d(1, k, ord, a.field());
        for (int v = 0; v < k; ++v) d.add_term({v}, c.derivative(v).truncated(ord));
        dcomp.push_back(d);
    }
    PForm r(a.degree(), k, ord, a.field());
    for (const auto& [idx, f] : a.components()) {
        PForm term = PForm::from_jet(jet_compose(f.truncated(ord), sub));
        for (int v : idx) term = wedge(term, dcomp[v]);
        r = r + term;
    }
    return r;
}

PForm pullback(const DiffeoJet& phi, const PForm& a) { return pullback_map(phi.components(), a); }

VectorField pushforward_field(const DiffeoJet& phi, const VectorField& x) {
    if (phi.nvars() != x.nvars() || phi.field() != x.field())
        throw error("pushforward ambient mismatch");
    DiffeoJet inv = diffeo_inverse(phi);
    int ord = std::min(phi.order(), x.order()) - 1;
    int n = phi.nvars();
    std::vector<Jet> out;
    for (int i = 0; i < n; ++i) {
        Jet acc(n, ord, x.field());
        for (int j = 0; j < n; ++j) {
            Jet dij = phi.component(i).derivative(j).truncated(ord);
            if (dij.is_zero() || x.component(j).is_zero()) continue;
            Jet term = jet_mul_capped(dij, x.component(j).truncated(ord), ord);
            acc += term;
        }
        // (DPhi . X) composed with Phi^{-1}
        std::vector<Jet> invc;
        for (const auto& c : inv.components()) invc.push_back(c.truncated(ord));
        out.push_back(jet_compose(acc, invc));
    }
    return VectorField(std::move(out));
}

IntegrabilityReport integrability_check(const PForm& omega) {
    if (omega.degree() != 1)
        throw error("integrability_check without decomposition needs a 1-form");
    PForm residual = wedge(omega, exterior_d(omega));
    IntegrabilityReport rep;
    rep.checked_order = residual.order();
    rep.residual = residual;
    rep.integrable = residual.is_zero();
    return rep;
}

IntegrabilityReport integrability_check(const PForm& omega,
                                        const std::vector<PForm>& decomposition) {
    IntegrabilityReport rep;
    rep.integrable = true;
    rep.checked_order = omega.order() - 1;
    rep.residual = PForm(omega.degree() + 2, omega.nvars(), omega.order() - 1, omega.field());
    for (const auto& w : decomposition) {
        PForm res = wedge(exterior_d(w), omega);
        rep.checked_order = std::min(rep.checked_order, res.order());
        if (!res.is_zero()) {
            rep.integrable = false;
            rep.residual = res;
            break;
        }
    }
    return rep;
}

QuasiHomogeneity quasi_homogeneity_check(const PForm& eta, const VectorField& s) {
    Matrix l = s.linear_part();
    if (!l.is_diagonal()) throw error("quasi_homogeneity_check needs a diagonal field");
    for (int i = 0; i < s.nvars(); ++i) {
        Jet expect = Jet::variable(s.nvars(), s.order(), s.field(), i) * l.at(i, i);
        if (s.component(i) != expect) throw error("quasi_homogeneity_check needs a linear field");
        Scalar w = l.at(i, i);
        if (!w.is_rational() || !rat_is_int(w.rational_value()) || w.rational_value() <= 0)
            throw error("quasi_homogeneity_check needs positive integer weights");
    }
    QuasiHomogeneity rep;
    PForm ls = lie_derivative(s, eta);
    PForm eta_t = eta.truncated(ls.order());
    if (eta_t.is_zero()) {
        rep.weight = ls.is_zero() ? std::optional<long>(0) : std::nullopt;
    } else {
        // candidate k from the first nonzero coefficient pair
        std::optional<Rational> k;
        for (const auto& [idx, f] : eta_t.components()) {
            Jet lsf = ls.component(idx);
            bool done = false;
            f.for_each([&](const Exponents& e, const Scalar& c) {
                if (done) return;
                Scalar top = lsf.coeff(e);
                Scalar ratio = top / c;
                if (ratio.is_rational()) k = ratio.rational_value();
                done = true;
            });
            if (done) break;
        }
        if (k && rat_is_int(*k) && *k >= 0 &&
            ls == eta_t * Scalar::rational(eta.field(), *k))
            rep.weight = k->get_num().get_si();
    }
    if (eta.degree() >= 1) {
        rep.conical = interior_product(s, eta).is_zero();
    }
    return rep;
}

bool form_equal_to_min_order(const PForm& a, const PForm& b) {
    int ord = std::min(a.order(), b.order());
    return a.truncated(ord) == b.truncated(ord);
}

bool form_approx_zero(const PForm& a, double tol) {
    for (const auto& [idx, f] : a.components())
        if (!jet_approx_zero(f, tol)) return false;
    return true;
}

} // namespace germcalc
