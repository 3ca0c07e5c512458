#include "germcalc/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace germcalc {

namespace {

uint64_t pack_exps(const Exponents& e) {
    // enough for n <= 8 and degrees < 256; desk scale is far below both
    uint64_t key = 0;
    for (int v : e) key = (key << 8) | static_cast<uint64_t>(v & 0xff);
    return key;
}

struct MonoTableFull {
    MonoTable table;
    std::unordered_map<uint64_t, int> rank;
};

void gen_exps(int nvars, int degree, int pos, Exponents& cur, std::vector<Exponents>& out) {
    if (pos == nvars - 1) {
        cur[pos] = degree;
        out.push_back(cur);
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur[pos] = e;
        gen_exps(nvars, degree - e, pos + 1, cur, out);
    }
}

const MonoTableFull& mono_table_full(int nvars, int degree) {
    static std::map<std::pair<int, int>, MonoTableFull> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nvars, degree);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    MonoTableFull t;
    t.table.nvars = nvars;
    t.table.degree = degree;
    Exponents cur(nvars, 0);
    gen_exps(nvars, degree, 0, cur, t.table.exps);
    for (size_t i = 0; i < t.table.exps.size(); ++i)
        t.rank.emplace(pack_exps(t.table.exps[i]), static_cast<int>(i));
    auto [pos, ok] = cache.emplace(key, std::move(t));
    (void)ok;
    return pos->second;
}

} // namespace

int MonoTable::rank(const Exponents& e) const {
    const auto& full = mono_table_full(nvars, degree);
    auto it = full.rank.find(pack_exps(e));
    return it == full.rank.end() ? -1 : it->second;
}

const MonoTable& mono_table(int nvars, int degree) {
    return mono_table_full(nvars, degree).table;
}

Jet::Jet(int nvars, int order, const FieldSpec& field)
    : nvars_(nvars), order_(order), field_(field) {
    if (nvars < 1) throw error("jet needs at least one variable");
    if (order < 0) throw error("jet order must be non-negative");
    blocks_.resize(order + 1);
}

Jet Jet::constant(int nvars, int order, const Scalar& c) {
    Jet j(nvars, order, c.field());
    if (!c.is_zero()) j.set_coeff(Exponents(nvars, 0), c);
    return j;
}

Jet Jet::variable(int nvars, int order, const FieldSpec& field, int index) {
    if (index < 0 || index >= nvars) throw error("variable index out of range");
    Jet j(nvars, order, field);
    if (order >= 1) {
        Exponents e(nvars, 0);
        e[index] = 1;
        j.set_coeff(e, Scalar::one(field));
    }
    return j;
}

Jet Jet::monomial(int nvars, int order, const Exponents& e, const Scalar& c) {
    Jet j(nvars, order, c.field());
    j.set_coeff(e, c);
    return j;
}

void Jet::ensure_block(int d) {
    if (blocks_[d].empty())
        blocks_[d].assign(mono_table(nvars_, d).size(), Scalar::zero(field_));
}

void Jet::prune() {
    for (auto& b : blocks_) {
        if (b.empty()) continue;
        bool all_zero =
            std::all_of(b.begin(), b.end(), [](const Scalar& s) { return s.is_zero(); });
        if (all_zero) b.clear();
    }
}

bool Jet::is_zero() const {
    for (const auto& b : blocks_)
        for (const auto& c : b)
            if (!c.is_zero()) return false;
    return true;
}

int Jet::valuation() const {
    for (int d = 0; d <= order_; ++d) {
        for (const auto& c : blocks_[d])
            if (!c.is_zero()) return d;
    }
    return kValInfinity;
}

Scalar Jet::coeff(const Exponents& e) const {
    if (static_cast<int>(e.size()) != nvars_) throw error("exponent arity mismatch");
    int d = 0;
    for (int v : e) d += v;
    if (d > order_ || blocks_[d].empty()) return Scalar::zero(field_);
    int r = mono_table(nvars_, d).rank(e);
    return blocks_[d][r];
}

Scalar Jet::constant_term() const { return coeff(Exponents(nvars_, 0)); }

void Jet::set_coeff(const Exponents& e, const Scalar& c) {
    if (static_cast<int>(e.size()) != nvars_) throw error("exponent arity mismatch");
    if (c.field() != field_) throw field_mismatch("coefficient field mismatch");
    int d = 0;
    for (int v : e) {
        if (v < 0) throw error("negative exponent");
        d += v;
    }
    if (d > order_) throw error("monomial degree exceeds jet order");
    ensure_block(d);
    int r = mono_table(nvars_, d).rank(e);
    blocks_[d][r] = c;
}

Jet Jet::truncated(int order) const {
    Jet r(nvars_, order, field_);
    r.warn_ = warn_;
    for (int d = 0; d <= std::min(order, order_); ++d) r.blocks_[d] = blocks_[d];
    return r;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& b : r.blocks_)
        for (auto& c : b) c = -c;
    return r;
}

Jet Jet::operator+(const Jet& o) const {
    if (nvars_ != o.nvars_) throw error("jet variable-count mismatch");
    if (field_ != o.field_) throw field_mismatch("jet field mismatch");
    int ord = std::min(order_, o.order_);
    Jet r = truncated(ord);
    r.warn_ = warn_ || o.warn_ || (order_ != o.order_);
    for (int d = 0; d <= ord; ++d) {
        if (o.blocks_[d].empty()) continue;
        r.ensure_block(d);
        for (size_t i = 0; i < o.blocks_[d].size(); ++i) r.blocks_[d][i] += o.blocks_[d][i];
    }
    r.prune();
    return r;
}

Jet Jet::operator-(const Jet& o) const { return *this + (-o); }

Jet jet_mul_capped(const Jet& a, const Jet& b, int cap) {
    if (a.nvars_ != b.nvars_) throw error("jet variable-count mismatch");
    if (a.field_ != b.field_) throw field_mismatch("jet field mismatch");
    Jet r(a.nvars_, cap, a.field_);
    r.warn_ = a.warn_ || b.warn_;
    int n = a.nvars_;
    for (int da = 0; da <= std::min(a.order_, cap); ++da) {
        if (a.blocks_[da].empty()) continue;
        const MonoTable& ta = mono_table(n, da);
        for (int db = 0; db <= std::min(b.order_, cap - da); ++db) {
            if (b.blocks_[db].empty()) continue;
            const MonoTable& tb = mono_table(n, db);
            const MonoTable& tr = mono_table(n, da + db);
            r.ensure_block(da + db);
            auto& out = r.blocks_[da + db];
            for (int ia = 0; ia < ta.size(); ++ia) {
                const Scalar& ca = a.blocks_[da][ia];
                if (ca.is_zero()) continue;
                for (int ib = 0; ib < tb.size(); ++ib) {
                    const Scalar& cb = b.blocks_[db][ib];
                    if (cb.is_zero()) continue;
                    Exponents e = ta.exps[ia];
                    for (int v = 0; v < n; ++v) e[v] += tb.exps[ib][v];
                    out[tr.rank(e)] += ca * cb;
                }
            }
        }
    }
    r.prune();
    return r;
}

Jet Jet::operator*(const Jet& o) const {
    Jet r = jet_mul_capped(*this, o, std::min(order_, o.order_));
    r.set_warn(r.warned() || order_ != o.order_);
    return r;
}

Jet Jet::operator*(const Scalar& c) const {
    if (c.field() != field_) throw field_mismatch("scalar field mismatch");
    if (c.is_zero()) return Jet(nvars_, order_, field_).set_warn(warn_);
    Jet r = *this;
    for (auto& b : r.blocks_)
        for (auto& x : b) x = x * c;
    return r;
}

bool Jet::operator==(const Jet& o) const {
    if (nvars_ != o.nvars_ || field_ != o.field_ || order_ != o.order_) return false;
    for (int d = 0; d <= order_; ++d) {
        bool ea = blocks_[d].empty(), eb = o.blocks_[d].empty();
        if (ea && eb) continue;
        const MonoTable& t = mono_table(nvars_, d);
        for (int i = 0; i < t.size(); ++i) {
            Scalar ca = ea ? Scalar::zero(field_) : blocks_[d][i];
            Scalar cb = eb ? Scalar::zero(field_) : o.blocks_[d][i];
            if (ca != cb) return false;
        }
    }
    return true;
}

bool jet_equal_to_min_order(const Jet& a, const Jet& b) {
    int ord = std::min(a.order(), b.order());
    return a.truncated(ord) == b.truncated(ord);
}

bool jet_approx_zero(const Jet& a, double tol) {
    bool ok = true;
    a.for_each([&](const Exponents&, const Scalar& c) {
        if (std::abs(c.to_complex()) > tol) ok = false;
    });
    return ok;
}

Jet Jet::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw error("derivative variable out of range");
    if (order_ == 0) throw error("cannot differentiate an order-0 jet");
    Jet r(nvars_, order_ - 1, field_);
    r.warn_ = warn_;
    for (int d = 1; d <= order_; ++d) {
        if (blocks_[d].empty()) continue;
        const MonoTable& t = mono_table(nvars_, d);
        const MonoTable& tr = mono_table(nvars_, d - 1);
        for (int i = 0; i < t.size(); ++i) {
            const Scalar& c = blocks_[d][i];
            if (c.is_zero() || t.exps[i][var] == 0) continue;
            Exponents e = t.exps[i];
            Scalar factor = Scalar::integer(field_, e[var]);
            e[var] -= 1;
            r.ensure_block(d - 1);
            r.blocks_[d - 1][tr.rank(e)] += c * factor;
        }
    }
    r.prune();
    return r;
}

void Jet::for_each(const std::function<void(const Exponents&, const Scalar&)>& fn) const {
    for (int d = 0; d <= order_; ++d) {
        if (blocks_[d].empty()) continue;
        const MonoTable& t = mono_table(nvars_, d);
        for (int i = 0; i < t.size(); ++i)
            if (!blocks_[d][i].is_zero()) fn(t.exps[i], blocks_[d][i]);
    }
}

Jet jet_compose(const Jet& f, const std::vector<Jet>& map) {
    if (static_cast<int>(map.size()) != f.nvars())
        throw error("jet_compose: map arity must match variable count");
    for (const auto& g : map) {
        if (g.field() != f.field()) throw field_mismatch("jet_compose field mismatch");
        if (!g.constant_term().is_zero())
            throw error("jet_compose: substituted jet has nonzero constant term");
    }
    int k = map[0].nvars();
    int ord = f.order();
    for (const auto& g : map) {
        if (g.nvars() != k) throw error("jet_compose: inconsistent target variable count");
        ord = std::min(ord, g.order());
    }
    // memoized powers map[i]^e
    std::vector<std::vector<Jet>> pw(map.size());
    for (size_t i = 0; i < map.size(); ++i)
        pw[i].push_back(Jet::constant(k, ord, Scalar::one(f.field())));
    auto power = [&](size_t i, int e) -> const Jet& {
        while (static_cast<int>(pw[i].size()) <= e)
            pw[i].push_back(jet_mul_capped(pw[i].back(), map[i], ord));
        return pw[i][e];
    };
    Jet acc(k, ord, f.field());
    f.for_each([&](const Exponents& e, const Scalar& c) {
        int deg = 0;
        for (int v : e) deg += v;
        if (deg > ord) return; // the substituted jets vanish at 0
        Jet term = Jet::constant(k, ord, c);
        for (size_t i = 0; i < map.size(); ++i)
            if (e[i] > 0) term = jet_mul_capped(term, power(i, e[i]), ord);
        acc += term;
    });
    acc.set_warn(acc.warned() || f.warned());
    return acc;
}

Jet jet_unit_inverse(const Jet& u) {
    Scalar u0 = u.constant_term();
    if (u0.is_zero()) throw error("jet_unit_inverse: zero constant term");
    int n = u.nvars(), N = u.order();
    Scalar inv0 = u0.inverse();
    Jet v = Jet::constant(n, N, inv0);
    // order-by-order: v_d = -u0^{-1} [u * v_{<d}]_d
    for (int d = 1; d <= N; ++d) {
        Jet prod = jet_mul_capped(u, v, d);
        const MonoTable& t = mono_table(n, d);
        for (int i = 0; i < t.size(); ++i) {
            Scalar c = prod.coeff(t.exps[i]);
            if (!c.is_zero()) v.set_coeff(t.exps[i], -(inv0 * c));
        }
    }
    return v;
}

Jet jet_exp(const Jet& f) {
    if (!f.constant_term().is_zero()) throw error("jet_exp: nonzero constant term");
    int N = f.order();
    Jet acc = Jet::constant(f.nvars(), N, Scalar::one(f.field()));
    Jet pw = acc;
    Rational fact(1);
    for (int k = 1; k <= N; ++k) {
        pw = jet_mul_capped(pw, f, N);
        if (pw.is_zero()) break;
        fact *= k;
        acc += pw * Scalar::rational(f.field(), Rational(1) / fact);
    }
    return acc;
}

Jet jet_log(const Jet& u) {
    if (!u.constant_term().is_one()) throw error("jet_log: constant term must be 1");
    int N = u.order();
    Jet g = u - Jet::constant(u.nvars(), N, Scalar::one(u.field()));
    Jet acc(u.nvars(), N, u.field());
    Jet pw = Jet::constant(u.nvars(), N, Scalar::one(u.field()));
    for (int k = 1; k <= N; ++k) {
        pw = jet_mul_capped(pw, g, N);
        if (pw.is_zero()) break;
        Rational c = Rational(k % 2 == 1 ? 1 : -1) / Rational(k);
        acc += pw * Scalar::rational(u.field(), c);
    }
    return acc;
}

Jet jet_pow_rational(const Jet& u, const Rational& e) {
    Jet l = jet_log(u);
    return jet_exp(l * Scalar::rational(u.field(), e));
}

std::string default_var_name(int nvars, int i) {
    static const char* xyz[] = {"x", "y", "z"};
    if (nvars <= 3) return xyz[i];
    return "z" + std::to_string(i + 1);
}

std::string Jet::str(const std::vector<std::string>& var_names) const {
    std::ostringstream out;
    bool first = true;
    for_each([&](const Exponents& e, const Scalar& c) {
        std::string cs = c.str();
        bool negated = false;
        if (!first) {
            if (!cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos) {
                out << " - ";
                cs = cs.substr(1);
                negated = true;
            } else {
                out << " + ";
            }
        }
        bool has_var = std::any_of(e.begin(), e.end(), [](int v) { return v > 0; });
        bool trivial_coeff = negated ? cs == "1" : c.is_one();
        bool needs_parens = cs.find_first_of("+-", 1) != std::string::npos ||
                            cs.find('i') != std::string::npos ||
                            cs.find("poly") != std::string::npos;
        if (!has_var || !trivial_coeff) {
            if (needs_parens && has_var)
                out << "(" << cs << ")";
            else
                out << cs;
            if (has_var) out << "*";
        }
        bool first_var = true;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first_var) out << "*";
            first_var = false;
            out << (var_names.empty() ? default_var_name(nvars_, static_cast<int>(i))
                                      : var_names[i]);
            if (e[i] > 1) out << "^" << e[i];
        }
        first = false;
    });
    if (first) out << "0";
    return out.str();
}

} // namespace germcalc
