#include "germcalc/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace germcalc {

namespace {

constexpr double kUnityTol = 1e-9;
constexpr long kUnityPowerBound = 720;

// dense univariate polynomials over Q, little-endian coefficients
using QPoly = std::vector<Rational>;

void ptrim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly pmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    ptrim(r);
    return r;
}

std::pair<QPoly, QPoly> pdivmod(const QPoly& a, const QPoly& b) {
    QPoly r = a, q;
    ptrim(r);
    if (b.empty()) throw error("polynomial division by zero");
    if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Rational(0));
    while (r.size() >= b.size()) {
        Rational c = r.back() / b.back();
        size_t shift = r.size() - b.size();
        q[shift] += c;
        for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
        ptrim(r);
    }
    return {q, r};
}

// quotient of an exact division (used for the cyclotomic factor products)
QPoly pdiv_exact(const QPoly& a, const QPoly& b) {
    auto [q, r] = pdivmod(a, b);
    if (!r.empty()) throw error("inexact polynomial division");
    return q;
}

// extended gcd: returns (g, u) with u*a = g mod b (enough to invert a mod b)
std::pair<QPoly, QPoly> pgcd_ext(const QPoly& a, const QPoly& b) {
    QPoly r0 = a, r1 = b, u0 = {Rational(1)}, u1 = {};
    ptrim(r0);
    ptrim(r1);
    while (!r1.empty()) {
        auto [q, r2] = pdivmod(r0, r1);
        QPoly u2 = u0;
        QPoly qu = pmul(q, u1);
        if (u2.size() < qu.size()) u2.resize(qu.size(), Rational(0));
        for (size_t i = 0; i < qu.size(); ++i) u2[i] -= qu[i];
        ptrim(u2);
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    return {r0, u0};
}

struct CycloTable {
    int m = 0;
    int phi = 0;
    QPoly minpoly; // monic, degree phi
    // zeta^e for e in [phi, 2*phi-2], each reduced to the canonical basis
    std::vector<std::vector<Rational>> high_powers;
};

const CycloTable& cyclo_table(int m) {
    static std::map<int, CycloTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    CycloTable t;
    t.m = m;
    t.phi = euler_phi(m);
    // Phi_m = prod_{d | m} (x^{m/d} - 1)^{mu(d)}
    QPoly num = {Rational(1)};
    std::vector<int> den_factors;
    for (int d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        int mu = mobius(d);
        if (mu == 0) continue;
        QPoly f(static_cast<size_t>(m / d) + 1, Rational(0));
        f[0] = -1;
        f.back() = 1;
        if (mu == 1)
            num = pmul(num, f);
        else
            den_factors.push_back(m / d);
    }
    for (int e : den_factors) {
        QPoly f(static_cast<size_t>(e) + 1, Rational(0));
        f[0] = -1;
        f.back() = 1;
        num = pdiv_exact(num, f);
    }
    t.minpoly = num;
    if (static_cast<int>(t.minpoly.size()) != t.phi + 1)
        throw error("cyclotomic polynomial degree mismatch");

    // iteratively reduce zeta^e: zeta^phi = -sum_j minpoly[j] zeta^j
    std::vector<Rational> cur(t.phi, Rational(0));
    for (int j = 0; j < t.phi; ++j) cur[j] = -t.minpoly[j];
    for (int e = t.phi; e <= 2 * t.phi - 2; ++e) {
        t.high_powers.push_back(cur);
        // multiply by zeta
        std::vector<Rational> next(t.phi, Rational(0));
        Rational top = cur[t.phi - 1];
        for (int j = t.phi - 1; j >= 1; --j) next[j] = cur[j - 1];
        if (top != 0)
            for (int j = 0; j < t.phi; ++j) next[j] += top * (-t.minpoly[j]);
        cur = std::move(next);
    }
    auto [pos, ok] = cache.emplace(m, std::move(t));
    (void)ok;
    return pos->second;
}

} // namespace

int euler_phi(int m) {
    if (m <= 0) throw error("euler_phi of non-positive integer");
    int result = m, n = m;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

int mobius(int m) {
    if (m <= 0) throw error("mobius of non-positive integer");
    int res = 1;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return 0;
            res = -res;
        }
    }
    if (m > 1) res = -res;
    return res;
}

const std::vector<Rational>& cyclotomic_polynomial(int m) { return cyclo_table(m).minpoly; }

FieldSpec FieldSpec::cyclotomic(int m) {
    if (m < 1) throw error("cyclotomic order must be positive");
    return {FieldKind::cyclotomic, m};
}

std::string FieldSpec::str() const {
    switch (kind) {
        case FieldKind::gaussian: return "gaussian";
        case FieldKind::cyclotomic: return "cyclotomic:" + std::to_string(m);
        case FieldKind::f64: return "f64";
    }
    return "?";
}

Scalar::Scalar(const FieldSpec& f) : field_(f) {
    switch (f.kind) {
        case FieldKind::gaussian: c_.assign(2, Rational(0)); break;
        case FieldKind::cyclotomic: c_.assign(euler_phi(f.m), Rational(0)); break;
        case FieldKind::f64: break;
    }
}

Scalar::Scalar(const FieldSpec& f, const Rational& re) : Scalar(f) {
    if (f.kind == FieldKind::f64)
        z_ = re.get_d();
    else
        c_[0] = re;
}

Scalar Scalar::gaussian(const Rational& re, const Rational& im) {
    Scalar s(FieldSpec::gaussian());
    s.c_[0] = re;
    s.c_[1] = im;
    return s;
}

Scalar Scalar::root_of_unity(int m, long k) {
    const CycloTable& t = cyclo_table(m);
    k %= m;
    if (k < 0) k += m;
    Scalar s(FieldSpec::cyclotomic(m));
    if (m <= 2) {
        // phi(m) = 1: zeta_1 = 1, zeta_2 = -1
        s.c_[0] = (m == 2 && k == 1) ? -1 : 1;
    } else if (k < t.phi) {
        s.c_[k] = 1;
    } else if (k <= 2 * t.phi - 2) {
        s.c_ = t.high_powers[k - t.phi];
    } else {
        Scalar z = root_of_unity(m, 1); // 1 < phi(m) here, no recursion loop
        s = z.pow(k);
    }
    return s;
}

Scalar Scalar::cyclotomic(int m, std::vector<Rational> coords) {
    const CycloTable& t = cyclo_table(m);
    if (static_cast<int>(coords.size()) > t.phi) throw error("too many cyclotomic coordinates");
    coords.resize(t.phi, Rational(0));
    Scalar s(FieldSpec::cyclotomic(m));
    s.c_ = std::move(coords);
    return s;
}

Scalar Scalar::complex(std::complex<double> z) {
    Scalar s(FieldSpec::f64());
    s.z_ = z;
    return s;
}

void Scalar::check_same(const Scalar& o) const {
    if (field_ != o.field_)
        throw field_mismatch("scalar field mismatch: " + field_.str() + " vs " + o.field_.str() +
                             " (embed explicitly)");
}

bool Scalar::is_zero() const {
    if (field_.kind == FieldKind::f64) return z_ == std::complex<double>(0.0, 0.0);
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r == 0; });
}

bool Scalar::is_one() const {
    if (field_.kind == FieldKind::f64) return z_ == std::complex<double>(1.0, 0.0);
    if (c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool Scalar::is_rational() const {
    if (field_.kind == FieldKind::f64) return z_.imag() == 0.0;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational Scalar::rational_value() const {
    if (field_.kind == FieldKind::f64) throw error("rational_value of float scalar");
    if (!is_rational()) throw error("scalar is not rational");
    return c_[0];
}

std::complex<double> Scalar::to_complex() const {
    switch (field_.kind) {
        case FieldKind::f64: return z_;
        case FieldKind::gaussian: return {c_[0].get_d(), c_[1].get_d()};
        case FieldKind::cyclotomic: {
            std::complex<double> acc = 0.0;
            for (size_t j = 0; j < c_.size(); ++j) {
                if (c_[j] == 0) continue;
                double ang = 2.0 * M_PI * static_cast<double>(j) / field_.m;
                acc += c_[j].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            return acc;
        }
    }
    return {};
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    if (field_.kind == FieldKind::f64) {
        r.z_ = -z_;
    } else {
        for (auto& c : r.c_) c = -c;
    }
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    Scalar r = *this;
    if (field_.kind == FieldKind::f64) {
        r.z_ += o.z_;
    } else {
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same(o);
    Scalar r = *this;
    if (field_.kind == FieldKind::f64) {
        r.z_ -= o.z_;
    } else {
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    }
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    switch (field_.kind) {
        case FieldKind::f64: {
            Scalar r = *this;
            r.z_ *= o.z_;
            return r;
        }
        case FieldKind::gaussian: {
            Scalar r(field_);
            r.c_[0] = c_[0] * o.c_[0] - c_[1] * o.c_[1];
            r.c_[1] = c_[0] * o.c_[1] + c_[1] * o.c_[0];
            return r;
        }
        case FieldKind::cyclotomic: {
            const CycloTable& t = cyclo_table(field_.m);
            std::vector<Rational> conv(2 * t.phi - 1, Rational(0));
            for (int i = 0; i < t.phi; ++i) {
                if (c_[i] == 0) continue;
                for (int j = 0; j < t.phi; ++j) {
                    if (o.c_[j] == 0) continue;
                    conv[i + j] += c_[i] * o.c_[j];
                }
            }
            Scalar r(field_);
            for (int e = 0; e < t.phi; ++e) r.c_[e] = conv[e];
            for (int e = t.phi; e <= 2 * t.phi - 2; ++e) {
                if (conv[e] == 0) continue;
                const auto& row = t.high_powers[e - t.phi];
                for (int j = 0; j < t.phi; ++j) r.c_[j] += conv[e] * row[j];
            }
            return r;
        }
    }
    throw error("unreachable");
}

Scalar Scalar::inverse() const {
    switch (field_.kind) {
        case FieldKind::f64: {
            if (z_ == std::complex<double>(0.0, 0.0)) throw error("inverse of zero");
            return complex(1.0 / z_);
        }
        case FieldKind::gaussian: {
            Rational n = c_[0] * c_[0] + c_[1] * c_[1];
            if (n == 0) throw error("inverse of zero");
            return gaussian(c_[0] / n, -c_[1] / n);
        }
        case FieldKind::cyclotomic: {
            if (is_zero()) throw error("inverse of zero");
            const CycloTable& t = cyclo_table(field_.m);
            QPoly a(c_.begin(), c_.end());
            ptrim(a);
            auto [g, u] = pgcd_ext(a, t.minpoly);
            if (g.size() != 1) throw error("cyclotomic inverse: non-trivial gcd");
            // u*a = g (mod minpoly) with g a nonzero constant
            std::vector<Rational> coords(u.begin(), u.end());
            for (auto& c : coords) c /= g[0];
            return cyclotomic(field_.m, std::move(coords));
        }
    }
    throw error("unreachable");
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar acc = Scalar::one(field_);
    Scalar base = *this;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

Scalar Scalar::conj() const {
    switch (field_.kind) {
        case FieldKind::f64: return complex(std::conj(z_));
        case FieldKind::gaussian: return gaussian(c_[0], -c_[1]);
        case FieldKind::cyclotomic: {
            // zeta -> zeta^{-1}
            Scalar acc(field_);
            for (size_t j = 0; j < c_.size(); ++j) {
                if (c_[j] == 0) continue;
                Scalar term = root_of_unity(field_.m, -static_cast<long>(j));
                for (auto& cc : term.c_) cc *= c_[j];
                acc = acc + term;
            }
            return acc;
        }
    }
    throw error("unreachable");
}

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    if (field_.kind == FieldKind::f64) return z_ == o.z_;
    return c_ == o.c_;
}

std::string Scalar::str() const {
    std::ostringstream out;
    switch (field_.kind) {
        case FieldKind::f64: {
            out.precision(17);
            out << z_.real();
            if (z_.imag() != 0) {
                if (z_.imag() >= 0) out << "+";
                out << z_.imag() << "j";
            }
            return out.str();
        }
        case FieldKind::gaussian: {
            if (c_[1] == 0) return rat_to_string(c_[0]);
            if (c_[0] == 0) return rat_to_string(c_[1]) + "i";
            std::string im = rat_to_string(c_[1]);
            return rat_to_string(c_[0]) + (im[0] == '-' ? "" : "+") + im + "i";
        }
        case FieldKind::cyclotomic: {
            out << "poly(" << field_.m << ";";
            size_t last = c_.size();
            while (last > 1 && c_[last - 1] == 0) --last;
            for (size_t j = 0; j < last; ++j) {
                if (j) out << ",";
                out << rat_to_string(c_[j]);
            }
            out << ")";
            return out.str();
        }
    }
    return "?";
}

std::optional<long> root_of_unity_order(const Scalar& s) {
    if (s.is_zero()) throw error("root_of_unity_order: zero input");
    switch (s.field().kind) {
        case FieldKind::gaussian: {
            if (s.is_one()) return 1;
            if (s == -Scalar::one(s.field())) return 2;
            if (s == Scalar::imaginary_unit() || s == -Scalar::imaginary_unit()) return 4;
            return std::nullopt;
        }
        case FieldKind::cyclotomic: {
            // the roots of unity of Q(zeta_m) are exactly mu_M, M = lcm(2, m)
            long m = s.field().m;
            long M = std::lcm(2l, m);
            if (!(s.pow(M)).is_one()) return std::nullopt;
            for (long k = 1; k <= M; ++k)
                if (M % k == 0 && s.pow(k).is_one()) return k;
            return std::nullopt;
        }
        case FieldKind::f64: {
            std::complex<double> z = s.to_complex();
            if (std::abs(std::abs(z) - 1.0) > 1e-6) return std::nullopt;
            std::complex<double> p = 1.0;
            for (long k = 1; k <= kUnityPowerBound; ++k) {
                p *= z;
                if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
                    throw error("root_of_unity_order: power ladder overflow");
                if (std::abs(p - std::complex<double>(1.0, 0.0)) <= kUnityTol) return k;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

Scalar embed(const Scalar& s, int target_m) {
    if (target_m < 1) throw error("embed: target order must be positive");
    FieldSpec target = FieldSpec::cyclotomic(target_m);
    switch (s.field().kind) {
        case FieldKind::f64: throw error("embed: no canonical embedding of floats");
        case FieldKind::gaussian: {
            Scalar r(target, s.coords()[0]);
            if (s.coords()[1] != 0) {
                if (target_m % 4 != 0)
                    throw error("embed: Q(i) needs 4 | m, got m=" + std::to_string(target_m));
                Scalar im = Scalar::root_of_unity(target_m, target_m / 4);
                r = r + Scalar(target, s.coords()[1]) * im;
            }
            return r;
        }
        case FieldKind::cyclotomic: {
            int k = s.field().m;
            if (target_m % k != 0)
                throw error("embed: no canonical embedding of Q(zeta_" + std::to_string(k) +
                            ") into Q(zeta_" + std::to_string(target_m) + ")");
            long step = target_m / k;
            Scalar r(target);
            for (size_t j = 0; j < s.coords().size(); ++j) {
                if (s.coords()[j] == 0) continue;
                Scalar t = Scalar::root_of_unity(target_m, step * static_cast<long>(j));
                r = r + Scalar(target, s.coords()[j]) * t;
            }
            return r;
        }
    }
    throw error("unreachable");
}

namespace {

// splits "a+bi" / "a-bi" / "a" / "bi" at the sign separating the two parts
bool split_complex_literal(const std::string& s, char unit, std::string& re, std::string& im) {
    if (s.empty()) return false;
    if (s.back() != unit) {
        re = s;
        im.clear();
        return true;
    }
    std::string body = s.substr(0, s.size() - 1);
    // find the separating +/- (not at position 0, not after '/' or 'e')
    for (size_t pos = body.size(); pos-- > 1;) {
        char c = body[pos];
        if ((c == '+' || c == '-') && body[pos - 1] != '/' && body[pos - 1] != 'e' &&
            body[pos - 1] != 'E') {
            re = body.substr(0, pos);
            im = body.substr(pos);
            if (im == "+") im = "1";
            if (im == "-") im = "-1";
            return true;
        }
    }
    re = "0";
    im = body.empty() ? "1" : body;
    if (im == "-") im = "-1";
    return true;
}

} // namespace

Scalar scalar_from_string(const std::string& in) {
    std::string s;
    for (char c : in)
        if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw error("empty scalar literal");
    if (s.rfind("poly(", 0) == 0) {
        if (s.back() != ')') throw error("bad poly literal: " + in);
        std::string body = s.substr(5, s.size() - 6);
        auto semi = body.find(';');
        if (semi == std::string::npos) throw error("bad poly literal: " + in);
        int m = std::stoi(body.substr(0, semi));
        std::vector<Rational> coords;
        std::string rest = body.substr(semi + 1);
        std::istringstream iss(rest);
        std::string tok;
        while (std::getline(iss, tok, ',')) coords.push_back(rat_from_string(tok));
        return Scalar::cyclotomic(m, std::move(coords));
    }
    if (s.back() == 'j' || s.find('.') != std::string::npos) {
        std::string re, im;
        if (!split_complex_literal(s, 'j', re, im)) throw error("bad float literal: " + in);
        double dre = re.empty() ? 0.0 : std::stod(re);
        double dim = im.empty() ? 0.0 : std::stod(im);
        return Scalar::complex({dre, dim});
    }
    std::string re, im;
    if (!split_complex_literal(s, 'i', re, im)) throw error("bad scalar literal: " + in);
    return Scalar::gaussian(rat_from_string(re), im.empty() ? Rational(0) : rat_from_string(im));
}

} // namespace germcalc
