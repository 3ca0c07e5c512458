#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "germcalc/jet.hpp"
#include "oracle_poly.hpp"

using namespace germcalc;

namespace {

const FieldSpec Q = FieldSpec::gaussian();

Jet random_jet(std::mt19937& rng, int n, int N, int max_terms = 8) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> deg(0, N);
    Jet j(n, N, Q);
    for (int t = 0; t < max_terms; ++t) {
        int d = deg(rng);
        const MonoTable& tab = mono_table(n, d);
        std::uniform_int_distribution<int> pick(0, tab.size() - 1);
        Exponents e = tab.exps[pick(rng)];
        j.set_coeff(e, Scalar::gaussian(rat(num(rng), den(rng)), rat(num(rng), den(rng))));
    }
    return j;
}

oracle::Poly to_oracle(const Jet& j) {
    oracle::Poly p;
    j.for_each([&](const Exponents& e, const Scalar& c) { p.emplace(e, c); });
    return p;
}

Jet from_oracle(const oracle::Poly& p, int n, int N) {
    Jet j(n, N, Q);
    for (const auto& [e, c] : p)
        if (oracle::total_degree(e) <= N) j.set_coeff(e, c);
    return j;
}

} // namespace

TEST_CASE("mono tables are graded-lex and rank correctly") {
    const MonoTable& t = mono_table(2, 2);
    REQUIRE(t.size() == 3);
    CHECK(t.exps[0] == Exponents{2, 0});
    CHECK(t.exps[1] == Exponents{1, 1});
    CHECK(t.exps[2] == Exponents{0, 2});
    CHECK(t.rank({1, 1}) == 1);
}

TEST_CASE("jet_compose examples") {
    // f = x^2, map = (x+y) -> x^2 + 2xy + y^2
    Jet f = Jet::monomial(1, 4, {2}, Scalar::one(Q));
    Jet xy = Jet::variable(2, 4, Q, 0) + Jet::variable(2, 4, Q, 1);
    Jet got = jet_compose(f, {xy});
    Jet want(2, 4, Q);
    want.set_coeff({2, 0}, Scalar::one(Q));
    want.set_coeff({1, 1}, Scalar::integer(Q, 2));
    want.set_coeff({0, 2}, Scalar::one(Q));
    CHECK(got == want);

    // f = x + x^2, map = (2x) at N=3 -> 2x + 4x^2
    Jet g(1, 3, Q);
    g.set_coeff({1}, Scalar::one(Q));
    g.set_coeff({2}, Scalar::one(Q));
    Jet twox = Jet::variable(1, 3, Q, 0) * Scalar::integer(Q, 2);
    Jet got2 = jet_compose(g, {twox});
    Jet want2(1, 3, Q);
    want2.set_coeff({1}, Scalar::integer(Q, 2));
    want2.set_coeff({2}, Scalar::integer(Q, 4));
    CHECK(got2 == want2);

    // f = sum_{k<=N} x^k composed with x/(1-x), against the brute-force oracle at N=8
    const int N = 8;
    Jet geo(1, N, Q);
    for (int k = 0; k <= N; ++k) geo.set_coeff({k}, Scalar::one(Q));
    Jet inner(1, N, Q);
    for (int k = 1; k <= N; ++k) inner.set_coeff({k}, Scalar::one(Q)); // x/(1-x)
    Jet got3 = jet_compose(geo, {inner});
    oracle::Poly want3 = oracle::substitute(to_oracle(geo), {to_oracle(inner)}, 1, N);
    CHECK(got3 == from_oracle(want3, 1, N));
}

TEST_CASE("jet_compose errors") {
    Jet f = Jet::variable(2, 3, Q, 0);
    Jet ok = Jet::variable(1, 3, Q, 0);
    Jet bad = ok + Jet::constant(1, 3, Scalar::one(Q));
    CHECK_THROWS_AS(jet_compose(f, {ok, bad}), error);
    CHECK_THROWS_AS(jet_compose(f, {ok}), error);
}

TEST_CASE("jet_unit_inverse") {
    Jet one = Jet::constant(1, 3, Scalar::one(Q));
    CHECK(jet_unit_inverse(one) == one);

    // 1 + x at N=3 -> 1 - x + x^2 - x^3
    Jet u = one + Jet::variable(1, 3, Q, 0);
    Jet v = jet_unit_inverse(u);
    Jet want(1, 3, Q);
    want.set_coeff({0}, Scalar::one(Q));
    want.set_coeff({1}, -Scalar::one(Q));
    want.set_coeff({2}, Scalar::one(Q));
    want.set_coeff({3}, -Scalar::one(Q));
    CHECK(v == want);

    // (2 + x + y^2) at N=4: multiply back and compare to 1
    Jet w(2, 4, Q);
    w.set_coeff({0, 0}, Scalar::integer(Q, 2));
    w.set_coeff({1, 0}, Scalar::one(Q));
    w.set_coeff({0, 2}, Scalar::one(Q));
    CHECK(w * jet_unit_inverse(w) == Jet::constant(2, 4, Scalar::one(Q)));

    CHECK_THROWS_AS(jet_unit_inverse(Jet::variable(1, 3, Q, 0)), error);
}

TEST_CASE("jet_exp and jet_log") {
    CHECK(jet_exp(Jet::zero(2, 4, Q)) == Jet::constant(2, 4, Scalar::one(Q)));

    // exp(x) at N=3 -> 1 + x + x^2/2 + x^3/6
    Jet e = jet_exp(Jet::variable(1, 3, Q, 0));
    Jet want(1, 3, Q);
    want.set_coeff({0}, Scalar::one(Q));
    want.set_coeff({1}, Scalar::one(Q));
    want.set_coeff({2}, Scalar::rational(Q, rat(1, 2)));
    want.set_coeff({3}, Scalar::rational(Q, rat(1, 6)));
    CHECK(e == want);

    // log(exp(x + y^2)) at N=5 = x + y^2
    Jet f = Jet::variable(2, 5, Q, 0);
    Jet y2 = Jet::monomial(2, 5, {0, 2}, Scalar::one(Q));
    CHECK(jet_log(jet_exp(f + y2)) == f + y2);

    CHECK_THROWS_AS(jet_exp(Jet::constant(1, 3, Scalar::one(Q))), error);
    CHECK_THROWS_AS(jet_log(Jet::variable(1, 3, Q, 0)), error);
}

TEST_CASE("ring axioms on random jets") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 3, N = 3 + trial % 4;
        Jet a = random_jet(rng, n, N), b = random_jet(rng, n, N), c = random_jet(rng, n, N);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("jet multiplication matches the oracle") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 3, N = 4;
        Jet a = random_jet(rng, n, N), b = random_jet(rng, n, N);
        CHECK(a * b == from_oracle(oracle::mul(to_oracle(a), to_oracle(b), N), n, N));
    }
}

TEST_CASE("jet_compose associativity on random triples") {
    std::mt19937 rng(44);
    for (int trial = 0; trial < 12; ++trial) {
        int N = 5;
        Jet f = random_jet(rng, 2, N);
        auto low = [&](Jet j) {
            j.set_coeff({0, 0}, Scalar::zero(Q));
            return j;
        };
        std::vector<Jet> g = {low(random_jet(rng, 2, N)), low(random_jet(rng, 2, N))};
        std::vector<Jet> h = {low(random_jet(rng, 2, N)), low(random_jet(rng, 2, N))};
        std::vector<Jet> gh = {jet_compose(g[0], h), jet_compose(g[1], h)};
        CHECK(jet_compose(jet_compose(f, g), h) == jet_compose(f, gh));
    }
}

TEST_CASE("unit inverse on random units") {
    std::mt19937 rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 2, N = 5;
        Jet u = random_jet(rng, n, N);
        u.set_coeff(Exponents(n, 0), Scalar::integer(Q, 1 + trial % 5));
        CHECK(u * jet_unit_inverse(u) == Jet::constant(n, N, Scalar::one(Q)));
    }
}

TEST_CASE("exp(f+g) = exp(f) exp(g)") {
    std::mt19937 rng(46);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + trial % 2, N = 5;
        auto low = [&](Jet j) {
            j.set_coeff(Exponents(n, 0), Scalar::zero(Q));
            return j;
        };
        Jet f = low(random_jet(rng, n, N)), g = low(random_jet(rng, n, N));
        CHECK(jet_exp(f + g) == jet_exp(f) * jet_exp(g));
    }
}

TEST_CASE("mixed-order arithmetic truncates to min and warns") {
    Jet a = Jet::variable(1, 5, Q, 0);
    Jet b = Jet::variable(1, 3, Q, 0);
    Jet s = a + b;
    CHECK(s.order() == 3);
    CHECK(s.warned());
    Jet p = a * b;
    CHECK(p.order() == 3);
    CHECK(p.warned());
    CHECK(!(a + a).warned());
}

TEST_CASE("derivative lowers the order") {
    Jet f(2, 4, Q);
    f.set_coeff({2, 1}, Scalar::integer(Q, 3));
    Jet d = f.derivative(0);
    CHECK(d.order() == 3);
    CHECK(d.coeff({1, 1}) == Scalar::integer(Q, 6));
}

TEST_CASE("print round-trips through valuation data") {
    Jet f(2, 3, Q);
    f.set_coeff({1, 0}, Scalar::rational(Q, rat(3, 2)));
    f.set_coeff({0, 2}, Scalar::gaussian(0, 1));
    CHECK(f.str() == "3/2*x + (1i)*y^2");
    CHECK(f.valuation() == 1);
    CHECK(Jet::zero(2, 3, Q).valuation() == kValInfinity);
}
