#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "germcalc/scalar.hpp"

using namespace germcalc;

namespace {

Scalar random_scalar(std::mt19937& rng, const FieldSpec& f) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    if (f.kind == FieldKind::gaussian)
        return Scalar::gaussian(rat(num(rng), den(rng)), rat(num(rng), den(rng)));
    std::vector<Rational> coords;
    for (int j = 0; j < euler_phi(f.m); ++j) coords.push_back(rat(num(rng), den(rng)));
    return Scalar::cyclotomic(f.m, std::move(coords));
}

} // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == std::vector<Rational>{Rational(-1), Rational(1)});
    CHECK(cyclotomic_polynomial(4) ==
          std::vector<Rational>{Rational(1), Rational(0), Rational(1)});
    CHECK(cyclotomic_polynomial(3) ==
          std::vector<Rational>{Rational(1), Rational(1), Rational(1)});
    // Phi_12 = x^4 - x^2 + 1
    CHECK(cyclotomic_polynomial(12) == std::vector<Rational>{Rational(1), Rational(0),
                                                             Rational(-1), Rational(0),
                                                             Rational(1)});
    CHECK(euler_phi(360) == 96);
    CHECK(static_cast<int>(cyclotomic_polynomial(360).size()) == 97);
}

TEST_CASE("root_of_unity_order examples") {
    // 1 -> 1
    CHECK(root_of_unity_order(Scalar::one(FieldSpec::gaussian())) == 1);
    // zeta_3 in Q(zeta_3) -> 3
    CHECK(root_of_unity_order(Scalar::root_of_unity(3)) == 3);
    // 1/2 in Q(i) -> absent
    CHECK(!root_of_unity_order(Scalar::gaussian(rat(1, 2), 0)).has_value());
    CHECK(root_of_unity_order(Scalar::gaussian(0, 1)) == 4);
    CHECK(root_of_unity_order(Scalar::gaussian(-1, 0)) == 2);
    // -1 is a root of unity of Q(zeta_3) even though it is not a power of zeta_3
    CHECK(root_of_unity_order(-Scalar::one(FieldSpec::cyclotomic(3))) == 2);
    CHECK_THROWS_AS(root_of_unity_order(Scalar::zero(FieldSpec::gaussian())), error);
}

TEST_CASE("root_of_unity_order(zeta_m^j) = m/gcd(j,m) for m <= 24") {
    for (int m = 1; m <= 24; ++m) {
        for (int j = 0; j < m; ++j) {
            if (j == 0) continue; // zeta^0 = 1, order 1 = m/gcd(0,m)? skip, gcd(0,m)=m gives 1
            auto got = root_of_unity_order(Scalar::root_of_unity(m, j));
            REQUIRE(got.has_value());
            CHECK(*got == m / std::gcd(j, m));
        }
        CHECK(root_of_unity_order(Scalar::root_of_unity(m, 0)) == 1);
    }
}

TEST_CASE("float unity detection") {
    Scalar z = Scalar::complex(std::polar(1.0, 2.0 * M_PI / 7.0));
    CHECK(root_of_unity_order(z) == 7);
    CHECK(!root_of_unity_order(Scalar::complex({0.5, 0.0})).has_value());
}

TEST_CASE("embed examples") {
    // i -> zeta_4
    CHECK(embed(Scalar::imaginary_unit(), 4) == Scalar::root_of_unity(4, 1));
    // zeta_3 -> zeta_12^4
    CHECK(embed(Scalar::root_of_unity(3), 12) == Scalar::root_of_unity(12, 4));
    // zeta_3 into Q(zeta_4): no embedding
    CHECK_THROWS_AS(embed(Scalar::root_of_unity(3), 4), error);
    CHECK_THROWS_AS(embed(Scalar::complex({1.0, 0.0}), 4), error);
}

TEST_CASE("embed is a ring homomorphism on random samples") {
    std::mt19937 rng(20240901);
    FieldSpec src = FieldSpec::cyclotomic(6);
    for (int trial = 0; trial < 50; ++trial) {
        Scalar a = random_scalar(rng, src), b = random_scalar(rng, src);
        CHECK(embed(a + b, 12) == embed(a, 12) + embed(b, 12));
        CHECK(embed(a * b, 12) == embed(a, 12) * embed(b, 12));
    }
    for (int trial = 0; trial < 50; ++trial) {
        Scalar a = random_scalar(rng, FieldSpec::gaussian());
        Scalar b = random_scalar(rng, FieldSpec::gaussian());
        CHECK(embed(a * b, 8) == embed(a, 8) * embed(b, 8));
    }
}

TEST_CASE("field axioms on random exact triples") {
    std::mt19937 rng(7);
    std::vector<FieldSpec> fields = {FieldSpec::gaussian(), FieldSpec::cyclotomic(5),
                                     FieldSpec::cyclotomic(12)};
    int done = 0;
    while (done < 1000) {
        for (const auto& f : fields) {
            Scalar a = random_scalar(rng, f), b = random_scalar(rng, f),
                   c = random_scalar(rng, f);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + (-a) == Scalar::zero(f));
            if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::one(f));
            ++done;
        }
    }
}

TEST_CASE("no silent coercion between fields") {
    Scalar a = Scalar::one(FieldSpec::gaussian());
    Scalar b = Scalar::one(FieldSpec::cyclotomic(3));
    CHECK_THROWS_AS(a + b, field_mismatch);
    CHECK_THROWS_AS(a * b, field_mismatch);
}

TEST_CASE("cyclotomic arithmetic sanity") {
    // 1 + zeta + zeta^2 = 0 in Q(zeta_3)
    Scalar z = Scalar::root_of_unity(3);
    CHECK((Scalar::one(z.field()) + z + z * z).is_zero());
    // zeta_5^5 = 1
    CHECK(Scalar::root_of_unity(5).pow(5).is_one());
    // (zeta_7^3)^-1 * zeta_7^3 = 1
    Scalar w = Scalar::root_of_unity(7, 3);
    CHECK((w.inverse() * w).is_one());
    CHECK(w.conj() == Scalar::root_of_unity(7, -3));
}

TEST_CASE("scalar print/parse round-trip") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Scalar a = random_scalar(rng, FieldSpec::gaussian());
        CHECK(scalar_from_string(a.str()) == a);
        Scalar b = random_scalar(rng, FieldSpec::cyclotomic(7));
        CHECK(scalar_from_string(b.str()) == b);
    }
    CHECK(scalar_from_string("3/2+1/3i") == Scalar::gaussian(rat(3, 2), rat(1, 3)));
    CHECK(scalar_from_string("-1/2i") == Scalar::gaussian(0, rat(-1, 2)));
    CHECK(scalar_from_string("poly(3;1,-2)") ==
          Scalar::cyclotomic(3, {Rational(1), Rational(-2)}));
    Scalar f = Scalar::complex({1.5, -2.25});
    CHECK(scalar_from_string(f.str()) == f);
}
