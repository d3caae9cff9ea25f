#include <doctest.h>

#include "heatcas/dsl.hpp"
#include "heatcas/tensor_ops.hpp"

using namespace heatcas;

namespace {
Expression norm(const std::string& text) { return tensor_normalize(parse_expression(text)); }

bool same(const Expression& a, const Expression& b) { return difference(a, b).empty(); }
} // namespace

TEST_CASE("metric traces and chains") {
  // g^{ab} g_{ab} = d
  Expression e = norm("1 g^{a b} g_{a b} X{0,1}[ u ]");
  REQUIRE(e.size() == 1);
  CHECK(e[0].coeff == DimPoly::d());
  CHECK(e[0].scalars.empty());

  // g^{ab} g_{bc} N^c N^e g_{ae} -> g_{ce} N^c N^e
  CHECK(same(norm("1 g^{a b} g_{b c} g_{a e} X{1,2}[ N^{c} | N^{e} ]"),
             norm("1 g_{c e} X{1,2}[ N^{c} | N^{e} ]")));
}

TEST_CASE("moment-pair contraction lemma matches explicit pairing expansion") {
  // g^{ab} G_{abce} Ric^{ce}: lemma route inside tensor_normalize must give
  // (d+2)/4 * Sc
  Expression e = norm("1 g^{a b} G{a b c e} g^{c m} g^{e n} Ric_{m n} X{2,1}[ u ]");
  REQUIRE(e.size() == 1);
  CHECK(e[0].coeff == (DimPoly::d() + DimPoly(Rational(2))) * Rational(1, 4));
  REQUIRE(e[0].scalars.size() == 1);
  CHECK(e[0].scalars[0].sym == ScalarSym::ScalarCurv);
}

TEST_CASE("explicit moment tensor expansion has 2^-p per pairing") {
  Term t = parse_term("1 G{a b c e} g^{a m} g^{b n} g^{c r} g^{e s} R_{m n r s} X{2,1}[ u ]");
  Expression x = expand_gslots(t);
  CHECK(x.size() == 3);
  for (const auto& s : x) CHECK(s.coeff == DimPoly(Rational(1, 4)));
  // and the full normalization kills it: G is symmetric, R antisymmetric
  CHECK(norm("1 G{a b c e} g^{a m} g^{b n} g^{c r} g^{e s} R_{m n r s} X{2,1}[ u ]").empty());
}

TEST_CASE("Ricci and scalar curvature formation") {
  // defining contraction: g^{uv} R_{a u v b} = Ric_{ab}
  Expression e = norm("1 g^{u v} R_{a u v b} g^{a m} g^{b n} Ric_{m n} X{0,1}[ u ]");
  REQUIRE(e.size() == 1);
  CHECK(e[0].coeff == DimPoly(Rational(1)));
  REQUIRE(e[0].scalars.size() == 1);
  CHECK(e[0].scalars[0].sym == ScalarSym::RicciSq);

  // antisymmetric trace of Riemann vanishes
  CHECK(norm("1 g^{a b} R_{a b m n} g^{m c} g^{n e} Ric_{c e} X{0,1}[ u ]").empty());

  // pair-swapped contraction slots: g^{uv} R_{u a b v}: move (0,3)->(1,2)
  // R_{uabv} = R_{bvua}, so g^{uv} R_{bvua}... = Ric_{ba} = Ric_{ab}
  CHECK(same(norm("1 g^{u v} R_{u a b v} g^{a m} g^{b n} Ric_{m n} X{0,1}[ u ]"),
             norm("1 RicRic X{0,1}[ u ]")));
}

TEST_CASE("quadratic curvature monomials are recognized") {
  Expression full = norm("1 R_{a b c e} R_{m n r s} g^{a m} g^{b n} g^{c r} g^{e s} X{0,1}[ u ]");
  REQUIRE(full.size() == 1);
  CHECK(full[0].scalars.size() == 1);
  CHECK(full[0].scalars[0].sym == ScalarSym::RiemannSq);
  CHECK(full[0].coeff == DimPoly(Rational(1)));

  // interleaved contraction is half the full square
  Expression half = norm("1 R_{a b c e} R_{m n r s} g^{a m} g^{c n} g^{b r} g^{e s} X{0,1}[ u ]");
  REQUIRE(half.size() == 1);
  CHECK(half[0].scalars[0].sym == ScalarSym::RiemannSq);
  CHECK(half[0].coeff == DimPoly(Rational(1, 2)));
}

TEST_CASE("contracted second Bianchi identities") {
  // g^{ea} (nab_e Ric)_{ab} -> 1/2 nab_b Sc
  Expression e = norm("1 g^{e a} D{e}Ric_{a b} g^{b c} D{c}Sc X{0,1}[ u ]");
  Expression want = norm("1/2 D{b}Sc g^{b c} D{c}Sc X{0,1}[ u ]");
  CHECK(same(e, want));

  // divergence of Riemann: g^{ec} nab_e R_{abcd} = -nab_a Ric_{bd} + nab_b Ric_{ad}
  Expression lhs = norm("1 g^{e c} D{e}R_{a b c f} g^{a x} g^{b y} g^{f z} D{x}Ric_{y z} X{0,1}[ u ]");
  Expression rhs = norm(
      "-1 D{a}Ric_{b f} g^{a x} g^{b y} g^{f z} D{x}Ric_{y z} X{0,1}[ u ]\n"
      "+1 D{b}Ric_{a f} g^{a x} g^{b y} g^{f z} D{x}Ric_{y z} X{0,1}[ u ]");
  CHECK(same(lhs, rhs));
}
