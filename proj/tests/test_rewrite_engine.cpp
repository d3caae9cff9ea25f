#include <doctest.h>

#include "heatcas/dsl.hpp"
#include "heatcas/volterra.hpp"

using namespace heatcas;

namespace {

Expression propagated(int r) {
  Expression e = propagate(volterra_seeds(r));
  assign_descriptors(e);
  return collect(std::move(e));
}

// The fully propagated order-2 arguments: first the sign-flipped operator
// slot, then the two-factor product of first-order slots.
const char* kOrder2 =
    // single operator slot
    "-1 G{m1 m2} X{1,2}[ H^{n1 n2} | Dg{n1 n2}H^{m1 m2} ]\n"
    "+1 G{m1 m2 m3 m4} X{2,3}[ H^{n1 n2} | Dg{n1}H^{m3 m4} | Dg{n2}H^{m1 m2} ]\n"
    "+1 G{m1 m2 m3 m4} X{2,3}[ H^{n1 n2} | Dg{n2}H^{m1 m2} | Dg{n1}H^{m3 m4} ]\n"
    "-1 G{m1 m2} X{1,2}[ H^{n1 n2} | Dg{n2}H^{m1 m2} ] Dv{n1}\n"
    "-1 G{m1 m2} X{1,2}[ H^{n1 n2} | Dg{n1}H^{m1 m2} ] Dv{n2}\n"
    "+1 X{0,1}[ H^{n1 n2} ] Dv{n1 n2}\n"
    "-1 G{m1 m2} X{1,2}[ L^{n1} | Dg{n1}H^{m1 m2} ]\n"
    "+1 X{0,1}[ L^{n1} ] Dv{n1}\n"
    "+1 X{0,1}[ q0 ]\n"
    // two first-order slots
    "-1 G{m1 m2} X{1,2}[ L^{m1} | L^{m2} ]\n"
    "+2 G{m1 m2 m3 m4} X{2,3}[ L^{m1} | H^{m2 n2} | Dg{n2}H^{m3 m4} ]\n"
    "-2 G{m1 m2} X{1,2}[ L^{m1} | H^{m2 n2} ] Dv{n2}\n"
    "-2 G{m1 m2} X{1,2}[ H^{m1 n1} | Dg{n1}L^{m2} ]\n"
    "+2 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | Dg{n1}H^{m3 m4} | L^{m2} ]\n"
    "+2 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | L^{m2} | Dg{n1}H^{m3 m4} ]\n"
    "-2 G{m1 m2} X{1,2}[ H^{m1 n1} | L^{m2} ] Dv{n1}\n"
    "+4 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | Dg{n1}H^{m2 n2} | Dg{n2}H^{m3 m4} ]\n"
    "+4 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | H^{m2 n2} | Dg{n1 n2}H^{m3 m4} ]\n"
    "-4 G{m1 m2 m3 m4 m5 m6} X{3,4}[ H^{m1 n1} | Dg{n1}H^{m5 m6} | H^{m2 n2} | Dg{n2}H^{m3 m4} ]\n"
    "-4 G{m1 m2 m3 m4 m5 m6} X{3,4}[ H^{m1 n1} | H^{m2 n2} | Dg{n1}H^{m5 m6} | Dg{n2}H^{m3 m4} ]\n"
    "-4 G{m1 m2 m3 m4 m5 m6} X{3,4}[ H^{m1 n1} | H^{m2 n2} | Dg{n2}H^{m3 m4} | Dg{n1}H^{m5 m6} ]\n"
    "+4 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | H^{m2 n2} | Dg{n2}H^{m3 m4} ] Dv{n1}\n"
    "-4 G{m1 m2} X{1,2}[ H^{m1 n1} | Dg{n1}H^{m2 n2} ] Dv{n2}\n"
    "+4 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | Dg{n1}H^{m3 m4} | H^{m2 n2} ] Dv{n2}\n"
    "+4 G{m1 m2 m3 m4} X{2,3}[ H^{m1 n1} | H^{m2 n2} | Dg{n1}H^{m3 m4} ] Dv{n2}\n"
    "-4 G{m1 m2} X{1,2}[ H^{m1 n1} | H^{m2 n2} ] Dv{n1 n2}\n";

} // namespace

TEST_CASE("order-2 propagation matches the hand expansion") {
  Expression got = propagated(2);
  Expression want = collect(parse_expression(kOrder2));
  CHECK(difference(got, want).empty());
  CHECK(got.size() == want.size());
}

TEST_CASE("propagation leaves no pending derivative and keeps the ladder invariant") {
  for (int r : {2, 4}) {
    Expression e = propagated(r);
    CHECK(!e.empty());
    for (const auto& t : e) {
      for (const auto& slot : t.args)
        for (const auto& a : slot) CHECK(a.pending.empty());
      REQUIRE(t.x.has_value());
      CHECK(t.x->alpha_off - t.x->k == -(r / 2));
      CHECK(static_cast<int>(t.gslots.size()) == 2 * t.x->alpha_off);
    }
  }
}

TEST_CASE("order-0 seed is the bare unit argument") {
  Expression e = propagated(0);
  REQUIRE(e.size() == 1);
  CHECK(e[0].coeff == DimPoly(Rational(1)));
  CHECK(e[0].args.empty());
  CHECK(e[0].x->k == 0);
}

// ---------------------------------------------------------------------------
// Gauge-structure normal forms
// ---------------------------------------------------------------------------

#include "heatcas/gauge.hpp"
#include "heatcas/tensor_ops.hpp"

TEST_CASE("split: two-derivative word gives the symmetric word plus a commutator") {
  auto lhs = split_hat_derivatives(parse_expression("1 X{0,1}[D{a b}u]"));
  auto rhs = parse_expression(
      "1 X{0,1}[DS{a b}u]\n"
      "1/2 X{0,1}[F_{a b} u]\n"
      "-1/2 X{0,1}[u F_{a b}]\n");
  CHECK(difference(lhs, rhs).empty());
}

TEST_CASE("split: symmetric contraction is unchanged") {
  auto lhs = split_hat_derivatives(parse_expression("1 g^{a b} X{0,1}[D{a b}u]"));
  auto rhs = parse_expression("1 g^{a b} X{0,1}[DS{a b}u]");
  CHECK(difference(lhs, rhs).empty());
}

TEST_CASE("split: open upper index picks up a Riemann term") {
  auto lhs = split_hat_derivatives(parse_expression("1 X{0,1}[D{a b}N^{m} u]"));
  auto rhs = parse_expression(
      "1 X{0,1}[DS{a b}N^{m} u]\n"
      "1/2 X{0,1}[F_{a b} N^{m} u]\n"
      "-1/2 X{0,1}[N^{m} F_{a b} u]\n"
      "1/2 R_{a b r s} g^{s m} X{0,1}[N^{r} u]\n");
  CHECK(difference(lhs, rhs).empty());
}

TEST_CASE("assemble: degree-2 words fold into a gauge-curvature factor") {
  auto sector = parse_expression(
      "1 X{0,2}[N^{a}|N^{b}] Dv{a b}\n"
      "-1 X{0,2}[N^{a}|N^{b}] Dv{b a}\n");
  auto expect = parse_expression("1 X{0,2}[N^{a}|N^{b}] F_{a b}");
  CHECK(difference(assemble_gauge_words(sector), expect).empty());
}

TEST_CASE("assemble: degree-3 words fold into a derived curvature factor") {
  auto sector = parse_expression(
      "1 X{0,3}[N^{a}|N^{b}|N^{c}] Dv{a b c}\n"
      "-1 X{0,3}[N^{a}|N^{b}|N^{c}] Dv{a c b}\n"
      "-1 X{0,3}[N^{a}|N^{b}|N^{c}] Dv{b c a}\n"
      "1 X{0,3}[N^{a}|N^{b}|N^{c}] Dv{c b a}\n");
  auto expect = bianchi_normalize(parse_expression("1 X{0,3}[N^{a}|N^{b}|N^{c}] D{a}F_{b c}"));
  CHECK(difference(assemble_gauge_words(sector), expect).empty());
}

TEST_CASE("assemble: degree-4 words fold into a curvature square") {
  auto sector = parse_expression(
      "1 X{0,4}[N^{a}|N^{b}|N^{c}|N^{e}] Dv{a b c e}\n"
      "-1 X{0,4}[N^{a}|N^{b}|N^{c}|N^{e}] Dv{a b e c}\n"
      "-1 X{0,4}[N^{a}|N^{b}|N^{c}|N^{e}] Dv{b a c e}\n"
      "1 X{0,4}[N^{a}|N^{b}|N^{c}|N^{e}] Dv{b a e c}\n");
  auto expect = parse_expression("1 X{0,4}[N^{a}|N^{b}|N^{c}|N^{e}] F_{a b} F_{c e}");
  CHECK(difference(assemble_gauge_words(sector), expect).empty());
}

TEST_CASE("assemble: a surviving single-derivative word is an anomaly") {
  CHECK_THROWS_AS(assemble_gauge_words(parse_expression("1 X{0,1}[N^{a}] Dv{a}")),
                  GaugeAnomaly);
}

TEST_CASE("bianchi normalization kills cyclic combinations") {
  auto cyc = parse_expression(
      "1 R_{a b c e} X{0,2}[N^{b}|u] N^{c}  N^{e}\n"
      "1 R_{a c e b} X{0,2}[N^{b}|u] N^{c}  N^{e}\n"
      "1 R_{a e b c} X{0,2}[N^{b}|u] N^{c}  N^{e}\n");
  CHECK(bianchi_normalize(cyc).empty());
  auto fcyc = parse_expression(
      "1 X{0,1}[u] D{a}F_{b c} N^{a} N^{b} N^{c}\n"
      "1 X{0,1}[u] D{b}F_{c a} N^{a} N^{b} N^{c}\n"
      "1 X{0,1}[u] D{c}F_{a b} N^{a} N^{b} N^{c}\n");
  CHECK(bianchi_normalize(fcyc).empty());
}
