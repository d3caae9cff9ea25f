#include <doctest.h>

#include "heatcas/dsl.hpp"
#include "heatcas/reduction.hpp"

using namespace heatcas;

namespace {

bool same(const Expression& a, const Expression& b) { return difference(a, b).empty(); }

} // namespace

TEST_CASE("expansion inserts u at every slot boundary") {
  Term t = parse_term("1 X{0,1}[ q ]");
  Expression got = collect(expand_Ek(t));
  Expression want = collect(parse_expression(
      "1 X{1,2}[ u | q ]\n"
      "1 X{1,2}[ q | u ]"));
  CHECK(same(got, want));
}

TEST_CASE("expansion of a two-slot argument has three insertion positions") {
  Term t = parse_term("1 X{0,2}[ q | N^{a} ] g_{a b} N^{b}");
  Expression got = collect(expand_Ek(t));
  Expression want = collect(parse_expression(
      "1 X{1,3}[ u | q | N^{a} ] g_{a b} N^{b}\n"
      "1 X{1,3}[ q | u | N^{a} ] g_{a b} N^{b}\n"
      "1 X{1,3}[ q | N^{a} | u ] g_{a b} N^{b}"));
  CHECK(same(got, want));
}

TEST_CASE("expansion of the bare u argument merges to twice one term") {
  Term t = parse_term("1 X{0,1}[ u ]");
  Expression got = collect(expand_Ek(t));
  REQUIRE(got.size() == 1);
  CHECK(got[0].coeff == DimPoly(Rational(2)));
  CHECK(same(got, parse_expression("2 X{1,2}[ u | u ]")));
}

TEST_CASE("leveling merges the mixed second-derivative pair into one term") {
  Expression in = parse_expression(
      "-1/2 (d+2) g^{m n} X{1,2}[ u | D{m n}u ]\n"
      "1 (d+2) g^{m n} X{2,3}[ u | u | D{m n}u ]");
  Expression want = parse_expression("-1/2 (d+2) g^{m n} X{2,3}[ u | D{m n}u | u ]");
  CHECK(same(reduce_level(in), want));
}

TEST_CASE("the level-(k+1) expansion of one operator cancels against it") {
  Expression in = parse_expression(
      "1 X{0,1}[ q ]\n"
      "-1 X{1,2}[ u | q ]\n"
      "-1 X{1,2}[ q | u ]");
  CHECK(reduce_level(in).empty());
  CHECK(level_up(in).empty());
}

TEST_CASE("reduce_level is idempotent") {
  Expression in = parse_expression(
      "-1/2 (d+2) g^{m n} X{1,2}[ u | D{m n}u ]\n"
      "1 (d+2) g^{m n} X{2,3}[ u | u | D{m n}u ]\n"
      "1 X{0,1}[ q ]\n"
      "1 X{1,2}[ N^{a} | D{b}u ] g^{b c} g_{a e} Ric_{c f} g^{e f}");
  Expression once = reduce_level(in);
  CHECK(same(reduce_level(once), once));
}

TEST_CASE("a mixed-level presentation is a reduction fixpoint") {
  // Matching the shape of the printed second-order result: the same pattern
  // appears once at level 2 and once at level 3 with no shorter presentation.
  Expression in = parse_expression(
      "1 g^{m n} X{1,2}[ u | D{m n}u ]\n"
      "-1/2 (d+2) g^{m n} X{2,3}[ u | D{m n}u | u ]");
  CHECK(same(reduce_level(in), in));
}

TEST_CASE("lowering rebuilds the shortest mixed-level presentation") {
  // The common-level form of the previous fixpoint reduces back to it.
  Expression raised = parse_expression(
      "2 g^{m n} X{2,3}[ u | u | D{m n}u ]\n"
      "-1/2 (d) g^{m n} X{2,3}[ u | D{m n}u | u ]");
  Expression want = parse_expression(
      "1 g^{m n} X{1,2}[ u | D{m n}u ]\n"
      "-1/2 (d+2) g^{m n} X{2,3}[ u | D{m n}u | u ]");
  CHECK(same(reduce_level(raised), want));
  CHECK(equivalent_mod_level(raised, want));
}

TEST_CASE("equivalence modulo leveling separates genuinely different terms") {
  Expression a = parse_expression("1 X{1,2}[ u | q ]");
  Expression b = parse_expression("1 X{1,2}[ q | u ]");
  CHECK(!equivalent_mod_level(a, b));
  CHECK(equivalent_mod_level(a, a));
}

TEST_CASE("tail commutator slot lowers to the two-operator combination") {
  // [q,u] in the last slot at alpha = d/2 + 1 with d = 4, so 1/(1-alpha) = -1/2.
  Expression in = parse_expression(
      "1 X{1,2}[ q | q u ]\n"
      "-1 X{1,2}[ q | u q ]");
  Expression want = parse_expression(
      "-1/2 X{0,1}[ q q ]\n"
      "1/2 X{0,1}[ q ] q");
  CHECK(same(commutator_rewrites(in, Rational(4)), want));
}

TEST_CASE("interior commutator slot splits onto the neighbouring slots") {
  // alpha = d/2 + 1 with d = 0 gives 1/(1-alpha) = ... ; use d = 4: -1/2.
  Expression in = parse_expression(
      "1 X{1,3}[ q | q u | q ]\n"
      "-1 X{1,3}[ q | u q | q ]");
  Expression want = parse_expression(
      "-1/2 X{0,2}[ q q | q ]\n"
      "1/2 X{0,2}[ q | q q ]");
  CHECK(same(commutator_rewrites(in, Rational(4)), want));
}

TEST_CASE("commutator lowering is skipped at the alpha = 1 pole") {
  Expression in = parse_expression(
      "1 X{0,2}[ q | q u ]\n"
      "-1 X{0,2}[ q | u q ]");
  CHECK(same(commutator_rewrites(in, Rational(2)), collect(in)));
}

TEST_CASE("a commutator of u with itself vanishes before any rewrite") {
  Expression in = parse_expression(
      "1 X{1,2}[ q | u u ]\n"
      "-1 X{1,2}[ q | u u ]");
  CHECK(commutator_rewrites(in, Rational(4)).empty());
}
