#include <doctest.h>

#include "heatcas/dsl.hpp"
#include "heatcas/nc_tables.hpp"
#include "heatcas/tensor_ops.hpp"

using namespace heatcas;

namespace {

Expression norm(const std::string& text) { return tensor_normalize(parse_expression(text)); }

Expression norm_sub(const std::string& text) {
  return tensor_normalize(substitute_normal_coordinates(parse_expression(text)));
}

bool same(const Expression& a, const Expression& b) { return difference(a, b).empty(); }

// Attach extra scalar factors and a trivial carrier so the fragments become
// fully contracted scalars the normalizer can compare.
Expression host(Expression frags, std::vector<ScalarFactor> extra) {
  for (auto& t : frags) {
    for (const auto& s : extra) t.scalars.push_back(s);
    t.x = XDescriptor{0, 1};
    t.args = {{atom_u()}};
  }
  return tensor_normalize(std::move(frags));
}

} // namespace

TEST_CASE("metric jet: double trace of the second derivative") {
  // g^{ab} g^{n1 n2} partial^2_{n1 n2} g_{ab} = -2/3 Sc
  IndexGen gen(4);
  Expression e = host(metric_jet_down({dn(0), dn(1)}, dn(2), dn(3), gen),
                      {{ScalarSym::MetricUp, {}, {up(2), up(3)}},
                       {ScalarSym::MetricUp, {}, {up(0), up(1)}}});
  CHECK(same(e, norm("-2/3 Sc X{0,1}[ u ]")));
}

TEST_CASE("metric jet: Ricci-weighted trace of the second derivative") {
  // g^{ab} Ric^{n1 n2} partial^2_{n1 n2} g_{ab} = -2/3 Ric.Ric
  IndexGen gen(6);
  Expression e = host(metric_jet_down({dn(0), dn(1)}, dn(2), dn(3), gen),
                      {{ScalarSym::MetricUp, {}, {up(2), up(3)}},
                       {ScalarSym::MetricUp, {}, {up(0), up(4)}},
                       {ScalarSym::MetricUp, {}, {up(1), up(5)}},
                       {ScalarSym::Ricci, {}, {dn(4), dn(5)}}});
  CHECK(same(e, norm("-2/3 RicRic X{0,1}[ u ]")));
}

TEST_CASE("inverse metric jet: raising flips the sign at second order") {
  // g_{ab} g^{n1 n2} partial^2_{n1 n2} g^{ab} = +2/3 Sc
  IndexGen gen(4);
  Expression e = host(metric_jet_up({dn(0), dn(1)}, up(2), up(3), gen),
                      {{ScalarSym::MetricDown, {}, {dn(2), dn(3)}},
                       {ScalarSym::MetricUp, {}, {up(0), up(1)}}});
  CHECK(same(e, norm("2/3 Sc X{0,1}[ u ]")));
}

TEST_CASE("contracted Christoffel jet: first derivative is 2/3 Ricci") {
  // partial_{nu} Gamma^{mu} = 2/3 Ric_{nu}^{mu}; contract with Ric_{nu mu}
  IndexGen gen(4);
  Expression e = host(christoffel_contracted_jet({dn(0)}, up(1), gen),
                      {{ScalarSym::MetricUp, {}, {up(0), up(2)}},
                       {ScalarSym::Ricci, {}, {dn(2), dn(1)}}});
  CHECK(same(e, norm("2/3 RicRic X{0,1}[ u ]")));
}

TEST_CASE("plain derivatives of scalars and u need no correction up to order 2") {
  CHECK(same(norm_sub("1 X{0,1}[ Dg{n1 n2}u ]"), norm("1 X{0,1}[ D{n1 n2}u ]")));
  CHECK(same(norm_sub("1 X{0,1}[ Dg{n}q ]"), norm("1 X{0,1}[ D{n}q ]")));
}

TEST_CASE("first derivative of L") {
  // nabla_{nu} L^{mu} -> nabhat_{nu} N^{mu} - 2/3 Ric_{nu}^{mu} u
  Expression e = norm_sub("1 g^{n c} Ric_{c m} X{0,1}[ Dg{n}L^{m} ]");
  Expression want = norm(
      "1 g^{n c} Ric_{c m} X{0,1}[ D{n}N^{m} ]\n"
      "-2/3 RicRic X{0,1}[ u ]");
  CHECK(same(e, want));
}

TEST_CASE("second derivative of H") {
  // nabla^2_{n1 n2} H^{m1 m2} -> g^{m1 m2} nabhat^2 u
  //                               - 1/3 sum_perm R_{n1}^{m1}_{n2}^{m2} u
  Expression e = norm_sub("1 g_{m1 m2} g^{n1 n2} X{0,1}[ Dg{n1 n2}H^{m1 m2} ]");
  Expression want = norm(
      "(d) g^{n1 n2} X{0,1}[ D{n1 n2}u ]\n"
      "-2/3 g^{n1 n2} g^{a b} R_{n1 a n2 b} X{0,1}[ u ]");
  CHECK(same(e, want));
}

TEST_CASE("undifferentiated H and L reduce to their leading parts") {
  CHECK(same(norm_sub("1 g_{m1 m2} X{0,1}[ H^{m1 m2} ]"), norm("(d) X{0,1}[ u ]")));
  CHECK(same(norm_sub("1 g_{m c} N^{c} X{0,1}[ L^{m} ]"),
             norm("1 g_{m c} N^{c} X{0,1}[ N^{m} ]")));
}
