#include "heatcas/volterra.hpp"

#include <deque>
#include <stdexcept>

namespace heatcas {

namespace {

struct SlotVariant {
  Rational coeff;
  NCAtom atom;
  std::vector<Index> gslots;
};

// The three pieces of the (sign-flipped) operator: H^{n1 n2} nabla^2, L^{n1}
// nabla, and the zeroth-order coefficient.
std::vector<SlotVariant> op_slot(IndexGen& gen) {
  std::vector<SlotVariant> out;
  {
    const int n1 = gen.fresh(), n2 = gen.fresh();
    NCAtom a{AtomBase::H, false, {}, {up(n1), up(n2)}, {dn(n1), dn(n2)}};
    out.push_back({1, a, {}});
  }
  {
    const int n1 = gen.fresh();
    NCAtom a{AtomBase::L, false, {}, {up(n1)}, {dn(n1)}};
    out.push_back({1, a, {}});
  }
  out.push_back({1, NCAtom{AtomBase::Q0, false, {}, {}, {}}, {}});
  return out;
}

// The first-order factor carrying one moment index: L^{m} + 2 H^{m n} nabla_n.
std::vector<SlotVariant> k_slot(IndexGen& gen) {
  std::vector<SlotVariant> out;
  const int m = gen.fresh(); // moment index, shared by both variants
  out.push_back({1, NCAtom{AtomBase::L, false, {}, {up(m)}, {}}, {dn(m)}});
  const int n = gen.fresh(); // contracted with the pending derivative
  out.push_back({2, NCAtom{AtomBase::H, false, {}, {up(m), up(n)}, {dn(n)}}, {dn(m)}});
  return out;
}

Expression product_of(const std::vector<std::vector<SlotVariant>>& slots, const Rational& sign) {
  Expression out;
  Term start;
  start.coeff = DimPoly(sign);
  out.push_back(start);
  for (const auto& variants : slots) {
    Expression next;
    for (const auto& t : out)
      for (const auto& v : variants) {
        Term n = t;
        n.coeff *= v.coeff;
        n.args.push_back({v.atom});
        n.gslots.insert(n.gslots.end(), v.gslots.begin(), v.gslots.end());
        next.push_back(std::move(n));
      }
    out = std::move(next);
  }
  return out;
}

void append_expr(Expression& a, Expression b) {
  for (auto& t : b) a.push_back(std::move(t));
}

} // namespace

Expression volterra_seeds(int r) {
  if (r == 0) {
    Term t;
    return {t};
  }
  IndexGen gen(0);
  auto P = [&]() { return op_slot(gen); };
  auto K = [&]() { return k_slot(gen); };
  if (r == 2) {
    Expression e = product_of({P()}, 1);        // - f_1[P] with P sign-flipped
    append_expr(e, product_of({K(), K()}, -1)); // f_2[K x K], each K = -i(...)
    return e;
  }
  if (r == 4) {
    Expression e = product_of({P(), P()}, 1);
    append_expr(e, product_of({K(), K(), P()}, -1));
    append_expr(e, product_of({K(), P(), K()}, -1));
    append_expr(e, product_of({P(), K(), K()}, -1));
    append_expr(e, product_of({K(), K(), K(), K()}, 1));
    return e;
  }
  throw std::invalid_argument("volterra_seeds: order must be 0, 2 or 4");
}

namespace {

// last slot containing a pending derivative; inside it, the last such atom
bool find_pending(const Term& t, std::size_t& si, std::size_t& ai) {
  for (std::size_t s = t.args.size(); s-- > 0;)
    for (std::size_t a = t.args[s].size(); a-- > 0;)
      if (!t.args[s][a].pending.empty()) {
        si = s;
        ai = a;
        return true;
      }
  return false;
}

} // namespace

Expression propagate(Expression e) {
  Expression done;
  std::deque<Term> work(e.begin(), e.end());
  while (!work.empty()) {
    Term t = std::move(work.front());
    work.pop_front();
    std::size_t si = 0, ai = 0;
    if (!find_pending(t, si, ai)) {
      done.push_back(std::move(t));
      continue;
    }
    const Index nu = t.args[si][ai].pending.back();
    Term base = t;
    base.args[si][ai].pending.pop_back();

    // derivative lands on a later argument
    for (std::size_t j = si + 1; j < base.args.size(); ++j)
      for (std::size_t m = 0; m < base.args[j].size(); ++m) {
        Term n = base;
        n.args[j][m].deriv.insert(n.args[j][m].deriv.begin(), nu);
        work.push_back(std::move(n));
      }

    // insertion of the differentiated principal symbol after slot j >= si
    {
      IndexGen gen(index_label_end(base));
      const int m1 = gen.fresh(), m2 = gen.fresh();
      NCAtom ins{AtomBase::H, false, {nu}, {up(m1), up(m2)}, {}};
      for (std::size_t pos = si + 1; pos <= base.args.size(); ++pos) {
        Term n = base;
        n.coeff *= Rational(-1);
        n.args.insert(n.args.begin() + static_cast<std::ptrdiff_t>(pos), {ins});
        n.gslots.push_back(dn(m1));
        n.gslots.push_back(dn(m2));
        work.push_back(std::move(n));
      }
    }

    // derivative joins the word acting on the gauge frame
    {
      Term n = std::move(base);
      n.qderiv.insert(n.qderiv.begin(), nu);
      work.push_back(std::move(n));
    }
  }
  return done;
}

void assign_descriptors(Expression& e) {
  for (auto& t : e)
    t.x = XDescriptor{static_cast<int>(t.gslots.size()) / 2, static_cast<int>(t.args.size())};
}

} // namespace heatcas
