#include "heatcas/nc_tables.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

namespace heatcas {

namespace {

// Product of scalar/one-slot fragments: coefficients multiply, scalar factors
// and argument slots concatenate (fragments never carry descriptors).
Expression times(const Expression& a, const Expression& b) {
  Expression out;
  for (const auto& ta : a)
    for (const auto& tb : b) {
      Term t = ta;
      t.coeff *= tb.coeff;
      t.scalars.insert(t.scalars.end(), tb.scalars.begin(), tb.scalars.end());
      for (const auto& slot : tb.args) t.args.push_back(slot);
      out.push_back(std::move(t));
    }
  return out;
}

Expression scalar_one(const Rational& c) {
  Term t;
  t.coeff = DimPoly(c);
  return {t};
}

// all ordered subset splits of a derivative multi-index
void subset_splits(const std::vector<Index>& dv,
                   const std::function<void(const std::vector<Index>&, const std::vector<Index>&)>& f) {
  const int n = (int)dv.size();
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Index> s, c;
    for (int i = 0; i < n; ++i) (mask >> i & 1 ? s : c).push_back(dv[i]);
    f(s, c);
  }
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

} // namespace

Expression metric_jet_down(const std::vector<Index>& dv, Index a, Index b, IndexGen& gen) {
  const int n = (int)dv.size();
  Expression out;
  if (n == 0) {
    Term t;
    t.scalars.push_back({ScalarSym::MetricDown, {}, {a, b}});
    out.push_back(std::move(t));
    return out;
  }
  if (n == 1) return out;
  if (n == 2) {
    for (auto& p : permutations(2)) {
      Term t;
      t.coeff = DimPoly(Rational(1, 3));
      t.scalars.push_back({ScalarSym::Riemann, {}, {dv[p[0]], a, dv[p[1]], b}});
      out.push_back(std::move(t));
    }
    return out;
  }
  if (n == 3) {
    for (auto& p : permutations(3)) {
      Term t;
      t.coeff = DimPoly(Rational(1, 6));
      t.scalars.push_back({ScalarSym::Riemann, {dv[p[0]]}, {dv[p[1]], a, dv[p[2]], b}});
      out.push_back(std::move(t));
    }
    return out;
  }
  if (n == 4) {
    for (auto& p : permutations(4)) {
      {
        Term t;
        t.coeff = DimPoly(Rational(1, 20));
        t.scalars.push_back(
            {ScalarSym::Riemann, {dv[p[0]], dv[p[1]]}, {dv[p[2]], a, dv[p[3]], b}});
        out.push_back(std::move(t));
      }
      {
        Term t;
        t.coeff = DimPoly(Rational(2, 45));
        int s = gen.fresh(), s2 = gen.fresh();
        t.scalars.push_back({ScalarSym::MetricUp, {}, {up(s), up(s2)}});
        t.scalars.push_back({ScalarSym::Riemann, {}, {dv[p[0]], a, dv[p[1]], dn(s)}});
        t.scalars.push_back({ScalarSym::Riemann, {}, {dv[p[2]], b, dv[p[3]], dn(s2)}});
        out.push_back(std::move(t));
      }
    }
    return out;
  }
  throw std::invalid_argument("metric_jet_down: order > 4");
}

Expression metric_jet_up(const std::vector<Index>& dv, Index a, Index b, IndexGen& gen) {
  const int n = (int)dv.size();
  Expression out;
  if (n == 0) {
    Term t;
    t.scalars.push_back({ScalarSym::MetricUp, {}, {a, b}});
    out.push_back(std::move(t));
    return out;
  }
  if (n == 1) return out;
  // raising helper: g^{a a'} g^{b b'} (...)_{a' b'}
  const int ap = gen.fresh(), bp = gen.fresh();
  Term raise;
  raise.scalars.push_back({ScalarSym::MetricUp, {}, {a, up(ap)}});
  raise.scalars.push_back({ScalarSym::MetricUp, {}, {b, up(bp)}});
  if (n == 2 || n == 3) {
    Expression low = metric_jet_down(dv, dn(ap), dn(bp), gen);
    return times({raise}, scaled(low, DimPoly(Rational(-1))));
  }
  if (n == 4) {
    Expression acc = times({raise}, scaled(metric_jet_down(dv, dn(ap), dn(bp), gen),
                                           DimPoly(Rational(-1))));
    subset_splits(dv, [&](const std::vector<Index>& s, const std::vector<Index>& c) {
      if (s.size() != 2) return;
      int ss = gen.fresh(), ss2 = gen.fresh();
      Term met;
      met.scalars.push_back({ScalarSym::MetricUp, {}, {up(ss), up(ss2)}});
      Expression piece = times({raise}, times({met},
          times(metric_jet_down(s, dn(ap), dn(ss), gen),
                metric_jet_down(c, dn(ss2), dn(bp), gen))));
      for (auto& t : piece) acc.push_back(std::move(t));
    });
    return acc;
  }
  throw std::invalid_argument("metric_jet_up: order > 4");
}

Expression christoffel_jet(const std::vector<Index>& dv, Index a, Index b, Index c_up,
                           IndexGen& gen) {
  Expression out;
  subset_splits(dv, [&](const std::vector<Index>& s, const std::vector<Index>& c) {
    const int sig = gen.fresh();
    Expression lift = metric_jet_up(s, c_up, up(sig), gen);
    if (lift.empty()) return;
    auto with_extra = [&](std::vector<Index> base, Index extra) {
      base.push_back(extra);
      return base;
    };
    Expression inner;
    for (auto& t : times(scalar_one(Rational(1, 2)),
                         metric_jet_down(with_extra(c, a), dn(sig), b, gen)))
      inner.push_back(std::move(t));
    for (auto& t : times(scalar_one(Rational(1, 2)),
                         metric_jet_down(with_extra(c, b), dn(sig), a, gen)))
      inner.push_back(std::move(t));
    for (auto& t : times(scalar_one(Rational(-1, 2)),
                         metric_jet_down(with_extra(c, dn(sig)), a, b, gen)))
      inner.push_back(std::move(t));
    for (auto& t : times(lift, inner)) out.push_back(std::move(t));
  });
  return out;
}

Expression christoffel_contracted_jet(const std::vector<Index>& dv, Index c_up, IndexGen& gen) {
  Expression out;
  subset_splits(dv, [&](const std::vector<Index>& s, const std::vector<Index>& c) {
    const int al = gen.fresh(), be = gen.fresh();
    Expression lift = metric_jet_up(s, up(al), up(be), gen);
    if (lift.empty()) return;
    Expression gam = christoffel_jet(c, dn(al), dn(be), c_up, gen);
    for (auto& t : times(lift, gam)) out.push_back(std::move(t));
  });
  return out;
}

// ---------------------------------------------------------------------------
// hat-derivative expansion via Christoffel jets
// ---------------------------------------------------------------------------

namespace {

struct JGamma {
  std::vector<Index> d;
  Index a, b, c; // Gamma^{c}_{ab}, c up
};

struct JTerm {
  Rational coeff = 1;
  std::vector<JGamma> gs;
  std::vector<Index> xd; // plain gauge derivative word on the base symbol
  int xup = -1;          // id of the symbol's upper index, -1 if none
};

void jrename(JTerm& t, int from, int to) {
  auto fix = [&](Index& i) {
    if (i.id == from) i.id = to;
  };
  for (auto& g : t.gs) {
    for (auto& i : g.d) fix(i);
    fix(g.a);
    fix(g.b);
    fix(g.c);
  }
  for (auto& i : t.xd) fix(i);
  if (t.xup == from) t.xup = to;
}

// nabhat^m X expressed through plain derivatives and Christoffel jets; the
// slot labels are nu (outermost first), mu is the optional upper label.
std::vector<JTerm> hat_in_jets(const std::vector<Index>& nu, int mu_id, IndexGen& gen) {
  std::vector<JTerm> w(1);
  w[0].xup = mu_id;
  const int m = (int)nu.size();
  for (int i = m - 1; i >= 0; --i) {
    const Index v = nu[i];
    std::vector<JTerm> next;
    for (const auto& t : w) {
      // Leibniz: the plain derivative part
      for (std::size_t gi = 0; gi < t.gs.size(); ++gi) {
        JTerm c = t;
        c.gs[gi].d.insert(c.gs[gi].d.begin(), v);
        next.push_back(std::move(c));
      }
      {
        JTerm c = t;
        c.xd.insert(c.xd.begin(), v);
        next.push_back(std::move(c));
      }
      // corrections from the slots already attached (nu[i+1..m-1])
      for (int j = i + 1; j < m; ++j) {
        JTerm c = t;
        c.coeff = -c.coeff;
        const int sig = gen.fresh();
        jrename(c, nu[j].id, sig);
        c.gs.push_back({{}, v, dn(nu[j].id), up(sig)});
        next.push_back(std::move(c));
      }
      // correction from the upper slot
      if (mu_id >= 0) {
        JTerm c = t;
        const int sig = gen.fresh();
        jrename(c, mu_id, sig);
        c.gs.push_back({{}, v, dn(sig), up(mu_id)});
        next.push_back(std::move(c));
      }
    }
    w = std::move(next);
  }
  // evaluate at the pinned point: undifferentiated Christoffels vanish
  std::vector<JTerm> out;
  for (auto& t : w) {
    bool dead = false;
    for (const auto& g : t.gs)
      if (g.d.empty()) dead = true;
    if (!dead) out.push_back(std::move(t));
  }
  return out;
}

Expression hat_in_gauge(AtomBase base, const std::vector<Index>& nu, Index mu_up, IndexGen& gen) {
  const bool has_up = base == AtomBase::Nvec;
  auto jets = hat_in_jets(nu, has_up ? mu_up.id : -1, gen);
  Expression out;
  for (const auto& jt : jets) {
    Expression piece = scalar_one(jt.coeff);
    for (const auto& g : jt.gs)
      piece = times(piece, christoffel_jet(g.d, g.a, g.b, g.c, gen));
    NCAtom atom;
    atom.base = base;
    atom.hat = false;
    atom.deriv = jt.xd;
    if (has_up) atom.idx = {up(jt.xup)};
    Term at;
    at.args.push_back({atom});
    piece = times(piece, {at});
    for (auto& t : piece) out.push_back(std::move(t));
  }
  return out;
}

} // namespace

Expression gauge_to_hat(AtomBase base, const std::vector<Index>& nu, Index mu_up, IndexGen& gen) {
  const bool has_up = base == AtomBase::Nvec;
  Expression out;
  {
    Term lead;
    NCAtom atom;
    atom.base = base;
    atom.hat = true;
    atom.deriv = nu;
    if (has_up) atom.idx = {mu_up};
    lead.args.push_back({atom});
    out.push_back(std::move(lead));
  }
  if (nu.empty()) return out;
  Expression hat = hat_in_gauge(base, nu, mu_up, gen);
  for (const auto& piece : hat) {
    assert(piece.args.size() == 1 && piece.args[0].size() == 1);
    const NCAtom& inner = piece.args[0][0];
    const bool leading = piece.scalars.empty() && inner.deriv.size() == nu.size();
    if (leading) continue; // nabhat^m X = nabla^m X + rest  =>  move rest over
    Expression rec = gauge_to_hat(base, inner.deriv,
                                  has_up ? inner.idx[0] : mu_up, gen);
    Term frag;
    frag.coeff = -piece.coeff;
    frag.scalars = piece.scalars;
    for (auto& t : times({frag}, rec)) out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// full substitution
// ---------------------------------------------------------------------------

namespace {

Expression replace_atom(const NCAtom& a, IndexGen& gen) {
  assert(a.pending.empty());
  switch (a.base) {
    case AtomBase::U:
    case AtomBase::Q:
    case AtomBase::Nvec: {
      if (a.hat) {
        Term t;
        t.args.push_back({a});
        return {t};
      }
      return gauge_to_hat(a.base, a.deriv, a.base == AtomBase::Nvec ? a.idx[0] : Index{},
                          gen);
    }
    case AtomBase::Q0:
      return gauge_to_hat(AtomBase::Q, a.deriv, Index{}, gen);
    case AtomBase::H: {
      Expression out;
      subset_splits(a.deriv, [&](const std::vector<Index>& s, const std::vector<Index>& c) {
        Expression jets = metric_jet_up(s, a.idx[0], a.idx[1], gen);
        if (jets.empty()) return;
        Expression uu = gauge_to_hat(AtomBase::U, c, Index{}, gen);
        for (auto& t : times(jets, uu)) out.push_back(std::move(t));
      });
      return out;
    }
    case AtomBase::L: {
      Expression out = gauge_to_hat(AtomBase::Nvec, a.deriv, a.idx[0], gen);
      subset_splits(a.deriv, [&](const std::vector<Index>& s, const std::vector<Index>& c) {
        Expression jets = christoffel_contracted_jet(s, a.idx[0], gen);
        if (jets.empty()) return;
        Expression uu = gauge_to_hat(AtomBase::U, c, Index{}, gen);
        for (auto& t : scaled(times(jets, uu), DimPoly(Rational(-1))))
          out.push_back(std::move(t));
      });
      return out;
    }
    case AtomBase::F: {
      if (a.hat) {
        Term t;
        t.args.push_back({a});
        return {t};
      }
      if (a.deriv.size() > 1)
        throw std::logic_error("replace_atom: gauge second derivative of F not supported");
      NCAtom b = a;
      b.hat = true;
      Term t;
      t.args.push_back({b});
      return {t};
    }
  }
  throw std::logic_error("replace_atom: unhandled base");
}

} // namespace

Expression substitute_normal_coordinates(const Expression& e) {
  Expression out;
  for (const auto& term : e) {
    IndexGen gen(index_label_end(term));
    // alternatives per slot position; slots may hold several atoms
    Expression acc;
    {
      Term base = term;
      base.args.clear();
      base.qfactors.clear();
      acc.push_back(std::move(base));
    }
    for (const auto& slot : term.args) {
      // extend every accumulated term by one new (initially empty) slot
      for (auto& t : acc) t.args.push_back({});
      for (const auto& atom : slot) {
        Expression repl = replace_atom(atom, gen);
        Expression next;
        for (const auto& t : acc)
          for (const auto& r : repl) {
            Term nt = t;
            nt.coeff *= r.coeff;
            nt.scalars.insert(nt.scalars.end(), r.scalars.begin(), r.scalars.end());
            for (const auto& ra : r.args[0]) nt.args.back().push_back(ra);
            next.push_back(std::move(nt));
          }
        acc = std::move(next);
      }
    }
    for (const auto& atom : term.qfactors) {
      Expression repl = replace_atom(atom, gen);
      Expression next;
      for (const auto& t : acc)
        for (const auto& r : repl) {
          Term nt = t;
          nt.coeff *= r.coeff;
          nt.scalars.insert(nt.scalars.end(), r.scalars.begin(), r.scalars.end());
          for (const auto& ra : r.args[0]) nt.qfactors.push_back(ra);
          next.push_back(std::move(nt));
        }
      acc = std::move(next);
    }
    for (auto& t : acc) out.push_back(std::move(t));
  }
  return out;
}

} // namespace heatcas
