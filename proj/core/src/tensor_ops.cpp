#include "heatcas/tensor_ops.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace heatcas {

namespace {

// Where one occurrence of an index label lives inside a term.
struct Occ {
  enum Kind { ScalDeriv, ScalIdx, GSlot, AtomDeriv, AtomIdx, QFDeriv, QFIdx, QDeriv } kind{};
  int factor = -1; // scalar factor / qfactor position
  int slot = -1;   // arg slot
  int atom = -1;   // atom within slot
  int pos = -1;    // position within the index list
};

std::map<int, std::vector<Occ>> occurrences(const Term& t) {
  std::map<int, std::vector<Occ>> m;
  for (std::size_t f = 0; f < t.scalars.size(); ++f) {
    const auto& s = t.scalars[f];
    for (std::size_t p = 0; p < s.deriv.size(); ++p)
      m[s.deriv[p].id].push_back({Occ::ScalDeriv, (int)f, -1, -1, (int)p});
    for (std::size_t p = 0; p < s.idx.size(); ++p)
      m[s.idx[p].id].push_back({Occ::ScalIdx, (int)f, -1, -1, (int)p});
  }
  for (std::size_t p = 0; p < t.gslots.size(); ++p)
    m[t.gslots[p].id].push_back({Occ::GSlot, -1, -1, -1, (int)p});
  for (std::size_t sl = 0; sl < t.args.size(); ++sl)
    for (std::size_t a = 0; a < t.args[sl].size(); ++a) {
      const auto& at = t.args[sl][a];
      for (std::size_t p = 0; p < at.deriv.size(); ++p)
        m[at.deriv[p].id].push_back({Occ::AtomDeriv, -1, (int)sl, (int)a, (int)p});
      for (std::size_t p = 0; p < at.idx.size(); ++p)
        m[at.idx[p].id].push_back({Occ::AtomIdx, -1, (int)sl, (int)a, (int)p});
    }
  for (std::size_t f = 0; f < t.qfactors.size(); ++f) {
    const auto& at = t.qfactors[f];
    for (std::size_t p = 0; p < at.deriv.size(); ++p)
      m[at.deriv[p].id].push_back({Occ::QFDeriv, (int)f, -1, -1, (int)p});
    for (std::size_t p = 0; p < at.idx.size(); ++p)
      m[at.idx[p].id].push_back({Occ::QFIdx, (int)f, -1, -1, (int)p});
  }
  for (std::size_t p = 0; p < t.qderiv.size(); ++p)
    m[t.qderiv[p].id].push_back({Occ::QDeriv, -1, -1, -1, (int)p});
  return m;
}

void erase_scalar(Term& t, int a, int b) {
  if (a > b) std::swap(a, b);
  t.scalars.erase(t.scalars.begin() + b);
  t.scalars.erase(t.scalars.begin() + a);
}

// Renames every occurrence of `from` to `to` (labels only, variance kept).
void relabel(Term& t, int from, int to) {
  for_each_index(t, [&](Index& i) {
    if (i.id == from) i.id = to;
  });
}

// Riemann symmetry images as slot permutations with signs.
struct RPerm {
  int p[4];
  int sign;
};
constexpr RPerm kRPerms[8] = {
    {{0, 1, 2, 3}, 1},  {{1, 0, 2, 3}, -1}, {{0, 1, 3, 2}, -1}, {{1, 0, 3, 2}, 1},
    {{2, 3, 0, 1}, 1},  {{3, 2, 0, 1}, -1}, {{2, 3, 1, 0}, -1}, {{3, 2, 1, 0}, 1},
};

// One pass of the rewrite rules.  Returns true if something changed; a rule
// that splits the term pushes the extra summands onto `extra` and rewrites
// the term into the first summand.
bool contract_step(Term& t, std::vector<Term>& extra) {
  auto occ = occurrences(t);
  auto partner = [&](int id, const Occ& self) -> const Occ* {
    auto it = occ.find(id);
    if (it == occ.end() || it->second.size() != 2) return nullptr;
    const Occ& a = it->second[0];
    const Occ& b = it->second[1];
    auto same = [&](const Occ& o) {
      return o.kind == self.kind && o.factor == self.factor && o.slot == self.slot &&
             o.atom == self.atom && o.pos == self.pos;
    };
    return same(a) ? &b : same(b) ? &a : nullptr;
  };

  for (std::size_t f = 0; f < t.scalars.size(); ++f) {
    if (t.scalars[f].sym != ScalarSym::MetricUp) continue;
    const Index ia = t.scalars[f].idx[0];
    const Index ib = t.scalars[f].idx[1];
    const Occ self_a{Occ::ScalIdx, (int)f, -1, -1, 0};
    const Occ self_b{Occ::ScalIdx, (int)f, -1, -1, 1};
    const Occ* pa = partner(ia.id, self_a);
    const Occ* pb = partner(ib.id, self_b);
    if (!pa || !pb) continue;

    // Rule 1: full trace with one MetricDown -> d.
    if (pa->kind == Occ::ScalIdx && pb->kind == Occ::ScalIdx && pa->factor == pb->factor &&
        t.scalars[pa->factor].sym == ScalarSym::MetricDown) {
      int other = pa->factor;
      t.coeff *= DimPoly::d();
      erase_scalar(t, (int)f, other);
      return true;
    }

    // Rule 2: chain through a MetricDown: g^{ab} g_{bc} -> delta.
    for (auto [idm, po, iu] : {std::tuple<int, const Occ*, Index>{ia.id, pa, ib},
                               std::tuple<int, const Occ*, Index>{ib.id, pb, ia}}) {
      if (po->kind == Occ::ScalIdx && t.scalars[po->factor].sym == ScalarSym::MetricDown) {
        const auto& down = t.scalars[po->factor];
        const Index ic = down.idx[1 - po->pos];
        // remove both metrics, then identify ic's partner with iu's label
        int keep = iu.id, drop = ic.id;
        erase_scalar(t, (int)f, po->factor);
        relabel(t, drop, keep);
        return true;
      }
    }

    // Rule 3: both ends on moment slots -> (d + 2p - 2)/2.
    if (pa->kind == Occ::GSlot && pb->kind == Occ::GSlot) {
      const int p = (int)t.gslots.size() / 2;
      DimPoly factor = (DimPoly::d() + DimPoly(Rational(2 * p - 2))) * Rational(1, 2);
      t.coeff *= factor;
      int q1 = pa->pos, q2 = pb->pos;
      if (q1 > q2) std::swap(q1, q2);
      t.gslots.erase(t.gslots.begin() + q2);
      t.gslots.erase(t.gslots.begin() + q1);
      t.scalars.erase(t.scalars.begin() + f);
      return true;
    }

    // Rule 4: both ends on the index slots of one curvature factor.
    if (pa->kind == Occ::ScalIdx && pb->kind == Occ::ScalIdx && pa->factor == pb->factor) {
      ScalarFactor& c = t.scalars[pa->factor];
      if (c.sym == ScalarSym::Riemann) {
        int s1 = pa->pos, s2 = pb->pos;
        // antisymmetric pairs trace to zero
        if ((std::min(s1, s2) == 0 && std::max(s1, s2) == 1) ||
            (std::min(s1, s2) == 2 && std::max(s1, s2) == 3)) {
          t.coeff = DimPoly();
          return true;
        }
        // bring the contracted pair to slots (1,2): that contraction is Ricci
        for (const auto& rp : kRPerms) {
          int q1 = -1, q2 = -1;
          for (int j = 0; j < 4; ++j) {
            if (rp.p[j] == s1) { if (j == 1) q1 = 1; if (j == 2) q1 = 2; }
            if (rp.p[j] == s2) { if (j == 1) q2 = 1; if (j == 2) q2 = 2; }
          }
          // need s1, s2 to land on {1,2}
          std::vector<int> land;
          for (int j = 0; j < 4; ++j)
            if (rp.p[j] == s1 || rp.p[j] == s2) land.push_back(j);
          if (!(land.size() == 2 && land[0] == 1 && land[1] == 2)) continue;
          ScalarFactor ric;
          ric.sym = ScalarSym::Ricci;
          ric.deriv = c.deriv;
          ric.idx = {c.idx[rp.p[0]], c.idx[rp.p[3]]};
          t.coeff *= Rational(rp.sign);
          t.scalars[pa->factor] = std::move(ric);
          t.scalars.erase(t.scalars.begin() + f);
          return true;
        }
        throw std::logic_error("contract_metrics: unreachable Riemann case");
      }
      if (c.sym == ScalarSym::Ricci) {
        ScalarFactor sc;
        sc.sym = ScalarSym::ScalarCurv;
        sc.deriv = c.deriv;
        t.scalars[pa->factor] = std::move(sc);
        t.scalars.erase(t.scalars.begin() + f);
        return true;
      }
    }

    // Rule 5: divergence contractions (deriv index against own factor index).
    for (int side = 0; side < 2; ++side) {
      const Occ* pd = side == 0 ? pa : pb;
      const Occ* px = side == 0 ? pb : pa;
      if (pd->kind != Occ::ScalDeriv || px->kind != Occ::ScalIdx || pd->factor != px->factor)
        continue;
      ScalarFactor c = t.scalars[pd->factor];
      const int cf = pd->factor;
      if (c.sym != ScalarSym::Riemann && c.sym != ScalarSym::Ricci) continue;
      // If the contracted derivative is not innermost, commute it inward
      // first; the corrections are curvature-times-factor terms.
      if (pd->pos != (int)c.deriv.size() - 1) {
        // swap deriv[pos] with deriv[pos+1]
        int pos = pd->pos;
        Term base = t;
        std::swap(base.scalars[cf].deriv[pos], base.scalars[cf].deriv[pos + 1]);
        // corrections: [nab_a, nab_b] T_{...c_j...} = -g^{ef} R_{a b c_j f} T_{...e...}
        const Index a = c.deriv[pos], b = c.deriv[pos + 1];
        int fresh = index_label_end(t);
        // the commutator hits every lower slot under it: the inner
        // derivative indices and the factor's own indices
        const int n_inner = (int)c.deriv.size() - (pos + 2);
        for (int j = 0; j < n_inner + (int)c.idx.size(); ++j) {
          Term corr = t;
          ScalarFactor& tf = corr.scalars[cf];
          tf.deriv.erase(tf.deriv.begin() + pos, tf.deriv.begin() + pos + 2);
          Index e = dn(fresh), eu = up(fresh), fdn = dn(fresh + 1), fup = up(fresh + 1);
          Index& slot = j < n_inner ? tf.deriv[pos + j] : tf.idx[j - n_inner];
          ScalarFactor met{ScalarSym::MetricUp, {}, {eu, fup}};
          ScalarFactor rie{ScalarSym::Riemann, {}, {a, b, slot, fdn}};
          slot = e;
          corr.scalars.push_back(std::move(met));
          corr.scalars.push_back(std::move(rie));
          corr.coeff *= Rational(-1);
          extra.push_back(std::move(corr));
        }
        t = std::move(base);
        return true;
      }
      // innermost derivative contracted with an own index slot
      if (c.sym == ScalarSym::Ricci) {
        // g^{eb} nabhat_e Ric_{bc} -> 1/2 nabhat_c Sc
        const Index other = c.idx[1 - px->pos];
        ScalarFactor sc;
        sc.sym = ScalarSym::ScalarCurv;
        sc.deriv = c.deriv;
        sc.deriv[pd->pos] = other;
        t.coeff *= Rational(1, 2);
        t.scalars[cf] = std::move(sc);
        t.scalars.erase(t.scalars.begin() + f);
        return true;
      }
      // Riemann: bring contracted slot to position 2, then
      // g^{ec} nab_e R_{abcd} -> -nab_a Ric_{bd} + nab_b Ric_{ad}.
      {
        int s = px->pos;
        if (s == 2) {
          // already in place
        } else {
          for (const auto& rp : kRPerms) {
            if (rp.p[2] != s) continue;
            ScalarFactor img = c;
            for (int j = 0; j < 4; ++j) img.idx[j] = c.idx[rp.p[j]];
            t.coeff *= Rational(rp.sign);
            t.scalars[cf] = img;
            c = img;
            break;
          }
        }
        const Index a = t.scalars[cf].idx[0], b = t.scalars[cf].idx[1],
                    d_ = t.scalars[cf].idx[3];
        std::vector<Index> outer(t.scalars[cf].deriv.begin(), t.scalars[cf].deriv.end() - 1);
        Term t2 = t;
        // term 1: -nab_a Ric_{bd}
        {
          ScalarFactor ric{ScalarSym::Ricci, outer, {b, d_}};
          ric.deriv.push_back(a);
          // note: contracted derivative was innermost; the divergence result
          // keeps the outer derivatives outside, new derivative innermost
          t.scalars[cf] = std::move(ric);
          t.scalars.erase(t.scalars.begin() + f);
          t.coeff *= Rational(-1);
        }
        // term 2: +nab_b Ric_{ad}
        {
          ScalarFactor ric{ScalarSym::Ricci, outer, {a, d_}};
          ric.deriv.push_back(b);
          t2.scalars[cf] = std::move(ric);
          t2.scalars.erase(t2.scalars.begin() + f);
          extra.push_back(std::move(t2));
        }
        return true;
      }
    }
  }
  return false;
}

} // namespace

void contract_metrics(Term& t) {
  std::vector<Term> extra;
  while (!t.coeff.is_zero() && contract_step(t, extra)) {
  }
  if (!extra.empty())
    throw std::logic_error("contract_metrics(Term&): splitting rule fired; use Expression form");
}

Expression contract_metrics(Expression e) {
  Expression out;
  while (!e.empty()) {
    Term t = std::move(e.back());
    e.pop_back();
    std::vector<Term> extra;
    while (!t.coeff.is_zero() && contract_step(t, extra)) {
    }
    for (auto& x : extra) e.push_back(std::move(x));
    if (!t.coeff.is_zero()) out.push_back(std::move(t));
  }
  return out;
}

Expression expand_gslots(const Term& t) {
  if (t.gslots.empty()) return {t};
  const int n = (int)t.gslots.size();
  if (n % 2 != 0) throw std::invalid_argument("expand_gslots: odd moment degree");
  Expression out;
  // enumerate perfect matchings of the moment indices
  std::vector<int> items(n);
  for (int i = 0; i < n; ++i) items[i] = i;
  std::vector<std::pair<int, int>> pairing;
  std::function<void()> rec = [&]() {
    std::vector<int> rest;
    for (int i : items) {
      bool used = false;
      for (auto& [a, b] : pairing)
        if (a == i || b == i) used = true;
      if (!used) rest.push_back(i);
    }
    if (rest.empty()) {
      Term nt = t;
      nt.gslots.clear();
      for (auto& [a, b] : pairing) {
        ScalarFactor m{ScalarSym::MetricDown, {}, {t.gslots[a], t.gslots[b]}};
        // moment indices are down; the pairing metric replaces the formal
        // slot, so each paired label must flip to up on one side to keep the
        // up/down dummy convention.  The slot label's other occurrence in the
        // term is up (it contracted the down moment slot), so both metric
        // indices stay down and the labels keep their partners.
        nt.scalars.push_back(std::move(m));
      }
      nt.coeff *= Rational(1, 1 << (n / 2));
      out.push_back(std::move(nt));
      return;
    }
    int first = rest[0];
    for (std::size_t j = 1; j < rest.size(); ++j) {
      pairing.push_back({first, rest[j]});
      rec();
      pairing.pop_back();
    }
  };
  rec();
  return out;
}

void recognize_curvature_squares(Term& t) {
  // Find two underived Riemann factors fully contracted through four
  // MetricUp factors, or two Ricci factors through two.
  auto occ = occurrences(t);
  auto metric_between = [&](int fa, int fb, std::vector<std::pair<int, int>>& pairing,
                            std::vector<int>& metrics) {
    // For every idx of factor fa, follow its dummy through a MetricUp to an
    // idx of factor fb; records (slot_a, slot_b).
    pairing.clear();
    metrics.clear();
    const auto& A = t.scalars[fa];
    for (std::size_t p = 0; p < A.idx.size(); ++p) {
      int id = A.idx[p].id;
      auto it = occ.find(id);
      if (it == occ.end() || it->second.size() != 2) return false;
      const Occ* o = nullptr;
      for (auto& cand : it->second)
        if (!(cand.kind == Occ::ScalIdx && cand.factor == fa && cand.pos == (int)p)) o = &cand;
      if (!o || o->kind != Occ::ScalIdx) return false;
      if (t.scalars[o->factor].sym != ScalarSym::MetricUp) return false;
      int oid = t.scalars[o->factor].idx[1 - o->pos].id;
      auto it2 = occ.find(oid);
      if (it2 == occ.end() || it2->second.size() != 2) return false;
      const Occ* o2 = nullptr;
      for (auto& cand : it2->second)
        if (!(cand.kind == Occ::ScalIdx && cand.factor == o->factor)) o2 = &cand;
      if (!o2 || o2->kind != Occ::ScalIdx || o2->factor != fb) return false;
      pairing.push_back({(int)p, o2->pos});
      metrics.push_back(o->factor);
    }
    return true;
  };

  for (std::size_t fa = 0; fa < t.scalars.size(); ++fa) {
    for (std::size_t fb = fa + 1; fb < t.scalars.size(); ++fb) {
      const auto& A = t.scalars[fa];
      const auto& B = t.scalars[fb];
      if (A.sym != B.sym || !A.deriv.empty() || !B.deriv.empty()) continue;
      std::vector<std::pair<int, int>> pairing;
      std::vector<int> metrics;
      if (A.sym == ScalarSym::Ricci) {
        if (!metric_between((int)fa, (int)fb, pairing, metrics)) continue;
        // Ric_{ab} Ric^{ab}: any full pairing works by symmetry.
        ScalarFactor r{ScalarSym::RicciSq, {}, {}};
        std::vector<int> remove = {(int)fa, (int)fb};
        for (int m : metrics) remove.push_back(m);
        std::sort(remove.begin(), remove.end(), std::greater<int>());
        remove.erase(std::unique(remove.begin(), remove.end()), remove.end());
        for (int m : remove) t.scalars.erase(t.scalars.begin() + m);
        t.scalars.push_back(std::move(r));
        return recognize_curvature_squares(t);
      }
      if (A.sym == ScalarSym::Riemann) {
        if (!metric_between((int)fa, (int)fb, pairing, metrics)) continue;
        if (pairing.size() != 4) continue;
        // slot permutation sigma: slot p of A pairs with sigma(p) of B
        int sigma[4];
        for (auto& [p, q] : pairing) sigma[p] = q;
        // classify modulo the symmetry images of both factors
        int cls = 0; // 0 none, 1 full square, 2 half square
        int sign = 0;
        for (const auto& ra : kRPerms) {
          for (const auto& rb : kRPerms) {
            // effective permutation: slot j of A-image pairs with ...
            int eff[4];
            for (int j = 0; j < 4; ++j) {
              // A-image slot j holds original A slot ra.p[j]; its partner is
              // original B slot sigma[ra.p[j]], which sits at B-image slot m
              // with rb.p[m] == sigma[ra.p[j]].
              int target = sigma[ra.p[j]];
              for (int m = 0; m < 4; ++m)
                if (rb.p[m] == target) eff[j] = m;
            }
            const bool ident = eff[0] == 0 && eff[1] == 1 && eff[2] == 2 && eff[3] == 3;
            const bool half = eff[0] == 0 && eff[1] == 2 && eff[2] == 1 && eff[3] == 3;
            if (ident && cls == 0) {
              cls = 1;
              sign = ra.sign * rb.sign;
            } else if (half && cls == 0) {
              cls = 2;
              sign = ra.sign * rb.sign;
            }
          }
          if (cls == 1) break;
        }
        if (cls == 0) continue;
        ScalarFactor r{ScalarSym::RiemannSq, {}, {}};
        Rational factor = cls == 1 ? Rational(sign) : Rational(sign, 2);
        std::vector<int> remove = {(int)fa, (int)fb};
        for (int m : metrics) remove.push_back(m);
        std::sort(remove.begin(), remove.end(), std::greater<int>());
        remove.erase(std::unique(remove.begin(), remove.end()), remove.end());
        for (int m : remove) t.scalars.erase(t.scalars.begin() + m);
        t.scalars.push_back(std::move(r));
        t.coeff *= factor;
        return recognize_curvature_squares(t);
      }
    }
  }
}

Expression tensor_normalize(Expression e) {
  e = contract_metrics(std::move(e));
  Expression expanded;
  for (auto& t : e) {
    if (t.gslots.empty()) {
      expanded.push_back(std::move(t));
      continue;
    }
    for (auto& s : expand_gslots(t)) expanded.push_back(std::move(s));
  }
  expanded = contract_metrics(std::move(expanded));
  for (auto& t : expanded) recognize_curvature_squares(t);
  return collect(std::move(expanded));
}

namespace {

// Replaces one position of a term by each of three cyclic variants.
template <typename Apply>
void cyclic_expand(std::vector<Term>& acc, const Apply& apply) {
  std::vector<Term> next;
  next.reserve(acc.size() * 3);
  for (const auto& t : acc)
    for (int v = 0; v < 3; ++v) {
      Term nt = t;
      nt.coeff *= (v == 0) ? Rational(2, 3) : Rational(-1, 3);
      apply(nt, v);
      next.push_back(std::move(nt));
    }
  acc = std::move(next);
}

template <typename Get> // Get: Term& -> std::vector<NCAtom>&
void bianchi_atoms(std::vector<Term>& acc, const Get& get) {
  const std::size_t count = get(acc.front()).size();
  for (std::size_t ai = 0; ai < count; ++ai) {
    const NCAtom& a = get(acc.front())[ai];
    if (a.base != AtomBase::F || a.deriv.size() != 1 || a.idx.size() != 2) continue;
    cyclic_expand(acc, [&get, ai](Term& nt, int v) {
      NCAtom& f = get(nt)[ai];
      const Index p = f.deriv[0], b = f.idx[0], c = f.idx[1];
      if (v == 1) {
        f.deriv[0] = b;
        f.idx = {c, p};
      } else if (v == 2) {
        f.deriv[0] = c;
        f.idx = {p, b};
      }
    });
  }
}

} // namespace

Expression bianchi_normalize(Expression e) {
  Expression out;
  for (auto& t : e) {
    std::vector<Term> acc;
    acc.push_back(std::move(t));
    const std::size_t nsc = acc.front().scalars.size();
    for (std::size_t fi = 0; fi < nsc; ++fi) {
      const ScalarFactor& f = acc.front().scalars[fi];
      if (f.sym != ScalarSym::Riemann || f.idx.size() != 4) continue;
      cyclic_expand(acc, [fi](Term& nt, int v) {
        auto& ix = nt.scalars[fi].idx;
        const Index a = ix[0], b = ix[1], c = ix[2], d = ix[3];
        if (v == 1) ix = {a, c, d, b};
        else if (v == 2) ix = {a, d, b, c};
      });
    }
    const std::size_t nslots = acc.front().args.size();
    for (std::size_t si = 0; si < nslots; ++si)
      bianchi_atoms(acc, [si](Term& nt) -> std::vector<NCAtom>& { return nt.args[si]; });
    bianchi_atoms(acc, [](Term& nt) -> std::vector<NCAtom>& { return nt.qfactors; });
    for (auto& nt : acc) out.push_back(std::move(nt));
  }
  return collect(std::move(out));
}

Expression build_moment_tensor(const std::vector<Index>& idx) {
  Term seed;
  seed.gslots = idx;
  // give each moment label a formal partner by leaving them free here; the
  // caller contracts them.
  seed.x.reset();
  return expand_gslots(seed);
}

} // namespace heatcas
