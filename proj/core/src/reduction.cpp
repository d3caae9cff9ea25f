#include "heatcas/reduction.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace heatcas {

namespace {

bool is_bare_u(const NCAtom& a) {
  return a.base == AtomBase::U && a.deriv.empty() && a.idx.empty() && a.pending.empty();
}

bool is_bare_u_slot(const std::vector<NCAtom>& slot) {
  return slot.size() == 1 && is_bare_u(slot[0]);
}

std::string canonical_signature(Term t) {
  canonicalize(t);
  return signature(t);
}

// Raises t to the target level by repeated expansion, collected.
Expression raise_to(const Term& t, int target) {
  Expression cur{t};
  while (!cur.empty() && cur.front().x && cur.front().x->k < target) {
    Expression next;
    for (const auto& s : cur)
      for (auto& e : expand_Ek(s)) next.push_back(std::move(e));
    cur = std::move(next);
  }
  return collect(std::move(cur));
}

// Greedy lowering of one pattern class whose terms all sit at one level.
// A bare u slot of a term is stripped whenever subtracting the matching
// expansion image does not increase the term count; stripped terms recurse
// one level down.  Deterministic: terms in signature order, slots left to
// right, first acceptable move taken.
Expression lower_class(Expression cur) {
  Expression extracted;
  bool improved = true;
  while (improved && !cur.empty()) {
    improved = false;
    Expression rest;
    Term lowered;
    for (std::size_t ti = 0; ti < cur.size() && !improved; ++ti) {
      const Term& t = cur[ti];
      if (!t.x || t.x->k == 0) break;
      const std::string tsig = signature(t);
      for (std::size_t sl = 0; sl < t.args.size() && !improved; ++sl) {
        if (!is_bare_u_slot(t.args[sl])) continue;
        Term s = t;
        s.coeff = DimPoly(Rational(1));
        s.args.erase(s.args.begin() + static_cast<std::ptrdiff_t>(sl));
        s.x = XDescriptor{t.x->alpha_off - 1, t.x->k - 1};
        canonicalize(s);
        Expression image = collect(expand_Ek(s));
        Rational mult;
        for (const auto& im : image)
          if (signature(im) == tsig) {
            mult = im.coeff.coeff(0);
            break;
          }
        if (mult == 0) continue; // cannot happen structurally, but stay safe
        const DimPoly c = t.coeff * (Rational(1) / mult);
        Expression candidate = difference(cur, scaled(image, c));
        if (candidate.size() + 1 > cur.size()) continue;
        lowered = s;
        lowered.coeff = c;
        rest = std::move(candidate);
        improved = true;
      }
    }
    if (improved) {
      extracted.push_back(std::move(lowered));
      cur = std::move(rest);
    }
  }
  if (extracted.empty()) return cur;
  Expression below = lower_class(collect(std::move(extracted)));
  for (auto& t : below) cur.push_back(std::move(t));
  return cur;
}

} // namespace

Expression expand_Ek(const Term& t) {
  if (!t.x) throw std::invalid_argument("expand_Ek: term has no operator descriptor");
  Expression out;
  const int k = t.x->k;
  for (int pos = 0; pos <= k; ++pos) {
    Term n = t;
    n.args.insert(n.args.begin() + pos, {atom_u()});
    n.x = XDescriptor{t.x->alpha_off + 1, k + 1};
    out.push_back(std::move(n));
  }
  return out;
}

std::string pattern_key(const Term& t) {
  Term p = t;
  p.coeff = DimPoly(Rational(1));
  p.args.erase(std::remove_if(p.args.begin(), p.args.end(), is_bare_u_slot), p.args.end());
  if (p.x) p.x = XDescriptor{p.x->alpha_off - p.x->k, 0};
  return canonical_signature(std::move(p));
}

Expression level_up(Expression e) {
  e = collect(std::move(e));
  std::map<std::string, Expression> classes;
  Expression out; // terms without a descriptor pass through untouched
  for (auto& t : e) {
    if (t.x)
      classes[pattern_key(t)].push_back(std::move(t));
    else
      out.push_back(std::move(t));
  }
  for (auto& [key, cls] : classes) {
    int kmax = 0;
    for (const auto& t : cls) kmax = std::max(kmax, t.x->k);
    Expression raised;
    for (const auto& t : cls)
      for (auto& r : raise_to(t, kmax)) raised.push_back(std::move(r));
    for (auto& t : collect(std::move(raised))) out.push_back(std::move(t));
  }
  return collect(std::move(out));
}

Expression reduce_level(Expression e) {
  e = collect(std::move(e));
  std::map<std::string, Expression> classes;
  Expression out;
  for (auto& t : e) {
    if (t.x)
      classes[pattern_key(t)].push_back(std::move(t));
    else
      out.push_back(std::move(t));
  }
  for (auto& [key, cls] : classes) {
    int kmax = 0;
    for (const auto& t : cls) kmax = std::max(kmax, t.x->k);
    Expression raised;
    for (const auto& t : cls)
      for (auto& r : raise_to(t, kmax)) raised.push_back(std::move(r));
    for (auto& t : lower_class(collect(std::move(raised)))) out.push_back(std::move(t));
  }
  return collect(std::move(out));
}

bool equivalent_mod_level(const Expression& a, const Expression& b) {
  return level_up(difference(a, b)).empty();
}

Expression commutator_rewrites(Expression e, const Rational& dim) {
  for (auto& t : e) t.coeff = DimPoly(t.coeff.eval(dim));
  e = collect(std::move(e));
  std::map<std::string, std::size_t> by_sig;
  for (std::size_t i = 0; i < e.size(); ++i) by_sig[signature(e[i])] = i;
  std::vector<bool> consumed(e.size(), false);
  Expression emitted;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (consumed[i]) continue;
    const Term& t = e[i];
    if (!t.x || t.x->k < 2) continue;
    const int k = t.x->k;
    const Rational alpha = dim / 2 + Rational(t.x->alpha_off);
    bool done = false;
    // slot 0 would need a left-multiplication field; no printed identity is
    // applied there.
    for (std::size_t sl = 1; sl < t.args.size() && !done; ++sl) {
      const auto& slot = t.args[sl];
      if (slot.size() < 2 || !is_bare_u(slot.back())) continue;
      std::vector<NCAtom> body(slot.begin(), slot.end() - 1);
      Term partner = t;
      partner.args[sl].clear();
      partner.args[sl].push_back(atom_u());
      partner.args[sl].insert(partner.args[sl].end(), body.begin(), body.end());
      const std::string psig = canonical_signature(partner);
      if (psig == signature(t)) continue; // the commutator is trivially zero
      auto it = by_sig.find(psig);
      if (it == by_sig.end() || consumed[it->second]) continue;
      const Term& p = e[it->second];
      if (p.coeff + t.coeff != DimPoly()) continue; // need exact [body, u]
      if (alpha == 1) continue;                     // pole of the rewrite: leave intact
      const Rational f = t.coeff.coeff(0) / (Rational(1) - alpha);
      const bool tail = sl + 1 == t.args.size();
      Term a = t, b = t;
      a.coeff = DimPoly(f);
      b.coeff = DimPoly(-f);
      a.x = b.x = XDescriptor{t.x->alpha_off - 1, k - 1};
      // merged into the preceding slot: .. b_{l-1} body ..
      a.args[sl - 1].insert(a.args[sl - 1].end(), body.begin(), body.end());
      a.args.erase(a.args.begin() + static_cast<std::ptrdiff_t>(sl));
      if (tail) {
        // right factor: X[..] body
        b.qfactors.insert(b.qfactors.begin(), body.begin(), body.end());
      } else {
        // merged into the following slot: .. body b_{l+1} ..
        b.args[sl + 1].insert(b.args[sl + 1].begin(), body.begin(), body.end());
      }
      b.args.erase(b.args.begin() + static_cast<std::ptrdiff_t>(sl));
      emitted.push_back(std::move(a));
      emitted.push_back(std::move(b));
      consumed[i] = consumed[it->second] = true;
      done = true;
    }
  }
  Expression out;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (!consumed[i]) out.push_back(e[i]);
  for (auto& t : emitted) out.push_back(std::move(t));
  return collect(std::move(out));
}

} // namespace heatcas
