#include "heatcas/term.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <unordered_map>

namespace heatcas {

namespace {

// ---------------------------------------------------------------------------
// Index traversal helpers
// ---------------------------------------------------------------------------

template <class TermT, class Fn>
void for_each_index_impl(TermT& t, Fn&& f) {
  for (auto& s : t.scalars) {
    for (auto& i : s.deriv) f(i);
    for (auto& i : s.idx) f(i);
  }
  for (auto& slot : t.args)
    for (auto& a : slot) {
      for (auto& i : a.deriv) f(i);
      for (auto& i : a.idx) f(i);
      for (auto& i : a.pending) f(i);
    }
  for (auto& a : t.qfactors) {
    for (auto& i : a.deriv) f(i);
    for (auto& i : a.idx) f(i);
  }
  for (auto& i : t.qderiv) f(i);
  for (auto& i : t.gslots) f(i);
}

// ---------------------------------------------------------------------------
// Symmetry images
// ---------------------------------------------------------------------------

struct Image {
  ScalarFactor f;
  int sign;
};

std::vector<Image> factor_images(const ScalarFactor& f) {
  std::vector<Image> out;
  auto add = [&](std::vector<int> perm, int sign) {
    ScalarFactor g = f;
    for (std::size_t i = 0; i < perm.size(); ++i) g.idx[i] = f.idx[perm[i]];
    out.push_back({std::move(g), sign});
  };
  switch (f.sym) {
    case ScalarSym::MetricUp:
    case ScalarSym::MetricDown:
    case ScalarSym::Ricci:
      add({0, 1}, 1);
      add({1, 0}, 1);
      break;
    case ScalarSym::Riemann:
      add({0, 1, 2, 3}, 1);
      add({1, 0, 2, 3}, -1);
      add({0, 1, 3, 2}, -1);
      add({1, 0, 3, 2}, 1);
      add({2, 3, 0, 1}, 1);
      add({3, 2, 0, 1}, -1);
      add({2, 3, 1, 0}, -1);
      add({3, 2, 1, 0}, 1);
      break;
    case ScalarSym::ScalarCurv:
      if (f.deriv.size() == 2) {
        out.push_back({f, 1});
        ScalarFactor g = f;
        std::swap(g.deriv[0], g.deriv[1]);
        out.push_back({std::move(g), 1});
      } else {
        out.push_back({f, 1});
      }
      break;
    default:
      out.push_back({f, 1});
      break;
  }
  return out;
}

std::vector<std::pair<NCAtom, int>> atom_images(const NCAtom& a) {
  std::vector<std::pair<NCAtom, int>> out;
  out.push_back({a, 1});
  if (a.base == AtomBase::F && a.idx.size() == 2) {
    NCAtom b = a;
    std::swap(b.idx[0], b.idx[1]);
    out.push_back({std::move(b), -1});
  }
  if (a.sym && a.deriv.size() >= 2) {
    // a symmetrized derivative word is invariant under permutations
    const std::size_t base_count = out.size();
    std::vector<std::size_t> perm(a.deriv.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    while (std::next_permutation(perm.begin(), perm.end())) {
      for (std::size_t b = 0; b < base_count; ++b) {
        auto im = out[b];
        for (std::size_t i = 0; i < perm.size(); ++i) im.first.deriv[i] = a.deriv[perm[i]];
        out.push_back(std::move(im));
      }
    }
  }
  return out;
}

// Coarse, representation-invariant ordering key for commutative factors.
std::pair<int, int> coarse_key(const ScalarFactor& f) {
  return {static_cast<int>(f.sym), static_cast<int>(f.deriv.size())};
}

// ---------------------------------------------------------------------------
// Canonical labeling search
// ---------------------------------------------------------------------------

struct State {
  std::unordered_map<int, int> label;
  int next = 0;
  std::string out;
  int sign = 1;
  std::vector<char> used;                // per original scalar position
  std::vector<ScalarFactor> placed;      // chosen scalar order, images applied
  std::vector<std::pair<std::size_t, int>> atom_choice; // (flat atom pos, image id)
};

void emit_index(State& st, const Index& i, std::string& frag) {
  auto it = st.label.find(i.id);
  int l;
  if (it == st.label.end()) {
    l = st.next++;
    st.label.emplace(i.id, l);
  } else {
    l = it->second;
  }
  frag += i.up ? 'u' : 'd';
  frag += std::to_string(l);
  frag += ',';
}

void emit_factor(State& st, const ScalarFactor& f, std::string& frag) {
  frag += 'S';
  frag += std::to_string(static_cast<int>(f.sym));
  frag += ':';
  frag += std::to_string(f.deriv.size());
  frag += '[';
  for (const auto& i : f.deriv) emit_index(st, i, frag);
  frag += ';';
  for (const auto& i : f.idx) emit_index(st, i, frag);
  frag += ']';
}

void emit_atom(State& st, const NCAtom& a, std::string& frag) {
  frag += 'A';
  frag += std::to_string(static_cast<int>(a.base));
  frag += a.hat ? 'h' : 'g';
  frag += a.sym ? 's' : 'w';
  frag += '[';
  for (const auto& i : a.deriv) emit_index(st, i, frag);
  frag += ';';
  for (const auto& i : a.idx) emit_index(st, i, frag);
  frag += ';';
  for (const auto& i : a.pending) emit_index(st, i, frag);
  frag += ']';
}

constexpr std::size_t kStateCap = 40000;

// Advances every live state through one scalar placement, keeping only the
// states that realize the lexicographically smallest fragment.
void scalar_step(const Term& t, std::vector<State>& states) {
  std::vector<State> next_states;
  std::string best;
  bool have_best = false;
  for (const auto& st : states) {
    // admissible scalars: unused ones with the minimal coarse key
    std::pair<int, int> min_key{1 << 30, 0};
    for (std::size_t i = 0; i < t.scalars.size(); ++i)
      if (!st.used[i]) min_key = std::min(min_key, coarse_key(t.scalars[i]));
    for (std::size_t i = 0; i < t.scalars.size(); ++i) {
      if (st.used[i] || coarse_key(t.scalars[i]) != min_key) continue;
      for (const auto& im : factor_images(t.scalars[i])) {
        State cand = st;
        std::string frag;
        emit_factor(cand, im.f, frag);
        cand.out += frag;
        cand.sign *= im.sign;
        cand.used[i] = 1;
        cand.placed.push_back(im.f);
        if (!have_best || cand.out < best) {
          best = cand.out;
          have_best = true;
          next_states.clear();
          next_states.push_back(std::move(cand));
        } else if (cand.out == best) {
          next_states.push_back(std::move(cand));
        }
      }
    }
  }
  // Deduplicate states that agree on everything that can still matter.
  std::sort(next_states.begin(), next_states.end(), [](const State& a, const State& b) {
    if (a.sign != b.sign) return a.sign < b.sign;
    return a.next < b.next;
  });
  std::vector<State> dedup;
  for (auto& st : next_states) {
    bool dup = false;
    for (const auto& prev : dedup)
      if (prev.sign == st.sign && prev.label == st.label && prev.used == st.used) {
        dup = true;
        break;
      }
    if (!dup) dedup.push_back(std::move(st));
    if (dedup.size() >= kStateCap) break;
  }
  states = std::move(dedup);
}

// Processes one atom (with possible antisymmetry images) on all live states.
void atom_step(const NCAtom& a, std::size_t flat_pos, std::vector<State>& states) {
  std::vector<State> next_states;
  std::string best;
  bool have_best = false;
  for (const auto& st : states) {
    auto images = atom_images(a);
    for (std::size_t im = 0; im < images.size(); ++im) {
      State cand = st;
      std::string frag;
      emit_atom(cand, images[im].first, frag);
      cand.out += frag;
      cand.sign *= images[im].second;
      cand.atom_choice.push_back({flat_pos, static_cast<int>(im)});
      if (!have_best || cand.out < best) {
        best = cand.out;
        have_best = true;
        next_states.clear();
        next_states.push_back(std::move(cand));
      } else if (cand.out == best) {
        next_states.push_back(std::move(cand));
      }
    }
  }
  states = std::move(next_states);
  if (states.size() > kStateCap) states.resize(kStateCap);
}

} // namespace

void for_each_index(Term& t, const std::function<void(Index&)>& f) {
  for_each_index_impl(t, f);
}

void for_each_index(const Term& t, const std::function<void(const Index&)>& f) {
  for_each_index_impl(t, f);
}

void rename_indices(Term& t, const std::function<int(int)>& f) {
  for_each_index(t, [&](Index& i) { i.id = f(i.id); });
}

int index_label_end(const Term& t) {
  int m = 0;
  for_each_index(t, [&](const Index& i) { m = std::max(m, i.id + 1); });
  return m;
}

void canonicalize(Term& t) {
  if (t.coeff.is_zero()) {
    t.scalars.clear();
    t.gslots.clear();
    t.args.clear();
    t.qfactors.clear();
    t.qderiv.clear();
    t.x.reset();
    return;
  }

  // the derivative flavor of an underived atom carries no information, and a
  // word of length <= 1 is trivially symmetric
  for (auto& slot : t.args)
    for (auto& a : slot) {
      if (a.deriv.empty()) a.hat = true;
      if (a.deriv.size() <= 1) a.sym = true;
    }
  for (auto& a : t.qfactors) {
    if (a.deriv.empty()) a.hat = true;
    if (a.deriv.size() <= 1) a.sym = true;
  }

  std::vector<State> states(1);
  states[0].used.assign(t.scalars.size(), 0);

  // Structural prefix: descriptor and shape, so different shapes never merge.
  {
    std::string head = "T";
    if (t.x) head += "X" + std::to_string(t.x->alpha_off) + "." + std::to_string(t.x->k);
    head += "|";
    states[0].out = head;
  }

  for (std::size_t step = 0; step < t.scalars.size(); ++step) scalar_step(t, states);

  // Argument slots, in order.
  std::size_t flat = 0;
  for (const auto& slot : t.args) {
    for (auto& st : states) st.out += "/";
    for (const auto& a : slot) atom_step(a, flat++, states);
  }
  for (auto& st : states) st.out += "|Q";
  for (const auto& a : t.qfactors) atom_step(a, flat++, states);
  for (auto& st : states) {
    st.out += "|D";
    std::string frag;
    for (const auto& i : t.qderiv) emit_index(st, i, frag);
    st.out += frag;
  }

  // Moment indices: all labeled by now (each pairs with a scalar or atom
  // index); order is irrelevant so we sort by canonical label.
  for (auto& st : states) {
    std::vector<int> labels;
    for (const auto& i : t.gslots) {
      auto it = st.label.find(i.id);
      int l = it == st.label.end() ? st.next++ : it->second;
      if (it == st.label.end()) st.label.emplace(i.id, l);
      labels.push_back(l);
    }
    std::sort(labels.begin(), labels.end());
    st.out += "|G";
    for (int l : labels) st.out += std::to_string(l) + ",";
  }

  // Pick the minimal full serialization; opposite signs on the same minimal
  // string mean the term vanishes identically.
  const State* best = nullptr;
  bool zero = false;
  for (const auto& st : states) {
    if (!best || st.out < best->out) {
      best = &st;
      zero = false;
    } else if (st.out == best->out && st.sign != best->sign) {
      zero = true;
    }
  }
  assert(best);
  if (zero) {
    t.coeff = DimPoly();
    t.scalars.clear();
    t.gslots.clear();
    t.args.clear();
    t.qfactors.clear();
    t.qderiv.clear();
    t.x.reset();
    return;
  }

  Term r;
  r.coeff = t.coeff * Rational(best->sign);
  r.x = t.x;
  r.scalars = best->placed;
  r.args = t.args;
  r.qfactors = t.qfactors;
  r.qderiv = t.qderiv;
  r.gslots = t.gslots;
  // Apply the chosen atom images.
  {
    std::size_t pos = 0;
    auto apply = [&](NCAtom& a) {
      for (const auto& [p, im] : best->atom_choice)
        if (p == pos) {
          a = atom_images(a)[im].first;
          break;
        }
      ++pos;
    };
    for (auto& slot : r.args)
      for (auto& a : slot) apply(a);
    for (auto& a : r.qfactors) apply(a);
  }
  // Relabel with the winning map.
  const auto& map = best->label;
  rename_indices(r, [&](int id) {
    auto it = map.find(id);
    assert(it != map.end());
    return it->second;
  });
  std::sort(r.gslots.begin(), r.gslots.end(),
            [](const Index& a, const Index& b) { return a.id < b.id; });
  t = std::move(r);
}

std::string signature(const Term& t) {
  std::ostringstream os;
  os << "T";
  if (t.x) os << "X" << t.x->alpha_off << "." << t.x->k;
  os << "|";
  auto put_idx = [&](const Index& i) { os << (i.up ? 'u' : 'd') << i.id << ','; };
  for (const auto& s : t.scalars) {
    os << 'S' << static_cast<int>(s.sym) << ':' << s.deriv.size() << '[';
    for (const auto& i : s.deriv) put_idx(i);
    os << ';';
    for (const auto& i : s.idx) put_idx(i);
    os << ']';
  }
  for (const auto& slot : t.args) {
    os << '/';
    for (const auto& a : slot) {
      os << 'A' << static_cast<int>(a.base) << (a.hat ? 'h' : 'g') << '[';
      for (const auto& i : a.deriv) put_idx(i);
      os << ';';
      for (const auto& i : a.idx) put_idx(i);
      os << ';';
      for (const auto& i : a.pending) put_idx(i);
      os << ']';
    }
  }
  os << "|Q";
  for (const auto& a : t.qfactors) {
    os << 'A' << static_cast<int>(a.base) << (a.hat ? 'h' : 'g') << '[';
    for (const auto& i : a.deriv) put_idx(i);
    os << ';';
    for (const auto& i : a.idx) put_idx(i);
    os << ']';
  }
  os << "|D";
  for (const auto& i : t.qderiv) put_idx(i);
  os << "|G";
  for (const auto& i : t.gslots) os << i.id << ',';
  return os.str();
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  os << "(" << t.coeff.str() << ") ";
  auto idx_str = [](const std::vector<Index>& v) {
    std::string s;
    for (const auto& i : v) s += (i.up ? "^" : "_") + std::to_string(i.id);
    return s;
  };
  static const char* sym_names[] = {"g^", "g_", "R", "Ric", "Sc", "RR", "RicRic"};
  for (const auto& s : t.scalars) {
    if (!s.deriv.empty()) os << "D" << idx_str(s.deriv) << ".";
    os << sym_names[static_cast<int>(s.sym)];
    os << idx_str(s.idx) << " ";
  }
  if (!t.gslots.empty()) os << "G" << idx_str(t.gslots) << " ";
  static const char* base_names[] = {"u", "q", "N", "F", "H", "L", "q0"};
  auto atom_str = [&](const NCAtom& a) {
    std::string s;
    if (!a.deriv.empty()) s += std::string(a.hat ? "Dh" : "Dg") + idx_str(a.deriv) + ".";
    s += base_names[static_cast<int>(a.base)];
    s += idx_str(a.idx);
    if (!a.pending.empty()) s += "{nab" + idx_str(a.pending) + "}";
    return s;
  };
  if (t.x) os << "X(" << t.x->alpha_off << "," << t.x->k << ")";
  os << "[";
  bool first_slot = true;
  for (const auto& slot : t.args) {
    if (!first_slot) os << " (x) ";
    first_slot = false;
    if (slot.empty()) os << "1";
    for (const auto& a : slot) os << atom_str(a) << " ";
  }
  os << "]";
  for (const auto& a : t.qfactors) os << " " << atom_str(a);
  if (!t.qderiv.empty()) os << " Dv" << idx_str(t.qderiv);
  return os.str();
}

} // namespace heatcas
