#include "heatcas/gauge.hpp"

#include "heatcas/reduction.hpp"
#include "heatcas/tensor_ops.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace heatcas {

namespace {

// ---------------------------------------------------------------------------
// Rational group algebra of the symmetric group, acting on derivative words
// from the right: (v . s)[i] = v[s[i]].
// ---------------------------------------------------------------------------

using Perm = std::vector<int>;
using GroupAlg = std::map<Perm, Rational>;

Perm compose(const Perm& a, const Perm& b) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

GroupAlg ga_mul(const GroupAlg& a, const GroupAlg& b) {
  GroupAlg c;
  for (const auto& [s, x] : a)
    for (const auto& [r, y] : b) c[compose(s, r)] += x * y;
  for (auto it = c.begin(); it != c.end();)
    it = (it->second == 0) ? c.erase(it) : std::next(it);
  return c;
}

std::vector<Perm> all_perms(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// The defining word combination of the degree-d gauge structure.
GroupAlg defining_element(int deg) {
  GroupAlg w;
  switch (deg) {
    case 2:
      w[{0, 1}] = 1;
      w[{1, 0}] = -1;
      break;
    case 3:
      w[{0, 1, 2}] = 1;
      w[{0, 2, 1}] = -1;
      w[{2, 1, 0}] = 1;
      w[{1, 2, 0}] = -1;
      break;
    case 4:
      w[{0, 1, 2, 3}] = 1;
      w[{0, 1, 3, 2}] = -1;
      w[{1, 0, 2, 3}] = -1;
      w[{1, 0, 3, 2}] = 1;
      break;
    default:
      throw std::logic_error("defining_element: bad degree");
  }
  return w;
}

// A generalized inverse: w * x * w == w.  Found by an exact linear solve in
// the group algebra; free variables are set to zero.
GroupAlg generalized_inverse(const GroupAlg& w, int deg) {
  const auto perms = all_perms(deg);
  const int n = static_cast<int>(perms.size());
  std::map<Perm, int> pos;
  for (int i = 0; i < n; ++i) pos[perms[i]] = i;

  // rows: coefficient of each group element in w * x * w; rhs: w itself.
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
  for (const auto& [s, x] : w)
    for (int r = 0; r < n; ++r)
      for (const auto& [t, y] : w) m[pos.at(compose(compose(s, perms[r]), t))][r] += x * y;
  for (const auto& [s, x] : w) m[pos.at(s)][n] = x;

  int row = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < n && row < n; ++col) {
    int pr = -1;
    for (int r = row; r < n; ++r)
      if (m[r][col] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[row], m[pr]);
    const Rational inv = m[row][col];
    for (int c = col; c <= n; ++c) m[row][c] /= inv;
    for (int r = 0; r < n; ++r)
      if (r != row && m[r][col] != 0) {
        const Rational f = m[r][col];
        for (int c = col; c <= n; ++c) m[r][c] -= f * m[row][c];
      }
    pivot_col.push_back(col);
    ++row;
  }
  for (int r = row; r < n; ++r)
    if (m[r][n] != 0) throw std::logic_error("generalized_inverse: inconsistent system");

  GroupAlg x;
  for (int r = 0; r < row; ++r)
    if (m[r][n] != 0) x[perms[pivot_col[r]]] = m[r][n];
  if (ga_mul(ga_mul(w, x), w) != w)
    throw std::logic_error("generalized_inverse: verification failed");
  return x;
}

std::vector<Index> permute_word(const std::vector<Index>& v, const Perm& s) {
  std::vector<Index> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[s[i]];
  return out;
}

// Right gauge factor realizing the degree-d structure on the word u.
void emit_structure(Term& t, const std::vector<Index>& u, int deg) {
  switch (deg) {
    case 2:
      t.qfactors.push_back(NCAtom{AtomBase::F, true, {}, {u[0], u[1]}, {}, true});
      break;
    case 3:
      t.qfactors.push_back(NCAtom{AtomBase::F, true, {u[0]}, {u[1], u[2]}, {}, true});
      break;
    case 4:
      t.qfactors.push_back(NCAtom{AtomBase::F, true, {}, {u[0], u[1]}, {}, true});
      t.qfactors.push_back(NCAtom{AtomBase::F, true, {}, {u[2], u[3]}, {}, true});
      break;
    default:
      throw std::logic_error("emit_structure: bad degree");
  }
}

} // namespace

std::map<int, Expression> assemble_gauge_sectors(Expression e) {
  std::map<int, Expression> sectors;
  // symmetric word parts cancel only modulo metric contraction, the cyclic
  // curvature identities, and after raising pattern classes to a common level
  e = level_up(bianchi_normalize(tensor_normalize(std::move(e))));
  for (;;) {
    std::size_t maxdeg = 0;
    for (const auto& t : e) maxdeg = std::max(maxdeg, t.qderiv.size());
    if (maxdeg == 0) {
      sectors[0] = std::move(e);
      return sectors;
    }
    if (maxdeg == 1) {
      Expression bad;
      for (const auto& t : e)
        if (!t.qderiv.empty()) bad.push_back(t);
      throw GaugeAnomaly("assemble_gauge_words: single-derivative frame word survives: " +
                         to_string(bad));
    }
    if (maxdeg > 4)
      throw GaugeAnomaly("assemble_gauge_words: frame word of degree above four");
    const int deg = static_cast<int>(maxdeg);

    Expression sector, rest;
    for (auto& t : e)
      (t.qderiv.size() == maxdeg ? sector : rest).push_back(std::move(t));

    const GroupAlg w = defining_element(deg);
    const GroupAlg wp = generalized_inverse(w, deg);

    // The sector must lie in the image of the defining combination.
    const GroupAlg proj = ga_mul(wp, w);
    Expression image;
    for (const auto& t : sector)
      for (const auto& [s, c] : proj) {
        Term nt = t;
        nt.coeff *= c;
        nt.qderiv = permute_word(t.qderiv, s);
        image.push_back(std::move(nt));
      }
    const Expression res = difference(sector, image);
    if (!res.empty())
      throw GaugeAnomaly("assemble_gauge_words: degree-" + std::to_string(deg) +
                         " sector is not gauge covariant; residual:\n" + to_string(res));

    // Emit the gauge-homogeneous factors.  The frame derivatives compose
    // freely (they act on a constant section), so the defining identities
    // carry no curvature remainder and the lower sectors are untouched.
    for (const auto& t : sector)
      for (const auto& [s, c] : wp) {
        Term base = t;
        base.coeff *= c;
        const std::vector<Index> u = permute_word(t.qderiv, s);
        base.qderiv.clear();
        emit_structure(base, u, deg);
        sectors[deg].push_back(std::move(base));
      }
    sectors[deg] = collect(std::move(sectors[deg]));
    e = level_up(bianchi_normalize(tensor_normalize(std::move(rest))));
  }
}

Expression assemble_gauge_words(Expression e) {
  Expression out;
  for (auto& [deg, s] : assemble_gauge_sectors(std::move(e)))
    for (auto& t : s) out.push_back(std::move(t));
  return collect(std::move(out));
}

// ---------------------------------------------------------------------------
// Symmetrized-derivative normal form
// ---------------------------------------------------------------------------

namespace {

// One additive contribution replacing a single atom occurrence.
struct Piece {
  Rational coeff;
  std::vector<ScalarFactor> scalars;
  std::vector<NCAtom> atoms;
};

// [nabla_b, nabla_c] applied to the section nabla_post X (the atom y carries
// the post word): gauge commutator plus one Riemann term per free index.
std::vector<Piece> commutator_pieces(const Index& b, const Index& c, const NCAtom& y,
                                     IndexGen& gen) {
  std::vector<Piece> out;
  const NCAtom f{AtomBase::F, true, {}, {b, c}, {}, true};
  out.push_back({Rational(1), {}, {f, y}});
  out.push_back({Rational(-1), {}, {y, f}});
  auto riemann_on = [&](bool index_up, const Index& orig, auto&& replace) {
    Piece p{index_up ? Rational(1) : Rational(-1), {}, {y}};
    const Index s = dn(gen.fresh());
    if (index_up) {
      const Index rho = up(gen.fresh());
      p.scalars.push_back(ScalarFactor{ScalarSym::Riemann, {}, {b, c, dn(rho.id), s}});
      p.scalars.push_back(ScalarFactor{ScalarSym::MetricUp, {}, {up(s.id), up(orig.id)}});
      replace(p.atoms[0], rho);
    } else {
      const Index nu = dn(gen.fresh());
      p.scalars.push_back(ScalarFactor{ScalarSym::Riemann, {}, {b, c, orig, s}});
      p.scalars.push_back(ScalarFactor{ScalarSym::MetricUp, {}, {up(s.id), up(nu.id)}});
      replace(p.atoms[0], nu);
    }
    out.push_back(std::move(p));
  };
  for (std::size_t j = 0; j < y.idx.size(); ++j)
    riemann_on(y.idx[j].up, y.idx[j], [j](NCAtom& a, const Index& i) { a.idx[j] = i; });
  for (std::size_t j = 0; j < y.deriv.size(); ++j)
    riemann_on(false, y.deriv[j], [j](NCAtom& a, const Index& i) { a.deriv[j] = i; });
  return out;
}

// Leibniz application of one outer hat derivative to every factor of each
// piece.  All derivative words involved are plain, so prefixing is exact.
std::vector<Piece> apply_nabla(const std::vector<Piece>& pieces, const Index& p) {
  std::vector<Piece> out;
  for (const auto& pc : pieces) {
    for (std::size_t k = 0; k < pc.scalars.size(); ++k) {
      if (pc.scalars[k].sym == ScalarSym::MetricUp ||
          pc.scalars[k].sym == ScalarSym::MetricDown)
        continue; // the metric is covariantly constant
      Piece np = pc;
      np.scalars[k].deriv.insert(np.scalars[k].deriv.begin(), p);
      out.push_back(std::move(np));
    }
    for (std::size_t k = 0; k < pc.atoms.size(); ++k) {
      Piece np = pc;
      auto& a = np.atoms[k];
      a.deriv.insert(a.deriv.begin(), p);
      a.sym = a.deriv.size() <= 1;
      out.push_back(std::move(np));
    }
  }
  return out;
}

// Location of the first atom whose derivative word still needs splitting.
struct Loc {
  bool found = false;
  bool in_qfactors = false;
  std::size_t slot = 0, pos = 0;
};

Loc find_offending(const Term& t) {
  auto bad = [](const NCAtom& a) { return !a.sym && a.deriv.size() >= 2; };
  for (std::size_t s = 0; s < t.args.size(); ++s)
    for (std::size_t p = 0; p < t.args[s].size(); ++p)
      if (bad(t.args[s][p])) return {true, false, s, p};
  for (std::size_t p = 0; p < t.qfactors.size(); ++p)
    if (bad(t.qfactors[p])) return {true, true, 0, p};
  return {};
}

std::vector<NCAtom>& container_of(Term& t, const Loc& l) {
  return l.in_qfactors ? t.qfactors : t.args[l.slot];
}

} // namespace

Expression split_hat_derivatives(Expression e) {
  Expression out;
  std::vector<Term> work(e.begin(), e.end());
  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    if (t.is_zero()) continue;
    const Loc loc = find_offending(t);
    if (!loc.found) {
      out.push_back(std::move(t));
      continue;
    }
    const NCAtom atom = container_of(t, loc)[loc.pos];
    if (!atom.hat)
      throw std::invalid_argument("split_hat_derivatives: plain-flavor derivative word");
    if (!atom.pending.empty())
      throw std::invalid_argument("split_hat_derivatives: unresolved pending derivative");
    const std::vector<Index>& w = atom.deriv;
    const int m = static_cast<int>(w.size());
    Rational fact = 1;
    for (int i = 2; i <= m; ++i) fact *= i;

    // Fully symmetrized head term.
    {
      Term nt = t;
      container_of(nt, loc)[loc.pos].sym = true;
      work.push_back(std::move(nt));
    }

    // (1/m!) sum over permutations of (word - permuted word), each difference
    // telescoped along adjacent transpositions into curvature commutators.
    NCAtom core = atom;
    core.deriv.clear();
    for (const auto& sigma : all_perms(m)) {
      std::vector<int> cur(m);
      std::iota(cur.begin(), cur.end(), 0);
      for (int i = 0; i < m; ++i) {
        int j = i;
        while (cur[j] != sigma[i]) ++j;
        for (int k = j; k > i; --k) {
          // current word before the swap: ... b c ...
          const Index b = w[cur[k - 1]];
          const Index c = w[cur[k]];
          NCAtom y = core;
          for (int q = k + 1; q < m; ++q) y.deriv.push_back(w[cur[q]]);
          y.sym = y.deriv.size() <= 1;
          IndexGen gen(index_label_end(t));
          auto pieces = commutator_pieces(b, c, y, gen);
          for (int q = k - 2; q >= 0; --q) pieces = apply_nabla(pieces, w[cur[q]]);
          for (auto& pc : pieces) {
            Term nt = t;
            nt.coeff *= pc.coeff / fact;
            auto& vec = container_of(nt, loc);
            vec.erase(vec.begin() + static_cast<std::ptrdiff_t>(loc.pos));
            vec.insert(vec.begin() + static_cast<std::ptrdiff_t>(loc.pos),
                       pc.atoms.begin(), pc.atoms.end());
            nt.scalars.insert(nt.scalars.end(), pc.scalars.begin(), pc.scalars.end());
            work.push_back(std::move(nt));
          }
          std::swap(cur[k - 1], cur[k]);
        }
      }
    }
  }
  return bianchi_normalize(std::move(out));
}

} // namespace heatcas
