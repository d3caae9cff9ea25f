#include "heatcas/numeric_eval.hpp"

#include "heatcas/spectral.hpp"
#include "heatcas/tensor_ops.hpp"
#include "matfw.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace heatcas {

namespace {

std::vector<int> concrete(const std::vector<Index>& idx, const std::map<int, int>& assign) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (const auto& i : idx) out.push_back(assign.at(i.id));
  return out;
}

Eigen::MatrixXd evaluate_concrete(const Term& t, const NumericBackground& bg,
                                  const std::map<int, int>& assign) {
  const int n = static_cast<int>(bg.u.rows());
  double s = t.coeff.eval(bg.dval);
  for (const auto& f : t.scalars) {
    if (f.sym == ScalarSym::MetricUp || f.sym == ScalarSym::MetricDown) {
      if (!f.deriv.empty())
        throw std::invalid_argument("evaluate: derivative of a metric factor");
      const auto ix = concrete(f.idx, assign);
      s *= (f.sym == ScalarSym::MetricUp) ? bg.metric_up(ix[0], ix[1])
                                          : bg.metric_down(ix[0], ix[1]);
    } else {
      s *= bg.scalar(f, concrete(f.deriv, assign), concrete(f.idx, assign));
    }
    if (s == 0) return Eigen::MatrixXd::Zero(n, n);
  }
  auto slot_value = [&](const std::vector<NCAtom>& slot) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (const auto& a : slot) {
      if (!a.pending.empty())
        throw std::invalid_argument("evaluate: unresolved pending derivative");
      m = matfw::mul(m, bg.atom(a, concrete(a.deriv, assign), concrete(a.idx, assign)));
    }
    return m;
  };
  Eigen::MatrixXd m;
  if (t.x) {
    std::vector<Eigen::MatrixXd> args;
    args.reserve(t.args.size());
    for (const auto& slot : t.args) args.push_back(slot_value(slot));
    m = eval_X(bg.dval / 2 + t.x->alpha_off, t.x->k, bg.u, args);
  } else {
    m = Eigen::MatrixXd::Identity(n, n);
    for (const auto& slot : t.args) m = matfw::mul(m, slot_value(slot));
  }
  for (const auto& a : t.qfactors) {
    if (!a.pending.empty())
      throw std::invalid_argument("evaluate: unresolved pending derivative");
    m = matfw::mul(m, bg.atom(a, concrete(a.deriv, assign), concrete(a.idx, assign)));
  }
  return matfw::scale(s, m);
}

} // namespace

Eigen::MatrixXd evaluate(const Term& t, const NumericBackground& bg) {
  if (!t.qderiv.empty())
    throw std::invalid_argument("evaluate: unresolved derivative word on the gauge frame");
  const int n = static_cast<int>(bg.u.rows());
  if (!t.gslots.empty()) {
    // Trade the leftover Gaussian-moment indices for their metric pairings.
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (const auto& p : expand_gslots(t)) sum += evaluate(p, bg);
    return sum;
  }
  std::vector<int> labels;
  for_each_index(t, [&](const Index& i) {
    for (int l : labels)
      if (l == i.id) return;
    labels.push_back(i.id);
  });
  if (labels.size() > 10)
    throw std::invalid_argument("evaluate: too many abstract indices in one term");
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  std::map<int, int> assign;
  for (int l : labels) assign[l] = 0;
  while (true) {
    sum += evaluate_concrete(t, bg, assign);
    std::size_t pos = 0;
    for (; pos < labels.size(); ++pos) {
      if (++assign[labels[pos]] < bg.dim) break;
      assign[labels[pos]] = 0;
    }
    if (pos == labels.size()) break;
  }
  return sum;
}

Eigen::MatrixXd evaluate(const Expression& e, const NumericBackground& bg) {
  const int n = static_cast<int>(bg.u.rows());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : e) sum += evaluate(t, bg);
  return sum;
}

namespace {

struct FreeState {
  std::uint64_t seed = 0;
  int n = 2;
  std::unordered_map<std::string, Eigen::MatrixXd> mats;
  std::unordered_map<std::string, double> nums;

  std::mt19937_64 rng_for(const std::string& key) const {
    const std::uint64_t h = std::hash<std::string>{}(key);
    return std::mt19937_64(seed ^ (h * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  }

  double num(const std::string& key) {
    auto it = nums.find(key);
    if (it != nums.end()) return it->second;
    auto rng = rng_for(key);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    return nums.emplace(key, dist(rng)).first->second;
  }

  const Eigen::MatrixXd& mat(const std::string& key) {
    auto it = mats.find(key);
    if (it != mats.end()) return it->second;
    auto rng = rng_for(key);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    return mats.emplace(key, std::move(m)).first->second;
  }
};

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (int x : v) os << x << ',';
  return os.str();
}

} // namespace

NumericBackground free_background(std::uint64_t seed, int n, int dim) {
  auto st = std::make_shared<FreeState>();
  st->seed = seed;
  st->n = n;
  std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  NumericBackground bg;
  bg.dim = dim;
  bg.dval = dim;
  {
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = dist(rng);
    bg.metric_down = matfw::gram(0.25, a);
    bg.metric_down += Eigen::MatrixXd::Identity(dim, dim);
    bg.metric_up = bg.metric_down.inverse();
  }
  {
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = dist(rng);
    Eigen::MatrixXd u = matfw::gram(0.25, b);
    // spread the diagonal to keep the spectrum simple and well separated
    for (int i = 0; i < n; ++i) u(i, i) += 1.0 + static_cast<double>(i);
    bg.u = u;
  }
  const Eigen::MatrixXd u_copy = bg.u;

  bg.atom = [st, u_copy](const NCAtom& a, const std::vector<int>& dv,
                         const std::vector<int>& ix) -> Eigen::MatrixXd {
    if (a.base == AtomBase::U && dv.empty() && ix.empty()) return u_copy;
    std::vector<int> dkey = dv;
    if (a.sym) std::sort(dkey.begin(), dkey.end()); // symmetric word: order-free value
    auto key = [&](const std::vector<int>& i) {
      std::ostringstream os;
      os << "a:" << static_cast<int>(a.base) << ':' << a.hat << ":d" << join(dkey)
         << ":i" << join(i);
      return os.str();
    };
    if (a.base == AtomBase::F && ix.size() == 2) {
      // antisymmetric in its own index pair
      auto anti = [&](int p, int b, int c) {
        std::ostringstream os;
        os << "a:" << static_cast<int>(a.base) << ':' << a.hat << ":d";
        if (p >= 0) os << p << ',';
        os << ":i" << b << ',' << c << ',';
        Eigen::MatrixXd m = st->mat(os.str());
        std::ostringstream ot;
        ot << "a:" << static_cast<int>(a.base) << ':' << a.hat << ":d";
        if (p >= 0) ot << p << ',';
        ot << ":i" << c << ',' << b << ',';
        m -= st->mat(ot.str());
        return m;
      };
      if (dv.size() == 1) {
        // once-derived curvature also satisfies the cyclic identity
        Eigen::MatrixXd m = anti(dv[0], ix[0], ix[1]);
        Eigen::MatrixXd cyc = m;
        cyc += anti(ix[0], ix[1], dv[0]);
        cyc += anti(ix[1], dv[0], ix[0]);
        m -= matfw::scale(1.0 / 3.0, cyc);
        return m;
      }
      if (dv.empty()) return anti(-1, ix[0], ix[1]);
      Eigen::MatrixXd m = st->mat(key({ix[0], ix[1]}));
      m -= st->mat(key({ix[1], ix[0]}));
      return m;
    }
    return st->mat(key(ix));
  };

  bg.scalar = [st](const ScalarFactor& f, const std::vector<int>& dv,
                   const std::vector<int>& ix) -> double {
    const std::string dkey = "d" + join(dv);
    auto raw = [&](const std::string& tag, const std::vector<int>& i) {
      return st->num("s:" + tag + ':' + dkey + ":i" + join(i));
    };
    switch (f.sym) {
      case ScalarSym::Ricci:
        return 0.5 * (raw("ric", {ix[0], ix[1]}) + raw("ric", {ix[1], ix[0]}));
      case ScalarSym::Riemann: {
        // impose the pair antisymmetries, the pair-swap symmetry and the
        // cyclic (first Bianchi) identity
        auto b = [&](int a0, int a1, int a2, int a3) { return raw("rie", {a0, a1, a2, a3}); };
        auto s8 = [&](int a0, int a1, int a2, int a3) {
          return (b(a0, a1, a2, a3) - b(a1, a0, a2, a3) - b(a0, a1, a3, a2) +
                  b(a1, a0, a3, a2) + b(a2, a3, a0, a1) - b(a3, a2, a0, a1) -
                  b(a2, a3, a1, a0) + b(a3, a2, a1, a0)) /
                 8.0;
        };
        const int a0 = ix[0], a1 = ix[1], a2 = ix[2], a3 = ix[3];
        const double cyc = s8(a0, a1, a2, a3) + s8(a0, a2, a3, a1) + s8(a0, a3, a1, a2);
        return s8(a0, a1, a2, a3) - cyc / 3.0;
      }
      case ScalarSym::ScalarCurv:
        return raw("sc", {});
      case ScalarSym::RiemannSq:
        return raw("rr", {});
      case ScalarSym::RicciSq:
        return raw("ricric", {});
      default:
        throw std::invalid_argument("free_background: unexpected scalar factor");
    }
  };
  return bg;
}

NumericBackground circle_background(
    const std::function<Eigen::MatrixXd(AtomBase, int)>& value) {
  NumericBackground bg;
  bg.dim = 1;
  bg.dval = 1;
  bg.metric_up = Eigen::MatrixXd::Ones(1, 1);
  bg.metric_down = Eigen::MatrixXd::Ones(1, 1);
  bg.u = value(AtomBase::U, 0);
  const int n = static_cast<int>(bg.u.rows());
  bg.atom = [value, n](const NCAtom& a, const std::vector<int>& dv,
                       const std::vector<int>&) -> Eigen::MatrixXd {
    if (a.base == AtomBase::F) return Eigen::MatrixXd::Zero(n, n);
    if (a.base == AtomBase::U || a.base == AtomBase::Q || a.base == AtomBase::Nvec)
      return value(a.base, static_cast<int>(dv.size()));
    throw std::invalid_argument("circle_background: unexpected atom");
  };
  bg.scalar = [](const ScalarFactor&, const std::vector<int>&,
                 const std::vector<int>&) -> double { return 0.0; }; // flat circle
  return bg;
}

} // namespace heatcas
