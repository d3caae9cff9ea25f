#include "heatcas/pipeline.hpp"

#include "heatcas/gauge.hpp"
#include "heatcas/nc_tables.hpp"
#include "heatcas/reduction.hpp"
#include "heatcas/tensor_ops.hpp"
#include "heatcas/volterra.hpp"
#include "matfw.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace heatcas {

Expression merged(const HeatResult& h) {
  Expression out;
  for (const auto& [deg, s] : h.sectors)
    for (const auto& t : s) out.push_back(t);
  return collect(std::move(out));
}

Expression apply_assumptions(Expression e, Assumptions a) {
  if (a.u_identity) a.u_parallel = true;
  if (!a.n_zero && !a.u_parallel && !a.u_identity && !a.flat) return e;
  Expression out;
  for (auto& t : e) {
    bool drop = false;
    auto prune = [&](std::vector<NCAtom>& vec) {
      for (auto it = vec.begin(); it != vec.end();) {
        if (a.n_zero && it->base == AtomBase::Nvec) {
          drop = true;
          return;
        }
        if (a.u_parallel && it->base == AtomBase::U && !it->deriv.empty()) {
          drop = true;
          return;
        }
        if (a.u_identity && it->base == AtomBase::U) {
          it = vec.erase(it);
          continue;
        }
        ++it;
      }
    };
    for (auto& slot : t.args) {
      prune(slot);
      if (drop) break;
    }
    if (!drop) prune(t.qfactors);
    if (!drop && a.u_identity && t.x && t.x->k > 0) {
      // With u = 1 the spectral weight is constant, I_{alpha,k}(1,...,1) =
      // 1/k!, and the operator collapses to the plain product of its
      // arguments followed by the right gauge factors.
      Rational fact = 1;
      for (int i = 2; i <= t.x->k; ++i) fact *= i;
      t.coeff *= Rational(1) / fact;
      std::vector<NCAtom> prod;
      for (auto& slot : t.args)
        for (auto& at : slot) prod.push_back(std::move(at));
      for (auto& at : t.qfactors) prod.push_back(std::move(at));
      t.args.clear();
      t.qfactors = std::move(prod);
      t.x = XDescriptor{0, 0};
    }
    if (!drop && a.flat)
      for (const auto& f : t.scalars)
        if (f.sym != ScalarSym::MetricUp && f.sym != ScalarSym::MetricDown) {
          drop = true;
          break;
        }
    if (!drop) out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::map<int, Expression> normalize_sectors(std::map<int, Expression> sectors,
                                            const Assumptions& a) {
  for (auto& [deg, s] : sectors) {
    Expression x = split_hat_derivatives(std::move(s));
    // splitting can recreate shapes the assumptions eliminate
    x = apply_assumptions(std::move(x), a);
    x = tensor_normalize(std::move(x));
    x = bianchi_normalize(std::move(x));
    x = reduce_level(std::move(x));
    s = collect(std::move(x));
  }
  return sectors;
}

} // namespace

HeatResult compute_R(int order, const Assumptions& a) {
  if (order != 0 && order != 2 && order != 4)
    throw std::invalid_argument("compute_R: order must be 0, 2 or 4");
  Expression e = volterra_seeds(order);
  e = propagate(std::move(e));
  assign_descriptors(e);
  e = substitute_normal_coordinates(e);
  e = apply_assumptions(std::move(e), a);
  e = tensor_normalize(std::move(e));

  HeatResult h;
  h.order = order;
  h.sectors = normalize_sectors(assemble_gauge_sectors(std::move(e)), a);
  if (order == 4)
    for (int deg = 0; deg <= 4; ++deg) h.sectors.try_emplace(deg);
  return h;
}

HeatResult specialize(HeatResult h, const Assumptions& a) {
  for (auto& [deg, s] : h.sectors) {
    Expression x = apply_assumptions(std::move(s), a);
    x = tensor_normalize(std::move(x));
    x = reduce_level(std::move(x));
    s = collect(std::move(x));
  }
  return h;
}

Eigen::MatrixXd numeric_evaluate_R(const HeatResult& h, const NumericBackground& bg) {
  const int n = static_cast<int>(bg.u.rows());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [deg, s] : h.sectors) sum += evaluate(s, bg);
  const double pref = std::pow(4.0 * M_PI, -bg.dval / 2.0);
  return matfw::scale(pref, sum);
}

} // namespace heatcas
