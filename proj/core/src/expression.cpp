#include "heatcas/expression.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace heatcas {

Expression collect(Expression e) {
  std::map<std::string, Term> acc;
  for (auto& t : e) {
    if (t.coeff.is_zero()) continue;
    canonicalize(t);
    if (t.coeff.is_zero()) continue;
    const std::string sig = signature(t);
    auto it = acc.find(sig);
    if (it == acc.end()) {
      acc.emplace(sig, std::move(t));
    } else {
      it->second.coeff += t.coeff;
    }
  }
  Expression out;
  out.reserve(acc.size());
  for (auto& [sig, t] : acc)
    if (!t.coeff.is_zero()) out.push_back(std::move(t));
  return out;
}

Expression scaled(Expression e, const DimPoly& f) {
  for (auto& t : e) t.coeff *= f;
  return e;
}

Expression difference(const Expression& a, const Expression& b) {
  Expression e = a;
  for (const auto& t : b) {
    Term u = t;
    u.coeff = -u.coeff;
    e.push_back(std::move(u));
  }
  return collect(std::move(e));
}

void append(Expression& a, const Expression& b) {
  for (const auto& t : b) a.push_back(t);
}

std::string to_string(const Expression& e) {
  std::ostringstream os;
  for (const auto& t : e) os << to_string(t) << "\n";
  return os.str();
}

} // namespace heatcas
