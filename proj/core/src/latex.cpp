#include "heatcas/latex.hpp"

#include <map>
#include <sstream>

namespace heatcas {

namespace {

struct IndexNames {
  std::map<int, int> seq; // index id -> 1-based display number

  std::string operator()(const Index& i) {
    auto [it, fresh] = seq.try_emplace(i.id, static_cast<int>(seq.size()) + 1);
    (void)fresh;
    return "\\nu_{" + std::to_string(it->second) + "}";
  }
};

std::string frac(const Rational& r) {
  const bool neg = r < 0;
  const Rational a = neg ? Rational(-r) : r;
  std::string body;
  if (denominator(a) == 1)
    body = numerator(a).str();
  else
    body = "\\tfrac{" + numerator(a).str() + "}{" + denominator(a).str() + "}";
  return (neg ? "-" : "") + body;
}

// "+\tfrac{1}{6}(d - 2)" style: the rational content is pulled out in front
// and the remaining integer polynomial is printed in descending powers.
std::string coeff_latex(const DimPoly& p) {
  if (p.is_constant()) {
    const Rational c = p.coeff(0);
    if (c == 1) return "+";
    if (c == -1) return "-";
    const std::string f = frac(c);
    return (f[0] == '-' ? f : "+" + f);
  }
  // content = gcd of numerators / lcm of denominators, signed by the leading
  // coefficient
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& [pow, c] : p.coeffs()) {
    num_gcd = gcd(num_gcd, BigInt(abs(numerator(c))));
    den_lcm = lcm(den_lcm, BigInt(denominator(c)));
  }
  Rational content(num_gcd, den_lcm);
  if (p.coeff(p.degree()) < 0) content = -content;
  std::ostringstream os;
  const std::string f = frac(content);
  os << (f[0] == '-' ? "" : "+") << (f == "1" ? "" : f == "-1" ? "-" : f) << "(";
  bool first = true;
  for (int pow = p.degree(); pow >= 0; --pow) {
    const Rational c = p.coeff(pow) / content;
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    const Rational a = c > 0 ? c : Rational(-c);
    if (a != 1 || pow == 0) os << frac(a);
    if (pow >= 1) os << "d";
    if (pow >= 2) os << "^{" << pow << "}";
  }
  os << ")";
  return os.str();
}

std::string nabla(const std::vector<Index>& deriv, bool hat, IndexNames& names) {
  if (deriv.empty()) return "";
  std::ostringstream os;
  os << (hat ? "\\widehat{\\nabla}" : "\\nabla");
  if (deriv.size() >= 2) os << "^{" << deriv.size() << "}";
  os << "_{";
  for (const auto& i : deriv) os << names(i);
  os << "} ";
  return os.str();
}

std::string atom_latex(const NCAtom& a, IndexNames& names) {
  std::ostringstream os;
  const std::string d = nabla(a.deriv, a.hat, names);
  std::string body;
  switch (a.base) {
    case AtomBase::U: body = "u"; break;
    case AtomBase::Q: body = "q"; break;
    case AtomBase::Nvec: body = "N^{" + names(a.idx[0]) + "}"; break;
    case AtomBase::F:
      body = "F_{" + names(a.idx[0]) + names(a.idx[1]) + "}";
      break;
    case AtomBase::H: body = "H^{" + names(a.idx[0]) + names(a.idx[1]) + "}"; break;
    case AtomBase::L: body = "L^{" + names(a.idx[0]) + "}"; break;
    case AtomBase::Q0: body = "q"; break;
  }
  if (d.empty()) return body;
  return "(" + d + body + ")";
}

std::string scalar_latex(const ScalarFactor& s, IndexNames& names) {
  std::ostringstream os;
  const std::string d = nabla(s.deriv, true, names);
  std::string body;
  auto list = [&](const std::vector<Index>& v) {
    std::string out;
    for (const auto& i : v) out += names(i);
    return out;
  };
  switch (s.sym) {
    case ScalarSym::MetricUp: body = "g^{" + list(s.idx) + "}"; break;
    case ScalarSym::MetricDown: body = "g_{" + list(s.idx) + "}"; break;
    case ScalarSym::Riemann: body = "R_{" + list(s.idx) + "}"; break;
    case ScalarSym::Ricci: body = "\\operatorname{Ric}_{" + list(s.idx) + "}"; break;
    case ScalarSym::ScalarCurv: body = "\\mathfrak{R}"; break;
    case ScalarSym::RiemannSq: body = "\\lvert R \\rvert^{2}"; break;
    case ScalarSym::RicciSq: body = "\\lvert \\operatorname{Ric} \\rvert^{2}"; break;
  }
  if (d.empty()) return body;
  return "(" + d + body + ")";
}

std::string term_latex(const Term& t) {
  IndexNames names;
  std::ostringstream os;
  os << coeff_latex(t.coeff);
  for (const auto& s : t.scalars) os << " \\, " << scalar_latex(s, names);
  if (t.x && t.x->k > 0) {
    os << " \\, X_{";
    if (t.x->alpha_off == t.x->k - 2)
      os << t.x->k;
    else {
      os << "d/2";
      if (t.x->alpha_off > 0) os << "+" << t.x->alpha_off;
      if (t.x->alpha_off < 0) os << t.x->alpha_off;
      os << ",\\," << t.x->k;
    }
    os << "}[ ";
    bool first_slot = true;
    for (const auto& slot : t.args) {
      if (!first_slot) os << " \\otimes ";
      first_slot = false;
      if (slot.empty()) os << "1";
      bool first_atom = true;
      for (const auto& a : slot) {
        if (!first_atom) os << " \\, ";
        first_atom = false;
        os << atom_latex(a, names);
      }
    }
    os << " ]";
  } else if (t.x) {
    // k = 0: the operator degenerates to the power u^{-alpha}
    os << " \\, u^{-d/2";
    if (t.x->alpha_off > 0) os << "-" << t.x->alpha_off;
    if (t.x->alpha_off < 0) os << "+" << -t.x->alpha_off;
    os << "}";
  }
  for (const auto& a : t.qfactors) os << " \\, " << atom_latex(a, names);
  if (!t.qderiv.empty()) {
    os << " \\, " << nabla(t.qderiv, false, names) << "v";
  }
  return os.str();
}

} // namespace

std::string export_latex(const Expression& e) {
  if (e.empty()) return "0\n";
  std::ostringstream os;
  for (const auto& t : e) os << term_latex(t) << "\n";
  return os.str();
}

} // namespace heatcas
