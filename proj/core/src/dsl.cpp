#include "heatcas/dsl.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace heatcas {

namespace {

struct Scanner {
  const std::string& s;
  std::size_t pos = 0;

  explicit Scanner(const std::string& str) : s(str) {}

  void skip_ws() {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '*'))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw std::runtime_error("dsl: expected '" + std::string(1, c) + "' near \"" +
                               s.substr(pos, 24) + "\"");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos]))))
      ++pos;
    return s.substr(start, pos - start);
  }
  long integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw std::runtime_error("dsl: expected integer");
    return std::stol(s.substr(start, pos - start));
  }
};

// Polynomial in d inside parentheses, e.g. "d^2+6d+8" or "d-4".
DimPoly parse_poly(Scanner& sc) {
  DimPoly p;
  int sign = 1;
  if (sc.consume('-')) sign = -1;
  else sc.consume('+');
  for (;;) {
    Rational c = 1;
    bool have_num = false;
    if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
      long num = sc.integer();
      c = num;
      have_num = true;
      if (sc.consume('/')) c /= Rational(sc.integer());
    }
    int pow = 0;
    if (sc.peek() == 'd') {
      ++sc.pos;
      pow = 1;
      if (sc.consume('^')) pow = static_cast<int>(sc.integer());
    } else if (!have_num) {
      throw std::runtime_error("dsl: bad polynomial");
    }
    p += DimPoly::monomial(c * sign, pow);
    if (sc.consume('+')) {
      sign = 1;
    } else if (sc.consume('-')) {
      sign = -1;
    } else {
      break;
    }
  }
  return p;
}

DimPoly parse_coeff(Scanner& sc) {
  DimPoly c(Rational(1));
  int sign = 1;
  if (sc.consume('-')) sign = -1;
  else sc.consume('+');
  if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
    Rational r = sc.integer();
    if (sc.consume('/')) r /= Rational(sc.integer());
    c *= r;
  }
  while (sc.peek() == '(') {
    sc.expect('(');
    c *= parse_poly(sc);
    sc.expect(')');
  }
  c *= Rational(sign);
  return c;
}

struct TermBuilder {
  Term t;
  std::map<std::string, int> names;
  int next_id = 0;

  Index idx(const std::string& name, bool up_var) {
    auto it = names.find(name);
    int id = it == names.end() ? (names[name] = next_id++) : it->second;
    return Index{id, up_var};
  }
};

std::vector<Index> parse_index_list(Scanner& sc, TermBuilder& b, bool default_up) {
  std::vector<Index> out;
  sc.expect('{');
  while (!sc.consume('}')) {
    std::string n = sc.ident();
    if (n.empty()) throw std::runtime_error("dsl: bad index name");
    out.push_back(b.idx(n, default_up));
  }
  return out;
}

// Optional ^{..} or _{..} or {..}; default variance when braces come bare.
std::vector<Index> parse_slots(Scanner& sc, TermBuilder& b, bool default_up) {
  if (sc.consume('^')) return parse_index_list(sc, b, true);
  if (sc.consume('_')) return parse_index_list(sc, b, false);
  if (sc.peek() == '{') return parse_index_list(sc, b, default_up);
  return {};
}

NCAtom parse_atom(Scanner& sc, TermBuilder& b, const std::string& name,
                  std::vector<Index> deriv, bool hat, bool sym) {
  NCAtom a;
  a.hat = hat;
  a.deriv = std::move(deriv);
  a.sym = sym || a.deriv.size() <= 1;
  if (name == "u") a.base = AtomBase::U;
  else if (name == "q") a.base = AtomBase::Q;
  else if (name == "q0") a.base = AtomBase::Q0;
  else if (name == "N") a.base = AtomBase::Nvec;
  else if (name == "F") a.base = AtomBase::F;
  else if (name == "H") a.base = AtomBase::H;
  else if (name == "L") a.base = AtomBase::L;
  else throw std::runtime_error("dsl: unknown atom '" + name + "'");
  const bool up_default = (a.base == AtomBase::Nvec || a.base == AtomBase::H || a.base == AtomBase::L);
  a.idx = parse_slots(sc, b, up_default);
  return a;
}

void parse_items(Scanner& sc, TermBuilder& b, bool inside_slot, std::vector<NCAtom>* slot);

void parse_x(Scanner& sc, TermBuilder& b) {
  sc.expect('{');
  int aoff = static_cast<int>(sc.integer());
  sc.expect(',');
  int k = static_cast<int>(sc.integer());
  sc.expect('}');
  b.t.x = XDescriptor{aoff, k};
  sc.expect('[');
  for (;;) {
    std::vector<NCAtom> slot;
    // "1" denotes the empty product
    if (sc.peek() == '1') {
      ++sc.pos;
    } else {
      parse_items(sc, b, true, &slot);
    }
    b.t.args.push_back(std::move(slot));
    if (sc.consume('|')) continue;
    sc.expect(']');
    break;
  }
  if (static_cast<int>(b.t.args.size()) != k)
    throw std::runtime_error("dsl: X slot count mismatch");
}

void parse_items(Scanner& sc, TermBuilder& b, bool inside_slot, std::vector<NCAtom>* slot) {
  std::vector<Index> pending_deriv;
  bool pending_hat = true;
  bool pending_sym = false;
  bool have_deriv = false;
  for (;;) {
    if (sc.eof()) break;
    char c = sc.peek();
    if (inside_slot && (c == '|' || c == ']')) break;
    std::string name = sc.ident();
    if (name.empty())
      throw std::runtime_error("dsl: unexpected character '" + std::string(1, c) + "'");
    auto take_deriv = [&]() {
      std::vector<Index> d = std::move(pending_deriv);
      pending_deriv.clear();
      have_deriv = false;
      return d;
    };
    if (name == "D" || name == "Dg" || name == "DS") {
      if (have_deriv) throw std::runtime_error("dsl: dangling derivative prefix");
      pending_hat = (name != "Dg");
      pending_sym = (name == "DS");
      pending_deriv = parse_index_list(sc, b, false);
      have_deriv = true;
      continue;
    }
    if (name == "Dv") {
      auto ids = parse_index_list(sc, b, false);
      b.t.qderiv.insert(b.t.qderiv.end(), ids.begin(), ids.end());
      continue;
    }
    if (!inside_slot) {
      if (name == "g") {
        ScalarFactor f;
        if (sc.consume('^')) {
          f.sym = ScalarSym::MetricUp;
          f.idx = parse_index_list(sc, b, true);
        } else if (sc.consume('_')) {
          f.sym = ScalarSym::MetricDown;
          f.idx = parse_index_list(sc, b, false);
        } else {
          throw std::runtime_error("dsl: metric needs ^ or _");
        }
        b.t.scalars.push_back(std::move(f));
        continue;
      }
      if (name == "R" || name == "Ric" || name == "Sc" || name == "RR" || name == "RicRic") {
        ScalarFactor f;
        f.deriv = take_deriv();
        if (name == "R") f.sym = ScalarSym::Riemann;
        else if (name == "Ric") f.sym = ScalarSym::Ricci;
        else if (name == "Sc") f.sym = ScalarSym::ScalarCurv;
        else if (name == "RR") f.sym = ScalarSym::RiemannSq;
        else f.sym = ScalarSym::RicciSq;
        f.idx = parse_slots(sc, b, false);
        b.t.scalars.push_back(std::move(f));
        continue;
      }
      if (name == "G") {
        auto ids = parse_slots(sc, b, false);
        b.t.gslots.insert(b.t.gslots.end(), ids.begin(), ids.end());
        continue;
      }
      if (name == "X") {
        parse_x(sc, b);
        continue;
      }
      // anything else is a right gauge factor atom
      const bool s = pending_sym;
      b.t.qfactors.push_back(parse_atom(sc, b, name, take_deriv(), pending_hat, s));
      pending_sym = false;
      continue;
    }
    const bool s = pending_sym;
    slot->push_back(parse_atom(sc, b, name, take_deriv(), pending_hat, s));
    pending_sym = false;
  }
  if (have_deriv) throw std::runtime_error("dsl: dangling derivative prefix");
}

} // namespace

Term parse_term(const std::string& line) {
  Scanner sc(line);
  TermBuilder b;
  b.t.coeff = parse_coeff(sc);
  parse_items(sc, b, false, nullptr);
  return b.t;
}

Expression parse_expression(const std::string& text) {
  Expression e;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    e.push_back(parse_term(line));
  }
  return e;
}

std::string render_term(const Term& t) {
  std::ostringstream os;
  os << "(" << t.coeff.str() << ")";
  auto idx_name = [](const Index& i) { return "i" + std::to_string(i.id); };
  auto put_list = [&](const std::vector<Index>& v, const char* prefix) {
    os << prefix << "{";
    for (const auto& i : v) os << idx_name(i) << " ";
    os << "}";
  };
  for (const auto& s : t.scalars) {
    os << " ";
    if (!s.deriv.empty()) put_list(s.deriv, "D");
    switch (s.sym) {
      case ScalarSym::MetricUp: os << "g"; put_list(s.idx, "^"); break;
      case ScalarSym::MetricDown: os << "g"; put_list(s.idx, "_"); break;
      case ScalarSym::Riemann: os << "R"; put_list(s.idx, "_"); break;
      case ScalarSym::Ricci: os << "Ric"; put_list(s.idx, "_"); break;
      case ScalarSym::ScalarCurv: os << "Sc"; break;
      case ScalarSym::RiemannSq: os << "RR"; break;
      case ScalarSym::RicciSq: os << "RicRic"; break;
    }
  }
  if (!t.gslots.empty()) {
    os << " ";
    put_list(t.gslots, "G");
  }
  auto put_atom = [&](const NCAtom& a) {
    static const char* names[] = {"u", "q", "N", "F", "H", "L", "q0"};
    if (!a.deriv.empty())
      put_list(a.deriv, !a.hat ? "Dg" : (a.sym && a.deriv.size() >= 2 ? "DS" : "D"));
    os << names[static_cast<int>(a.base)];
    if (!a.idx.empty()) put_list(a.idx, a.idx[0].up ? "^" : "_");
    os << " ";
  };
  if (t.x) {
    os << " X{" << t.x->alpha_off << "," << t.x->k << "}[";
    bool first = true;
    for (const auto& slot : t.args) {
      if (!first) os << "| ";
      first = false;
      if (slot.empty()) os << "1 ";
      for (const auto& a : slot) put_atom(a);
    }
    os << "]";
  }
  for (const auto& a : t.qfactors) {
    os << " ";
    put_atom(a);
  }
  if (!t.qderiv.empty()) {
    os << " Dv";
    put_list(t.qderiv, "");
  }
  return os.str();
}

} // namespace heatcas
