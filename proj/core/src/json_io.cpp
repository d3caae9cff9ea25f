#include "heatcas/json_io.hpp"

#include "json.hpp"

#include <sstream>

namespace heatcas {

namespace {

using nlohmann::json;

json idx_to_json(const Index& i) { return json::array({i.id, i.up ? 1 : 0}); }

Index idx_from_json(const json& j) {
  return Index{j.at(0).get<int>(), j.at(1).get<int>() != 0};
}

json idxs_to_json(const std::vector<Index>& v) {
  json out = json::array();
  for (const auto& i : v) out.push_back(idx_to_json(i));
  return out;
}

std::vector<Index> idxs_from_json(const json& j) {
  std::vector<Index> out;
  for (const auto& e : j) out.push_back(idx_from_json(e));
  return out;
}

const char* sym_name(ScalarSym s) {
  switch (s) {
    case ScalarSym::MetricUp: return "metric_up";
    case ScalarSym::MetricDown: return "metric_down";
    case ScalarSym::Riemann: return "riemann";
    case ScalarSym::Ricci: return "ricci";
    case ScalarSym::ScalarCurv: return "scalar_curv";
    case ScalarSym::RiemannSq: return "riemann_sq";
    case ScalarSym::RicciSq: return "ricci_sq";
  }
  throw SchemaError("serialize: unknown scalar symbol");
}

ScalarSym sym_from_name(const std::string& n) {
  if (n == "metric_up") return ScalarSym::MetricUp;
  if (n == "metric_down") return ScalarSym::MetricDown;
  if (n == "riemann") return ScalarSym::Riemann;
  if (n == "ricci") return ScalarSym::Ricci;
  if (n == "scalar_curv") return ScalarSym::ScalarCurv;
  if (n == "riemann_sq") return ScalarSym::RiemannSq;
  if (n == "ricci_sq") return ScalarSym::RicciSq;
  throw SchemaError("parse: unknown scalar symbol '" + n + "'");
}

const char* base_name(AtomBase b) {
  switch (b) {
    case AtomBase::U: return "u";
    case AtomBase::Q: return "q";
    case AtomBase::Nvec: return "n";
    case AtomBase::F: return "f";
    case AtomBase::H: return "h";
    case AtomBase::L: return "l";
    case AtomBase::Q0: return "q0";
  }
  throw SchemaError("serialize: unknown atom base");
}

AtomBase base_from_name(const std::string& n) {
  if (n == "u") return AtomBase::U;
  if (n == "q") return AtomBase::Q;
  if (n == "n") return AtomBase::Nvec;
  if (n == "f") return AtomBase::F;
  if (n == "h") return AtomBase::H;
  if (n == "l") return AtomBase::L;
  if (n == "q0") return AtomBase::Q0;
  throw SchemaError("parse: unknown atom base '" + n + "'");
}

std::string big_str(const boost::multiprecision::cpp_int& v) { return v.str(); }

json coeff_to_json(const DimPoly& p) {
  json poly = json::array();
  for (const auto& [pow, c] : p.coeffs())
    poly.push_back(json::array(
        {pow, big_str(numerator(c)), big_str(denominator(c))}));
  return json{{"poly", poly}};
}

DimPoly coeff_from_json(const json& j) {
  DimPoly out;
  for (const auto& mono : j.at("poly")) {
    const int pow = mono.at(0).get<int>();
    const Rational c(boost::multiprecision::cpp_int(mono.at(1).get<std::string>()),
                     boost::multiprecision::cpp_int(mono.at(2).get<std::string>()));
    out += DimPoly::monomial(c, pow);
  }
  return out;
}

json atom_to_json(const NCAtom& a) {
  if (!a.pending.empty())
    throw SchemaError("serialize: atom with unresolved pending derivatives");
  return json{{"base", base_name(a.base)},
              {"hat", a.hat},
              {"deriv", idxs_to_json(a.deriv)},
              {"idx", idxs_to_json(a.idx)},
              {"sym", a.sym}};
}

NCAtom atom_from_json(const json& j) {
  NCAtom a;
  a.base = base_from_name(j.at("base").get<std::string>());
  a.hat = j.at("hat").get<bool>();
  a.deriv = idxs_from_json(j.at("deriv"));
  a.idx = idxs_from_json(j.at("idx"));
  a.sym = j.at("sym").get<bool>();
  return a;
}

json term_to_json(const Term& t) {
  json scalars = json::array();
  for (const auto& s : t.scalars)
    scalars.push_back(json{{"sym", sym_name(s.sym)},
                           {"deriv", idxs_to_json(s.deriv)},
                           {"idx", idxs_to_json(s.idx)}});
  json args = json::array();
  for (const auto& slot : t.args) {
    json atoms = json::array();
    for (const auto& a : slot) atoms.push_back(atom_to_json(a));
    args.push_back(std::move(atoms));
  }
  json qright = json::array();
  for (const auto& a : t.qfactors) qright.push_back(atom_to_json(a));
  json out{{"coeff", coeff_to_json(t.coeff)},
           {"scalars", std::move(scalars)},
           {"gslots", idxs_to_json(t.gslots)},
           {"args", std::move(args)},
           {"q_right", std::move(qright)},
           {"q_word", idxs_to_json(t.qderiv)}};
  if (t.x) {
    const int p = static_cast<int>(t.gslots.size()) / 2;
    out["x"] = json{{"p", p}, {"k", t.x->k}, {"base_offset", t.x->alpha_off - p}};
  } else {
    out["x"] = nullptr;
  }
  return out;
}

Term term_from_json(const json& j) {
  Term t;
  t.coeff = coeff_from_json(j.at("coeff"));
  for (const auto& s : j.at("scalars")) {
    ScalarFactor f;
    f.sym = sym_from_name(s.at("sym").get<std::string>());
    f.deriv = idxs_from_json(s.at("deriv"));
    f.idx = idxs_from_json(s.at("idx"));
    t.scalars.push_back(std::move(f));
  }
  t.gslots = idxs_from_json(j.at("gslots"));
  for (const auto& slot : j.at("args")) {
    std::vector<NCAtom> atoms;
    for (const auto& a : slot) atoms.push_back(atom_from_json(a));
    t.args.push_back(std::move(atoms));
  }
  for (const auto& a : j.at("q_right")) t.qfactors.push_back(atom_from_json(a));
  t.qderiv = idxs_from_json(j.at("q_word"));
  if (!j.at("x").is_null()) {
    const auto& x = j.at("x");
    XDescriptor d;
    d.k = x.at("k").get<int>();
    d.alpha_off = x.at("p").get<int>() + x.at("base_offset").get<int>();
    t.x = d;
  }
  return t;
}

} // namespace

std::string serialize_document(const Expression& e, const DocumentMeta& meta) {
  json terms = json::array();
  for (const auto& t : e) terms.push_back(term_to_json(t));
  json doc{{"schema_version", kSchemaVersion},
           {"metadata",
            {{"order", meta.order},
             {"assumptions", meta.assumptions},
             {"engine_version", meta.engine_version},
             {"seed", meta.seed}}},
           {"terms", std::move(terms)}};
  return doc.dump(2) + "\n";
}

Expression parse_document(const std::string& text, DocumentMeta* meta) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("parse: invalid JSON: ") + ex.what());
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version > kSchemaVersion)
      throw SchemaError("parse: document schema_version " + std::to_string(version) +
                        " is newer than supported version " +
                        std::to_string(kSchemaVersion));
    if (meta) {
      const auto& m = doc.at("metadata");
      meta->order = m.at("order").get<int>();
      meta->assumptions = m.at("assumptions").get<std::string>();
      meta->engine_version = m.at("engine_version").get<std::string>();
      meta->seed = m.at("seed").get<long>();
    }
    Expression out;
    for (const auto& t : doc.at("terms")) out.push_back(term_from_json(t));
    return out;
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("parse: malformed document: ") + ex.what());
  }
}

} // namespace heatcas
