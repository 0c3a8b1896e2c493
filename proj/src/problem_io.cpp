#include "qvi/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "qvi/errors.hpp"

namespace qvi {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::size_t dim_of(const json& doc) {
  if (!doc.contains("dim")) fail("dim", "missing");
  const json& d = doc.at("dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) fail("dim", "expected a positive integer");
  return d.get<std::size_t>();
}

Matrix matrix_at(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) fail(where, "expected " + std::to_string(n) + " rows");
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != n) fail(where, "row " + std::to_string(r + 1) + " must have " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number_at(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

Vector vector_at(const json& j, std::size_t n, const std::string& where) {
  if (j.is_number()) return Vector::Constant(static_cast<Eigen::Index>(n), j.get<double>());
  if (!j.is_array() || j.size() != n) fail(where, "expected a number or " + std::to_string(n) + " numbers");
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = number_at(j[i], where);
  return v;
}

std::vector<expr::Expression> expressions_at(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) fail(where, "expected " + std::to_string(n) + " expression strings");
  std::vector<expr::Expression> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_string()) fail(at, "expected an expression string");
    try {
      out.push_back(expr::parse(j[i].get<std::string>(), n));
    } catch (const ParseError& e) {
      fail(at, e.what());
    }
  }
  return out;
}

VectorField field_at(const json& j, std::size_t n, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return VectorField::zero(n);
    if (j.get<std::string>() == "identity") return VectorField::identity(n);
    fail(where, "unknown field shorthand '" + j.get<std::string>() + "'");
  }
  if (j.is_array()) return VectorField::from_components(expressions_at(j, n, where));
  if (!j.is_object()) fail(where, "expected \"zero\", a list of expressions, or an object");
  VectorField field = VectorField::zero(n);
  if (j.contains("matrix")) {
    std::vector<expr::Expression> rem;
    if (j.contains("remainder")) rem = expressions_at(j.at("remainder"), n, where + ".remainder");
    field = VectorField::split(matrix_at(j.at("matrix"), n, where + ".matrix"), std::move(rem));
  } else if (j.contains("components")) {
    field = VectorField::from_components(expressions_at(j.at("components"), n, where + ".components"));
  } else {
    fail(where, "object form needs \"matrix\" or \"components\"");
  }
  if (j.contains("lipschitz")) {
    try {
      field = field.with_declared_lipschitz(number_at(j.at("lipschitz"), where + ".lipschitz"));
    } catch (const ContractError& e) {
      fail(where + ".lipschitz", e.what());
    }
  }
  return field;
}

InverseSpec inverse_at(const json* j, const VectorField& v, const std::string& where) {
  std::string strategy = "linear";
  if (j != nullptr) {
    if (!j->is_object() || !j->contains("strategy") || !j->at("strategy").is_string()) {
      fail(where, "expected an object with a \"strategy\" string");
    }
    strategy = j->at("strategy").get<std::string>();
  } else if (!v.is_linear()) {
    fail(where, "missing; a nonlinear displacement needs an explicit inversion strategy");
  }
  InverseSpec spec = [&]() -> InverseSpec {
    if (strategy == "linear") {
      if (!v.is_linear()) fail(where, "strategy \"linear\" needs a purely linear displacement");
      return InverseSpec::linear_exact(v.linear_part());
    }
    if (strategy == "picard") {
      if (!j->contains("l")) fail(where, "picard needs \"l\"");
      return InverseSpec::picard(v, number_at(j->at("l"), where + ".l"));
    }
    if (strategy == "semilinear") {
      std::optional<double> lg;
      if (j->contains("lipschitz_g")) lg = number_at(j->at("lipschitz_g"), where + ".lipschitz_g");
      return InverseSpec::semilinear(v, lg);
    }
    if (strategy == "bracket") {
      if (!j->contains("lower") || !j->contains("upper")) fail(where, "bracket needs \"lower\" and \"upper\"");
      return InverseSpec::scalar_bracket(v, number_at(j->at("lower"), where + ".lower"),
                                         number_at(j->at("upper"), where + ".upper"));
    }
    fail(where, "unknown strategy '" + strategy + "'");
  }();
  if (j != nullptr && (j->contains("inner_tol") || j->contains("max_inner"))) {
    const double tol = j->contains("inner_tol") ? number_at(j->at("inner_tol"), where + ".inner_tol") : spec.inner_tol();
    std::size_t cap = spec.max_inner();
    if (j->contains("max_inner")) {
      if (!j->at("max_inner").is_number_integer()) fail(where + ".max_inner", "expected an integer");
      cap = j->at("max_inner").get<std::size_t>();
    }
    spec = spec.with_tolerances(tol, cap);
  }
  return spec;
}

ConvexSet set_at(const json& j, std::size_t n) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) fail("set", "expected an object with a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  if (type == "whole") return ConvexSet::whole_space(n);
  if (type == "orthant") return ConvexSet::nonnegative_orthant(n);
  if (type == "box") {
    if (!j.contains("lower") || !j.contains("upper")) fail("set", "box needs \"lower\" and \"upper\"");
    return ConvexSet::box(vector_at(j.at("lower"), n, "set.lower"), vector_at(j.at("upper"), n, "set.upper"));
  }
  fail("set.type", "unknown set type '" + type + "'");
}

ProblemConstants constants_at(const json& j) {
  if (!j.is_object()) fail("constants", "expected an object");
  ProblemConstants c;
  for (const auto& [key, value] : j.items()) {
    const double x = number_at(value, "constants." + key);
    if (key == "L") c.L = x;
    else if (key == "l") c.l = x;
    else if (key == "l_tilde") c.l_tilde = x;
    else if (key == "gamma") c.gamma = x;
    else if (key == "mu") c.mu = x;
    else fail("constants", "unknown constant '" + key + "'");
  }
  return c;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json expressions_json(const std::vector<expr::Expression>& exprs) {
  json out = json::array();
  for (const auto& e : exprs) out.push_back(e.source());
  return out;
}

json field_json(const VectorField& f) {
  json out;
  if (f.is_split()) {
    out["matrix"] = matrix_json(f.linear_part());
    if (!f.expressions().empty()) out["remainder"] = expressions_json(f.expressions());
  } else {
    out["components"] = expressions_json(f.expressions());
  }
  if (f.declared_lipschitz()) out["lipschitz"] = *f.declared_lipschitz();
  return out;
}

json inverse_json(const InverseSpec& spec) {
  json out;
  out["strategy"] = std::string(spec.strategy_name());
  if (const auto* p = std::get_if<InverseSpec::PicardContraction>(&spec.variant())) out["l"] = p->l;
  if (const auto* s = std::get_if<InverseSpec::Semilinear>(&spec.variant())) out["lipschitz_g"] = s->g_lipschitz;
  if (const auto* b = std::get_if<InverseSpec::ScalarBracket>(&spec.variant())) {
    out["lower"] = b->lower;
    out["upper"] = b->upper;
  }
  if (spec.inner_tol() != InverseSpec::kDefaultInnerTol) out["inner_tol"] = spec.inner_tol();
  if (spec.max_inner() != InverseSpec::kDefaultMaxInner) out["max_inner"] = spec.max_inner();
  return out;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json set_json(const ConvexSet& set) {
  json out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          out["type"] = "whole";
        } else if constexpr (std::is_same_v<T, NonnegativeOrthant>) {
          out["type"] = "orthant";
        } else {
          out["type"] = "box";
          out["lower"] = vector_json(s.lower);
          out["upper"] = vector_json(s.upper);
        }
      },
      set.variant());
  return out;
}

std::string name_of(const json& doc) {
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) fail("name", "expected a string");
    return doc.at("name").get<std::string>();
  }
  return "unnamed";
}

}  // namespace

AnyProblem problem_from_json(const json& doc) {
  if (!doc.is_object()) fail("document", "expected a JSON object");
  const std::string kind = doc.contains("kind") ? doc.at("kind").get<std::string>() : std::string("qvi");
  const std::size_t n = dim_of(doc);
  if (!doc.contains("f")) fail("f", "missing");
  VectorField f = field_at(doc.at("f"), n, "f");
  const json* inverse = doc.contains("inverse") ? &doc.at("inverse") : nullptr;

  if (kind == "zero") {
    if (doc.contains("v") && !doc.contains("w")) {
      const VectorField v = field_at(doc.at("v"), n, "v");
      return ZeroProblem(name_of(doc), std::move(f), inverse_at(inverse, v, "inverse"));
    }
    if (!doc.contains("w")) fail("w", "missing");
    const json& wj = doc.at("w");
    if (wj.is_object() && wj.contains("matrix") && !wj.contains("remainder")) {
      try {
        return ZeroProblem::with_matrix(name_of(doc), std::move(f), matrix_at(wj.at("matrix"), n, "w.matrix"));
      } catch (const SingularLinearPart& e) {
        throw SingularLinearPart(std::string("w: ") + e.what());
      }
    }
    const VectorField w = field_at(wj, n, "w");
    const VectorField v = VectorField::identity_minus(w);
    return ZeroProblem(name_of(doc), std::move(f), inverse_at(inverse, v, "inverse"));
  }
  if (kind != "qvi") fail("kind", "expected \"qvi\" or \"zero\"");

  const VectorField v = doc.contains("v") ? field_at(doc.at("v"), n, "v") : VectorField::zero(n);
  if (!doc.contains("set")) fail("set", "missing");
  ConvexSet set = set_at(doc.at("set"), n);
  ProblemConstants constants = doc.contains("constants") ? constants_at(doc.at("constants")) : ProblemConstants{};
  try {
    constants.validate();
  } catch (const ContractError& e) {
    fail("constants", e.what());
  }
  QviProblem p(name_of(doc), std::move(f), inverse_at(inverse, v, "inverse"), std::move(set), constants);
  if (doc.contains("description") && doc.at("description").is_string()) {
    p.set_description(doc.at("description").get<std::string>());
  }
  return p;
}

AnyProblem problem_from_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed problem document: ") + e.what());
  } catch (const json::type_error& e) {
    throw ConfigError(std::string("malformed problem document: ") + e.what());
  }
  try {
    return problem_from_json(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed problem document: ") + e.what());
  }
}

json to_json(const QviProblem& p) {
  json out;
  out["kind"] = "qvi";
  out["name"] = p.name();
  if (!p.description().empty()) out["description"] = p.description();
  out["dim"] = p.dim();
  out["f"] = field_json(p.f());
  out["v"] = field_json(p.v());
  out["inverse"] = inverse_json(p.inverse());
  out["set"] = set_json(p.set());
  json c = json::object();
  const ProblemConstants& k = p.constants();
  if (k.L) c["L"] = *k.L;
  if (k.l) c["l"] = *k.l;
  if (k.l_tilde) c["l_tilde"] = *k.l_tilde;
  if (k.gamma) c["gamma"] = *k.gamma;
  if (k.mu) c["mu"] = *k.mu;
  if (!c.empty()) out["constants"] = std::move(c);
  return out;
}

json to_json(const ZeroProblem& p) {
  json out;
  out["kind"] = "zero";
  out["name"] = p.name();
  out["dim"] = p.dim();
  out["f"] = field_json(p.f());
  if (const auto a = p.w_matrix()) {
    out["w"] = json{{"matrix", matrix_json(*a)}};
  } else {
    out["v"] = field_json(p.w_spec().displacement());
    out["inverse"] = inverse_json(p.w_spec());
  }
  return out;
}

json to_json(const AnyProblem& p) {
  return std::visit([](const auto& q) { return to_json(q); }, p);
}

AnyProblem load_problem(const std::string& ref) {
  constexpr std::string_view kPrefix = "builtin:";
  if (ref.rfind(kPrefix, 0) == 0) return builtin(std::string_view(ref).substr(kPrefix.size()));
  std::ifstream in(ref);
  if (!in) throw ConfigError("cannot open problem file '" + ref + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return problem_from_text(buf.str());
}

AnyProblem builtin(std::string_view name) { return problem_from_text(builtin_text(name)); }

}  // namespace qvi
