#pragma once

// Problem files: a single self-describing JSON document declaring the
// ground ring once, then algebras, actions, crossed modules, morphisms and
// a task list.  All matrices are row-major with scalars as strings, so
// reports reproduce bit for bit.  The loader resolves every cross-reference
// and checks the Jacobi and action axioms up front; serialization is
// canonical (sorted keys, reduced scalars).

#include "liexmod/action.hpp"
#include "liexmod/liealg.hpp"
#include "liexmod/xmod.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

using Json = nlohmann::ordered_json;

// structural problems: exit code 2
class ProblemFormatError : public std::runtime_error {
public:
  explicit ProblemFormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// failed mathematical validation: exit code 1
class ProblemCheckError : public std::runtime_error {
public:
  explicit ProblemCheckError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MorphismDecl {
  std::string source, target; // crossed module names
  Matrix mat;
};

struct Task {
  std::string op;
  std::map<std::string, std::string> args; // name -> referenced object or number
};

struct ProblemFile {
  Field ring = Field::rationals();
  std::map<std::string, LieAlgebra> algebras;
  std::map<std::string, Action> actions;
  std::map<std::string, CrossedModule> xmods;
  std::map<std::string, MorphismDecl> morphisms;
  std::vector<Task> tasks;

  const LieAlgebra& algebra(const std::string& name) const {
    auto it = algebras.find(name);
    if (it == algebras.end()) throw ProblemFormatError("unknown algebra '" + name + "'");
    return it->second;
  }
  const Action& action(const std::string& name) const {
    auto it = actions.find(name);
    if (it == actions.end()) throw ProblemFormatError("unknown action '" + name + "'");
    return it->second;
  }
  const CrossedModule& xmod(const std::string& name) const {
    auto it = xmods.find(name);
    if (it == xmods.end()) throw ProblemFormatError("unknown crossed module '" + name + "'");
    return it->second;
  }
  XModMorphism morphism(const std::string& name) const {
    auto it = morphisms.find(name);
    if (it == morphisms.end()) throw ProblemFormatError("unknown morphism '" + name + "'");
    return XModMorphism(xmod(it->second.source), xmod(it->second.target),
                        LinearMap(xmod(it->second.source).top, xmod(it->second.target).top,
                                  it->second.mat));
  }
};

namespace detail {

inline Field parse_ring(const std::string& text) {
  if (text == "Q") return Field::rationals();
  if (text.size() > 1 && text[0] == 'F') {
    try {
      return Field::prime_field(std::stoull(text.substr(1)));
    } catch (const ScalarError& e) {
      throw ProblemFormatError(std::string("ring: ") + e.what());
    } catch (const std::exception&) {
      throw ProblemFormatError("ring: cannot parse modulus in '" + text + "'");
    }
  }
  throw ProblemFormatError("ring must be \"Q\" or \"F<p>\", got '" + text + "'");
}

inline Matrix parse_matrix(const Field& fld, const Json& j, std::size_t rows, std::size_t cols,
                           const std::string& where) {
  if (!j.is_array() || j.size() != rows)
    throw ProblemFormatError(where + ": expected " + std::to_string(rows) + " rows");
  Matrix m(fld, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw ProblemFormatError(where + ": row " + std::to_string(r) + " must have " +
                               std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      try {
        m.at(r, c) = fld.parse(row[c].get<std::string>());
      } catch (const std::exception& e) {
        throw ProblemFormatError(where + ": entry (" + std::to_string(r) + "," +
                                 std::to_string(c) + "): " + e.what());
      }
    }
  }
  return m;
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
    rows.push_back(row);
  }
  return rows;
}

inline LieAlgebra parse_algebra(const Field& fld, const std::string& name, const Json& j) {
  std::string where = "algebras/" + name;
  if (!j.contains("basis") || !j["basis"].is_array())
    throw ProblemFormatError(where + ": missing basis list");
  std::vector<Letter> basis;
  for (const auto& b : j["basis"]) basis.push_back(Letter{b.get<std::string>(), name});
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i + 1; k < basis.size(); ++k)
      if (basis[i].name == basis[k].name)
        throw ProblemFormatError(where + ": duplicate basis name '" + basis[i].name + "'");
  LieAlgebraBuilder builder(name, fld, basis);
  auto index = [&](const std::string& s) -> std::size_t {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].name == s) return i;
    throw ProblemFormatError(where + ": unknown basis element '" + s + "'");
  };
  if (j.contains("brackets")) {
    for (const auto& [key, val] : j["brackets"].items()) {
      auto comma = key.find(',');
      if (comma == std::string::npos)
        throw ProblemFormatError(where + "/brackets: key '" + key + "' must be \"i,j\"");
      std::size_t i = index(key.substr(0, comma));
      std::size_t k = index(key.substr(comma + 1));
      if (i == k)
        throw ProblemFormatError(where + "/brackets/" + key + ": diagonal brackets are zero");
      Vec v = zero_vec(fld, basis.size());
      for (const auto& [bn, coeff] : val.items()) {
        try {
          v[index(bn)] = fld.parse(coeff.get<std::string>());
        } catch (const ScalarError& e) {
          throw ProblemFormatError(where + "/brackets/" + key + ": " + e.what());
        }
      }
      builder.set(i, k, std::move(v));
    }
  }
  LieAlgebra out = builder.build();
  if (auto c = check_jacobi(out); !c.ok)
    throw ProblemCheckError(where + ": fails " + c.family_name() + " at (" +
                            out.letter(c.i).name + "," + out.letter(c.j).name + "," +
                            out.letter(c.k).name + ")");
  return out;
}

} // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ProblemFormatError(std::string("invalid JSON: ") + e.what());
  }
  ProblemFile out;
  if (!j.contains("ring") || !j["ring"].is_string())
    throw ProblemFormatError("missing ring declaration");
  out.ring = detail::parse_ring(j["ring"].get<std::string>());

  if (j.contains("algebras"))
    for (const auto& [name, spec] : j["algebras"].items())
      out.algebras.emplace(name, detail::parse_algebra(out.ring, name, spec));

  if (j.contains("actions"))
    for (const auto& [name, spec] : j["actions"].items()) {
      std::string where = "actions/" + name;
      if (!spec.contains("actor") || !spec.contains("target"))
        throw ProblemFormatError(where + ": needs actor and target");
      const LieAlgebra& actor = out.algebra(spec["actor"].get<std::string>());
      const LieAlgebra& target = out.algebra(spec["target"].get<std::string>());
      std::vector<Matrix> rho(actor.dim(), Matrix(out.ring, target.dim(), target.dim()));
      if (spec.contains("matrices")) {
        for (const auto& [bn, mat] : spec["matrices"].items()) {
          auto idx = actor.index_of(bn);
          if (!idx)
            throw ProblemFormatError(where + ": '" + bn + "' is not a basis element of " +
                                     actor.name());
          rho[*idx] = detail::parse_matrix(out.ring, mat, target.dim(), target.dim(),
                                           where + "/matrices/" + bn);
        }
      }
      Action a(actor, target, std::move(rho));
      if (auto c = check_action(a); !c.ok)
        throw ProblemCheckError(where + ": violates the " + c.axiom_name() + " axiom at (" +
                                std::to_string(c.i) + "," + std::to_string(c.j) + ")");
      out.actions.emplace(name, std::move(a));
    }

  if (j.contains("xmods"))
    for (const auto& [name, spec] : j["xmods"].items()) {
      std::string where = "xmods/" + name;
      for (const char* k : {"top", "base", "boundary", "action"})
        if (!spec.contains(k)) throw ProblemFormatError(where + ": missing '" + k + "'");
      const LieAlgebra& top = out.algebra(spec["top"].get<std::string>());
      const LieAlgebra& base = out.algebra(spec["base"].get<std::string>());
      Matrix bnd = detail::parse_matrix(out.ring, spec["boundary"], base.dim(), top.dim(),
                                        where + "/boundary");
      const Action& act = out.action(spec["action"].get<std::string>());
      if (!(act.actor == base) || !(act.target == top))
        throw ProblemFormatError(where + ": action '" + spec["action"].get<std::string>() +
                                 "' does not act on top by base");
      out.xmods.emplace(name, CrossedModule(top, base, LinearMap(top, base, std::move(bnd)), act));
    }

  if (j.contains("morphisms"))
    for (const auto& [name, spec] : j["morphisms"].items()) {
      std::string where = "morphisms/" + name;
      for (const char* k : {"source", "target", "matrix"})
        if (!spec.contains(k)) throw ProblemFormatError(where + ": missing '" + k + "'");
      const CrossedModule& s = out.xmod(spec["source"].get<std::string>());
      const CrossedModule& t = out.xmod(spec["target"].get<std::string>());
      Matrix mat = detail::parse_matrix(out.ring, spec["matrix"], t.top.dim(), s.top.dim(),
                                        where + "/matrix");
      out.morphisms.emplace(name, MorphismDecl{spec["source"].get<std::string>(),
                                               spec["target"].get<std::string>(), std::move(mat)});
    }

  if (j.contains("tasks")) {
    if (!j["tasks"].is_array()) throw ProblemFormatError("tasks must be a list");
    for (const auto& t : j["tasks"]) {
      if (!t.contains("op")) throw ProblemFormatError("every task needs an 'op'");
      Task task;
      task.op = t["op"].get<std::string>();
      for (const auto& [k, v] : t.items()) {
        if (k == "op") continue;
        task.args[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      out.tasks.push_back(std::move(task));
    }
  }
  return out;
}

// canonical form: sorted object keys, reduced scalars, no redundant entries
inline std::string serialize_problem(const ProblemFile& p) {
  nlohmann::json j; // plain json sorts object keys
  j["ring"] = p.ring.str();
  for (const auto& [name, a] : p.algebras) {
    nlohmann::json spec;
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& l : a.basis()) basis.push_back(l.name);
    spec["basis"] = basis;
    nlohmann::json brackets = nlohmann::json::object();
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t k = i + 1; k < a.dim(); ++k) {
        const Vec& v = a.bracket_basis(i, k);
        if (is_zero_vec(v)) continue;
        nlohmann::json entry = nlohmann::json::object();
        for (std::size_t c = 0; c < a.dim(); ++c)
          if (!v[c].is_zero()) entry[a.letter(c).name] = v[c].str();
        brackets[a.letter(i).name + "," + a.letter(k).name] = entry;
      }
    if (!brackets.empty()) spec["brackets"] = brackets;
    j["algebras"][name] = spec;
  }
  for (const auto& [name, a] : p.actions) {
    nlohmann::json spec;
    spec["actor"] = a.actor.name();
    spec["target"] = a.target.name();
    nlohmann::json mats = nlohmann::json::object();
    for (std::size_t i = 0; i < a.actor.dim(); ++i) {
      if (a.rho[i].is_zero()) continue;
      mats[a.actor.letter(i).name] = nlohmann::json::parse(detail::matrix_json(a.rho[i]).dump());
    }
    if (!mats.empty()) spec["matrices"] = mats;
    j["actions"][name] = spec;
  }
  for (const auto& [name, x] : p.xmods) {
    nlohmann::json spec;
    spec["top"] = x.top.name();
    spec["base"] = x.base.name();
    spec["boundary"] = nlohmann::json::parse(detail::matrix_json(x.boundary.mat).dump());
    for (const auto& [an, act] : p.actions)
      if (act == x.act) spec["action"] = an;
    j["xmods"][name] = spec;
  }
  for (const auto& [name, m] : p.morphisms) {
    nlohmann::json spec;
    spec["source"] = m.source;
    spec["target"] = m.target;
    spec["matrix"] = nlohmann::json::parse(detail::matrix_json(m.mat).dump());
    j["morphisms"][name] = spec;
  }
  if (!p.tasks.empty()) {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : p.tasks) {
      nlohmann::json spec;
      spec["op"] = t.op;
      for (const auto& [k, v] : t.args) spec[k] = v;
      tasks.push_back(spec);
    }
    j["tasks"] = tasks;
  }
  return j.dump(2) + "\n";
}

} // namespace liexmod
