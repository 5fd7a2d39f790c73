#pragma once

// Command implementations behind the liexmod tool.  Each command returns
// its full report as a string plus the exit code, so the test suite drives
// them in-process; the binary is a thin argv wrapper.
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed,
// 2 malformed input.

#include "liexmod/action.hpp"
#include "liexmod/copro.hpp"
#include "liexmod/problem.hpp"
#include "liexmod/rewrite.hpp"
#include "liexmod/xmod.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace liexmod {

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

class ReportBuilder {
public:
  explicit ReportBuilder(bool machine) : m_machine(machine) {}

  void kv(const std::string& key, const std::string& value) {
    m_out += m_machine ? key + "=" + value + "\n" : key + ": " + value + "\n";
  }
  void note(const std::string& line) {
    if (!m_machine) m_out += line + "\n";
  }
  void blank() {
    if (!m_machine) m_out += "\n";
  }
  std::string str() const { return m_out; }

private:
  bool m_machine;
  std::string m_out;
};

namespace cli_detail {

inline std::string vec_str(const std::vector<Letter>& letters, const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (v[i].is_zero()) continue;
    Scalar c = v[i];
    std::string s = c.str();
    bool negative = !s.empty() && s[0] == '-';
    if (negative) c = -c;
    out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
    if (!c.is_one()) out += c.str() + "*";
    out += letters[i].name;
  }
  return out.empty() ? "0" : out;
}

inline std::string matrix_str(const Matrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ",[" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? "," : "") + m.at(r, c).str();
    out += "]";
  }
  return out + "]";
}

inline void print_algebra(ReportBuilder& rep, const std::string& prefix, const LieAlgebra& a) {
  std::string basis;
  for (const auto& l : a.basis()) basis += (basis.empty() ? "" : " ") + l.name;
  rep.kv(prefix + ".dim", std::to_string(a.dim()));
  rep.kv(prefix + ".basis", basis);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j) {
      const Vec& v = a.bracket_basis(i, j);
      if (is_zero_vec(v)) continue;
      rep.kv(prefix + ".bracket." + a.letter(i).name + "," + a.letter(j).name,
             vec_str(a.basis(), v));
    }
}

} // namespace cli_detail

inline CommandResult cmd_normalize(const std::string& expr, const std::string& pin,
                                   const Field& fld, bool machine) {
  ReportBuilder rep(machine);
  try {
    LieExpr e = TermParser(expr, fld).parse_expr();
    NormalForm nf = pin.empty() ? normalize(e) : normalize_pinned(e, Letter{pin, "X"});
    rep.kv("normalize.input", expr);
    if (!pin.empty()) rep.kv("normalize.pin", pin);
    rep.kv("normalize.result", to_expr(nf).str());
    rep.kv("normalize.terms", std::to_string(nf.size()));
    return {0, rep.str()};
  } catch (const ParseError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  } catch (const RewriteError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  }
}

inline CommandResult cmd_check(const ProblemFile& p, const std::string& what,
                               const std::vector<std::string>& names, bool machine) {
  ReportBuilder rep(machine);
  rep.kv("check.task", what);
  int code = 0;
  try {
    if (what == "jacobi") {
      // the loader already rejects violations, so listing means passing
      std::vector<std::string> targets = names;
      if (targets.empty())
        for (const auto& [n, a] : p.algebras) targets.push_back(n);
      for (const auto& n : targets) {
        p.algebra(n);
        rep.kv("check." + n, "ok");
      }
    } else if (what == "action") {
      std::vector<std::string> targets = names;
      if (targets.empty())
        for (const auto& [n, a] : p.actions) targets.push_back(n);
      for (const auto& n : targets) {
        p.action(n);
        rep.kv("check." + n, "ok");
      }
    } else if (what == "compatible") {
      if (names.size() != 2)
        throw ProblemFormatError("check compatible needs two action names");
      auto c = check_compatible(p.action(names[0]), p.action(names[1]));
      rep.kv("check.result", c.ok ? "ok" : "fail");
      if (!c.ok) {
        const LieAlgebra& m = p.action(names[0]).actor;
        const LieAlgebra& n = p.action(names[0]).target;
        rep.kv("witness.equation", std::to_string(c.equation));
        rep.kv("witness.m", m.letter(c.m).name);
        rep.kv("witness.n", n.letter(c.n).name);
        rep.kv("witness.third",
               c.equation == 1 ? n.letter(c.third).name : m.letter(c.third).name);
        rep.kv("witness.defect",
               cli_detail::vec_str(c.equation == 1 ? n.basis() : m.basis(), c.defect));
        code = 1;
      }
    } else if (what == "xmod") {
      if (names.size() != 1) throw ProblemFormatError("check xmod needs one name");
      auto c = check_xmod(p.xmod(names[0]));
      rep.kv("check.result", c.ok ? "ok" : "fail");
      if (!c.ok) {
        rep.kv("witness.identity", c.family_name());
        rep.kv("witness.indices", std::to_string(c.i) + "," + std::to_string(c.j));
        code = 1;
      }
    } else {
      throw ProblemFormatError("unknown check task '" + what + "'");
    }
  } catch (const ProblemFormatError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  }
  return {code, rep.str()};
}

inline CommandResult cmd_peiffer(const ProblemFile& p, const std::string& m_name,
                                 const std::string& n_name, const std::string& mn_name,
                                 const std::string& nm_name, std::size_t oracle_class,
                                 std::size_t max_class, bool machine) {
  ReportBuilder rep(machine);
  try {
    const LieAlgebra& m = p.algebra(m_name);
    const LieAlgebra& n = p.algebra(n_name);
    const Action& mn = p.action(mn_name);
    const Action& nm = p.action(nm_name);
    if (!(mn.actor == m) || !(mn.target == n) || !(nm.actor == n) || !(nm.target == m))
      throw ProblemFormatError("actions do not match the algebras M, N");

    PeifferResult pr = peiffer_saturate(m, n, mn, nm);
    rep.kv("peiffer.M", m_name);
    rep.kv("peiffer.N", n_name);
    rep.kv("peiffer.W.dim", std::to_string(pr.W.dim()));
    for (std::size_t r = 0; r < pr.W.dim(); ++r)
      rep.kv("peiffer.W.row." + std::to_string(r),
             cli_detail::vec_str(pr.space.letters, pr.W.basis_row(r)));
    cli_detail::print_algebra(rep, "peiffer.carrier", pr.carrier);
    rep.kv("peiffer.lM", cli_detail::matrix_str(pr.lM.mat));
    rep.kv("peiffer.lN", cli_detail::matrix_str(pr.lN.mat));

    rep.note("carrier dimension " + std::to_string(pr.carrier.dim()) + ", collapse dimension " +
             std::to_string(pr.W.dim()));
    int code = 0;
    if (oracle_class >= 2) {
      OracleReport rc = peiffer_oracle_agreement(m, n, mn, nm, pr, oracle_class,
                                                 std::max(max_class, oracle_class + 1));
      for (const auto& run : rc.runs) {
        std::string profile;
        for (std::size_t d = 1; d < run.profile.size(); ++d)
          profile += (d > 1 ? " " : "") + std::to_string(run.profile[d]);
        rep.kv("oracle.class." + std::to_string(run.cls) + ".dim", std::to_string(run.dim));
        rep.kv("oracle.class." + std::to_string(run.cls) + ".profile", profile);
      }
      rep.kv("oracle.stabilized", rc.stabilized ? "yes" : "no");
      if (rc.stabilized) rep.kv("oracle.at_class", std::to_string(rc.at_class));
      rep.kv("oracle.agreement", rc.stabilized ? (rc.agree ? "ok" : "fail") : "inconclusive");
      if (!rc.stabilized || !rc.agree) code = 1;
      rep.note(rc.detail);
    }
    return {code, rep.str()};
  } catch (const ProblemFormatError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  } catch (const PeifferError& e) {
    rep.kv("error", e.what());
    return {1, rep.str()};
  }
}

inline CommandResult cmd_xmod_coproduct(const ProblemFile& p, const std::string& xm_name,
                                        const std::string& xn_name, const std::string& xz_name,
                                        const std::string& zm_name, const std::string& zn_name,
                                        bool machine) {
  ReportBuilder rep(machine);
  try {
    const CrossedModule& xm = p.xmod(xm_name);
    const CrossedModule& xn = p.xmod(xn_name);
    CopairResult co = copair_xmod(xm, xn);
    rep.kv("coproduct.XM", xm_name);
    rep.kv("coproduct.XN", xn_name);
    cli_detail::print_algebra(rep, "coproduct.carrier", co.xmod.top);
    rep.kv("coproduct.boundary", cli_detail::matrix_str(co.xmod.boundary.mat));
    rep.kv("coproduct.xmod", check_xmod(co.xmod).ok ? "ok" : "fail");
    rep.kv("coproduct.lM", cli_detail::matrix_str(co.construction.peiffer.lM.mat));
    rep.kv("coproduct.lN", cli_detail::matrix_str(co.construction.peiffer.lN.mat));

    if (!xz_name.empty()) {
      if (zm_name.empty() || zn_name.empty())
        throw ProblemFormatError("a mediator target needs morphisms zM and zN");
      MediatorResult med =
          xmod_coproduct_mediator(co, p.xmod(xz_name), p.morphism(zm_name), p.morphism(zn_name));
      rep.kv("mediator.matrix", cli_detail::matrix_str(med.mediator.mat));
      rep.kv("mediator.triangles", "ok");
      rep.kv("mediator.unique_by_spanning", med.unique_by_spanning ? "yes" : "no");
    }
    return {0, rep.str()};
  } catch (const ProblemFormatError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  } catch (const XmodError& e) {
    rep.kv("error", e.what());
    return {1, rep.str()};
  } catch (const PeifferError& e) {
    rep.kv("error", e.what());
    return {1, rep.str()};
  }
}

inline CommandResult cmd_roundtrip(const ProblemFile& p, const std::string& m_name,
                                   const std::string& n_name, const std::string& mn_name,
                                   const std::string& nm_name, bool machine) {
  ReportBuilder rep(machine);
  try {
    const LieAlgebra& m = p.algebra(m_name);
    const LieAlgebra& n = p.algebra(n_name);
    RoundtripReport rt = theorem_roundtrip(m, n, p.action(mn_name), p.action(nm_name));
    rep.kv("roundtrip.compatible", rt.compat.ok ? "yes" : "no");
    if (!rt.compat.ok) {
      rep.kv("roundtrip.compat_witness.equation", std::to_string(rt.compat.equation));
      rep.kv("roundtrip.compat_witness.triple",
             m.letter(rt.compat.m).name + "," + n.letter(rt.compat.n).name + "," +
                 (rt.compat.equation == 1 ? n.letter(rt.compat.third).name
                                          : m.letter(rt.compat.third).name));
    }
    rep.kv("roundtrip.construction", rt.construction_ok ? "ok" : "fail");
    for (std::size_t i = 0; i < rt.construction.failures.size(); ++i)
      rep.kv("roundtrip.failure." + std::to_string(i), rt.construction.failures[i]);
    rep.kv("roundtrip.coherent", rt.coherent() ? "yes" : "no");
    rep.note(rt.compat.ok
                 ? "compatible, and the Peiffer crossed modules recover both actions"
                 : "incompatible, and the constructive route fails as the theorem predicts");
    return {rt.coherent() ? (rt.compat.ok ? 0 : 1) : 1, rep.str()};
  } catch (const ProblemFormatError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  } catch (const PeifferError& e) {
    rep.kv("error", e.what());
    return {1, rep.str()};
  }
}

inline CommandResult cmd_coequalizer(const ProblemFile& p, const std::string& m_name,
                                     const std::string& n_name, const std::string& mn_name,
                                     const std::string& nm_name, std::size_t depth,
                                     bool machine) {
  ReportBuilder rep(machine);
  try {
    auto c = check_coequalizer_property(p.algebra(m_name), p.algebra(n_name), p.action(mn_name),
                                        p.action(nm_name), depth);
    rep.kv("coequalizer.depth", std::to_string(depth));
    rep.kv("coequalizer.result", c.ok ? "ok" : "fail");
    if (!c.ok) {
      rep.kv("coequalizer.side", c.side);
      rep.kv("coequalizer.word", c.word);
    }
    return {c.ok ? 0 : 1, rep.str()};
  } catch (const ProblemFormatError& e) {
    rep.kv("error", e.what());
    return {2, rep.str()};
  }
}

// dispatch one task from a problem file's task list
inline CommandResult run_task(const ProblemFile& p, const Task& t, std::size_t max_class,
                              bool machine) {
  auto arg = [&](const std::string& key, const std::string& fallback = "") {
    auto it = t.args.find(key);
    return it == t.args.end() ? fallback : it->second;
  };
  auto num = [&](const std::string& key, std::size_t fallback) -> std::size_t {
    auto it = t.args.find(key);
    return it == t.args.end() ? fallback : std::stoul(it->second);
  };
  if (t.op == "jacobi" || t.op == "action") {
    std::vector<std::string> names;
    std::string n = arg(t.op == "jacobi" ? "algebra" : "action");
    if (!n.empty()) names.push_back(n);
    return cmd_check(p, t.op, names, machine);
  }
  if (t.op == "compatible") return cmd_check(p, "compatible", {arg("mn"), arg("nm")}, machine);
  if (t.op == "xmod") return cmd_check(p, "xmod", {arg("xmod")}, machine);
  if (t.op == "peiffer")
    return cmd_peiffer(p, arg("M"), arg("N"), arg("mn"), arg("nm"), num("oracle_class", 0),
                       max_class, machine);
  if (t.op == "roundtrip")
    return cmd_roundtrip(p, arg("M"), arg("N"), arg("mn"), arg("nm"), machine);
  if (t.op == "coequalizer")
    return cmd_coequalizer(p, arg("M"), arg("N"), arg("mn"), arg("nm"), num("depth", 3), machine);
  if (t.op == "xmod-coproduct")
    return cmd_xmod_coproduct(p, arg("XM"), arg("XN"), arg("XZ"), arg("zM"), arg("zN"), machine);
  ReportBuilder rep(machine);
  rep.kv("error", "unknown task op '" + t.op + "'");
  return {2, rep.str()};
}

inline CommandResult cmd_run(const ProblemFile& p, std::size_t max_class, bool machine) {
  CommandResult total{0, ""};
  for (std::size_t i = 0; i < p.tasks.size(); ++i) {
    ReportBuilder head(machine);
    head.kv("task." + std::to_string(i), p.tasks[i].op);
    CommandResult r = run_task(p, p.tasks[i], max_class, machine);
    total.output += head.str() + r.output;
    if (!machine) total.output += "\n";
    total.exit_code = std::max(total.exit_code, r.exit_code);
  }
  return total;
}

} // namespace liexmod
