// Command-line front end: exact computations with Lie algebra actions,
// Peiffer products and crossed modules, driven by JSON problem files.

#include "liexmod/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw liexmod::ProblemFormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int finish(const liexmod::CommandResult& r) {
  std::fputs(r.output.c_str(), stdout);
  return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toolkit for Lie algebra actions, Peiffer products and crossed modules"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));
  std::string ring = "Q";
  app.add_option("--ring", ring, "ground field for commands without a problem file (Q or F<p>)");
  std::size_t max_class = 5;
  app.add_option("--max-class", max_class, "largest truncation class the oracle may try");

  auto* norm = app.add_subcommand("normalize", "rewrite a bracket expression into right-nested words");
  std::string expr, pin;
  norm->add_option("expression", expr, "term syntax, e.g. \"[[x,y],z]\"")->required();
  norm->add_option("--pin", pin, "letter that must end every word");

  auto* check = app.add_subcommand("check", "run one checker from a problem file");
  std::string check_file, check_what;
  std::vector<std::string> check_names;
  check->add_option("file", check_file)->required();
  check->add_option("what", check_what, "jacobi | action | compatible | xmod")->required();
  check->add_option("names", check_names, "objects to check");

  auto* peiffer = app.add_subcommand("peiffer", "compute the Peiffer product of mutual actions");
  std::string pf_file, pf_m, pf_n, pf_mn, pf_nm;
  std::size_t oracle_class = 0;
  peiffer->add_option("file", pf_file)->required();
  peiffer->add_option("M", pf_m)->required();
  peiffer->add_option("N", pf_n)->required();
  peiffer->add_option("mn", pf_mn, "action of M on N")->required();
  peiffer->add_option("nm", pf_nm, "action of N on M")->required();
  peiffer->add_option("--oracle-class", oracle_class,
                      "run the truncated oracle starting at this class");

  auto* copro = app.add_subcommand("xmod-coproduct", "coproduct of two crossed modules");
  std::string co_file, co_xm, co_xn, co_xz, co_zm, co_zn;
  copro->add_option("file", co_file)->required();
  copro->add_option("XM", co_xm)->required();
  copro->add_option("XN", co_xn)->required();
  copro->add_option("--XZ", co_xz, "mediator target crossed module");
  copro->add_option("--zM", co_zm, "morphism XM -> XZ");
  copro->add_option("--zN", co_zn, "morphism XN -> XZ");

  auto* run = app.add_subcommand("run", "execute the task list of a problem file");
  std::string run_file;
  run->add_option("file", run_file)->required();

  CLI11_PARSE(app, argc, argv);
  bool machine = format == "machine";

  try {
    if (*norm) {
      liexmod::Field fld = liexmod::detail::parse_ring(ring);
      return finish(liexmod::cmd_normalize(expr, pin, fld, machine));
    }
    auto load = [&](const std::string& path) { return liexmod::parse_problem(read_file(path)); };
    if (*check) return finish(liexmod::cmd_check(load(check_file), check_what, check_names, machine));
    if (*peiffer)
      return finish(liexmod::cmd_peiffer(load(pf_file), pf_m, pf_n, pf_mn, pf_nm, oracle_class,
                                         max_class, machine));
    if (*copro)
      return finish(liexmod::cmd_xmod_coproduct(load(co_file), co_xm, co_xn, co_xz, co_zm, co_zn,
                                                machine));
    if (*run) return finish(liexmod::cmd_run(load(run_file), max_class, machine));
  } catch (const liexmod::ProblemCheckError& e) {
    std::cout << (machine ? "error=" : "error: ") << e.what() << "\n";
    return 1;
  } catch (const liexmod::ProblemFormatError& e) {
    std::cout << (machine ? "error=" : "error: ") << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << (machine ? "error=" : "error: ") << e.what() << "\n";
    return 2;
  }
  return 2;
}
