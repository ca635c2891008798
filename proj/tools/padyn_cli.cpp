#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "padyn/padyn.h"

namespace {

struct Args {
  std::string file;
  bool json = false;
  std::optional<int> precision, val_floor, shell_cap;
  std::optional<std::string> point;
};

int execute(const std::string& sub, const Args& a) {
  padyn_session* s = nullptr;
  padyn_status st = padyn_session_open_file(a.file.c_str(), &s);
  if (st != PADYN_OK) {
    std::fprintf(stderr, "padyn: %s\n", padyn_last_error());
    return st;
  }
  auto set = [&](const char* key, const std::string& value) {
    if (st == PADYN_OK) st = padyn_session_set_option(s, key, value.c_str());
  };
  if (a.precision) set("precision", std::to_string(*a.precision));
  if (a.val_floor) set("val_floor", std::to_string(*a.val_floor));
  if (a.shell_cap) set("shell_period_cap", std::to_string(*a.shell_cap));
  if (a.point) set("point", *a.point);
  char* report = nullptr;
  if (st == PADYN_OK) st = padyn_run(s, sub.c_str(), a.json ? 1 : 0, &report);
  if (report) {
    std::fputs(report, stdout);
    padyn_string_free(report);
  }
  if (st != PADYN_OK) std::fprintf(stderr, "padyn: %s\n", padyn_last_error());
  padyn_session_close(s);
  return st == PADYN_NULL_ARG ? 1 : st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic periodic point analysis"};
  app.set_version_flag("--version", std::string(padyn_version()));
  app.require_subcommand(1);

  Args args;
  const std::pair<const char*, const char*> subs[] = {
      {"analyze", "model checks, special fiber, d', bounds"},
      {"enumerate", "certified periodic points"},
      {"decompose", "period decomposition n = n0 * r * p^t"},
      {"verify", "enumerate, decompose every cycle and check the inequalities"},
      {"cubic", "fixed points and periods of a cubic polynomial chart"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->add_option("file", args.file, "map description")->required()->check(CLI::ExistingFile);
    sc->add_flag("--json", args.json, "canonical JSON output");
    sc->add_option("--precision,-k", args.precision, "work modulo p^k");
    if (std::string(name) == "enumerate" || std::string(name) == "cubic")
      sc->add_option("--val-floor", args.val_floor, "valuation floor B for polynomial charts");
    if (std::string(name) == "decompose") sc->add_option("--point", args.point, "a point on the cycle, e.g. 3, -1/4, inf, (1,3)");
    if (std::string(name) == "cubic") sc->add_option("--shell-cap", args.shell_cap, "largest period searched below v = 0");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return execute(app.get_subcommands().front()->get_name(), args);
}
