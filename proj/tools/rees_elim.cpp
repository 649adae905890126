// rees-elim run <script> [--records <out>] [--probe-grid <lo..hi>] [--max-degree <n>]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rees_elim.hpp"

namespace {

std::pair<long, long> parse_grid(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw rees::Error("--probe-grid expects LO..HI, got " + text);
  return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rees algebras, elimination and blow-up charts over Q and F_p"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a session script");
  std::string script, records, grid;
  unsigned max_degree = 0;
  run->add_option("script", script, "session script")->required()->check(CLI::ExistingFile);
  run->add_option("--records", records, "write JSON records (one per line) to this file");
  run->add_option("--probe-grid", grid, "default integer probe box LO..HI for new objects");
  run->add_option("--max-degree", max_degree, "reject polynomials above this total degree");

  CLI11_PARSE(app, argc, argv);

  try {
    rees::SessionOptions opts;
    opts.max_degree = max_degree;
    if (!grid.empty()) opts.default_grid = parse_grid(grid);
    rees::SessionReport rep = rees::run_session_file(script, opts);
    std::cout << rep.text;
    if (!records.empty()) {
      std::ofstream out(records);
      if (!out) throw rees::Error("cannot write " + records);
      for (const auto& r : rep.records) out << r.dump() << "\n";
    }
    return rep.ok() ? 0 : 1;
  } catch (const rees::ParseError& e) {
    std::cerr << script << ": " << e.what() << "\n";
    return 2;
  } catch (const rees::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
