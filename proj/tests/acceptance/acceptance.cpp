// Acceptance run: one verdict line per criterion. Criteria 1-10 come from
// the full verify tier; criterion 11 reruns it with another worker count and
// compares digests, and checks the total wall time.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "regenperm_cli/verify.hpp"

using namespace regenperm::cli;

namespace {

constexpr double kBudgetSeconds = 30.0 * 60.0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-11"};
  VerifyOptions opt;
  opt.tier = Tier::full;
  std::string tier = "full";
  bool verbose = false;
  app.add_option("--seed", opt.seed, "master seed");
  app.add_option("--tier", tier, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  app.add_flag("--verbose", verbose, "print every check line");
  CLI11_PARSE(app, argc, argv);
  opt.tier = parse_tier(tier);

  bool all = true;
  const auto t0 = std::chrono::steady_clock::now();
  const auto first = run_verify(opt, [&](const CriterionResult& r) {
    char tail[64];
    std::snprintf(tail, sizeof tail, "  (%.1f s)", r.seconds);
    verdict(r.id, r.passed, r.title + tail);
    if (verbose || !r.passed)
      for (const auto& l : r.lines) std::printf("    %s\n", l.c_str());
    all = all && r.passed;
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  VerifyOptions again = opt;
  again.workers = opt.workers + 1;
  const auto second = run_verify(again);
  const auto d1 = digest(first), d2 = digest(second);
  bool same_lines = first.size() == second.size();
  for (std::size_t i = 0; same_lines && i < first.size(); ++i) same_lines = first[i].lines == second[i].lines;
  const bool ok11 = d1 == d2 && same_lines && seconds <= kBudgetSeconds;
  char what[200];
  std::snprintf(what, sizeof what,
                "%s tier end to end: digest %016llx with %u worker(s), %016llx with %u; %.1f s of %.0f s allowed",
                to_string(opt.tier), static_cast<unsigned long long>(d1), opt.workers,
                static_cast<unsigned long long>(d2), again.workers, seconds, kBudgetSeconds);
  verdict(11, ok11, what);
  all = all && ok11;

  std::printf("%s\n", all ? "all acceptance criteria passed" : "acceptance FAILED");
  return all ? 0 : 1;
}
