#include "regenperm_cli/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "regenperm/error.hpp"
#include "regenperm/estimators.hpp"
#include "regenperm/model.hpp"
#include "regenperm/perm.hpp"
#include "regenperm/realize.hpp"
#include "regenperm_cli/verify.hpp"

namespace regenperm::cli {

using nlohmann::json;

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw ConfigError("format must be json, csv or text", "format");
}

namespace {

std::string cell_text(const json& c) {
  if (c.is_string()) return c.get<std::string>();
  if (c.is_number_integer() || c.is_number_unsigned()) return c.dump();
  if (c.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", c.get<double>());
    return buf;
  }
  return c.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string join(const std::vector<std::uint64_t>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string render_tables(const std::string& topic, const std::vector<Table>& tables, Format f) {
  std::ostringstream os;
  if (f == Format::json) {
    json arr = json::array();
    for (const auto& t : tables) arr.push_back({{"title", t.title}, {"columns", t.columns}, {"rows", t.rows}});
    os << json{{"topic", topic}, {"tables", arr}}.dump(2) << '\n';
    return os.str();
  }
  for (std::size_t ti = 0; ti < tables.size(); ++ti) {
    const auto& t = tables[ti];
    if (f == Format::csv) {
      os << "# " << t.title << '\n';
      for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_escape(t.columns[c]);
      os << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_escape(cell_text(row[c]));
        os << '\n';
      }
      continue;
    }
    std::vector<std::size_t> width(t.columns.size(), 0);
    for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
    for (const auto& row : t.rows)
      for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
        width[c] = std::max(width[c], cell_text(row[c]).size());
    if (ti) os << '\n';
    os << t.title << '\n';
    auto emit = [&](auto get, std::size_t n) {
      for (std::size_t c = 0; c < n; ++c) {
        const std::string s = get(c);
        os << (c ? "  " : "") << std::string(width[c] - s.size(), ' ') << s;
      }
      os << '\n';
    };
    emit([&](std::size_t c) { return t.columns[c]; }, t.columns.size());
    for (const auto& row : t.rows) emit([&](std::size_t c) { return cell_text(row[c]); }, row.size());
  }
  return os.str();
}

namespace {

struct Common {
  std::string model;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string out;
  unsigned workers = 1;
};

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("REGENPERM_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError("REGENPERM_SEED must be an unsigned integer", "seed");
    return v;
  }
  return 1;
}

/// --model (inline JSON or preset) or --config (file holding a model, or
/// an object with a "model" member).
ModelSpec resolve_model(const Common& c) {
  if (!c.model.empty() && !c.config.empty()) throw ConfigError("give --model or --config, not both", "model");
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ConfigError("cannot open config file '" + c.config + "'", "config");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), "config");
    }
    if (j.is_object() && j.contains("model")) {
      const auto& m = j.at("model");
      return m.is_string() ? ModelSpec::parse(m.get<std::string>()) : ModelSpec::from_json(m);
    }
    return ModelSpec::from_json(j);
  }
  if (c.model.empty()) throw ConfigError("missing --model or --config", "model");
  return ModelSpec::parse(c.model);
}

void add_common(CLI::App* cmd, Common& c, const std::string& default_format, bool model = true) {
  if (model) {
    cmd->add_option("--model", c.model, "model JSON or preset name (gem1)");
    cmd->add_option("--config", c.config, "JSON file with the model");
  }
  cmd->add_option("--seed", c.seed, "64-bit seed (falls back to REGENPERM_SEED, then 1)");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  c.format = default_format;
  cmd->add_option("--format", c.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--out", c.out, "write output to this file");
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + c.out + "'", "out");
  f << text;
}

std::string sample_text(const ModelSpec& m, std::size_t n, std::uint64_t count, std::uint64_t seed, Format f) {
  std::ostringstream os;
  if (f == Format::csv) os << "index,images,splits\n";
  for (std::uint64_t i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, i);
    const PermPrefix p = sample_prefix(m, n, rng);
    const auto splits = splitting_times(p);
    std::vector<std::uint64_t> img(p.images().begin(), p.images().end());
    std::vector<std::uint64_t> sp(splits.begin(), splits.end());
    switch (f) {
      case Format::json:
        os << json{{"index", i}, {"images", img}, {"splits", sp}}.dump() << '\n';
        break;
      case Format::csv:
        os << i << ',' << join(img, " ") << ',' << join(sp, " ") << '\n';
        break;
      case Format::text:
        os << i << ": " << join(img, " ") << " | splits: " << join(sp, " ") << '\n';
        break;
    }
  }
  return os.str();
}

std::string report_text(const EstimateReport& r, Format f) {
  switch (f) {
    case Format::json: return r.to_json().dump(2) + "\n";
    case Format::csv: return r.to_csv();
    case Format::text: return r.to_text();
  }
  return {};
}

std::vector<double> parse_list(const std::string& s, const char* path) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("expected a comma-separated list of numbers", path);
    }
  }
  return v;
}

std::string verify_text(const std::vector<CriterionResult>& results, Format f, bool timing) {
  std::ostringstream os;
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (f == Format::json) {
    json arr = json::array();
    for (const auto& r : results) {
      json j{{"criterion", r.id}, {"title", r.title}, {"passed", r.passed}, {"checks", r.lines}};
      if (timing) j["seconds"] = r.seconds;
      arr.push_back(std::move(j));
    }
    char dg[24];
    std::snprintf(dg, sizeof dg, "%016llx", static_cast<unsigned long long>(digest(results)));
    os << json{{"passed", all}, {"digest", dg}, {"criteria", arr}}.dump(2) << '\n';
    return os.str();
  }
  if (f == Format::csv) {
    os << "criterion,title,passed,check\n";
    for (const auto& r : results)
      for (const auto& l : r.lines) os << r.id << ',' << csv_escape(r.title) << ',' << (r.passed ? 1 : 0) << ',' << csv_escape(l) << '\n';
    return os.str();
  }
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title;
    if (timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
      os << buf;
    }
    os << '\n';
    for (const auto& l : r.lines) os << "    " << l << '\n';
  }
  char dg[24];
  std::snprintf(dg, sizeof dg, "%016llx", static_cast<unsigned long long>(digest(results)));
  os << (all ? "all criteria passed" : "some criteria FAILED") << " (digest " << dg << ")\n";
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regenerative random permutations: samplers, exact tables, estimators", "regenperm"};
  app.require_subcommand(1);

  Common sc;
  std::size_t s_n = 10;
  std::uint64_t s_count = 1;
  auto* sample = app.add_subcommand("sample", "print realizations as JSON lines");
  add_common(sample, sc, "json");
  sample->add_option("--n", s_n, "prefix length")->check(CLI::PositiveNumber);
  sample->add_option("--count", s_count, "number of realizations");

  Common xc;
  std::string topic;
  ExactParams xp;
  std::string theta_list, u_list;
  auto* exact = app.add_subcommand("exact", "exact tables");
  add_common(exact, xc, "text", false);
  exact->add_option("topic", topic,
                    "indecomposable | component-law | mallows | gem1-u | gem-uinfty | blocked | kaluza | qhat")
      ->required();
  exact->add_option("--n", xp.n, "size for component-law");
  exact->add_option("--n-max", xp.n_max, "largest n for indecomposable and mallows");
  exact->add_option("--k", xp.k, "largest k for gem1-u and qhat");
  exact->add_option("--j-max", xp.j_max, "largest j for blocked");
  exact->add_option("--theta", theta_list, "comma-separated theta values");
  exact->add_option("--q", xp.q, "geometric parameter");
  exact->add_option("--u", u_list, "comma-separated u_0, u_1, ... for kaluza");
  exact->add_option("--model", xp.model, "block-length law for blocked, as a blocked model");

  Common ec;
  std::string statistic, family = "geometric", grid = "0.4,0.2,0.1,0.05";
  std::size_t e_n = 1000, e_nmax = 10, e_jmax = 12, e_dmax = 30;
  std::uint64_t e_samples = 100000;
  unsigned e_batches = 64;
  bool e_timing = false;
  double z_threshold = 4.0;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimates with exact comparisons");
  add_common(estimate, ec, "text");
  estimate->add_option("--statistic", statistic, "renewal | cycles | components | displacement | fixed-points")
      ->required()
      ->check(CLI::IsMember({"renewal", "cycles", "components", "displacement", "fixed-points"}));
  estimate->add_option("--samples", e_samples, "realizations")->check(CLI::PositiveNumber);
  estimate->add_option("--batches", e_batches, "batches for standard errors")->check(CLI::PositiveNumber);
  estimate->add_option("--n", e_n, "positions per realization (cycles, components, fixed-points)");
  estimate->add_option("--n-max", e_nmax, "largest n for renewal");
  estimate->add_option("--j-max", e_jmax, "largest cycle or component length");
  estimate->add_option("--d-max", e_dmax, "largest |d| for displacement");
  estimate->add_option("--family", family, "fixed-points driver: geometric | gem")
      ->check(CLI::IsMember({"geometric", "gem"}));
  estimate->add_option("--grid", grid, "fixed-points parameter grid");
  estimate->add_option("--z-threshold", z_threshold, "flag records with |z| at or above this");
  estimate->add_flag("--timing", e_timing, "record wall time in the report");

  Common vc;
  std::string tier = "quick";
  bool v_timing = false;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_common(verify, vc, "text", false);
  verify->add_option("--tier", tier, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--timing", v_timing, "print per-criterion wall time");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (sample->parsed()) {
      const ModelSpec m = resolve_model(sc);
      emit(sc, sample_text(m, s_n, s_count, resolve_seed(sc), parse_format(sc.format)), out);
      return 0;
    }
    if (exact->parsed()) {
      if (!theta_list.empty()) xp.theta = parse_list(theta_list, "theta");
      if (!u_list.empty()) xp.u = parse_list(u_list, "u");
      if (topic == "kaluza" && xp.u.empty()) throw ConfigError("kaluza needs --u", "u");
      emit(xc, render_tables(topic, exact_tables(topic, xp), parse_format(xc.format)), out);
      return 0;
    }
    if (estimate->parsed()) {
      RunConfig cfg;
      cfg.seed = resolve_seed(ec);
      cfg.samples = e_samples;
      cfg.workers = ec.workers;
      cfg.batches = e_batches;
      const auto t0 = std::chrono::steady_clock::now();
      EstimateReport r;
      if (statistic == "fixed-points") {
        r = fixed_point_density(family, parse_list(grid, "grid"), e_n, cfg);
      } else {
        const ModelSpec m = resolve_model(ec);
        if (statistic == "renewal") r = estimate_renewal(m, e_nmax, cfg);
        else if (statistic == "cycles") r = cycle_frequencies(m, e_n, e_jmax, cfg);
        else if (statistic == "components") r = component_frequencies(m, e_n, e_jmax, cfg);
        else r = displacement_law(m, e_dmax, cfg);
      }
      if (e_timing)
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto flagged = r.flagged(z_threshold);
      if (!flagged.empty()) {
        std::string names;
        for (const auto* f : flagged) names += (names.empty() ? "" : ", ") + f->name;
        r.notes.push_back("|z| >= " + std::to_string(z_threshold).substr(0, 4) + ": " + names);
      }
      emit(ec, report_text(r, parse_format(ec.format)), out);
      return 0;
    }
    if (verify->parsed()) {
      VerifyOptions opt;
      opt.tier = parse_tier(tier);
      opt.seed = resolve_seed(vc);
      opt.workers = vc.workers;
      const auto results = run_verify(opt);
      emit(vc, verify_text(results, parse_format(vc.format), v_timing), out);
      for (const auto& r : results)
        if (!r.passed) return 1;
      return 0;
    }
  } catch (const KaluzaViolation& e) {
    err << "error: not a Kaluza sequence at index " << e.index() << ": " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedModel& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace regenperm::cli
