#include "regenperm/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace regenperm {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json num_json(double v) {
  if (std::isfinite(v)) return v;
  return num(v);  // JSON has no inf/nan
}

double from_num_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

StatRecord& EstimateReport::add(std::string name, Estimate e, std::optional<double> exact) {
  StatRecord r{std::move(name), e.value, e.se, exact, std::nullopt};
  if (exact) {
    const double diff = e.value - *exact;
    if (e.se > 0.0)
      r.z = diff / e.se;
    else
      r.z = std::abs(diff) <= 1e-12 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  records.push_back(std::move(r));
  return records.back();
}

const StatRecord* EstimateReport::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

double EstimateReport::max_abs_z() const {
  double m = 0.0;
  for (const auto& r : records)
    if (r.z) m = std::max(m, std::abs(*r.z));
  return m;
}

std::vector<const StatRecord*> EstimateReport::flagged(double threshold) const {
  std::vector<const StatRecord*> out;
  for (const auto& r : records)
    if (r.z && std::abs(*r.z) >= threshold) out.push_back(&r);
  return out;
}

json EstimateReport::to_json() const {
  json recs = json::array();
  for (const auto& r : records) {
    json j = {{"name", r.name}, {"estimate", num_json(r.estimate)}, {"se", num_json(r.se)}};
    if (r.exact) j["exact"] = num_json(*r.exact);
    if (r.z) j["z"] = num_json(*r.z);
    recs.push_back(std::move(j));
  }
  json out = {{"statistic", statistic},
              {"model", model},
              {"seed", seed},
              {"samples", samples},
              {"workers", workers},
              {"partial", partial},
              {"dropped", dropped},
              {"notes", notes},
              {"records", std::move(recs)}};
  if (wall_seconds) out["wall_seconds"] = *wall_seconds;
  return out;
}

EstimateReport EstimateReport::from_json(const json& j) {
  EstimateReport r;
  r.statistic = j.at("statistic").get<std::string>();
  r.model = j.at("model");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.workers = j.at("workers").get<unsigned>();
  r.partial = j.value("partial", false);
  r.dropped = j.value("dropped", std::uint64_t{0});
  r.notes = j.value("notes", std::vector<std::string>{});
  if (j.contains("wall_seconds")) r.wall_seconds = j["wall_seconds"].get<double>();
  for (const auto& x : j.at("records")) {
    StatRecord s;
    s.name = x.at("name").get<std::string>();
    s.estimate = from_num_json(x.at("estimate"));
    s.se = from_num_json(x.at("se"));
    if (x.contains("exact")) s.exact = from_num_json(x["exact"]);
    if (x.contains("z")) s.z = from_num_json(x["z"]);
    r.records.push_back(std::move(s));
  }
  return r;
}

std::string EstimateReport::to_csv() const {
  std::ostringstream os;
  os << "name,estimate,se,exact,z\n";
  for (const auto& r : records)
    os << r.name << ',' << num(r.estimate) << ',' << num(r.se) << ','
       << (r.exact ? num(*r.exact) : "") << ',' << (r.z ? num(*r.z) : "") << '\n';
  return os.str();
}

std::string EstimateReport::to_text() const {
  std::ostringstream os;
  os << "statistic: " << statistic << "\nmodel: " << model.dump() << "\nseed: " << seed
     << "  samples: " << samples << "  workers: " << workers << '\n';
  if (wall_seconds) os << "wall time: " << num(*wall_seconds) << " s\n";
  if (partial) os << "partial: " << dropped << " realizations dropped\n";
  for (const auto& n : notes) os << "note: " << n << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %16s %12s %16s %9s\n", "name", "estimate", "se", "exact", "z");
  os << line;
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%-24s %16s %12s %16s %9s\n", r.name.c_str(),
                  num(r.estimate).c_str(), num(r.se).c_str(), r.exact ? num(*r.exact).c_str() : "-",
                  r.z ? num(*r.z).c_str() : "-");
    os << line;
  }
  return os.str();
}

}  // namespace regenperm
