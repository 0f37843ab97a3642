#include "regenperm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "regenperm/biased_formulas.hpp"
#include "regenperm/blocked.hpp"
#include "regenperm/blocked_exact.hpp"
#include "regenperm/error.hpp"
#include "regenperm/pshifted.hpp"
#include "regenperm/qhat.hpp"
#include "regenperm/realize.hpp"
#include "regenperm/renewal.hpp"

namespace regenperm {

namespace {

std::string indexed(const char* name, std::size_t i) { return std::string(name) + "_" + std::to_string(i); }

EstimateReport make_report(const char* statistic, const ModelSpec& model, const RunConfig& cfg) {
  EstimateReport r;
  r.statistic = statistic;
  r.model = model.to_json();
  r.seed = cfg.seed;
  r.samples = cfg.samples;
  r.workers = cfg.workers;
  return r;
}

std::optional<double> at(const std::vector<double>& v, std::size_t i) {
  if (i < v.size()) return v[i];
  return std::nullopt;
}

bool is_point_mass_one(const ModelSpec& m) {
  const auto* d = m.fixed_driver();
  return d && d->kind() == DiscreteDist::Kind::fixed && d->mass(1) == 1.0;
}

/// Exact u_0..u_{n_max} (split probabilities) where a closed form or exact
/// evaluator is available; empty otherwise.
std::vector<double> exact_split_u(const ModelSpec& m, std::size_t n_max) {
  if (is_point_mass_one(m)) return std::vector<double>(n_max + 1, 1.0);
  switch (m.family) {
    case Family::blocked:
      return UniformBlockExact(*m.fixed_driver()).split_probabilities(n_max);
    case Family::p_shifted:
      return pshifted_u_sequence(*m.fixed_driver(), n_max);
    case Family::p_biased: {
      if (const auto* s = m.stick_driver(); s && s->kind() == StickBreaking::Kind::beta) {
        if (s->theta() == 1.0) return gem1_u_recursion(n_max);
        if (n_max > 12) return {};
        std::vector<double> u;
        for (const auto& r : gem_u_exact(s->theta(), n_max, 1e-9)) u.push_back(r.value);
        return u;
      }
      if (m.stick_driver() && m.stick_driver()->kind() == StickBreaking::Kind::custom) return {};
      if (n_max > 16) return {};
      std::vector<double> u{1.0};
      Rng unused(0);
      for (std::size_t n = 1; n <= n_max; ++n)
        u.push_back(u_n_inclusion_exclusion(m.driver, n, 0, unused).value);
      return u;
    }
  }
  return {};
}

}  // namespace

void require_positive_recurrence(const ModelSpec& model) {
  if (!model.positive_recurrent_known()) throw UnsupportedModel("requires positive recurrence");
}

EstimateReport estimate_renewal(const ModelSpec& model, std::size_t n_max, const RunConfig& cfg) {
  model.validate();
  if (n_max == 0) throw ConfigError("n-max must be >= 1", "n_max");
  const bool blocked = model.family == Family::blocked;
  // Columns: 0 realizations, 1 dropped, then split[n], first split[n],
  // and for blocked models block end[n], first block end[n].
  const std::size_t c_split = 2, c_first = c_split + n_max, c_end = c_first + n_max,
                    c_first_end = c_end + n_max, columns = c_first_end + n_max;
  auto sums = run_batches(cfg, columns, [&](Rng& rng, std::uint64_t count, std::vector<double>& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<std::uint64_t> images;
      std::vector<std::size_t> ends;
      try {
        if (blocked) {
          auto b = sample_blocks(*model.fixed_driver(), n_max, rng);
          images = std::move(b.images);
          ends = std::move(b.block_ends);
          images.resize(n_max);
        } else {
          images = std::move(sample_prefix(model, n_max, rng)).release();
        }
      } catch (const BudgetExceeded&) {
        s[1] += 1.0;
        continue;
      }
      s[0] += 1.0;
      bool first = true;
      std::uint64_t max = 0;
      for (std::size_t k = 1; k <= n_max; ++k) {
        max = std::max(max, images[k - 1]);
        if (max == k) {
          s[c_split + k - 1] += 1.0;
          if (first) s[c_first + k - 1] += 1.0;
          first = false;
        }
      }
      if (blocked) {
        bool first_end = true;
        for (std::size_t e : ends) {
          if (e > n_max) break;
          s[c_end + e - 1] += 1.0;
          if (first_end) s[c_first_end + e - 1] += 1.0;
          first_end = false;
        }
      }
    }
  });
  auto r = make_report("renewal", model, cfg);
  const auto tot = batch_totals(sums);
  r.dropped = static_cast<std::uint64_t>(tot[1]);
  r.partial = r.dropped > 0;
  if (tot[0] == 0.0) {
    r.notes.push_back("every realization exhausted the draw budget");
    return r;
  }

  std::vector<double> u_exact, f_exact, split_exact;
  if (blocked) {
    const DiscreteDist& p = *model.fixed_driver();
    std::vector<double> f(n_max + 1, 0.0);
    for (std::size_t k = 1; k <= n_max; ++k) f[k] = p.mass(k);
    f_exact = f;
    u_exact = u_from_f(std::span<const double>(f).subspan(1), n_max);
    split_exact = exact_split_u(model, n_max);
    r.notes.push_back("u_n and f_n count block ends; split_n counts splitting times");
  } else {
    u_exact = exact_split_u(model, n_max);
    if (!u_exact.empty()) {
      f_exact = f_from_u(u_exact);
      f_exact.insert(f_exact.begin(), 0.0);
    }
  }
  const std::size_t cu = blocked ? c_end : c_split, cf = blocked ? c_first_end : c_first;
  for (std::size_t k = 1; k <= n_max; ++k) r.add(indexed("u", k), batch_ratio(sums, cu + k - 1, 0), at(u_exact, k));
  for (std::size_t k = 1; k <= n_max; ++k) r.add(indexed("f", k), batch_ratio(sums, cf + k - 1, 0), at(f_exact, k));
  if (blocked)
    for (std::size_t k = 1; k <= n_max; ++k)
      r.add(indexed("split", k), batch_ratio(sums, c_split + k - 1, 0), at(split_exact, k));
  if (r.partial) r.notes.push_back("realizations exhausting the draw budget were dropped");
  return r;
}

namespace {

/// Counts for realizations run through a split at or after n.
struct CycleCounts {
  std::vector<std::size_t> cycles;      // by length, index j (j <= j_max), least element <= n
  std::size_t total_cycles = 0;
  std::vector<std::size_t> components;  // by length, first position <= n
  std::size_t total_components = 0;
};

CycleCounts count_cycles(const std::vector<std::uint64_t>& perm, std::size_t n, std::size_t j_max) {
  CycleCounts c;
  c.cycles.assign(j_max + 1, 0);
  c.components.assign(j_max + 1, 0);
  const auto by_least = cycles_by_least_element(perm);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = by_least[i];
    if (len == 0) continue;
    ++c.total_cycles;
    if (len <= j_max) ++c.cycles[len];
  }
  std::uint64_t max = 0;
  std::size_t start = 1;
  for (std::size_t k = 1; k <= perm.size() && start <= n; ++k) {
    max = std::max(max, perm[k - 1]);
    if (max == k) {
      const std::size_t len = k - start + 1;
      ++c.total_components;
      if (len <= j_max) ++c.components[len];
      start = k + 1;
    }
  }
  return c;
}

}  // namespace

EstimateReport cycle_frequencies(const ModelSpec& model, std::size_t n, std::size_t j_max,
                                 const RunConfig& cfg) {
  model.validate();
  require_positive_recurrence(model);
  if (n == 0 || j_max == 0) throw ConfigError("n and j_max must be >= 1");
  const double nn = static_cast<double>(n);
  auto sums = run_batches(cfg, j_max + 2, [&](Rng& rng, std::uint64_t count, std::vector<double>& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<std::uint64_t> perm;
      try {
        perm = sample_through_split(model, n, rng);
      } catch (const BudgetExceeded&) {
        s[j_max + 1] += 1.0;
        continue;
      }
      s[0] += 1.0;
      const auto c = count_cycles(perm, n, j_max);
      for (std::size_t j = 1; j <= j_max; ++j) s[j] += static_cast<double>(c.cycles[j]) / nn;
    }
  });
  auto r = make_report("cycles", model, cfg);
  r.dropped = static_cast<std::uint64_t>(batch_totals(sums)[j_max + 1]);
  r.partial = r.dropped > 0;
  r.notes.push_back("cycles counted by least element in [n] (n = " + std::to_string(n) + ")");
  std::optional<UniformBlockExact> ex;
  if (model.family == Family::blocked) ex.emplace(*model.fixed_driver());
  for (std::size_t j = 1; j <= j_max; ++j) {
    std::optional<double> exact;
    if (ex)
      exact = ex->cycle_frequency(j);
    else if (is_point_mass_one(model))
      exact = j == 1 ? 1.0 : 0.0;
    r.add(indexed("C_n_j/n", j), batch_ratio(sums, j, 0), exact);
  }
  return r;
}

EstimateReport component_frequencies(const ModelSpec& model, std::size_t n, std::size_t j_max,
                                     const RunConfig& cfg) {
  model.validate();
  require_positive_recurrence(model);
  if (n == 0 || j_max == 0) throw ConfigError("n and j_max must be >= 1");
  // Columns: [0, j_max] cycles (0 = total), [j_max+1, 2 j_max+1] components (first = total), dropped.
  const std::size_t c_comp = j_max + 1, c_drop = 2 * j_max + 2;
  auto sums = run_batches(cfg, c_drop + 1, [&](Rng& rng, std::uint64_t count, std::vector<double>& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<std::uint64_t> perm;
      try {
        perm = sample_through_split(model, n, rng);
      } catch (const BudgetExceeded&) {
        s[c_drop] += 1.0;
        continue;
      }
      const auto c = count_cycles(perm, n, j_max);
      s[0] += static_cast<double>(c.total_cycles);
      s[c_comp] += static_cast<double>(c.total_components);
      for (std::size_t j = 1; j <= j_max; ++j) {
        s[j] += static_cast<double>(c.cycles[j]);
        s[c_comp + j] += static_cast<double>(c.components[j]);
      }
    }
  });
  auto r = make_report("components", model, cfg);
  r.dropped = static_cast<std::uint64_t>(batch_totals(sums)[c_drop]);
  r.partial = r.dropped > 0;
  r.notes.push_back("cycles and components counted by least element in [n] (n = " + std::to_string(n) + ")");
  std::optional<UniformBlockExact> ex;
  if (model.family == Family::blocked) ex.emplace(*model.fixed_driver());
  const bool identity = is_point_mass_one(model);
  for (std::size_t j = 1; j <= j_max; ++j) {
    std::optional<double> exact;
    if (ex) exact = ex->cycle_share(j);
    else if (identity) exact = j == 1 ? 1.0 : 0.0;
    r.add(indexed("p_cycle", j), batch_ratio(sums, j, 0), exact);
  }
  for (std::size_t j = 1; j <= j_max; ++j) {
    std::optional<double> exact;
    if (ex) exact = ex->component_share(j);
    else if (identity) exact = j == 1 ? 1.0 : 0.0;
    r.add(indexed("p_component", j), batch_ratio(sums, c_comp + j, c_comp), exact);
  }
  return r;
}

namespace {

const DiscreteDist& stationary_law(const ModelSpec& model) {
  model.validate();
  require_positive_recurrence(model);
  if (model.family != Family::blocked)
    throw UnsupportedModel("the stationary window is implemented for the blocked family only");
  return *model.fixed_driver();
}

}  // namespace

EstimateReport displacement_law(const ModelSpec& model, std::size_t d_max, const RunConfig& cfg) {
  const DiscreteDist& p = stationary_law(model);
  const auto dm = static_cast<std::int64_t>(d_max);
  // Columns: 0 count, [1, 2 d_max + 1] P(D = d), then P(D > 0), |D|, R.
  const std::size_t c_pos = 2 * d_max + 2, c_abs = c_pos + 1, c_ren = c_abs + 1;
  auto sums = run_batches(cfg, c_ren + 1, [&](Rng& rng, std::uint64_t count, std::vector<double>& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto w = sample_stationary_window(p, 0, 0, rng);
      const std::int64_t d = w.displacement(0);
      s[0] += 1.0;
      if (std::abs(d) <= dm) s[static_cast<std::size_t>(d + dm) + 1] += 1.0;
      if (d > 0) s[c_pos] += 1.0;
      s[c_abs] += static_cast<double>(std::abs(d));
      if (w.renews(0)) s[c_ren] += 1.0;
    }
  });
  auto r = make_report("displacement", model, cfg);
  const UniformBlockExact ex(p);
  for (std::int64_t d = -dm; d <= dm; ++d)
    r.add("P(D=" + std::to_string(d) + ")", batch_ratio(sums, static_cast<std::size_t>(d + dm) + 1, 0),
          ex.displacement(d));
  r.add("P(D>0)", batch_ratio(sums, c_pos, 0), ex.positive_displacement());
  r.add("E|D|", batch_ratio(sums, c_abs, 0), ex.mean_abs_displacement());
  r.add("P(R=1)", batch_ratio(sums, c_ren, 0), 1.0 / ex.mu());
  return r;
}

WindowCounts displacement_window_counts(const ModelSpec& model, std::int64_t lo, std::int64_t hi,
                                        std::size_t d_max, const RunConfig& cfg) {
  const DiscreteDist& p = stationary_law(model);
  if (lo > 0 || hi < 0 || lo > hi) throw ConfigError("window needs lo <= 0 <= hi", "window");
  const std::size_t width = static_cast<std::size_t>(hi - lo + 1), cols = 2 * d_max + 2;
  const auto dm = static_cast<std::int64_t>(d_max);
  auto sums = run_batches(cfg, width * (cols + 1), [&](Rng& rng, std::uint64_t count, std::vector<double>& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto w = sample_stationary_window(p, lo, hi, rng);
      for (std::int64_t z = lo; z <= hi; ++z) {
        const std::size_t row = static_cast<std::size_t>(z - lo) * (cols + 1);
        const std::int64_t d = w.displacement(z);
        s[row + (std::abs(d) <= dm ? static_cast<std::size_t>(d + dm) : cols - 1)] += 1.0;
        if (w.renews(z)) s[row + cols] += 1.0;
      }
    }
  });
  const auto tot = batch_totals(sums);
  WindowCounts wc;
  wc.lo = lo;
  wc.hi = hi;
  wc.d_max = d_max;
  wc.samples = cfg.samples;
  for (std::size_t z = 0; z < width; ++z) {
    std::vector<std::uint64_t> row(cols);
    for (std::size_t c = 0; c < cols; ++c) row[c] = static_cast<std::uint64_t>(tot[z * (cols + 1) + c]);
    wc.counts.push_back(std::move(row));
    wc.renewals.push_back(static_cast<std::uint64_t>(tot[z * (cols + 1) + cols]));
  }
  return wc;
}

EstimateReport fixed_point_density(const std::string& family, const std::vector<double>& grid,
                                   std::size_t n, const RunConfig& cfg) {
  if (family != "geometric" && family != "gem")
    throw ConfigError("family must be geometric or gem", "family");
  if (n == 0) throw ConfigError("n must be >= 1", "n");
  EstimateReport r;
  r.statistic = "fixed-points";
  r.model = {{"family", "p-biased"}, {"driver", family}, {"grid", grid}};
  r.seed = cfg.seed;
  r.samples = cfg.samples;
  r.workers = cfg.workers;
  const double nn = static_cast<double>(n);
  std::vector<double> values;
  for (double x : grid) {
    ModelSpec m;
    m.family = Family::p_biased;
    if (family == "geometric")
      m.driver = DiscreteDist::geometric(x);
    else
      m.driver = StickBreaking::gem(x);
    m.validate();
    auto sums = run_batches(cfg, 2, [&](Rng& rng, std::uint64_t count, std::vector<double>& s) {
      for (std::uint64_t i = 0; i < count; ++i) {
        const auto perm = sample_prefix(m, n, rng);
        std::size_t fixed = 0;
        for (std::size_t k = 1; k <= n; ++k) fixed += perm.at(k) == k;
        s[0] += 1.0;
        s[1] += static_cast<double>(fixed) / nn;
      }
    });
    char name[64];
    std::snprintf(name, sizeof name, "%s(%s=%g)", family == "geometric" ? "alpha" : "beta",
                  family == "geometric" ? "q" : "theta", x);
    const Estimate e = batch_ratio(sums, 1, 0);
    values.push_back(e.value);
    r.add(name, e);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < values.size(); ++i)
    if ((grid[i] < grid[i - 1]) != (values[i] > values[i - 1])) monotone = false;
  r.notes.push_back(std::string("estimates ") + (monotone ? "increase" : "do not increase monotonically") +
                    " as the parameter decreases toward 0");
  return r;
}

}  // namespace regenperm
