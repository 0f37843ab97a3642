#include "regenperm/hypothesis.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <limits>
#include <numeric>

#include "regenperm/error.hpp"

namespace regenperm {

double chi_square_sf(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                         double min_expected) {
  if (observed.size() != probs.size() && observed.size() != probs.size() + 1)
    throw ConfigError("observed needs one cell per probability, plus an optional tail cell");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total == 0.0) throw ConfigError("no observations");
  std::vector<double> obs(observed.begin(), observed.end()), ex;
  for (double p : probs) ex.push_back(p * total);
  const double covered = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (obs.size() > ex.size() || covered < 1.0 - 1e-12) {
    ex.push_back(std::max(0.0, 1.0 - covered) * total);
    if (obs.size() < ex.size()) obs.push_back(0.0);
  }

  std::vector<double> mo, me;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    o += obs[i];
    e += ex[i];
    if (e >= min_expected) {
      mo.push_back(o);
      me.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (me.empty()) {
      mo.push_back(o);
      me.push_back(e);
    } else {
      mo.back() += o;
      me.back() += e;
    }
  }
  ChiSquare r;
  r.bins = me.size();
  for (std::size_t i = 0; i < me.size(); ++i) {
    if (me[i] <= 0.0) {
      if (mo[i] > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    r.statistic += (mo[i] - me[i]) * (mo[i] - me[i]) / me[i];
  }
  r.dof = r.bins > 0 ? r.bins - 1 : 0;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquare chi_square_homogeneity(const std::vector<std::vector<std::uint64_t>>& table,
                                 double min_expected) {
  if (table.empty()) throw ConfigError("empty table");
  const std::size_t cols = table.front().size();
  for (const auto& row : table)
    if (row.size() != cols) throw ConfigError("ragged table");
  std::vector<double> row_tot(table.size(), 0.0), col_tot(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_tot[i] += static_cast<double>(table[i][j]);
      col_tot[j] += static_cast<double>(table[i][j]);
    }
  for (double t : row_tot) total += t;
  if (total == 0.0) throw ConfigError("no observations");
  double min_row = total;
  std::size_t rows = 0;
  for (double t : row_tot)
    if (t > 0.0) {
      min_row = std::min(min_row, t);
      ++rows;
    }

  // Group columns so that the smallest expected cell reaches min_expected.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> cur;
  double acc = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_tot[j] == 0.0) continue;
    cur.push_back(j);
    acc += col_tot[j];
    if (acc * min_row / total >= min_expected) {
      groups.push_back(cur);
      cur.clear();
      acc = 0.0;
    }
  }
  if (!cur.empty()) {
    if (groups.empty())
      groups.push_back(cur);
    else
      groups.back().insert(groups.back().end(), cur.begin(), cur.end());
  }

  ChiSquare r;
  r.bins = groups.size();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (row_tot[i] == 0.0) continue;
    for (const auto& g : groups) {
      double o = 0.0, c = 0.0;
      for (std::size_t j : g) {
        o += static_cast<double>(table[i][j]);
        c += col_tot[j];
      }
      const double e = row_tot[i] * c / total;
      r.statistic += (o - e) * (o - e) / e;
    }
  }
  r.dof = (rows > 0 && groups.size() > 0) ? (rows - 1) * (groups.size() - 1) : 0;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

}  // namespace regenperm
