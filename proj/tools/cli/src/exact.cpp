#include <cmath>
#include <sstream>

#include "regenperm/blocked_exact.hpp"
#include "regenperm/combinatorics.hpp"
#include "regenperm/error.hpp"
#include "regenperm/mallows.hpp"
#include "regenperm/model.hpp"
#include "regenperm/pshifted.hpp"
#include "regenperm/qhat.hpp"
#include "regenperm/renewal.hpp"
#include "regenperm_cli/cli.hpp"

namespace regenperm::cli {

using nlohmann::json;

namespace {

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Table indecomposable(std::size_t n_max) {
  if (n_max == 0 || n_max > 200) throw ConfigError("n-max must lie in 1..200", "n_max");
  const IndecomposableTable t(n_max);
  Table tab{"(n,k): permutations of [n] with k components", {"n"}, {}};
  for (std::size_t k = 1; k <= n_max; ++k) tab.columns.push_back("k=" + std::to_string(k));
  tab.columns.push_back("n!");
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<json> row{n};
    for (std::size_t k = 1; k <= n_max; ++k) row.push_back(k <= n ? json(t(n, k).str()) : json(""));
    row.push_back(factorial(n).str());
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

std::vector<Table> component_law_tables(std::size_t n) {
  if (n == 0 || n > 60) throw ConfigError("n must lie in 1..60", "n");
  const IndecomposableTable t(n);
  Table scaled{"n * n! * P(L*_n = l)", {"n"}, {}};
  for (std::size_t l = 1; l <= n; ++l) scaled.columns.push_back("l=" + std::to_string(l));
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<json> row{m};
    for (std::size_t l = 1; l <= n; ++l) row.push_back(l <= m ? json(size_biased_scaled(t, m, l).str()) : json(""));
    scaled.rows.push_back(std::move(row));
  }
  const ComponentLaw law = component_law(t, n);
  Table laws{"exact laws at n = " + std::to_string(n), {"value", "P(K_n=value)", "P(L_n1=value)", "P(L*_n=value)"}, {}};
  for (std::size_t v = 1; v <= n; ++v)
    laws.rows.push_back({v, rational_str(law.components[v]), rational_str(law.first_length[v]),
                         rational_str(law.size_biased[v])});
  Table recip{"sum over k of 1/C(m,k)", {"m", "sum"}, {}};
  for (std::size_t m = 0; m <= n; ++m) recip.rows.push_back({m, rational_str(reciprocal_binomial_sum(m))});
  return {scaled, laws, recip};
}

Table mallows(std::size_t n_max, double q) {
  if (n_max == 0 || n_max > 200) throw ConfigError("n-max must lie in 1..200", "n_max");
  Table tab{"Mallows(q) with q = " + std::to_string(q),
            {"n", "Z_n", "u_n=(1-q)^n Z_n", "prod(1-q^j)", "Zdag_n", "f_n=(1-q)^n Zdag_n"}, {}};
  long double prod = 1.0L;
  for (std::size_t n = 1; n <= n_max; ++n) {
    prod *= 1.0L - std::pow(static_cast<long double>(q), static_cast<long double>(n));
    std::vector<json> row{n, mallows_qfactorial(n, q), mallows_block_probability(n, q), static_cast<double>(prod)};
    if (n <= kMallowsEnumerationCap) {
      row.push_back(mallows_indecomposable_partition(n, q));
      row.push_back(mallows_first_split(n, q));
    } else {
      row.push_back("");
      row.push_back("");
    }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

Table gem1_u(std::size_t k_max) {
  if (k_max > 1000) throw ConfigError("k must be <= 1000", "k");
  Table tab{"GEM(1) renewal sequence u_k", {"k", "recursion", "series", "abs diff"}, {}};
  const auto rec = gem1_u_recursion(k_max);
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double s = gem1_u_series(k);
    tab.rows.push_back({k, rec[k], s, std::abs(rec[k] - s)});
  }
  return tab;
}

Table gem_uinfty_table(const std::vector<double>& thetas) {
  Table tab{"GEM(theta) limit u_inf", {"theta", "gamma form", "product form", "abs diff"}, {}};
  for (double th : thetas) {
    const double a = gem_uinfty(th), b = gem_uinfty_product(th);
    tab.rows.push_back({th, a, b, std::abs(a - b)});
  }
  return tab;
}

std::vector<Table> blocked(const ExactParams& p) {
  std::optional<DiscreteDist> law;
  if (!p.model.empty()) {
    const ModelSpec m = ModelSpec::parse(p.model);
    if (m.family != Family::blocked) throw ConfigError("expected a blocked model", "model.family");
    law = *m.fixed_driver();
  } else {
    if (!(p.q > 0.0 && p.q < 1.0)) throw ConfigError("q must lie in (0,1)", "q");
    law = DiscreteDist::geometric(p.q);
  }
  const UniformBlockExact ex(*law);
  Table per_j{"blocked model with uniform blocks", {"j", "nu_j", "nu_j/mu", "p_cycle_j", "p_component_j", "P(Pi_1=j)"}, {}};
  for (std::size_t j = 1; j <= p.j_max; ++j)
    per_j.rows.push_back({j, ex.nu(j), ex.cycle_frequency(j), ex.cycle_share(j), ex.component_share(j), ex.first_image(j)});
  Table scalars{"scalars", {"quantity", "value"}, {}};
  scalars.rows.push_back({"mu", ex.mu()});
  scalars.rows.push_back({"P(Pi_1=1,Pi_2=2)", ex.first_two_fixed()});
  scalars.rows.push_back({"P(D*>0)", ex.positive_displacement()});
  scalars.rows.push_back({"E|D*|", ex.mean_abs_displacement()});
  Table disp{"stationary displacement law", {"d", "P(D*=d)"}, {}};
  for (std::int64_t d = -static_cast<std::int64_t>(p.j_max); d <= static_cast<std::int64_t>(p.j_max); ++d)
    disp.rows.push_back({d, ex.displacement(d)});
  return {per_j, scalars, disp};
}

Table kaluza(const std::vector<double>& u) {
  const DiscreteDist p = kaluza_to_p(u);
  Table tab{"p-shifted law with u_n = prod F(j)", {"i", "p_i"}, {}};
  for (std::size_t i = 1; i + 1 <= u.size(); ++i) tab.rows.push_back({i, p.mass(i)});
  tab.rows.push_back({"inf", p.p_inf()});
  return tab;
}

std::vector<Table> qhat(const ExactParams& p) {
  if (p.k > 30) throw ConfigError("k must be <= 30 for the increasing-run sums", "k");
  const auto rec = gem1_u_recursion(p.k);
  const auto runs = gem_u_exact(1.0, p.k, 2.5e-10);
  Table tab{"GEM(1) u_k", {"k", "recursion", "series", "run-probability", "run lower", "run upper"}, {}};
  for (std::size_t k = 0; k <= p.k; ++k)
    tab.rows.push_back({k, rec[k], gem1_u_series(k), runs[k].value, runs[k].lower, runs[k].upper});
  return {tab, gem_uinfty_table(p.theta)};
}

}  // namespace

std::vector<Table> exact_tables(const std::string& topic, const ExactParams& p) {
  if (topic == "indecomposable") return {indecomposable(p.n_max)};
  if (topic == "component-law") return component_law_tables(p.n);
  if (topic == "mallows") return {mallows(p.n_max, p.q)};
  if (topic == "gem1-u") return {gem1_u(p.k)};
  if (topic == "gem-uinfty") return {gem_uinfty_table(p.theta)};
  if (topic == "blocked") return blocked(p);
  if (topic == "kaluza") return {kaluza(p.u)};
  if (topic == "qhat") return qhat(p);
  throw ConfigError("unknown topic '" + topic + "'", "topic");
}

}  // namespace regenperm::cli
