#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/net_metrics.hpp"
#include "cocreate/special_functions.hpp"

namespace cocreate {

/// Ordinary least squares fit of y on (1, x, x^2, ..., x^degree).
struct RegressionResult {
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;  // two-sided
  double f_stat = 0.0;
  double f_prob = 1.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double rss = 0.0;
  double tss = 0.0;
  std::size_t n_obs = 0;
};

inline RegressionResult fit_polynomial_ols(std::span<const double> xs, std::span<const double> ys, std::size_t degree) {
  const std::size_t p = degree + 1;
  const std::size_t n = xs.size();
  if (ys.size() != n) throw Error(Errc::domain, "xs and ys differ in length");
  if (n < p + 1) throw Error(Errc::insufficient_data, std::to_string(n) + " observations for " + std::to_string(p) + " parameters");
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) throw Error(Errc::domain, "non-finite observation");
  {
    std::vector<double> distinct(xs.begin(), xs.end());
    std::sort(distinct.begin(), distinct.end());
    if (static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin()) < p)
      throw Error(Errc::singular_design, "fewer than " + std::to_string(p) + " distinct predictor values");
  }

  // Column-major design matrix, reduced in place by Householder reflections.
  std::vector<double> a(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      a[j * n + i] = v;
      v *= xs[i];
    }
  }
  std::vector<double> qty(ys.begin(), ys.end());
  double max_norm = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[j * n + i] * a[j * n + i];
    max_norm = std::max(max_norm, std::sqrt(s));
  }

  for (std::size_t k = 0; k < p; ++k) {
    double* col = &a[k * n];
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += col[i] * col[i];
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * max_norm) throw Error(Errc::singular_design, "design matrix is rank deficient");
    const double alpha = col[k] > 0 ? -norm : norm;
    std::vector<double> v(col + k, col + n);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double e : v) vnorm2 += e * e;
    auto reflect = [&](double* target) {
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * target[k + i];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = 0; i < v.size(); ++i) target[k + i] -= f * v[i];
    };
    for (std::size_t j = k; j < p; ++j) reflect(&a[j * n]);
    reflect(qty.data());
  }
  auto r = [&](std::size_t i, std::size_t j) { return a[j * n + i]; };
  for (std::size_t k = 0; k < p; ++k)
    if (std::fabs(r(k, k)) <= 1e-12 * max_norm) throw Error(Errc::singular_design, "design matrix is rank deficient");

  RegressionResult out;
  out.n_obs = n;
  out.coefficients.assign(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double s = qty[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= r(k, j) * out.coefficients[j];
    out.coefficients[k] = s / r(k, k);
  }

  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0, v = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      fitted += out.coefficients[j] * v;
      v *= xs[i];
    }
    out.rss += (ys[i] - fitted) * (ys[i] - fitted);
    out.tss += (ys[i] - mean) * (ys[i] - mean);
  }

  const double df_resid = static_cast<double>(n - p);
  const double df_model = static_cast<double>(p - 1);
  const bool constant_y = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys[0]; });
  if (constant_y) {
    // Exact zero residuals; report the degenerate fit without 0/0 noise.
    out.coefficients.assign(p, 0.0);
    out.coefficients[0] = ys[0];
    out.rss = out.tss = 0.0;
  }
  const double sigma2 = out.rss / df_resid;

  // (X'X)^-1 = R^-1 R^-T; only the diagonal is needed.
  std::vector<double> rinv(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    rinv[j * p + j] = 1.0 / r(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r(i, k) * rinv[k * p + j];
      rinv[i * p + j] = -s / r(i, i);
    }
  }
  out.std_errors.resize(p);
  out.t_stats.resize(p);
  out.p_values.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    double diag = 0.0;
    for (std::size_t j = i; j < p; ++j) diag += rinv[i * p + j] * rinv[i * p + j];
    out.std_errors[i] = std::sqrt(sigma2 * diag);
    const double beta = out.coefficients[i];
    if (out.std_errors[i] == 0.0) {
      out.t_stats[i] = beta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), beta);
      out.p_values[i] = beta == 0.0 ? 1.0 : 0.0;
    } else {
      out.t_stats[i] = beta / out.std_errors[i];
      out.p_values[i] = student_t_two_sided_p(out.t_stats[i], df_resid);
    }
  }

  if (out.tss == 0.0) {
    out.r_squared = 0.0;
    out.f_stat = 0.0;
    out.f_prob = 1.0;
  } else {
    out.r_squared = std::clamp(1.0 - out.rss / out.tss, 0.0, 1.0);
    const double explained = std::max(out.tss - out.rss, 0.0);
    out.f_stat = out.rss == 0.0 ? std::numeric_limits<double>::infinity() : (explained / df_model) / (out.rss / df_resid);
    out.f_prob = f_upper_tail(out.f_stat, df_model, df_resid);
  }
  out.adj_r_squared = 1.0 - (1.0 - out.r_squared) * static_cast<double>(n - 1) / df_resid;
  return out;
}

inline RegressionResult fit_quadratic_ols(std::span<const double> xs, std::span<const double> ys) {
  return fit_polynomial_ols(xs, ys, 2);
}

enum class Predictor { team_size, artifact_age };
enum class Response { avg_degree, avg_clustering, avg_shortest_path, betweenness_centralization };

inline constexpr std::array kAllResponses{Response::avg_degree, Response::avg_clustering, Response::avg_shortest_path,
                                          Response::betweenness_centralization};

inline std::string_view to_string(Predictor p) { return p == Predictor::team_size ? "team_size" : "artifact_age"; }

inline std::string_view to_string(Response r) {
  switch (r) {
    case Response::avg_degree: return "avg_degree";
    case Response::avg_clustering: return "avg_clustering";
    case Response::avg_shortest_path: return "avg_shortest_path";
    case Response::betweenness_centralization: return "betweenness_centralization";
  }
  return "";
}

/// Human-readable model name, e.g. "Average Degree vs Team Size".
inline std::string model_label(Predictor p, Response r) {
  std::string metric;
  switch (r) {
    case Response::avg_degree: metric = "Average Degree"; break;
    case Response::avg_clustering: metric = "Clustering"; break;
    case Response::avg_shortest_path: metric = "Average Shortest Path"; break;
    case Response::betweenness_centralization: metric = "Centralization"; break;
  }
  return metric + (p == Predictor::team_size ? " vs Team Size" : " vs Artifact Age");
}

struct DesignSpec {
  Predictor predictor = Predictor::team_size;
  Response response = Response::avg_degree;
  std::string category;
};

inline double predictor_value(const MetricsRow& row, Predictor p) {
  return p == Predictor::team_size ? static_cast<double>(row.n_nodes) : static_cast<double>(row.age_months);
}

inline double response_value(const MetricsRow& row, Response r) {
  switch (r) {
    case Response::avg_degree: return row.avg_degree;
    case Response::avg_clustering: return row.avg_clustering;
    case Response::avg_shortest_path: return row.avg_shortest_path;
    case Response::betweenness_centralization: return row.betweenness_centralization;
  }
  return 0.0;
}

/// Quadratic fit of one metric against one predictor for one category.
/// Rows of other categories, or below four nodes, are ignored.
inline RegressionResult run_table(std::span<const MetricsRow> rows, const DesignSpec& spec) {
  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    if (row.article.category != spec.category || row.n_nodes < 4) continue;
    xs.push_back(predictor_value(row, spec.predictor));
    ys.push_back(response_value(row, spec.response));
  }
  if (xs.empty()) throw Error(Errc::no_data, "no rows for category '" + spec.category + "'");
  return fit_quadratic_ols(xs, ys);
}

/// "≪ 0.001*" below 0.001, otherwise three decimals with a star below 0.05.
inline std::string format_p_value(double p) {
  if (std::isnan(p)) return "nan";
  if (p < 0.001) return "\xE2\x89\xAA 0.001*";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f%s", p, p < 0.05 ? "*" : "");
  return buf;
}

}  // namespace cocreate
