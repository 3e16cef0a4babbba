// Copyright 2026 The floquet-dpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "floquet/errors.hpp"
#include "floquet/sweep.hpp"

namespace floquet::sweep {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

bool steady_row(const Row& r) { return !r.sector || *r.sector == 0; }

// One (zeta, value) series per N, sorted by zeta.
struct Series {
  std::vector<double> zeta;
  std::vector<double> value;
};

std::map<double, Series> collect(const SweepResult& result, std::string_view observable,
                                 bool gap) {
  std::map<double, std::map<double, double>> acc;
  for (const Row& r : result.rows) {
    if (!steady_row(r)) continue;
    if (!gap && r.obs_name != observable) continue;
    auto& m = acc[r.n];
    if (m.count(r.zeta_value)) continue;  // gap repeats across observable rows
    // A verified spectrum keeps its gap when only the steady state failed.
    m[r.zeta_value] = gap ? r.gap : (r.converged ? r.obs_value : kNaN);
  }
  std::map<double, Series> out;
  for (const auto& [n, m] : acc) {
    Series s;
    for (const auto& [z, v] : m) {
      s.zeta.push_back(z);
      s.value.push_back(v);
    }
    out[n] = std::move(s);
  }
  return out;
}

// First derivative on a possibly non-uniform grid (second order).
std::vector<double> first_derivative(const Series& s) {
  const std::size_t n = s.zeta.size();
  std::vector<double> d(n, kNaN);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = s.zeta[i] - s.zeta[i - 1];
    const double hp = s.zeta[i + 1] - s.zeta[i];
    d[i] = (hm * hm * s.value[i + 1] - hp * hp * s.value[i - 1] + (hp * hp - hm * hm) * s.value[i]) /
           (hp * hm * (hp + hm));
  }
  return d;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const Row& r : result.rows) {
    out << r.zeta_name << ',' << fmt(r.zeta_value) << ',' << fmt(r.n) << ','
        << (r.sector ? std::to_string(*r.sector) : std::string("full")) << ','
        << fmt(r.eps0.real()) << ',' << fmt(r.eps0.imag()) << ',' << fmt(r.eps1.real()) << ','
        << fmt(r.eps1.imag()) << ',' << fmt(r.gap) << ',' << r.obs_name << ','
        << fmt(r.obs_value) << ',' << fmt(r.residual) << ',' << r.cutoff << ','
        << (r.converged ? "true" : "false") << ',' << fmt(r.wall_s) << '\n';
  }
}

SweepResult read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ConfigError("csv: unexpected header");
  SweepResult out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 15)
      throw ConfigError("csv line " + std::to_string(lineno) + ": expected 15 fields");
    Row r;
    r.zeta_name = f[0];
    r.zeta_value = parse_double(f[1], lineno);
    r.n = parse_double(f[2], lineno);
    if (f[3] != "full") r.sector = static_cast<int>(parse_double(f[3], lineno));
    r.eps0 = {parse_double(f[4], lineno), parse_double(f[5], lineno)};
    r.eps1 = {parse_double(f[6], lineno), parse_double(f[7], lineno)};
    r.gap = parse_double(f[8], lineno);
    r.obs_name = f[9];
    r.obs_value = parse_double(f[10], lineno);
    r.residual = parse_double(f[11], lineno);
    r.cutoff = static_cast<std::size_t>(parse_double(f[12], lineno));
    if (f[13] != "true" && f[13] != "false")
      throw ConfigError("csv line " + std::to_string(lineno) + ": converged must be true/false");
    r.converged = f[13] == "true";
    r.wall_s = parse_double(f[14], lineno);
    out.rows.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<int, double>> central_stencil(int m) {
  if (m < 1) throw DomainError("central_stencil: order must be >= 1");
  std::vector<std::pair<int, double>> out;
  if (m % 2 == 0) {
    // delta^m f_i
    for (int k = 0; k <= m; ++k)
      out.emplace_back(m / 2 - k, (k % 2 ? -1.0 : 1.0) * binomial(m, k));
  } else {
    // (delta^m f_{i+1/2} + delta^m f_{i-1/2}) / 2
    std::map<int, double> c;
    for (int k = 0; k <= m; ++k) {
      const double w = 0.5 * (k % 2 ? -1.0 : 1.0) * binomial(m, k);
      c[(m + 1) / 2 - k] += w;
      c[(m - 1) / 2 - k] += w;
    }
    for (const auto& [off, w] : c)
      if (w != 0.0) out.emplace_back(off, w);
  }
  return out;
}

CriticalityReport criticality_order(const SweepResult& result, std::string_view observable,
                                    int m) {
  if (m < 1) throw DomainError("criticality_order: order must be >= 1");
  CriticalityReport rep;
  rep.observable = std::string(observable);
  rep.order = m;
  const auto stencil = central_stencil(m);
  int reach = 0;
  for (const auto& [off, w] : stencil) reach = std::max(reach, std::abs(off));
  const auto series = collect(result, observable, false);
  if (series.empty())
    throw DomainError("criticality_order: no rows for observable '" + rep.observable + "'");
  for (const auto& [n, s] : series) {
    const std::size_t len = s.zeta.size();
    if (len < static_cast<std::size_t>(2 * reach + 1))
      throw DomainError("criticality_order: grid of " + std::to_string(len) +
                        " points too short for order " + std::to_string(m));
    const double h = (s.zeta.back() - s.zeta.front()) / static_cast<double>(len - 1);
    for (std::size_t i = 1; i < len; ++i)
      if (std::abs(s.zeta[i] - s.zeta[i - 1] - h) > 1e-9 * std::max(std::abs(h), 1e-300))
        throw DomainError("criticality_order: grid is not uniform");
    DerivativeSeries d;
    d.n = n;
    const double hm = std::pow(h, m);
    for (std::size_t i = static_cast<std::size_t>(reach); i + reach < len; ++i) {
      double acc = 0.0;
      for (const auto& [off, w] : stencil) acc += w * s.value[i + off];
      const double v = acc / hm;
      d.zeta.push_back(s.zeta[i]);
      d.value.push_back(v);
      if (std::isfinite(v) && std::abs(v) > d.peak_abs) {
        d.peak_abs = std::abs(v);
        d.peak_zeta = s.zeta[i];
      }
    }
    rep.series.push_back(std::move(d));
  }
  for (std::size_t j = 1; j < rep.series.size(); ++j)
    rep.peak_growth.push_back(rep.series[j].peak_abs /
                              std::max(rep.series[j - 1].peak_abs, 1e-300));
  return rep;
}

double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d0 = (y1 - y0) / (x1 - x0);
  const double d1 = (y2 - y1) / (x2 - x1);
  const double curv = (d1 - d0) / (x2 - x0);
  if (!(curv > 0.0)) return x1;
  return 0.5 * (x0 + x1) - d0 / (2.0 * curv);
}

std::vector<CriticalEstimate> estimate_critical_point(const SweepResult& result,
                                                      std::string_view observable) {
  const auto gaps = collect(result, {}, true);
  const auto obs = observable.empty() ? std::map<double, Series>{}
                                      : collect(result, observable, false);
  std::vector<CriticalEstimate> out;
  for (const auto& [n, raw] : gaps) {
    Series s;
    for (std::size_t i = 0; i < raw.zeta.size(); ++i)
      if (std::isfinite(raw.value[i])) {
        s.zeta.push_back(raw.zeta[i]);
        s.value.push_back(raw.value[i]);
      }
    CriticalEstimate e;
    e.n = n;
    if (s.zeta.size() < 3) {
      e.note = "fewer than three converged points";
      out.push_back(std::move(e));
      continue;
    }
    const auto it = std::min_element(s.value.begin(), s.value.end());
    const std::size_t i = static_cast<std::size_t>(it - s.value.begin());
    e.index = i;
    e.zeta_grid = e.zeta_refined = s.zeta[i];
    e.gap_min = s.value[i];
    if (i > 0 && i + 1 < s.zeta.size()) {
      const double left = *std::max_element(s.value.begin(), s.value.begin() + i);
      const double right = *std::max_element(s.value.begin() + i + 1, s.value.end());
      e.interior = e.gap_min <= 0.9 * left && e.gap_min <= 0.9 * right;
    }
    if (e.interior) {
      e.zeta_refined = std::clamp(parabola_vertex(s.zeta[i - 1], s.value[i - 1], s.zeta[i],
                                                  s.value[i], s.zeta[i + 1], s.value[i + 1]),
                                  s.zeta[i - 1], s.zeta[i + 1]);
    } else {
      e.note = "no interior minimum";
    }
    if (const auto o = obs.find(n); o != obs.end()) {
      const auto d = first_derivative(o->second);
      double best = -1.0;
      for (std::size_t j = 0; j < d.size(); ++j)
        if (std::isfinite(d[j]) && std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          e.derivative_peak = o->second.zeta[j];
        }
      if (e.derivative_peak) {
        const double step = (s.zeta.back() - s.zeta.front()) / static_cast<double>(s.zeta.size() - 1);
        e.discrepancy_steps = std::abs(*e.derivative_peak - e.zeta_grid) / step;
        e.flagged = e.discrepancy_steps > 2.0;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string report_json(const SweepConfig& cfg, const SweepResult& result,
                        const std::vector<CriticalEstimate>& estimates,
                        const std::optional<CriticalityReport>& criticality,
                        const std::vector<CutoffCheck>& checks) {
  using nlohmann::json;
  const auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json doc;
  doc["model"] = std::string(model_name(cfg.model));
  doc["var"] = cfg.var;
  doc["jobs"] = result.jobs;
  doc["failed_jobs"] = result.failed_jobs;
  doc["errors"] = result.errors;
  json est = json::array();
  for (const auto& e : estimates) {
    json j;
    j["N"] = e.n;
    j["interior_minimum"] = e.interior;
    j["zeta_c_grid"] = num(e.zeta_grid);
    j["zeta_c"] = num(e.zeta_refined);
    j["gap_min"] = num(e.gap_min);
    j["derivative_peak"] = e.derivative_peak ? num(*e.derivative_peak) : json(nullptr);
    j["discrepancy_steps"] = num(e.discrepancy_steps);
    j["flagged"] = e.flagged;
    if (!e.note.empty()) j["note"] = e.note;
    est.push_back(std::move(j));
  }
  doc["critical_point"] = std::move(est);
  if (criticality) {
    json c;
    c["observable"] = criticality->observable;
    c["order"] = criticality->order;
    json per = json::array();
    for (const auto& s : criticality->series)
      per.push_back({{"N", s.n}, {"peak_zeta", num(s.peak_zeta)}, {"peak_abs", num(s.peak_abs)}});
    c["peaks"] = std::move(per);
    c["peak_growth"] = criticality->peak_growth;
    doc["criticality"] = std::move(c);
  }
  json ch = json::array();
  for (const auto& c : checks) {
    json j;
    j["N"] = c.n;
    j["zeta"] = num(c.zeta);
    j["cutoff"] = c.cutoff;
    j["cutoff_large"] = c.cutoff_large;
    j["gap"] = num(c.gap);
    j["gap_large"] = num(c.gap_large);
    j["gap_rel_change"] = num(c.gap_change);
    json oc = json::object();
    for (const auto& [name, v] : c.obs_change) oc[name] = num(v);
    j["observable_rel_change"] = std::move(oc);
    j["ok"] = c.ok;
    if (!c.error.empty()) j["error"] = c.error;
    ch.push_back(std::move(j));
  }
  doc["cutoff_check"] = std::move(ch);
  return doc.dump(2);
}

}  // namespace floquet::sweep
