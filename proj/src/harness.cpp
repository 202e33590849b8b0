#include "angsync/harness.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "angsync/solvers.hpp"

namespace angsync {

std::string toString(Method m) {
  switch (m) {
    case Method::Er:
      return "er";
    case Method::Lsp:
      return "lsp";
    case Method::Sdp:
      return "sdp";
  }
  throw std::invalid_argument("toString: unknown method");
}

Method methodFromString(const std::string& name) {
  std::string low;
  for (char c : name) {
    low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (low == "er") return Method::Er;
  if (low == "lsp" || low == "gpm") return Method::Lsp;
  if (low == "sdp") return Method::Sdp;
  throw std::invalid_argument("unknown method: " + name);
}

std::vector<double> defaultAlphas() {
  const int n = 25;
  const double lo = std::log10(0.01);
  const double hi = std::log10(180.0);
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
  }
  a.front() = 0.01;
  a.back() = 180.0;
  return a;
}

std::size_t columnIndex(const SweepTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i] == name) return i;
  }
  throw std::out_of_range("no such column: " + name);
}

namespace {

bool hasMethod(const ExperimentConfig& cfg, Method m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) !=
         cfg.methods.end();
}

std::vector<std::string> boundColumns(WeightScheme scheme) {
  std::vector<std::string> c;
  if (scheme == WeightScheme::Unit) {
    c.insert(c.end(),
             {"bound_er_normalized", "bound_lsp_unit", "bound_er_unit"});
  }
  c.insert(c.end(), {"bound_lsp_spec_sqrt", "bound_lsp_spec", "bound_lsp",
                     "bound_er"});
  if (scheme == WeightScheme::Amplitude) {
    c.insert(c.end(), {"bound_lsp_amplitude", "bound_er_amplitude"});
  }
  if (scheme == WeightScheme::SquaredAmplitude) {
    c.insert(c.end(), {"bound_lsp_squared", "bound_er_squared"});
  }
  c.insert(c.end(), {"naive", "rdelta_upper"});
  return c;
}

std::optional<double> boundValue(const BoundReport& r, const std::string& name) {
  if (name == "bound_er_normalized") return r.bound_er_normalized;
  if (name == "bound_lsp_unit") return r.bound_lsp_unit;
  if (name == "bound_er_unit") return r.bound_er_unit;
  if (name == "bound_lsp_spec_sqrt") return r.bound_lsp_spec_sqrt;
  if (name == "bound_lsp_spec") return r.bound_lsp_spec;
  if (name == "bound_lsp") return r.bound_lsp;
  if (name == "bound_er") return r.bound_er;
  if (name == "bound_lsp_amplitude") return r.bound_lsp_amplitude;
  if (name == "bound_er_amplitude") return r.bound_er_amplitude;
  if (name == "bound_lsp_squared") return r.bound_lsp_squared;
  if (name == "bound_er_squared") return r.bound_er_squared;
  if (name == "naive") return r.naive;
  if (name == "rdelta_upper") return r.rdelta_upper;
  throw std::out_of_range("no such bound: " + name);
}

void validateCommon(const ExperimentConfig& cfg) {
  if (cfg.d < 2) throw std::invalid_argument("config: d must be at least 2");
  if (cfg.delta < 1) throw std::invalid_argument("config: delta must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.magnitude_noise_eps < 0.0 || cfg.magnitude_noise_eps >= 1.0) {
    throw std::invalid_argument("config: magnitude noise must be in [0, 1)");
  }
  if (cfg.methods.empty()) {
    throw std::invalid_argument("config: no methods enabled");
  }
  for (double a : cfg.alphas_deg) {
    if (!(a >= 0.0)) {
      throw std::invalid_argument("config: noise levels must be >= 0");
    }
  }
}

struct Outcome {
  BoundReport rep;
  std::optional<double> rank;
  double sup_norm = 0.0;
  std::array<std::optional<double>, 3> runtime_s;  // indexed by Method
};

template <class F>
double medianOf3Seconds(F&& run) {
  std::array<double, 3> t{};
  for (double& rep : t) {
    const auto t0 = std::chrono::steady_clock::now();
    run();
    const auto t1 = std::chrono::steady_clock::now();
    rep = std::chrono::duration<double>(t1 - t0).count();
  }
  std::sort(t.begin(), t.end());
  return t[1];
}

Outcome runInstance(const ExperimentConfig& cfg, int d, int delta,
                    double alpha_deg, std::uint64_t instance_seed,
                    bool measure_runtime) {
  const GroundTruth gt = randomSignal(d, mixSeed(instance_seed, 1));
  const MeasurementSet ms =
      applyAngularNoise(gt, bandedGraph(d, delta), alpha_deg,
                        mixSeed(instance_seed, 2), cfg.magnitude_noise_eps);
  const WeightedGraph g = buildWeights(ms, cfg.scheme);

  const SolverResult er = solveEr(g, ms.Xhat);
  const SolverResult lsp = solveLsp(g, ms.Xhat);
  std::optional<SdpResult> sdp;
  if (hasMethod(cfg, Method::Sdp)) sdp = solveSdp(g, ms.Xhat);

  Outcome out;
  out.rep = evalBounds(g, cfg.scheme, ms, er, lsp, sdp ? &*sdp : nullptr);
  out.sup_norm = er.sup_norm_z;
  if (sdp) out.rank = static_cast<double>(sdp->numerical_rank);

  if (measure_runtime) {
    for (Method m : cfg.methods) {
      const auto idx = static_cast<std::size_t>(m);
      switch (m) {
        case Method::Er:
          out.runtime_s[idx] = medianOf3Seconds([&] { solveEr(g, ms.Xhat); });
          break;
        case Method::Lsp:
          out.runtime_s[idx] = medianOf3Seconds([&] { solveLsp(g, ms.Xhat); });
          break;
        case Method::Sdp:
          out.runtime_s[idx] = medianOf3Seconds([&] { solveSdp(g, ms.Xhat); });
          break;
      }
    }
  }
  return out;
}

struct Acc {
  double sum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  int n = 0;
  void add(double v) {
    sum += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    ++n;
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

// One aggregated row for the noise and dimension sweeps.
std::vector<std::optional<double>> aggregateRow(
    const ExperimentConfig& cfg, const std::vector<std::string>& columns,
    double sweep_value, std::uint64_t sweep_bits, int d, int delta,
    double alpha_deg) {
  std::map<std::string, Acc> acc;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t instance_seed =
        mixSeed(cfg.seed, sweep_bits, static_cast<std::uint64_t>(trial));
    const Outcome o = runInstance(cfg, d, delta, alpha_deg, instance_seed,
                                  /*measure_runtime=*/true);

    if (hasMethod(cfg, Method::Er)) acc["dist_er"].add(o.rep.dist_er);
    if (hasMethod(cfg, Method::Lsp)) acc["dist_lsp"].add(o.rep.dist_lsp);
    if (hasMethod(cfg, Method::Sdp) && o.rep.dist_sdp) {
      acc["dist_sdp"].add(*o.rep.dist_sdp);
    }
    for (const std::string& b : boundColumns(cfg.scheme)) {
      if (const auto v = boundValue(o.rep, b)) acc[b].add(*v);
    }
    if (o.rank) acc["rank"].add(*o.rank);
    acc["sup_norm"].add(o.sup_norm);
    for (Method m : cfg.methods) {
      const auto v = o.runtime_s[static_cast<std::size_t>(m)];
      if (v) acc["runtime_" + toString(m)].add(*v);
    }
  }

  std::vector<std::optional<double>> row;
  row.reserve(columns.size());
  row.push_back(sweep_value);
  for (std::size_t i = 1; i < columns.size(); ++i) {
    const std::string& name = columns[i];
    const auto stat_at = [&](const std::string& base,
                             const std::string& stat) -> std::optional<double> {
      const auto it = acc.find(base);
      if (it == acc.end() || it->second.n == 0) return std::nullopt;
      if (stat == "mean") return it->second.mean();
      return stat == "min" ? it->second.mn : it->second.mx;
    };
    if (name.rfind("runtime_", 0) == 0) {
      const auto split = name.rfind('_');
      row.push_back(stat_at(name.substr(0, split), name.substr(split + 1)));
    } else {
      row.push_back(stat_at(name, "mean"));
    }
  }
  return row;
}

}  // namespace

std::vector<std::string> sweepColumns(const ExperimentConfig& cfg,
                                      const std::string& sweep_name) {
  std::vector<std::string> cols{sweep_name};
  for (Method m : {Method::Er, Method::Lsp, Method::Sdp}) {
    if (hasMethod(cfg, m)) cols.push_back("dist_" + toString(m));
  }
  const auto bounds = boundColumns(cfg.scheme);
  cols.insert(cols.end(), bounds.begin(), bounds.end());
  cols.push_back("rank");
  cols.push_back("sup_norm");
  for (Method m : {Method::Er, Method::Lsp, Method::Sdp}) {
    if (!hasMethod(cfg, m)) continue;
    const std::string base = "runtime_" + toString(m);
    cols.insert(cols.end(), {base + "_mean", base + "_min", base + "_max"});
  }
  return cols;
}

SweepTable runNoiseSweep(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.alphas_deg.empty()) cfg.alphas_deg = defaultAlphas();
  validateCommon(cfg);

  SweepTable table;
  table.columns = sweepColumns(cfg, "alpha_deg");
  for (double alpha : cfg.alphas_deg) {
    table.rows.push_back(aggregateRow(cfg, table.columns, alpha,
                                      std::bit_cast<std::uint64_t>(alpha),
                                      cfg.d, cfg.delta, alpha));
  }
  return table;
}

SweepTable runDimSweep(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.alphas_deg.empty()) cfg.alphas_deg = {2.0};
  validateCommon(cfg);
  if (cfg.dims.empty()) {
    throw std::invalid_argument("config: dimension list is empty");
  }
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    if (cfg.dims[i] < 2 || (i > 0 && cfg.dims[i] <= cfg.dims[i - 1])) {
      throw std::invalid_argument(
          "config: dimensions must be increasing and at least 2");
    }
  }

  const double alpha = cfg.alphas_deg.front();
  SweepTable table;
  table.columns = sweepColumns(cfg, "d");
  for (int d : cfg.dims) {
    table.rows.push_back(aggregateRow(cfg, table.columns,
                                      static_cast<double>(d),
                                      static_cast<std::uint64_t>(d), d,
                                      cfg.delta, alpha));
  }
  return table;
}

SweepTable runDeltaSweep(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.alphas_deg.empty()) cfg.alphas_deg = {0.01, 2.0, 40.0, 90.0};
  cfg.scheme = WeightScheme::Amplitude;  // the reported bound lives here
  cfg.methods = {Method::Er, Method::Lsp};  // no semidefinite columns
  validateCommon(cfg);
  if (cfg.deltas.empty()) {
    throw std::invalid_argument("config: band width list is empty");
  }
  for (int delta : cfg.deltas) {
    if (delta < 1) throw std::invalid_argument("config: band width must be >= 1");
  }

  SweepTable table;
  table.columns.push_back("delta");
  for (double alpha : cfg.alphas_deg) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "%g", alpha);
    table.columns.push_back(std::string("dist_er_alpha_") + tag);
    table.columns.push_back(std::string("bound_er_amplitude_alpha_") + tag);
  }

  for (int delta : cfg.deltas) {
    std::vector<std::optional<double>> row;
    row.push_back(static_cast<double>(delta));
    for (double alpha : cfg.alphas_deg) {
      Acc dist, bound;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t instance_seed =
            mixSeed(mixSeed(cfg.seed, static_cast<std::uint64_t>(delta),
                            static_cast<std::uint64_t>(trial)),
                    std::bit_cast<std::uint64_t>(alpha));
        const Outcome o = runInstance(cfg, cfg.d, delta, alpha, instance_seed,
                                      /*measure_runtime=*/false);
        dist.add(o.rep.dist_er);
        if (o.rep.bound_er_amplitude) bound.add(*o.rep.bound_er_amplitude);
      }
      row.push_back(dist.mean());
      row.push_back(bound.mean());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string toCsv(const SweepTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += table.columns[i];
  }
  out.push_back('\n');
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out.push_back(',');
      if (row[i]) {
        std::snprintf(buf, sizeof buf, "%.17g", *row[i]);
        out += buf;
      }
    }
    out.push_back('\n');
  }
  return out;
}

void emitCsv(const SweepTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emitCsv: cannot open " + path);
  const std::string body = toCsv(table);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("emitCsv: write failed for " + path);
}

}  // namespace angsync
