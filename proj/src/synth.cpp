#include "angsync/synth.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "angsync/linalg.hpp"

namespace angsync {

namespace {

std::uint64_t splitmixRound(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::string toString(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Unit: return "unit";
    case WeightScheme::Amplitude: return "amplitude";
    case WeightScheme::SquaredAmplitude: return "squared";
  }
  throw std::invalid_argument("toString: unknown weight scheme");
}

WeightScheme weightSchemeFromString(const std::string& name) {
  if (name == "unit") return WeightScheme::Unit;
  if (name == "amplitude") return WeightScheme::Amplitude;
  if (name == "squared" || name == "squared-amplitude") {
    return WeightScheme::SquaredAmplitude;
  }
  throw std::invalid_argument("unknown weight scheme: " + name);
}

std::uint64_t mixSeed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = 0x243f6a8885a308d3ull;
  for (std::uint64_t v : {a, b, c}) {
    s = splitmixRound(s ^ splitmixRound(v));
  }
  return s;
}

GroundTruth randomSignal(Eigen::Index d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("randomSignal: d must be at least 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GroundTruth gt;
  gt.y.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Complex v(gauss(rng), gauss(rng));
    while (v == Complex(0.0, 0.0)) v = Complex(gauss(rng), gauss(rng));
    gt.y[i] = v;
  }
  gt.x = entrywiseSgn(gt.y);
  return gt;
}

MeasurementSet applyAngularNoise(const GroundTruth& gt,
                                 const WeightedGraph& edges, double alpha_deg,
                                 std::uint64_t seed, double magnitude_eps) {
  if (alpha_deg < 0) {
    throw std::invalid_argument("applyAngularNoise: alpha must be nonnegative");
  }
  if (magnitude_eps < 0 || magnitude_eps >= 1) {
    throw std::invalid_argument("applyAngularNoise: eps must lie in [0, 1)");
  }
  const Eigen::Index d = edges.dim();
  if (gt.x.size() != d) {
    throw std::invalid_argument("applyAngularNoise: signal size mismatch");
  }

  MeasurementSet ms{edges,
                    gt.y,
                    gt.x,
                    ComplexMatrix::Zero(d, d),
                    ComplexMatrix::Zero(d, d),
                    RealMatrix::Zero(d, d),
                    ComplexMatrix::Zero(d, d),
                    ComplexMatrix::Zero(d, d),
                    alpha_deg * M_PI / 180.0};

  std::mt19937_64 phase_rng(mixSeed(seed, 0x70686173ull));
  std::mt19937_64 mag_rng(mixSeed(seed, 0x6d61676eull));
  std::uniform_real_distribution<double> eta(-ms.alpha, ms.alpha);
  std::uniform_real_distribution<double> mag_jitter(1.0 - magnitude_eps,
                                                    1.0 + magnitude_eps);

  for (auto [a, b] : edges.edges()) {
    Complex clean = gt.x[b] * std::conj(gt.x[a]);
    Complex noise =
        ms.alpha > 0 ? std::polar(1.0, eta(phase_rng)) : Complex(1.0, 0.0);
    double mag = std::abs(gt.y[b]) * std::abs(gt.y[a]);
    double observed_mag =
        magnitude_eps > 0 ? mag * mag_jitter(mag_rng) : mag;

    ms.X(b, a) = clean;
    ms.X(a, b) = std::conj(clean);
    ms.Xhat(b, a) = clean * noise;
    ms.Xhat(a, b) = std::conj(ms.Xhat(b, a));
    ms.M(b, a) = observed_mag;
    ms.M(a, b) = observed_mag;
    ms.Y(b, a) = mag * clean;
    ms.Y(a, b) = std::conj(ms.Y(b, a));
    ms.Yhat(b, a) = observed_mag * ms.Xhat(b, a);
    ms.Yhat(a, b) = std::conj(ms.Yhat(b, a));
  }
  return ms;
}

WeightedGraph buildWeights(const MeasurementSet& ms, WeightScheme scheme) {
  const Eigen::Index d = ms.graph.dim();
  RealMatrix w = RealMatrix::Zero(d, d);
  for (auto [a, b] : ms.graph.edges()) {
    double v = 1.0;
    switch (scheme) {
      case WeightScheme::Unit:
        v = 1.0;
        break;
      case WeightScheme::Amplitude:
        v = std::abs(ms.Yhat(b, a));
        break;
      case WeightScheme::SquaredAmplitude:
        v = std::norm(ms.Yhat(b, a));
        break;
    }
    w(b, a) = v;
    w(a, b) = v;
  }
  WeightedGraph g = WeightedGraph::fromWeights(std::move(w));
  if (!isConnected(g)) {
    throw GraphError("buildWeights: weighting disconnected the graph");
  }
  return g;
}

RealMatrix weightSqrt(const WeightedGraph& g) {
  return g.weights().cwiseSqrt();
}

bool isConnected(const WeightedGraph& g) {
  const Eigen::Index d = g.dim();
  if (d <= 1) return true;
  std::vector<std::vector<int>> adj(d);
  for (auto [a, b] : g.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(d, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  Eigen::Index count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == d;
}

}  // namespace angsync
