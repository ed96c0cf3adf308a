#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "eddy/levy/sampler.hpp"
#include "eddy/levy/theta.hpp"
#include "eddy/marcus/jump_flow.hpp"

namespace eddy {

// Uniform m x m quadrature nodes y_j with weights 1/m^2, pushed forward by
// the composed jump flows X_t. Pairing against the initial values gives
// <xi(t), phi> = int xi_0(y) phi(X_t(y)) dy without ever inverting X_t.
class ParticleCloud {
 public:
  explicit ParticleCloud(int m) : m_(m) {
    if (m < 1) throw std::invalid_argument("ParticleCloud: grid size must be >= 1");
    points_.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) points_.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
  }

  int grid() const { return m_; }
  std::span<const Point> points() const { return points_; }
  double weight() const { return 1.0 / static_cast<double>(points_.size()); }

  void push(const JumpFlowMap& map) {
    for (auto& p : points_) p = map(p);
  }

  // sum_j w f(y_j) g(X(y_j)) given f(y_j) precomputed.
  template <class Fn>
  double pair(std::span<const double> initial, Fn&& phi) const {
    double s = 0.0;
    for (std::size_t j = 0; j < points_.size(); ++j) s += initial[j] * phi(points_[j]);
    return s * weight();
  }

 private:
  int m_;
  std::vector<Point> points_;
};

inline void require_sorted(std::span<const JumpEvent> events) {
  for (std::size_t i = 1; i < events.size(); ++i)
    if (events[i].time < events[i - 1].time) throw std::invalid_argument("transport: events must be sorted by time");
}

// <xi(t), phi_j> for every checkpoint t (rows) and test function phi_j
// (columns). Checkpoints must be nondecreasing.
template <class InitialFn, class TestFn>
std::vector<std::vector<double>> transport_characteristics(InitialFn&& xi0, std::span<const JumpEvent> events,
                                                           const NoiseCoefficients& theta, std::span<const TestFn> tests,
                                                           std::span<const double> checkpoints, int grid) {
  require_sorted(events);
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] < checkpoints[i - 1]) throw std::invalid_argument("transport: checkpoints must be sorted");
  ParticleCloud cloud(grid);
  std::vector<double> initial;
  initial.reserve(cloud.points().size());
  for (const auto& y : cloud.points()) initial.push_back(xi0(y));
  std::vector<std::vector<double>> out;
  std::size_t next = 0;
  for (const double t : checkpoints) {
    for (; next < events.size() && events[next].time <= t; ++next) {
      const auto& ev = events[next];
      const double w = ev.size * theta.value(ev.mode);
      if (w == 0.0) throw std::invalid_argument("transport: event mode " + ev.mode.to_string() + " outside theta support");
      cloud.push(JumpFlowMap(ev.mode, w, FlowSign::transport));
    }
    std::vector<double> row;
    row.reserve(tests.size());
    for (const auto& phi : tests) row.push_back(cloud.pair(initial, phi));
    out.push_back(std::move(row));
  }
  return out;
}

// Single test function at a single time.
template <class InitialFn, class TestFn>
double transport_characteristics(InitialFn&& xi0, std::span<const JumpEvent> events, const NoiseCoefficients& theta,
                                 TestFn phi, double t, int grid) {
  const double ts[1] = {t};
  const TestFn fs[1] = {phi};
  return transport_characteristics(xi0, events, theta, std::span<const TestFn>(fs), std::span<const double>(ts), grid)[0][0];
}

}  // namespace eddy
