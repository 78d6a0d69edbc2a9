#pragma once

// Small dense operators with an arbitrary frame bound, and builders that turn
// any operator into the real-stacked form used by the oracles.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "tfr/oracle.hpp"
#include "tfr/projections.hpp"
#include "tfr/transforms.hpp"

namespace tfr::testing {

inline RealMatrix random_real(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  RealMatrix m(rows, cols);
  for (auto& v : m.values()) v = n(rng);
  return m;
}

inline TFMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  TFMatrix m(rows, cols);
  for (auto& v : m.values()) v = {n(rng), n(rng)};
  return m;
}

/// Columns satisfying Z[p] = conj(Z[(P - p) mod P]), so A^H Z is real.
inline TFMatrix random_conjugate_symmetric(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  TFMatrix m = random_complex(rows, cols, rng);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t p = 0; p < rows; ++p) {
      const std::size_t q = (rows - p) % rows;
      if (q < p) continue;
      if (q == p) {
        m(p, c) = {m(p, c).real(), 0.0};
      } else {
        m(q, c) = std::conj(m(p, c));
      }
    }
  }
  return m;
}

inline Eigen::MatrixXcd random_orthonormal_columns(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = {n(rng), n(rng)};
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

/// P x L complex matrix with A^H A = zeta I.
struct DenseAnalysis {
  Eigen::MatrixXcd a;
  double zeta = 1.0;

  DenseAnalysis(std::size_t frame_length, std::size_t coefficients, double bound, std::mt19937_64& rng)
      : a(random_orthonormal_columns(coefficients, frame_length, rng) * std::sqrt(bound)), zeta(bound) {}

  [[nodiscard]] double frame_bound() const { return zeta; }

  [[nodiscard]] TFMatrix apply(const RealMatrix& x) const {
    TFMatrix out(static_cast<std::size_t>(a.rows()), x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      Eigen::VectorXcd v(a.cols());
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = x(static_cast<std::size_t>(i), c);
      const Eigen::VectorXcd r = a * v;
      for (Eigen::Index i = 0; i < r.size(); ++i) out(static_cast<std::size_t>(i), c) = r[i];
    }
    return out;
  }

  [[nodiscard]] ComplexMatrix adjoint(const TFMatrix& z) const {
    ComplexMatrix out(static_cast<std::size_t>(a.cols()), z.cols());
    for (std::size_t c = 0; c < z.cols(); ++c) {
      const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(z.col(c).data(), a.rows());
      const Eigen::VectorXcd r = a.adjoint() * v;
      for (Eigen::Index i = 0; i < r.size(); ++i) out(static_cast<std::size_t>(i), c) = r[i];
    }
    return out;
  }
};

/// L x S complex matrix with D D^H = xi I.
struct DenseSynthesis {
  Eigen::MatrixXcd d;
  double xi = 1.0;

  DenseSynthesis(std::size_t frame_length, std::size_t coefficients, double bound, std::mt19937_64& rng)
      : d(random_orthonormal_columns(coefficients, frame_length, rng).adjoint() * std::sqrt(bound)), xi(bound) {}

  [[nodiscard]] double frame_bound() const { return xi; }

  [[nodiscard]] ComplexMatrix apply(const TFMatrix& w) const {
    ComplexMatrix out(static_cast<std::size_t>(d.rows()), w.cols());
    for (std::size_t c = 0; c < w.cols(); ++c) {
      const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(w.col(c).data(), d.cols());
      const Eigen::VectorXcd r = d * v;
      for (Eigen::Index i = 0; i < r.size(); ++i) out(static_cast<std::size_t>(i), c) = r[i];
    }
    return out;
  }

  [[nodiscard]] TFMatrix adjoint(const ComplexMatrix& x) const {
    TFMatrix out(static_cast<std::size_t>(d.cols()), x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(x.col(c).data(), d.rows());
      const Eigen::VectorXcd r = d.adjoint() * v;
      for (Eigen::Index i = 0; i < r.size(); ++i) out(static_cast<std::size_t>(i), c) = r[i];
    }
    return out;
  }
  [[nodiscard]] TFMatrix adjoint(const RealMatrix& x) const { return adjoint(to_complex(x)); }
};

// ---- real stacking: complex entries become [re..., im...] per matrix

inline Eigen::VectorXd stack(const RealMatrix& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
}

inline Eigen::VectorXd stack(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::VectorXd out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = m[static_cast<std::size_t>(i)].real();
    out[n + i] = m[static_cast<std::size_t>(i)].imag();
  }
  return out;
}

inline RealMatrix unstack_real(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols) {
  RealMatrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = v[static_cast<Eigen::Index>(i)];
  return m;
}

inline ComplexMatrix unstack_complex(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  const auto n = static_cast<Eigen::Index>(m.size());
  for (Eigen::Index i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = {v[i], v[n + i]};
  return m;
}

/// Dense real matrix of a real-linear map, probed column by column.
template <class Map>
Eigen::MatrixXd probe(Eigen::Index inputs, Map&& map) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(inputs);
  Eigen::VectorXd first = map(e);
  Eigen::MatrixXd out(first.size(), inputs);
  for (Eigen::Index j = 0; j < inputs; ++j) {
    e.setZero();
    e[j] = 1.0;
    out.col(j) = map(e);
  }
  return out;
}

/// min ||A W - Z|| over real W (L x cols) with W in `set`.
template <class AnalysisOp>
oracle::DenseProblem analysis_problem(const AnalysisOp& a, std::size_t frame_length, const TFMatrix& z,
                                      oracle::ConstraintSet set) {
  const std::size_t cols = z.cols();
  const auto n = static_cast<Eigen::Index>(frame_length * cols);
  oracle::DenseProblem p;
  p.m = probe(n, [&](const Eigen::VectorXd& x) { return stack(a.apply(unstack_real(x, frame_length, cols))); });
  p.z = stack(z);
  p.g = Eigen::MatrixXd::Identity(n, n);
  p.set = std::move(set);
  return p;
}

/// min ||W - Z|| over complex W with realify(D W) in `set`.
template <class SynthesisOp>
oracle::DenseProblem synthesis_problem(const SynthesisOp& d, const TFMatrix& z, RealMode mode,
                                       oracle::ConstraintSet set) {
  const std::size_t rows = z.rows();
  const std::size_t cols = z.cols();
  const auto n = static_cast<Eigen::Index>(2 * rows * cols);
  oracle::DenseProblem p;
  p.m = Eigen::MatrixXd::Identity(n, n);
  p.z = stack(z);
  p.g = probe(n, [&](const Eigen::VectorXd& x) {
    return stack(realify(d.apply(unstack_complex(x, rows, cols)), mode));
  });
  p.set = std::move(set);
  return p;
}

inline oracle::ConstraintSet clip_set(const ClipMask& mask, const RealMatrix& y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::VectorXd lo(n);
  Eigen::VectorXd hi(n);
  const double inf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    switch (mask.states[k]) {
      case SampleState::reliable:
        lo[i] = hi[i] = y[k];
        break;
      case SampleState::clipped_pos:
        lo[i] = y[k];
        hi[i] = inf;
        break;
      case SampleState::clipped_neg:
        lo[i] = -inf;
        hi[i] = y[k];
        break;
    }
  }
  return oracle::ConstraintSet::box(lo, hi);
}

inline oracle::ConstraintSet ball_set(const RealMatrix& y, double eps) {
  return oracle::ConstraintSet::ball(stack(y), eps);
}

}  // namespace tfr::testing
