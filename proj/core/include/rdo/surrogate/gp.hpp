#pragma once

#include <span>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace rdo {

// Squared-exponential kernel settings.
struct KernelSettings {
  Eigen::VectorXd length_scales; // one per input dimension
  double signal_variance = 1.0;
  double noise_variance = 1e-12;
};

double squared_exponential(std::span<const double> a, std::span<const double> b,
                           const KernelSettings& k);

// Default settings for a target vector: isotropic length scale, signal std
// equal to the sample std of y (1 when y is constant), noise std 1e-6 times
// the signal std.
KernelSettings default_kernel(const Eigen::VectorXd& y, Eigen::Index dimension,
                              double length_scale = 0.3);

struct GpPrediction {
  double mean = 0.0;
  double std = 0.0;
};

/// Gaussian-process regressor with a constant mean equal to the sample mean
/// of the training targets. Fitting escalates the diagonal jitter (noise
/// variance times 10, at most `max_jitter_steps` times) until the Cholesky
/// factorization succeeds.
class GPModel {
public:
  static GPModel fit(Eigen::MatrixXd X, Eigen::VectorXd y, KernelSettings kernel,
                     int max_jitter_steps = 6);

  GpPrediction predict(std::span<const double> x) const;

  const Eigen::MatrixXd& inputs() const noexcept { return X_; }
  const Eigen::VectorXd& targets() const noexcept { return y_; }
  const KernelSettings& kernel() const noexcept { return kernel_; }
  double mean_offset() const noexcept { return mean_; }
  // Noise variance actually used after jitter escalation.
  double effective_noise_variance() const noexcept { return kernel_.noise_variance; }
  int jitter_steps() const noexcept { return jitter_steps_; }

private:
  GPModel() = default;

  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  KernelSettings kernel_;
  double mean_ = 0.0;
  int jitter_steps_ = 0;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
};

double log_marginal_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelSettings& kernel);

// Isotropic length-scale search on a log grid, refined twice around the best
// node by log marginal likelihood.
KernelSettings tune_length_scale(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 KernelSettings start);

} // namespace rdo
