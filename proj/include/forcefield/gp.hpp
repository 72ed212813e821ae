#pragma once

// Exact Gaussian Process regression on 2-D inputs.
//
// The model is a zero-mean GP with observation noise sigma_n^2. Fitting
// factorizes cov(Y) = K(X,X) + sigma_n^2 I as L L^T; predictions are
//   mean(w)     = k_*^T alpha,           alpha = cov(Y)^{-1} Y
//   variance(w) = k(w,w) - |L^{-1} k_*|^2
// and the log marginal likelihood is
//   -1/2 Y^T alpha - sum_i log L_ii - n/2 log(2 pi).
//
// Data far from zero (depth) is handled by centering: the sample mean is
// subtracted before fitting and added back to predicted means.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forcefield/telemetry.hpp"

namespace forcefield {

struct NotPositiveDefinite : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};

enum class KernelKind { Linear, SquaredExponential, Exponential, Matern32 };

const char* kernel_name(KernelKind kind);
/// Accepts canonical names plus the usual aliases (expquad/rbf, matern12).
bool kernel_from_name(std::string_view name, KernelKind& out);

struct KernelSpec {
    KernelKind kind = KernelKind::Matern32;
    double sigma_f2 = 1.0;  // output variance
    double sigma_l = 1.0;   // lengthscale, meters (ignored by Linear)
    double sigma_n2 = 0.0;  // observation noise variance
};

struct Dataset {
    std::vector<LocalPoint> X;
    std::vector<double> Y;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

double kernel_eval(const KernelSpec& k, const LocalPoint& a, const LocalPoint& b);

class GpModel {
public:
    /// Exact fit. Escalates diagonal jitter 1e-9 -> 1e-6 -> 1e-3 if the
    /// plain factorization fails; throws NotPositiveDefinite after that.
    static GpModel fit(const Dataset& data, const KernelSpec& kernel);

    /// Fit on mean-centered targets; the offset is added back by predict().
    static GpModel fit_centered(const Dataset& data, const KernelSpec& kernel);

    Prediction predict(const LocalPoint& w) const;
    double log_marginal_likelihood() const { return lml_; }

    const Dataset& data() const { return data_; }
    const KernelSpec& kernel() const { return kernel_; }
    double y_offset() const { return y_offset_; }
    double jitter() const { return jitter_; }
    const Eigen::MatrixXd& chol() const { return chol_; }

    /// Versioned text format holding kernel spec, offset, X and Y; the
    /// factorization is rebuilt on load.
    std::string save_text() const;
    void save(const std::filesystem::path& path) const;
    static GpModel load_text(std::string_view text);
    static GpModel load(const std::filesystem::path& path);

private:
    static GpModel fit_with_offset(const Dataset& data, const KernelSpec& kernel, double offset);

    Dataset data_;  // targets as given (offset not removed)
    KernelSpec kernel_;
    double y_offset_ = 0.0;
    double jitter_ = 0.0;
    double lml_ = 0.0;
    Eigen::MatrixXd chol_;     // lower factor L
    Eigen::VectorXd alpha_;    // cov(Y)^{-1} (Y - offset)
};

/// Moment-based starting point: sigma_f2 from the target variance,
/// lengthscale from the data extent, a small noise floor.
KernelSpec default_init(const Dataset& data, KernelKind kind);

/// Derivative-free maximization of the log marginal likelihood: multi-start
/// Nelder-Mead over log-parameters, starts drawn deterministically from
/// `seed`, at most `budget` objective evaluations. The returned spec never
/// has a lower LML than `init` on the full dataset.
KernelSpec optimize_hyperparams(const Dataset& data, KernelKind kind, const KernelSpec& init,
                                int budget, uint64_t seed);

struct VectorFieldGp {
    GpModel east;
    GpModel north;
};

/// Independent component GPs with a shared kernel family, each with its
/// own optimized hyperparameters. Speed and direction maps derive from the
/// component means downstream.
VectorFieldGp fit_vector_field(const std::vector<std::pair<LocalPoint, Vec2>>& samples,
                               KernelKind kind, int budget, uint64_t seed);

Vec2 predict_vector(const VectorFieldGp& gp, const LocalPoint& w);

}  // namespace forcefield
