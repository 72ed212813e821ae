#include "forcefield/gp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "forcefield/util.hpp"

namespace forcefield {

namespace {

constexpr double kJitterLadder[] = {0.0, 1e-9, 1e-6, 1e-3};
constexpr double kNoiseFloor = 1e-12;    // log-space search cannot represent zero
constexpr int kSearchSubsample = 300;    // cap on dataset size during the search

double sq(double v) { return v * v; }

void validate_spec(const KernelSpec& k) {
    bool ok = std::isfinite(k.sigma_f2) && std::isfinite(k.sigma_l) && std::isfinite(k.sigma_n2) &&
              k.sigma_f2 > 0.0 && k.sigma_n2 >= 0.0 &&
              (k.kind == KernelKind::Linear || k.sigma_l > 0.0);
    if (!ok) throw Error("kernel spec violates positivity constraints");
}

}  // namespace

const char* kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::SquaredExponential: return "sqexp";
        case KernelKind::Exponential: return "exponential";
        case KernelKind::Matern32: return "matern32";
    }
    return "unknown";
}

bool kernel_from_name(std::string_view name, KernelKind& out) {
    if (name == "linear") out = KernelKind::Linear;
    else if (name == "sqexp" || name == "expquad" || name == "rbf" || name == "se")
        out = KernelKind::SquaredExponential;
    else if (name == "exponential" || name == "matern12") out = KernelKind::Exponential;
    else if (name == "matern32") out = KernelKind::Matern32;
    else return false;
    return true;
}

double kernel_eval(const KernelSpec& k, const LocalPoint& a, const LocalPoint& b) {
    switch (k.kind) {
        case KernelKind::Linear:
            return k.sigma_f2 * (a.x * b.x + a.y * b.y);
        case KernelKind::SquaredExponential: {
            double r2 = sq(a.x - b.x) + sq(a.y - b.y);
            return k.sigma_f2 * std::exp(-r2 / (2.0 * sq(k.sigma_l)));
        }
        case KernelKind::Exponential: {
            double r = std::hypot(a.x - b.x, a.y - b.y);
            return k.sigma_f2 * std::exp(-r / k.sigma_l);
        }
        case KernelKind::Matern32: {
            double r = std::hypot(a.x - b.x, a.y - b.y);
            double u = std::numbers::sqrt3 * r / k.sigma_l;
            return k.sigma_f2 * (1.0 + u) * std::exp(-u);
        }
    }
    return 0.0;
}

GpModel GpModel::fit_with_offset(const Dataset& data, const KernelSpec& kernel, double offset) {
    if (data.X.size() != data.Y.size())
        throw DimensionMismatch("X and Y sizes differ");
    if (data.X.empty()) throw DimensionMismatch("dataset is empty");
    validate_spec(kernel);
    for (size_t i = 0; i < data.X.size(); ++i)
        if (!std::isfinite(data.X[i].x) || !std::isfinite(data.X[i].y) || !std::isfinite(data.Y[i]))
            throw DimensionMismatch("dataset contains non-finite entries");

    const int n = static_cast<int>(data.X.size());
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double v = kernel_eval(kernel, data.X[i], data.X[j]);
            K(i, j) = v;
            K(j, i) = v;
        }
        K(i, i) += kernel.sigma_n2;
    }

    GpModel m;
    Eigen::LLT<Eigen::MatrixXd> llt;
    bool ok = false;
    for (double jitter : kJitterLadder) {
        llt.compute(K + jitter * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) {
            m.jitter_ = jitter;
            ok = true;
            break;
        }
    }
    if (!ok) throw NotPositiveDefinite("covariance not positive definite after jitter ladder");

    Eigen::VectorXd yc(n);
    for (int i = 0; i < n; ++i) yc(i) = data.Y[i] - offset;

    m.data_ = data;
    m.kernel_ = kernel;
    m.y_offset_ = offset;
    m.chol_ = llt.matrixL();
    m.alpha_ = llt.solve(yc);
    m.lml_ = -0.5 * yc.dot(m.alpha_) - m.chol_.diagonal().array().log().sum() -
             0.5 * n * std::log(2.0 * std::numbers::pi);
    return m;
}

GpModel GpModel::fit(const Dataset& data, const KernelSpec& kernel) {
    return fit_with_offset(data, kernel, 0.0);
}

GpModel GpModel::fit_centered(const Dataset& data, const KernelSpec& kernel) {
    if (data.Y.empty()) throw DimensionMismatch("dataset is empty");
    double mean = std::accumulate(data.Y.begin(), data.Y.end(), 0.0) / data.Y.size();
    return fit_with_offset(data, kernel, mean);
}

Prediction GpModel::predict(const LocalPoint& w) const {
    const int n = static_cast<int>(data_.X.size());
    Eigen::VectorXd ks(n);
    for (int i = 0; i < n; ++i) ks(i) = kernel_eval(kernel_, data_.X[i], w);
    double mean = y_offset_ + ks.dot(alpha_);
    Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(ks);
    double variance = kernel_eval(kernel_, w, w) - v.squaredNorm();
    if (variance < 0.0) variance = 0.0;  // numerical clamp, magnitude < 1e-9 in practice
    return {mean, variance};
}

std::string GpModel::save_text() const {
    std::string out = "forcefield-gp v1\n";
    out += "kernel,";
    out += kernel_name(kernel_.kind);
    out += ',' + fmt_double(kernel_.sigma_f2) + ',' + fmt_double(kernel_.sigma_l) + ',' +
           fmt_double(kernel_.sigma_n2) + '\n';
    out += "offset," + fmt_double(y_offset_) + '\n';
    out += "n," + std::to_string(data_.X.size()) + '\n';
    for (size_t i = 0; i < data_.X.size(); ++i)
        out += fmt_double(data_.X[i].x) + ',' + fmt_double(data_.X[i].y) + ',' +
               fmt_double(data_.Y[i]) + '\n';
    return out;
}

void GpModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << save_text();
    if (!out) throw IoError("write failed: " + path.string());
}

GpModel GpModel::load_text(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n'))
        if (!trim(line).empty()) lines.push_back(trim(line));
    if (lines.size() < 4 || lines[0] != "forcefield-gp v1")
        throw FormatError("bad model header");

    auto ktok = split(lines[1], ',');
    KernelSpec spec;
    if (ktok.size() != 5 || ktok[0] != "kernel" || !kernel_from_name(ktok[1], spec.kind) ||
        !parse_double(ktok[2], spec.sigma_f2) || !parse_double(ktok[3], spec.sigma_l) ||
        !parse_double(ktok[4], spec.sigma_n2))
        throw FormatError("bad kernel line");

    auto otok = split(lines[2], ',');
    double offset = 0.0;
    if (otok.size() != 2 || otok[0] != "offset" || !parse_double(otok[1], offset))
        throw FormatError("bad offset line");

    auto ntok = split(lines[3], ',');
    uint64_t n = 0;
    if (ntok.size() != 2 || ntok[0] != "n" || !parse_u64(ntok[1], n))
        throw FormatError("bad count line");
    if (lines.size() != 4 + n) throw FormatError("row count does not match header");

    Dataset data;
    for (uint64_t i = 0; i < n; ++i) {
        auto rtok = split(lines[4 + i], ',');
        double x, y, t;
        if (rtok.size() != 3 || !parse_double(rtok[0], x) || !parse_double(rtok[1], y) ||
            !parse_double(rtok[2], t))
            throw FormatError("bad data row");
        data.X.push_back({x, y});
        data.Y.push_back(t);
    }
    return fit_with_offset(data, spec, offset);
}

GpModel GpModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_text(buf.str());
}

KernelSpec default_init(const Dataset& data, KernelKind kind) {
    double n = static_cast<double>(data.Y.size());
    double mean = std::accumulate(data.Y.begin(), data.Y.end(), 0.0) / std::max(n, 1.0);
    double var = 0.0;
    for (double y : data.Y) var += sq(y - mean);
    var = std::max(var / std::max(n, 1.0), 1e-6);

    double x_min = data.X.front().x, x_max = x_min;
    double y_min = data.X.front().y, y_max = y_min;
    for (const auto& p : data.X) {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    }
    double span = std::hypot(x_max - x_min, y_max - y_min);

    KernelSpec spec;
    spec.kind = kind;
    spec.sigma_f2 = var;
    spec.sigma_l = std::max(span / 4.0, 1e-3);
    spec.sigma_n2 = std::max(0.01 * var, 1e-8);
    if (kind == KernelKind::Linear) {
        double msq = 0.0;
        for (const auto& p : data.X) msq += sq(p.x) + sq(p.y);
        msq /= std::max(n, 1.0);
        spec.sigma_f2 = var / std::max(msq, 1e-6);
    }
    return spec;
}

namespace {

// ---- Nelder-Mead over log-parameters -------------------------------------

struct Objective {
    const Dataset& data;
    KernelKind kind;
    int budget;
    int used = 0;

    bool stationary() const { return kind != KernelKind::Linear; }
    int dims() const { return stationary() ? 3 : 2; }

    KernelSpec to_spec(const Eigen::VectorXd& theta) const {
        KernelSpec s;
        s.kind = kind;
        s.sigma_f2 = std::exp(theta(0));
        if (stationary()) {
            s.sigma_l = std::exp(theta(1));
            s.sigma_n2 = std::exp(theta(2));
        } else {
            s.sigma_l = 1.0;
            s.sigma_n2 = std::exp(theta(1));
        }
        return s;
    }

    Eigen::VectorXd to_theta(const KernelSpec& s) const {
        Eigen::VectorXd t(dims());
        t(0) = std::log(std::max(s.sigma_f2, kNoiseFloor));
        if (stationary()) {
            t(1) = std::log(std::max(s.sigma_l, kNoiseFloor));
            t(2) = std::log(std::max(s.sigma_n2, kNoiseFloor));
        } else {
            t(1) = std::log(std::max(s.sigma_n2, kNoiseFloor));
        }
        return t;
    }

    double eval(const Eigen::VectorXd& theta) {
        ++used;
        try {
            return GpModel::fit(data, to_spec(theta)).log_marginal_likelihood();
        } catch (const Error&) {
            return -std::numeric_limits<double>::infinity();
        }
    }

    bool exhausted() const { return used >= budget; }
};

// Maximizes obj within its remaining budget. Returns the best vertex.
std::pair<Eigen::VectorXd, double> nelder_mead(Objective& obj, const Eigen::VectorXd& start,
                                               int max_evals) {
    const int d = static_cast<int>(start.size());
    const int cap = obj.used + max_evals;
    std::vector<Eigen::VectorXd> simplex;
    std::vector<double> value;
    simplex.push_back(start);
    value.push_back(obj.eval(start));
    for (int i = 0; i < d && obj.used < cap && !obj.exhausted(); ++i) {
        Eigen::VectorXd p = start;
        p(i) += 1.0;
        simplex.push_back(p);
        value.push_back(obj.eval(p));
    }

    auto order = [&] {
        std::vector<int> idx(simplex.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return value[a] > value[b]; });
        std::vector<Eigen::VectorXd> s2;
        std::vector<double> v2;
        for (int i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(value[i]);
        }
        simplex.swap(s2);
        value.swap(v2);
    };

    while (simplex.size() == static_cast<size_t>(d) + 1 && obj.used < cap && !obj.exhausted()) {
        order();
        if (std::isfinite(value[0]) && std::isfinite(value[d]) && value[0] - value[d] < 1e-10) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < d; ++i) centroid += simplex[i];
        centroid /= d;

        Eigen::VectorXd xr = centroid + (centroid - simplex[d]);
        double fr = obj.eval(xr);
        if (fr > value[0]) {
            if (obj.used < cap && !obj.exhausted()) {
                Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[d]);
                double fe = obj.eval(xe);
                if (fe > fr) {
                    simplex[d] = xe;
                    value[d] = fe;
                    continue;
                }
            }
            simplex[d] = xr;
            value[d] = fr;
        } else if (fr > value[d - 1]) {
            simplex[d] = xr;
            value[d] = fr;
        } else {
            if (obj.used >= cap || obj.exhausted()) break;
            Eigen::VectorXd xc = centroid + 0.5 * (simplex[d] - centroid);
            double fc = obj.eval(xc);
            if (fc > value[d]) {
                simplex[d] = xc;
                value[d] = fc;
            } else {
                for (int i = 1; i <= d && obj.used < cap && !obj.exhausted(); ++i) {
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
                    value[i] = obj.eval(simplex[i]);
                }
            }
        }
    }

    order();
    return {simplex[0], value[0]};
}

Dataset subsample(const Dataset& data, size_t cap, uint64_t seed) {
    if (data.X.size() <= cap) return data;
    std::vector<size_t> idx(data.X.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(splitmix64(seed ^ 0x5ba3517eULL));
    for (size_t i = idx.size() - 1; i > 0; --i) {
        size_t j = static_cast<size_t>(rng.next_u64() % (i + 1));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    Dataset out;
    for (size_t i : idx) {
        out.X.push_back(data.X[i]);
        out.Y.push_back(data.Y[i]);
    }
    return out;
}

double lml_or_ninf(const Dataset& data, const KernelSpec& spec) {
    try {
        return GpModel::fit(data, spec).log_marginal_likelihood();
    } catch (const Error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

}  // namespace

KernelSpec optimize_hyperparams(const Dataset& data, KernelKind kind, const KernelSpec& init,
                                int budget, uint64_t seed) {
    if (budget < 1) throw Error("optimizer budget must be >= 1");
    if (data.X.empty()) throw DimensionMismatch("dataset is empty");

    // Large datasets are searched on a deterministic subsample; the final
    // comparison against the init spec happens on the full data below.
    Dataset search = subsample(data, kSearchSubsample, seed);

    Objective obj{search, kind, budget};
    Eigen::VectorXd theta0 = obj.to_theta(init);

    const int n_starts = 3;
    Rng rng(splitmix64(seed));
    std::vector<Eigen::VectorXd> starts{theta0};
    for (int s = 1; s < n_starts; ++s) {
        Eigen::VectorXd p = theta0;
        for (int i = 0; i < p.size(); ++i) p(i) += rng.uniform(-1.5, 1.5);
        starts.push_back(p);
    }

    Eigen::VectorXd best = theta0;
    double best_val = -std::numeric_limits<double>::infinity();
    int per_start = std::max(budget / n_starts, 1);
    for (const auto& s : starts) {
        if (obj.exhausted()) break;
        auto [x, v] = nelder_mead(obj, s, per_start);
        if (v > best_val) {
            best = x;
            best_val = v;
        }
    }

    // Monotone guarantee on the full dataset.
    KernelSpec candidate = obj.to_spec(best);
    double full_init = lml_or_ninf(data, init);
    double full_cand = lml_or_ninf(data, candidate);
    return full_cand >= full_init ? candidate : init;
}

VectorFieldGp fit_vector_field(const std::vector<std::pair<LocalPoint, Vec2>>& samples,
                               KernelKind kind, int budget, uint64_t seed) {
    if (samples.empty()) throw DimensionMismatch("no samples");
    Dataset east, north;
    for (const auto& [p, v] : samples) {
        east.X.push_back(p);
        east.Y.push_back(v.e);
        north.X.push_back(p);
        north.Y.push_back(v.n);
    }
    KernelSpec ke = optimize_hyperparams(east, kind, default_init(east, kind), budget,
                                         splitmix64(seed ^ 0xeaULL));
    KernelSpec kn = optimize_hyperparams(north, kind, default_init(north, kind), budget,
                                         splitmix64(seed ^ 0x40ULL));
    return {GpModel::fit(east, ke), GpModel::fit(north, kn)};
}

Vec2 predict_vector(const VectorFieldGp& gp, const LocalPoint& w) {
    return {gp.east.predict(w).mean, gp.north.predict(w).mean};
}

}  // namespace forcefield
