#include "forcefield/time_sync.hpp"

#include <algorithm>
#include <cmath>

namespace forcefield {

namespace {

// Nearest-unconsumed lookup over one sorted stream.
template <class T>
class StreamPicker {
public:
    explicit StreamPicker(const std::vector<T>& samples)
        : samples_(samples), consumed_(samples.size(), false) {}

    // Index of the unconsumed sample nearest to t, or -1 if none remain.
    // Ties in |dt| resolve to the earlier sample.
    int nearest(double t) const {
        int n = static_cast<int>(samples_.size());
        if (first_alive_ >= n) return -1;
        int right = static_cast<int>(
            std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const T& s, double v) { return s.t < v; }) -
            samples_.begin());
        while (right < n && consumed_[right]) ++right;
        int left = std::min(right, n) - 1;
        while (left >= first_alive_ && consumed_[left]) --left;

        if (left < first_alive_ && right >= n) return -1;
        if (left < first_alive_) return right;
        if (right >= n) return left;
        double dl = t - samples_[left].t;
        double dr = samples_[right].t - t;
        return dl <= dr ? left : right;  // equal distances favor the earlier sample
    }

    void consume(int i) {
        consumed_[i] = true;
        while (first_alive_ < static_cast<int>(samples_.size()) && consumed_[first_alive_])
            ++first_alive_;
    }

    const T& at(int i) const { return samples_[i]; }

private:
    const std::vector<T>& samples_;
    std::vector<bool> consumed_;
    int first_alive_ = 0;
};

}  // namespace

std::vector<AlignedTuple> align(const MissionLog& log, double slop) {
    if (!(slop > 0.0)) throw InvalidSlop("slop must be positive");

    StreamPicker<WindSample> wind(log.wind);
    StreamPicker<CurrentQuad> current(log.current);
    StreamPicker<DepthSample> depth(log.depth);

    std::vector<AlignedTuple> out;
    for (const auto& p : log.pose) {
        int wi = wind.nearest(p.t);
        int ci = current.nearest(p.t);
        int di = depth.nearest(p.t);
        if (wi < 0 || ci < 0 || di < 0) continue;
        // emit on total tuple spread, which also bounds every |dt| to the pivot
        double lo = std::min({p.t, wind.at(wi).t, current.at(ci).t, depth.at(di).t});
        double hi = std::max({p.t, wind.at(wi).t, current.at(ci).t, depth.at(di).t});
        if (hi - lo > slop) continue;
        out.push_back({p.t, p, wind.at(wi), current.at(ci), depth.at(di)});
        wind.consume(wi);
        current.consume(ci);
        depth.consume(di);
    }
    return out;
}

}  // namespace forcefield
