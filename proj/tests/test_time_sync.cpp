#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "forcefield/time_sync.hpp"
#include "forcefield/util.hpp"

using namespace forcefield;

namespace {

MissionLog log_from_times(const std::vector<double>& pose, const std::vector<double>& wind,
                          const std::vector<double>& current, const std::vector<double>& depth) {
    MissionLog log;
    log.origin = {34.0, -81.0};
    for (double t : pose) log.pose.push_back({t, {34.0, -81.0}, {}, 0.0});
    for (double t : wind) log.wind.push_back({t, 1.0, 0.0});
    for (double t : current) log.current.push_back({t, {1.0, 0.0, 0.0, 0.0}});
    for (double t : depth) log.depth.push_back({t, 2.0});
    return log;
}

std::vector<double> jittered_stream(Rng& rng, double rate, double duration) {
    std::vector<double> out;
    double period = 1.0 / rate;
    double phase = rng.uniform(0.0, period);
    for (long k = 0; phase + k * period <= duration; ++k) {
        if (rng.uniform() < 0.1) continue;  // dropouts
        out.push_back(phase + k * period + rng.uniform(-0.1 * period, 0.1 * period));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Exact maximum number of disjoint tuples under the spread rule, by
// memoized search over consumed-sample bitmasks. Only for tiny instances.
struct OptimalMatcher {
    const std::vector<double>& pose;
    const std::vector<std::vector<double>>& streams;  // exactly 3
    double slop;
    std::map<std::tuple<size_t, unsigned, unsigned, unsigned>, int> memo;

    int solve(size_t pi, unsigned m0, unsigned m1, unsigned m2) {
        if (pi >= pose.size()) return 0;
        auto key = std::make_tuple(pi, m0, m1, m2);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        int best = solve(pi + 1, m0, m1, m2);  // skip this pose
        double pt = pose[pi];
        unsigned masks[3] = {m0, m1, m2};
        for (size_t a = 0; a < streams[0].size(); ++a) {
            if (masks[0] >> a & 1) continue;
            for (size_t b = 0; b < streams[1].size(); ++b) {
                if (masks[1] >> b & 1) continue;
                for (size_t c = 0; c < streams[2].size(); ++c) {
                    if (masks[2] >> c & 1) continue;
                    double lo = std::min({pt, streams[0][a], streams[1][b], streams[2][c]});
                    double hi = std::max({pt, streams[0][a], streams[1][b], streams[2][c]});
                    if (hi - lo > slop) continue;
                    best = std::max(best, 1 + solve(pi + 1, m0 | (1u << a), m1 | (1u << b),
                                                    m2 | (1u << c)));
                }
            }
        }
        memo[key] = best;
        return best;
    }
};

}  // namespace

TEST_CASE("align: synchronous streams produce one tuple per pose") {
    MissionLog log = log_from_times({1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3});
    auto tuples = align(log, 0.1);
    REQUIRE(tuples.size() == 3);
    CHECK(tuples[0].t == 1.0);
    CHECK(tuples[2].t == 3.0);
    for (const auto& u : tuples) {
        CHECK(u.t == u.pose.t);
        CHECK(u.wind.t == u.t);
    }
}

TEST_CASE("align: any empty stream yields no tuples") {
    MissionLog log = log_from_times({1, 2, 3}, {}, {1, 2, 3}, {1, 2, 3});
    CHECK(align(log, 0.5).empty());
}

TEST_CASE("align: enumerated multi-rate example") {
    MissionLog log = log_from_times({0.0, 1.0}, {0.04, 0.96}, {0.01, 1.02}, {0.4, 1.4});
    // slop 0.5: both poses close a tuple (depth is 0.4 off the pivot)
    CHECK(align(log, 0.5).size() == 2);
    // slop 0.05: the depth candidates are 0.4 away, nothing aligns
    CHECK(align(log, 0.05).empty());
}

TEST_CASE("align rejects non-positive slop") {
    MissionLog log = log_from_times({1}, {1}, {1}, {1});
    CHECK_THROWS_AS(align(log, 0.0), InvalidSlop);
    CHECK_THROWS_AS(align(log, -1.0), InvalidSlop);
}

TEST_CASE("align ties break toward the earlier sample") {
    MissionLog log = log_from_times({1.0}, {0.9, 1.1}, {1.0}, {1.0});
    auto tuples = align(log, 0.2);
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].wind.t == 0.9);
}

TEST_CASE("align invariants on randomized multi-rate streams") {
    Rng rng(2024);
    const double rates[] = {1, 2, 3, 4, 5, 8, 10};
    for (int trial = 0; trial < 200; ++trial) {
        double duration = rng.uniform(5.0, 20.0);
        auto pick = [&] { return rates[rng.next_u64() % 7]; };
        MissionLog log = log_from_times(jittered_stream(rng, pick(), duration),
                                        jittered_stream(rng, pick(), duration),
                                        jittered_stream(rng, pick(), duration),
                                        jittered_stream(rng, pick(), duration));
        double slop = rng.uniform(0.05, 0.5);
        auto tuples = align(log, slop);

        std::set<double> used_wind, used_current, used_depth;
        double prev_t = -1e300;
        for (const auto& u : tuples) {
            double lo = std::min({u.pose.t, u.wind.t, u.current.t, u.depth.t});
            double hi = std::max({u.pose.t, u.wind.t, u.current.t, u.depth.t});
            CHECK(hi - lo <= slop);
            CHECK(u.t == u.pose.t);
            CHECK(u.t > prev_t);
            prev_t = u.t;
            CHECK(used_wind.insert(u.wind.t).second);  // injectivity
            CHECK(used_current.insert(u.current.t).second);
            CHECK(used_depth.insert(u.depth.t).second);
        }

        // determinism
        CHECK(align(log, slop).size() == tuples.size());
    }
}

TEST_CASE("align: greedy count vs exact optimal (reported, not asserted)") {
    Rng rng(77);
    int worse_than_opt_minus_1 = 0;
    const int trials = 150;
    for (int trial = 0; trial < trials; ++trial) {
        auto gen = [&](int max_n) {
            std::vector<double> v;
            int n = 1 + static_cast<int>(rng.next_u64() % max_n);
            for (int i = 0; i < n; ++i) v.push_back(rng.uniform(0.0, 10.0));
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        auto pose = gen(8);
        std::vector<std::vector<double>> others{gen(6), gen(6), gen(6)};
        double slop = rng.uniform(0.1, 1.5);
        MissionLog log = log_from_times(pose, others[0], others[1], others[2]);
        int greedy = static_cast<int>(align(log, slop).size());
        OptimalMatcher opt{pose, others, slop, {}};
        int best = opt.solve(0, 0, 0, 0);
        CHECK(greedy <= best);
        if (greedy < best - 1) ++worse_than_opt_minus_1;
    }
    MESSAGE("greedy < optimal-1 in " << worse_than_opt_minus_1 << " of " << trials
                                     << " random instances");
}
