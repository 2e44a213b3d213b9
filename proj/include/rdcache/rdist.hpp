#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rdcache/trace.hpp"

namespace rdcache {

// Sparse reuse-distance histogram: finite distances with occurrence counts,
// plus the count of first-touch (infinite-distance) accesses.
struct ReuseHistogram {
    std::map<uint64_t, uint64_t> finite;  // reuse distance -> occurrence count
    uint64_t cold_count = 0;
    uint64_t total = 0;

    void add(uint64_t distance, uint64_t count = 1) {
        if (count == 0) return;
        finite[distance] += count;
        total += count;
    }
    void add_cold(uint64_t count = 1) {
        cold_count += count;
        total += count;
    }
    uint64_t max_finite_distance() const {
        return finite.empty() ? 0 : finite.rbegin()->first;
    }
};

// Per reuse distance r, the mean number of accesses strictly between an
// access with that distance and the prior access to the same address.
// Always d >= r: the in-between window holds at least r distinct addresses.
using RdTable = std::map<uint64_t, double>;

struct ReuseEvent {
    static constexpr uint64_t kCold = std::numeric_limits<uint64_t>::max();
    uint64_t distance = kCold;  // distinct addresses between same-address pair
    uint64_t span = 0;          // total accesses between; 0 for cold
    bool is_cold() const { return distance == kCold; }
};

// Stand-alone locality profile of one application.
struct AppProfile {
    std::string app_id;
    ReuseHistogram histogram;
    RdTable rd_table;
    uint64_t n = 0;          // total access count, equals histogram.total
    uint64_t footprint = 0;  // distinct line addresses, equals histogram.cold_count
};

// Reuse distance and span of every access, in trace order. Runs in
// O(n log n) via an order-statistic index over last-occurrence positions.
std::vector<ReuseEvent> reuse_distance_sequence(const AccessTrace& trace);

AppProfile build_profile(const AccessTrace& trace);

}  // namespace rdcache
