#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rdcache/rdist.hpp"

namespace rdcache {

// Shifted histograms of two concurrently executing applications plus their
// combined histogram (counts summed at equal shifted distance).
struct AggregatedHistogram {
    std::array<std::string, 2> app_ids;
    std::array<ReuseHistogram, 2> per_app;
    ReuseHistogram combined;
};

// One histogram point's shift: its distance, avg span, the estimated number
// of interleaved accesses from the concurrent app, and the unique count u
// that moves r to r + u.
struct ShiftRecord {
    uint64_t distance = 0;
    uint64_t count = 0;
    double avg_span = 0.0;
    double interleaved = 0.0;  // delta = (avg_span + 1) * ratio
    uint64_t unique = 0;       // u
    uint64_t shifted = 0;      // r' = r + u
};

// n_other / n_base, the mean number of concurrent accesses interleaved per
// base-app access. Throws UndefinedError when base has no accesses.
double access_ratio(const AppProfile& base, const AppProfile& other);

// Average interleaved access count across the (avg_span + 1) gap positions.
double interleaved_span(double avg_span, double ratio);

// Estimated distinct addresses among `delta` interleaved accesses of `other`:
// the table key whose avg span is nearest delta (ties to the smaller
// distance), capped by ceil(delta) and by other's footprint. An app with no
// finite reuse contributes only unique accesses: min(round(delta), footprint).
uint64_t unique_count_lookup(const AppProfile& other, double delta);

std::vector<ShiftRecord> shift_plan(const AppProfile& base, const AppProfile& other);

// H'_base: every finite point (r, c) moved to (r + u, c); cold unchanged.
ReuseHistogram shift_histogram(const AppProfile& base, const AppProfile& other);

// Both shifted histograms and their sum. Throws UndefinedError when both
// profiles are empty.
AggregatedHistogram aggregate_pair(const AppProfile& a, const AppProfile& b);

}  // namespace rdcache
