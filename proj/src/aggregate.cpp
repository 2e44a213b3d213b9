#include "rdcache/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdcache/errors.hpp"

namespace rdcache {

namespace {

// Avg-span table of one app rearranged for nearest-span queries. Distances
// sharing an avg span keep the smallest one.
class NearestSpanIndex {
public:
    explicit NearestSpanIndex(const RdTable& table) {
        entries_.reserve(table.size());
        for (const auto& [distance, span] : table) entries_.emplace_back(span, distance);
        std::sort(entries_.begin(), entries_.end());
    }

    bool empty() const { return entries_.empty(); }

    // Distance of the entry with avg span nearest `delta`; on equidistant
    // spans the smaller distance wins.
    uint64_t nearest_distance(double delta) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(),
                                   std::make_pair(delta, uint64_t{0}));
        double best_gap = std::numeric_limits<double>::infinity();
        uint64_t best_distance = 0;
        auto consider = [&](const std::pair<double, uint64_t>& entry) {
            const double gap = std::abs(entry.first - delta);
            if (gap < best_gap || (gap == best_gap && entry.second < best_distance)) {
                best_gap = gap;
                best_distance = entry.second;
            }
        };
        // Candidates: every entry tied at the two spans bracketing delta.
        for (auto fwd = it; fwd != entries_.end() && (fwd == it || fwd->first == it->first); ++fwd)
            consider(*fwd);
        if (it != entries_.begin()) {
            auto back = std::prev(it);
            const double low_span = back->first;
            for (;; --back) {
                if (back->first == low_span) consider(*back);
                if (back == entries_.begin()) break;
            }
        }
        return best_distance;
    }

private:
    std::vector<std::pair<double, uint64_t>> entries_;
};

uint64_t ceil_to_u64(double x) {
    const double c = std::ceil(x);
    if (c >= static_cast<double>(std::numeric_limits<uint64_t>::max())) {
        return std::numeric_limits<uint64_t>::max();
    }
    return static_cast<uint64_t>(c);
}

uint64_t round_half_up_to_u64(double x) {
    const double r = std::floor(x + 0.5);
    if (r >= static_cast<double>(std::numeric_limits<uint64_t>::max())) {
        return std::numeric_limits<uint64_t>::max();
    }
    return static_cast<uint64_t>(r);
}

uint64_t unique_count(const NearestSpanIndex& index, const AppProfile& other, double delta) {
    if (delta <= 0.0) return 0;
    if (index.empty()) {
        return std::min(round_half_up_to_u64(delta), other.footprint);
    }
    const uint64_t nearest = index.nearest_distance(delta);
    // delta interleaved accesses cannot hold more distinct addresses than
    // delta itself, nor more than the concurrent app owns.
    return std::min({nearest, ceil_to_u64(delta), other.footprint});
}

}  // namespace

double access_ratio(const AppProfile& base, const AppProfile& other) {
    if (base.n == 0) {
        throw UndefinedError("access ratio undefined: base app '" + base.app_id + "' has no accesses");
    }
    return static_cast<double>(other.n) / static_cast<double>(base.n);
}

double interleaved_span(double avg_span, double ratio) {
    return (avg_span + 1.0) * ratio;
}

uint64_t unique_count_lookup(const AppProfile& other, double delta) {
    return unique_count(NearestSpanIndex(other.rd_table), other, delta);
}

std::vector<ShiftRecord> shift_plan(const AppProfile& base, const AppProfile& other) {
    std::vector<ShiftRecord> plan;
    if (base.histogram.finite.empty()) return plan;

    const double ratio = other.n == 0 ? 0.0 : access_ratio(base, other);
    const NearestSpanIndex index(other.rd_table);
    plan.reserve(base.histogram.finite.size());
    for (const auto& [distance, count] : base.histogram.finite) {
        ShiftRecord record;
        record.distance = distance;
        record.count = count;
        record.avg_span = base.rd_table.at(distance);
        record.interleaved = interleaved_span(record.avg_span, ratio);
        record.unique = unique_count(index, other, record.interleaved);
        record.shifted = distance + record.unique;
        plan.push_back(record);
    }
    return plan;
}

ReuseHistogram shift_histogram(const AppProfile& base, const AppProfile& other) {
    ReuseHistogram shifted;
    for (const ShiftRecord& record : shift_plan(base, other)) {
        shifted.add(record.shifted, record.count);
    }
    shifted.add_cold(base.histogram.cold_count);
    return shifted;
}

AggregatedHistogram aggregate_pair(const AppProfile& a, const AppProfile& b) {
    if (a.n == 0 && b.n == 0) {
        throw UndefinedError("aggregate_pair: both profiles are empty");
    }
    AggregatedHistogram result;
    result.app_ids = {a.app_id, b.app_id};
    result.per_app = {shift_histogram(a, b), shift_histogram(b, a)};
    for (const ReuseHistogram& h : result.per_app) {
        for (const auto& [distance, count] : h.finite) result.combined.add(distance, count);
        result.combined.add_cold(h.cold_count);
    }
    return result;
}

}  // namespace rdcache
