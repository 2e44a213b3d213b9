#include "rdcache/rdist.hpp"

#include <unordered_map>

namespace rdcache {

namespace {

// Fenwick tree over trace positions. A position holds 1 while it is the most
// recent occurrence of its address, so a range sum counts distinct addresses.
class LastOccurrenceIndex {
public:
    explicit LastOccurrenceIndex(size_t n) : sums_(n + 1, 0) {}

    void add(size_t pos, int delta) {
        for (size_t i = pos + 1; i < sums_.size(); i += i & (~i + 1)) {
            sums_[i] += delta;
        }
    }

    // Sum of flags at positions [0, pos).
    uint64_t prefix(size_t pos) const {
        uint64_t sum = 0;
        for (size_t i = pos; i > 0; i -= i & (~i + 1)) sum += sums_[i];
        return sum;
    }

private:
    std::vector<int64_t> sums_;
};

}  // namespace

std::vector<ReuseEvent> reuse_distance_sequence(const AccessTrace& trace) {
    const size_t n = trace.accesses.size();
    std::vector<ReuseEvent> events(n);
    LastOccurrenceIndex index(n);
    std::unordered_map<uint64_t, size_t> last_pos;
    last_pos.reserve(n);

    for (size_t t = 0; t < n; ++t) {
        const uint64_t address = trace.accesses[t];
        auto it = last_pos.find(address);
        if (it == last_pos.end()) {
            events[t] = ReuseEvent{};  // cold, span 0
            last_pos.emplace(address, t);
        } else {
            const size_t prev = it->second;
            // Distinct addresses strictly between prev and t: one flag per
            // address whose latest occurrence lies in (prev, t).
            events[t].distance = index.prefix(t) - index.prefix(prev + 1);
            events[t].span = static_cast<uint64_t>(t - prev - 1);
            index.add(prev, -1);
            it->second = t;
        }
        index.add(t, +1);
    }
    return events;
}

AppProfile build_profile(const AccessTrace& trace) {
    AppProfile profile;
    profile.app_id = trace.app_id;

    std::map<uint64_t, std::pair<uint64_t, uint64_t>> span_sums;  // r -> (sum, count)
    for (const ReuseEvent& event : reuse_distance_sequence(trace)) {
        if (event.is_cold()) {
            profile.histogram.add_cold();
        } else {
            profile.histogram.add(event.distance);
            auto& [sum, count] = span_sums[event.distance];
            sum += event.span;
            count += 1;
        }
    }
    for (const auto& [distance, acc] : span_sums) {
        profile.rd_table[distance] = static_cast<double>(acc.first) / static_cast<double>(acc.second);
    }
    profile.n = profile.histogram.total;
    profile.footprint = profile.histogram.cold_count;
    return profile;
}

}  // namespace rdcache
