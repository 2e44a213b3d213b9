#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rdcache/missmodel.hpp"
#include "rdcache/trace.hpp"

namespace rdcache {

struct MergedAccess {
    uint32_t owner = 0;  // index into app_ids
    uint64_t line = 0;
};

// Interleaved access stream of two applications. Restricting to one owner
// yields that application's trace in original order.
struct MergedTrace {
    std::array<std::string, 2> app_ids;
    std::vector<MergedAccess> accesses;
};

// proportional: largest-remainder schedule at the global n_a:n_b ratio, so
// every prefix deviates from the ratio by less than one access (a wins ties).
// bursts k:m: k accesses of a then m of b, repeating; leftovers appended.
struct InterleavePolicy {
    uint64_t burst_a = 0;
    uint64_t burst_b = 0;

    static InterleavePolicy proportional() { return {}; }
    static InterleavePolicy bursts(uint64_t k, uint64_t m);
    bool is_proportional() const { return burst_a == 0; }
};

MergedTrace interleave_traces(const AccessTrace& a, const AccessTrace& b,
                              const InterleavePolicy& policy = InterleavePolicy::proportional());

struct FlatSimResult {
    std::array<uint64_t, 2> hits{0, 0};
    std::array<uint64_t, 2> misses{0, 0};
};

// Exact LRU per set; set index = line mod set count. ways == kFullyAssociative
// puts all lines in one set. Addresses of different owners never alias.
FlatSimResult simulate_flat_lru(const MergedTrace& trace, uint64_t size_lines,
                                uint32_t ways = kFullyAssociative);
FlatSimResult simulate_flat_lru(const AccessTrace& trace, uint64_t size_lines,
                                uint32_t ways = kFullyAssociative);

// EveryAccess refreshes outer-level recency on every reference, matching the
// one-histogram-per-level analytical view. OnL1Miss touches an outer level
// only when the levels above missed, so inner hits leave its LRU state stale
// the way inclusive hardware does.
enum class LlcUpdatePolicy { EveryAccess, OnL1Miss };

struct SimResult {
    MissMatrix hits;    // [level][app]
    MissMatrix misses;  // [level][app]
};

// Step-wise hierarchical simulator: per-core private levels, shared outer
// levels fed in merged order, inclusion enforced by back-invalidation.
class HierarchySimulator {
public:
    HierarchySimulator(const CacheConfig& config, LlcUpdatePolicy policy);
    ~HierarchySimulator();
    HierarchySimulator(HierarchySimulator&&) noexcept;
    HierarchySimulator& operator=(HierarchySimulator&&) noexcept;

    void access(uint32_t core, uint64_t line);
    // Debug sweep: every line of an inner level is present in all outer ones.
    bool inclusion_holds() const;
    const SimResult& result() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SimResult simulate_hierarchy(const std::vector<AccessTrace>& per_core_traces,
                             const CacheConfig& config, LlcUpdatePolicy policy,
                             const InterleavePolicy& interleave = InterleavePolicy::proportional());

// Signed relative estimation error (simulated - modeled) / simulated.
// Zero when both counts are zero; undefined when only the simulated count is.
double error_rate(uint64_t simulated_misses, uint64_t modeled_misses);

}  // namespace rdcache
