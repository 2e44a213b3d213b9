#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdcache/trace.hpp"

namespace rdcache {

enum class WorkloadKind { CyclicSweep, ZipfReuse, RandomUniform, PointerChase };

// Deterministic synthetic trace recipe. Identical specs generate identical
// traces on every platform: generators use integer arithmetic only, and the
// Zipf exponent is quantized to eighths so its weight table stays integral.
struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::CyclicSweep;
    uint64_t footprint_lines = 1;
    uint64_t length = 0;
    uint64_t seed = 1;
    uint64_t stride = 1;          // cyclic_sweep: step through the footprint
    double zipf_exponent = 1.0;   // zipf_reuse popularity skew
    std::string app_id;           // empty -> descriptive default
};

AccessTrace generate(const WorkloadSpec& spec);

WorkloadKind workload_kind_from_name(const std::string& name);
std::string workload_kind_name(WorkloadKind kind);

// Fixed suite of desk-scale workloads: streaming sweeps with footprints well
// past typical shared-cache sizes ("memory-bound") and skewed-popularity
// mixes whose hot set fits a small cache ("cpu-bound-like").
struct WorkloadPreset {
    std::string name;
    std::string category;
    WorkloadSpec spec;
};
const std::vector<WorkloadPreset>& preset_suite();
WorkloadSpec preset_spec(const std::string& name);

// Integer-only seeded generator used by the workload kinds and the tests.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t bound) { return next() % bound; }
};

}  // namespace rdcache
