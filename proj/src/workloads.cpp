#include "rdcache/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdcache/errors.hpp"

namespace rdcache {

namespace {

using u128 = unsigned __int128;

constexpr uint64_t kZipfMaxFootprint = uint64_t{1} << 18;
constexpr int kZipfMaxEighths = 32;  // exponent <= 4.0
constexpr uint64_t kZipfWeightScale = uint64_t{1} << 44;

u128 pow_u128(uint64_t base, unsigned exp) {
    u128 result = 1;
    for (unsigned i = 0; i < exp; ++i) result *= base;
    return result;
}

// floor(x^(1/8)) by binary search; x <= 2^126 keeps r^8 inside u128.
uint64_t root8_floor(u128 x) {
    uint64_t lo = 0, hi = uint64_t{1} << 16;
    while (lo + 1 < hi) {
        const uint64_t mid = lo + (hi - lo) / 2;
        if (pow_u128(mid, 8) <= x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

// Cumulative integer weight table for popularity ~ rank^(-eighths/8).
std::vector<uint64_t> zipf_cumulative(uint64_t footprint, int eighths) {
    const unsigned whole = static_cast<unsigned>(eighths / 8);
    const unsigned frac = static_cast<unsigned>(eighths % 8);
    std::vector<uint64_t> cumulative(footprint);
    uint64_t running = 0;
    for (uint64_t rank = 1; rank <= footprint; ++rank) {
        u128 denom = pow_u128(rank, whole);
        if (frac != 0) denom *= root8_floor(pow_u128(rank, frac));
        uint64_t weight =
            denom >= kZipfWeightScale ? 1 : std::max<uint64_t>(1, kZipfWeightScale / static_cast<uint64_t>(denom));
        running += weight;
        cumulative[rank - 1] = running;
    }
    return cumulative;
}

std::string default_app_id(const WorkloadSpec& spec, int zipf_eighths) {
    std::string id = workload_kind_name(spec.kind) + "-f" + std::to_string(spec.footprint_lines) +
                     "-n" + std::to_string(spec.length);
    if (spec.kind == WorkloadKind::ZipfReuse) id += "-x" + std::to_string(zipf_eighths);
    if (spec.kind == WorkloadKind::CyclicSweep && spec.stride != 1) {
        id += "-t" + std::to_string(spec.stride);
    }
    if (spec.kind == WorkloadKind::ZipfReuse || spec.kind == WorkloadKind::RandomUniform ||
        spec.kind == WorkloadKind::PointerChase) {
        id += "-s" + std::to_string(spec.seed);
    }
    return id;
}

}  // namespace

AccessTrace generate(const WorkloadSpec& spec) {
    if (spec.footprint_lines == 0) throw ConfigError("workload footprint must be at least 1 line");
    const double eighths_raw = spec.zipf_exponent * 8.0;
    const int zipf_eighths = static_cast<int>(std::llround(eighths_raw));

    AccessTrace trace;
    trace.line_size_bytes = kDefaultLineSizeBytes;
    trace.app_id = spec.app_id.empty() ? default_app_id(spec, zipf_eighths) : spec.app_id;
    trace.accesses.reserve(spec.length);

    switch (spec.kind) {
        case WorkloadKind::CyclicSweep: {
            if (spec.stride == 0 || std::gcd(spec.stride, spec.footprint_lines) != 1) {
                throw ConfigError("sweep stride must be coprime with the footprint");
            }
            uint64_t position = 0;
            for (uint64_t t = 0; t < spec.length; ++t) {
                trace.accesses.push_back(position);
                position = (position + spec.stride) % spec.footprint_lines;
            }
            break;
        }
        case WorkloadKind::ZipfReuse: {
            if (spec.footprint_lines > kZipfMaxFootprint) {
                throw ConfigError("zipf footprint above " + std::to_string(kZipfMaxFootprint) + " lines");
            }
            if (zipf_eighths < 0 || zipf_eighths > kZipfMaxEighths) {
                throw ConfigError("zipf exponent must lie in [0, 4]");
            }
            const std::vector<uint64_t> cumulative =
                zipf_cumulative(spec.footprint_lines, zipf_eighths);
            SplitMix64 rng(spec.seed);
            const uint64_t total = cumulative.back();
            for (uint64_t t = 0; t < spec.length; ++t) {
                const uint64_t draw = rng.below(total) + 1;
                const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), draw);
                trace.accesses.push_back(static_cast<uint64_t>(it - cumulative.begin()));
            }
            break;
        }
        case WorkloadKind::RandomUniform: {
            SplitMix64 rng(spec.seed);
            for (uint64_t t = 0; t < spec.length; ++t) {
                trace.accesses.push_back(rng.below(spec.footprint_lines));
            }
            break;
        }
        case WorkloadKind::PointerChase: {
            // Sattolo shuffle: a uniformly random single-cycle permutation,
            // so the walk revisits a line only after covering the footprint.
            std::vector<uint64_t> successor(spec.footprint_lines);
            std::iota(successor.begin(), successor.end(), 0);
            SplitMix64 rng(spec.seed);
            for (uint64_t i = spec.footprint_lines - 1; i > 0; --i) {
                std::swap(successor[i], successor[rng.below(i)]);
            }
            uint64_t current = 0;
            for (uint64_t t = 0; t < spec.length; ++t) {
                trace.accesses.push_back(current);
                current = successor[current];
            }
            break;
        }
    }
    return trace;
}

WorkloadKind workload_kind_from_name(const std::string& name) {
    if (name == "cyclic_sweep" || name == "sweep") return WorkloadKind::CyclicSweep;
    if (name == "zipf_reuse" || name == "zipf") return WorkloadKind::ZipfReuse;
    if (name == "random_uniform" || name == "uniform") return WorkloadKind::RandomUniform;
    if (name == "pointer_chase" || name == "chase") return WorkloadKind::PointerChase;
    throw ConfigError("unknown workload kind: " + name);
}

std::string workload_kind_name(WorkloadKind kind) {
    switch (kind) {
        case WorkloadKind::CyclicSweep: return "cyclic_sweep";
        case WorkloadKind::ZipfReuse: return "zipf_reuse";
        case WorkloadKind::RandomUniform: return "random_uniform";
        case WorkloadKind::PointerChase: return "pointer_chase";
    }
    return "unknown";
}

const std::vector<WorkloadPreset>& preset_suite() {
    static const std::vector<WorkloadPreset> presets = [] {
        std::vector<WorkloadPreset> list;
        auto sweep = [](uint64_t footprint, uint64_t length) {
            WorkloadSpec spec;
            spec.kind = WorkloadKind::CyclicSweep;
            spec.footprint_lines = footprint;
            spec.length = length;
            return spec;
        };
        auto zipf = [](uint64_t footprint, uint64_t length, double exponent, uint64_t seed) {
            WorkloadSpec spec;
            spec.kind = WorkloadKind::ZipfReuse;
            spec.footprint_lines = footprint;
            spec.length = length;
            spec.zipf_exponent = exponent;
            spec.seed = seed;
            return spec;
        };
        list.push_back({"sweep_a", "memory-bound", sweep(600, 120000)});
        list.push_back({"sweep_b", "memory-bound", sweep(900, 126000)});
        list.push_back({"sweep_c", "memory-bound", sweep(1400, 140000)});
        list.push_back({"sweep_d", "memory-bound", sweep(2200, 132000)});
        list.push_back({"sweep_e", "memory-bound", sweep(3300, 132000)});
        list.push_back({"zipf_a", "cpu-bound-like", zipf(768, 120000, 1.25, 101)});
        list.push_back({"zipf_b", "cpu-bound-like", zipf(1536, 130000, 1.25, 102)});
        list.push_back({"zipf_c", "memory-bound", zipf(3072, 140000, 1.0, 103)});
        list.push_back({"zipf_d", "memory-bound", zipf(6144, 150000, 0.875, 104)});
        list.push_back({"zipf_e", "memory-bound", zipf(4096, 120000, 1.0, 105)});
        return list;
    }();
    return presets;
}

WorkloadSpec preset_spec(const std::string& name) {
    for (const WorkloadPreset& preset : preset_suite()) {
        if (preset.name == name) return preset.spec;
    }
    throw ConfigError("unknown workload preset: " + name);
}

}  // namespace rdcache
