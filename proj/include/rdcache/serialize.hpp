#pragma once

#include <string>

#include <json.hpp>

#include "rdcache/aggregate.hpp"
#include "rdcache/missmodel.hpp"
#include "rdcache/optimizer.hpp"
#include "rdcache/rdist.hpp"
#include "rdcache/simulator.hpp"
#include "rdcache/workloads.hpp"

namespace rdcache {

// Document schemas are versioned; loaders validate the embedded invariants
// (count conservation, matching histogram/table keys) and accept either a
// bare document or a report envelope wrapping it under "result".

inline constexpr const char* kProfileSchema = "rdcache-profile-v1";
inline constexpr const char* kAggregateSchema = "rdcache-aggregate-v1";
inline constexpr const char* kConfigSchema = "rdcache-config-v1";
inline constexpr const char* kSpaceSchema = "rdcache-space-v1";
inline constexpr const char* kWorkloadSchema = "rdcache-workload-v1";
inline constexpr const char* kReportSchema = "rdcache-report-v1";

nlohmann::json profile_to_json(const AppProfile& profile);
AppProfile profile_from_json(const nlohmann::json& doc);

nlohmann::json aggregate_to_json(const AggregatedHistogram& aggregated);
AggregatedHistogram aggregate_from_json(const nlohmann::json& doc);

nlohmann::json cache_config_to_json(const CacheConfig& config);
CacheConfig cache_config_from_json(const nlohmann::json& doc);

nlohmann::json design_space_to_json(const DesignSpace& space);
DesignSpace design_space_from_json(const nlohmann::json& doc);

nlohmann::json workload_spec_to_json(const WorkloadSpec& spec);
WorkloadSpec workload_spec_from_json(const nlohmann::json& doc);

// Model estimate and simulator outcome share one field layout so validation
// diffs line up level by level.
nlohmann::json eval_to_json(const EvalResult& eval, const CacheConfig& config,
                            const std::array<std::string, 2>& app_ids,
                            const std::array<uint64_t, 2>& access_counts);
nlohmann::json sim_to_json(const SimResult& sim, const CacheConfig& config,
                           const std::array<std::string, 2>& app_ids);

nlohmann::json design_point_to_json(const DesignPoint& point);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

// Strips a report envelope, if any, exposing the payload document.
const nlohmann::json& payload_of(const nlohmann::json& doc);

std::string fnv1a64_hex(const std::string& bytes);
std::string fnv1a64_file_hex(const std::string& path);

}  // namespace rdcache
