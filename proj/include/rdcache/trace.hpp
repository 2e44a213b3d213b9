#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rdcache {

inline constexpr uint64_t kDefaultLineSizeBytes = 64;

enum class TraceFormat {
    TextHex,    // one hex address per line, optional 0x prefix, '#' comments
    BinaryLe64  // consecutive little-endian unsigned 64-bit words, no header
};

// Ordered line-granularity access stream of one application. Immutable after
// construction; accesses keep file order exactly (no reordering, no dedup).
struct AccessTrace {
    std::string app_id;
    std::vector<uint64_t> accesses;  // line addresses (byte address / line size)
    uint64_t line_size_bytes = kDefaultLineSizeBytes;
};

// Reads raw byte addresses in source order. Empty source yields an empty
// sequence. Throws ParseError with a 1-based line number for malformed text;
// throws ParseError when a binary payload is not a multiple of 8 bytes.
std::vector<uint64_t> parse_trace(std::istream& source, TraceFormat format);
std::vector<uint64_t> parse_trace_file(const std::string& path, TraceFormat format);

// Maps byte addresses to line addresses by integer division. line_size_bytes
// must be a power of 2 (ConfigError otherwise); line size 1 is the identity.
AccessTrace to_line_trace(std::string app_id, std::span<const uint64_t> byte_addresses,
                          uint64_t line_size_bytes);

void write_trace(std::ostream& out, std::span<const uint64_t> addresses, TraceFormat format);
void write_trace_file(const std::string& path, std::span<const uint64_t> addresses,
                      TraceFormat format);

TraceFormat trace_format_from_name(const std::string& name);  // "text" | "binary"
std::string trace_format_name(TraceFormat format);

constexpr bool is_power_of_two(uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace rdcache
