#include "rdcache/trace.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rdcache/errors.hpp"

namespace rdcache {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<uint64_t> parse_text(std::istream& source) {
    std::vector<uint64_t> addresses;
    std::string raw;
    size_t line_no = 0;
    while (std::getline(source, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.size() > 2 && (line.substr(0, 2) == "0x" || line.substr(0, 2) == "0X")) {
            line.remove_prefix(2);
        } else if (line == "0x" || line == "0X") {
            throw ParseError("trace line " + std::to_string(line_no) + ": malformed hex address '" + raw + "'");
        }
        uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value, 16);
        if (ec == std::errc::result_out_of_range) {
            throw ParseError("trace line " + std::to_string(line_no) + ": address does not fit in 64 bits");
        }
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw ParseError("trace line " + std::to_string(line_no) + ": malformed hex address '" + raw + "'");
        }
        addresses.push_back(value);
    }
    return addresses;
}

std::vector<uint64_t> parse_binary(std::istream& source) {
    std::vector<uint64_t> addresses;
    std::array<unsigned char, 8> word{};
    size_t have = 0;
    char byte;
    while (source.get(byte)) {
        word[have++] = static_cast<unsigned char>(byte);
        if (have == 8) {
            uint64_t value = 0;
            for (int i = 7; i >= 0; --i) value = (value << 8) | word[static_cast<size_t>(i)];
            addresses.push_back(value);
            have = 0;
        }
    }
    if (have != 0) {
        throw ParseError("binary trace truncated: trailing " + std::to_string(have) +
                         " bytes, length must be a multiple of 8");
    }
    return addresses;
}

}  // namespace

std::vector<uint64_t> parse_trace(std::istream& source, TraceFormat format) {
    return format == TraceFormat::TextHex ? parse_text(source) : parse_binary(source);
}

std::vector<uint64_t> parse_trace_file(const std::string& path, TraceFormat format) {
    std::ifstream in(path, format == TraceFormat::BinaryLe64 ? std::ios::binary : std::ios::in);
    if (!in) throw ParseError("cannot open trace file: " + path);
    return parse_trace(in, format);
}

AccessTrace to_line_trace(std::string app_id, std::span<const uint64_t> byte_addresses,
                          uint64_t line_size_bytes) {
    if (!is_power_of_two(line_size_bytes)) {
        throw ConfigError("line size must be a power of 2, got " + std::to_string(line_size_bytes));
    }
    AccessTrace trace;
    trace.app_id = std::move(app_id);
    trace.line_size_bytes = line_size_bytes;
    trace.accesses.reserve(byte_addresses.size());
    for (uint64_t byte_address : byte_addresses) {
        trace.accesses.push_back(byte_address / line_size_bytes);
    }
    return trace;
}

void write_trace(std::ostream& out, std::span<const uint64_t> addresses, TraceFormat format) {
    if (format == TraceFormat::TextHex) {
        for (uint64_t address : addresses) {
            std::ostringstream hex;
            hex << std::hex << address;
            out << "0x" << hex.str() << '\n';
        }
    } else {
        for (uint64_t address : addresses) {
            std::array<char, 8> word{};
            for (size_t i = 0; i < 8; ++i) word[i] = static_cast<char>((address >> (8 * i)) & 0xff);
            out.write(word.data(), 8);
        }
    }
}

void write_trace_file(const std::string& path, std::span<const uint64_t> addresses,
                      TraceFormat format) {
    std::ofstream out(path, format == TraceFormat::BinaryLe64 ? std::ios::binary : std::ios::out);
    if (!out) throw ParseError("cannot open output trace file: " + path);
    write_trace(out, addresses, format);
}

TraceFormat trace_format_from_name(const std::string& name) {
    if (name == "text" || name == "text-hex") return TraceFormat::TextHex;
    if (name == "binary" || name == "binary-le64" || name == "bin") return TraceFormat::BinaryLe64;
    throw ConfigError("unknown trace format: " + name);
}

std::string trace_format_name(TraceFormat format) {
    return format == TraceFormat::TextHex ? "text" : "binary";
}

}  // namespace rdcache
