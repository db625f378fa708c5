// csv.hpp — Stable CSV emission and content checksums for run artifacts

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eigencorr {

// Decimal rendering with 12 significant digits and '.' separator, the fixed
// on-disk number format for every CSV cell.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Accumulates a header row plus data rows and renders LF-terminated CSV text.
class CsvBuilder {
public:
    explicit CsvBuilder(std::initializer_list<std::string_view> columns) : n_columns_(columns.size()) {
        if (n_columns_ == 0) throw std::invalid_argument("csv: need at least one column");
        bool first = true;
        for (const auto c : columns) {
            if (!first) text_ += ',';
            text_ += c;
            first = false;
        }
        text_ += '\n';
    }

    CsvBuilder& field(double v) { return raw_field(format_number(v)); }
    CsvBuilder& field(long long v) { return raw_field(std::to_string(v)); }
    CsvBuilder& field(std::size_t v) { return raw_field(std::to_string(v)); }
    CsvBuilder& blank_field() { return raw_field(""); }

    void end_row() {
        if (row_fields_ != n_columns_)
            throw std::logic_error("csv: row width does not match header");
        text_ += '\n';
        row_fields_ = 0;
    }

    const std::string& text() const {
        if (row_fields_ != 0) throw std::logic_error("csv: unterminated row");
        return text_;
    }

private:
    CsvBuilder& raw_field(std::string_view cell) {
        if (row_fields_ >= n_columns_) throw std::logic_error("csv: row width does not match header");
        if (row_fields_ > 0) text_ += ',';
        text_ += cell;
        ++row_fields_;
        return *this;
    }

    std::size_t n_columns_ = 0;
    std::size_t row_fields_ = 0;
    std::string text_;
};

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

inline std::string hex_u64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace eigencorr
