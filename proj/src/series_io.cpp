#include "bmhd/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bmhd/io_util.hpp"

namespace bmhd {

void atomic_write_bytes(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

void atomic_write_text(const std::string& path, const std::string& content) {
    atomic_write_bytes(path, content);
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw std::runtime_error("float formatting failed");
    return std::string(buf, res.ptr);
}

namespace {

template <typename Series>
std::string render_csv(const Series& s) {
    const auto& names = Series::column_names();
    std::string out;
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c > 0) out += ',';
        out += names[c];
    }
    out += '\n';
    for (std::size_t row = 0; row < s.size(); ++row) {
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (c > 0) out += ',';
            out += format_double(s.column(c)[row]);
        }
        out += '\n';
    }
    return out;
}

template <typename Series>
Series parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty series file: " + path);

    const auto& names = Series::column_names();
    {
        std::stringstream header(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(header, cell, ',')) {
            if (c >= names.size() || cell != names[c])
                throw std::runtime_error("unexpected series column: " + cell);
            ++c;
        }
        if (c != names.size()) throw std::runtime_error("missing series columns in " + path);
    }

    Series s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t c = 0;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end && c < names.size()) {
            double value = 0.0;
            auto res = std::from_chars(p, end, value);
            if (res.ec != std::errc{}) throw std::runtime_error("bad float in series file: " + path);
            s.column(c).push_back(value);
            ++c;
            p = res.ptr;
            if (p < end && *p == ',') ++p;
        }
        if (c != names.size()) throw std::runtime_error("short row in series file: " + path);
    }
    return s;
}

}  // namespace

void write_norm_series_csv(const std::string& path, const NormSeries& series) {
    atomic_write_text(path, render_csv(series));
}

void write_split_series_csv(const std::string& path, const SplitSeries& series) {
    atomic_write_text(path, render_csv(series));
}

NormSeries read_norm_series_csv(const std::string& path) { return parse_csv<NormSeries>(path); }

SplitSeries read_split_series_csv(const std::string& path) { return parse_csv<SplitSeries>(path); }

}  // namespace bmhd
