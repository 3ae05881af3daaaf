#include "lapcompress/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "lapcompress/errors.hpp"

namespace lapcompress {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw NumericError("failed to format double");
    return std::string(buf, ptr);
}

double parse_double(const std::string& token, const std::string& context) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end)
        throw IoError("cannot parse number '" + token + "' (" + context + ")");
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

void atomic_write_text(const std::filesystem::path& file, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = file.parent_path();
    if (!dir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
    }
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, file, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + file.string() + "': " + ec.message());
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open '" + file.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_snapshots_csv(const std::vector<Snapshot>& snapshots,
                         const std::filesystem::path& file) {
    if (snapshots.empty()) throw ValidationError("no snapshots to write");
    const Eigen::Index n = snapshots.front().values.size();
    std::ostringstream out;
    out << "instance_id,time_index";
    for (Eigen::Index i = 0; i < n; ++i) out << ",node_" << i;
    out << "\n";
    for (const Snapshot& s : snapshots) {
        if (s.values.size() != n)
            throw ValidationError("snapshot length mismatch while writing CSV");
        out << s.instance_id << "," << s.time_index;
        for (Eigen::Index i = 0; i < n; ++i) out << "," << format_double(s.values[i]);
        out << "\n";
    }
    atomic_write_text(file, out.str());
}

std::vector<Snapshot> read_snapshots_csv(const std::filesystem::path& file) {
    std::vector<std::string> lines = read_lines(file);
    if (lines.empty()) throw IoError("'" + file.string() + "' is empty");

    std::vector<std::string> header = split_csv_line(lines[0]);
    bool has_instance = !header.empty() && header[0] == "instance_id";
    std::size_t first_node = has_instance ? 2 : 1;
    if (header.size() <= first_node || (!has_instance && header[0] != "time_index"))
        throw IoError("'" + file.string() + "': unrecognized snapshot CSV header");
    const std::size_t n = header.size() - first_node;

    std::vector<Snapshot> snapshots;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        std::vector<std::string> fields = split_csv_line(lines[li]);
        if (fields.size() != header.size())
            throw IoError(file.string() + ":" + std::to_string(li + 1) + ": expected " +
                          std::to_string(header.size()) + " columns, got " +
                          std::to_string(fields.size()));
        Snapshot s;
        std::string where = file.string() + ":" + std::to_string(li + 1);
        std::size_t col = 0;
        if (has_instance)
            s.instance_id = static_cast<int>(parse_double(fields[col++], where));
        s.time_index = static_cast<int>(parse_double(fields[col++], where));
        s.values.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            double v = parse_double(fields[col + i], where);
            if (!std::isfinite(v)) throw IoError(where + ": non-finite value");
            s.values[static_cast<Eigen::Index>(i)] = v;
        }
        snapshots.push_back(std::move(s));
    }
    if (snapshots.empty()) throw IoError("'" + file.string() + "' has no data rows");
    return snapshots;
}

void write_coords_csv(const std::vector<std::array<double, 2>>& coords,
                      const std::filesystem::path& file) {
    std::ostringstream out;
    out << "node,x,y\n";
    for (std::size_t i = 0; i < coords.size(); ++i)
        out << i << "," << format_double(coords[i][0]) << "," << format_double(coords[i][1]) << "\n";
    atomic_write_text(file, out.str());
}

std::vector<std::array<double, 2>> read_coords_csv(const std::filesystem::path& file) {
    std::vector<std::string> lines = read_lines(file);
    if (lines.empty() || split_csv_line(lines[0]).size() != 3)
        throw IoError("'" + file.string() + "': expected header node,x,y");
    std::vector<std::array<double, 2>> coords;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        std::vector<std::string> f = split_csv_line(lines[li]);
        std::string where = file.string() + ":" + std::to_string(li + 1);
        if (f.size() != 3) throw IoError(where + ": expected 3 columns");
        std::size_t node = static_cast<std::size_t>(parse_double(f[0], where));
        if (node != coords.size()) throw IoError(where + ": node indices must be 0,1,2,...");
        coords.push_back({parse_double(f[1], where), parse_double(f[2], where)});
    }
    return coords;
}

}  // namespace lapcompress
