#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <random>
#include <string>

#include "apclust/error.hpp"
#include "apclust/pipeline.hpp"

namespace apclust {

namespace {

// Splits one CSV record. Double quotes delimit fields that may contain commas;
// "" inside a quoted field is a literal quote.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim_lower(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<double> parse_double(const std::string& field) {
    std::string_view v = field;
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    if (v.empty()) return std::nullopt;
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size()) return std::nullopt;
    return out;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::initializer_list<std::string_view> names) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        for (auto n : names) {
            if (header[i] == n) return i;
        }
    }
    return std::nullopt;
}

}  // namespace

IngestResult ingest_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        for (auto& f : split_record(line)) header.push_back(trim_lower(std::move(f)));
        break;
    }
    if (header.empty()) throw FormatError(path.string() + ": missing header row");

    const auto lat_col = find_column(header, {"lat", "latitude"});
    const auto lon_col = find_column(header, {"lon", "longitude"});
    if (!lat_col || !lon_col) throw FormatError(path.string() + ": header must contain lat and lon columns");

    IngestResult result;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ++result.total_rows;
        const auto fields = split_record(line);
        if (fields.size() <= std::max(*lat_col, *lon_col)) {
            ++result.dropped;
            continue;
        }
        const auto lat = parse_double(fields[*lat_col]);
        const auto lon = parse_double(fields[*lon_col]);
        if (!lat || !lon) {
            ++result.dropped;
            continue;
        }
        const GeoPoint p{*lon, *lat};
        if (!is_valid(p)) {
            ++result.dropped;
            continue;
        }
        result.points.push_back(p);
    }
    if (result.points.empty()) throw InputError(path.string() + ": no valid coordinate rows");
    return result;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InputError("sample size must be at least 2");
    if (k > n) {
        throw InputError("sample size " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                         " available points");
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    if (k == n) return all;

    std::vector<std::size_t> picked;
    picked.reserve(k);
    std::mt19937_64 rng(seed);
    // selection sampling keeps the input order
    std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
    return picked;
}

std::vector<GeoPoint> sample_points(std::span<const GeoPoint> points, std::size_t k, std::uint64_t seed) {
    const auto idx = sample_indices(points.size(), k, seed);
    std::vector<GeoPoint> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(points[i]);
    return out;
}

}  // namespace apclust
