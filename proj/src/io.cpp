#include "sllbar/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#ifndef SLLBAR_VERSION
#define SLLBAR_VERSION "unknown"
#endif

namespace sllbar {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return SLLBAR_VERSION; }

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void prepare_output_dir(const fs::path& dir, bool overwrite) {
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) throw IoError("output path '" + dir.string() + "' is not a directory");
        if (!fs::is_empty(dir, ec) && !overwrite)
            throw IoError("output directory '" + dir.string() + "' is not empty (use --overwrite)");
        return;
    }
    if (!fs::create_directories(dir, ec) || ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

namespace {

std::ofstream open_out(const fs::path& file, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(file, mode | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + file.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& file) {
    out.flush();
    if (!out) throw IoError("write failed for '" + file.string() + "'");
}

template <class T>
void put(std::ostream& out, T v) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get(std::istream& in, const fs::path& file) {
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if (!in) throw IoError("truncated snapshot '" + file.string() + "'");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

}  // namespace

std::string series_csv(const TrajectoryRecord& rec) {
    std::string s = std::string(kSeriesHeader) + "\n";
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        for (double v : {rec.times[i], rec.l2[i], rec.l4[i], rec.h1[i], rec.h2[i], rec.h3[i],
                         rec.grad_l2[i], rec.theta_arg[i]}) {
            s += format_double(v);
            s += ',';
        }
        s.back() = '\n';
    }
    return s;
}

void write_series_csv(const fs::path& file, const TrajectoryRecord& rec) {
    auto out = open_out(file);
    out << series_csv(rec);
    finish(out, file);
}

void write_table_csv(const fs::path& file, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    auto out = open_out(file);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::invalid_argument("write_table_csv: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    finish(out, file);
}

void write_json(const fs::path& file, const json& j) {
    auto out = open_out(file);
    out << j.dump(2) << '\n';
    finish(out, file);
}

void write_snapshot(const fs::path& file, const SpectralField& u) {
    auto out = open_out(file, std::ios::out | std::ios::binary);
    const Grid& g = u.grid();
    out.write("SLLB", 4);
    put<std::uint32_t>(out, 1);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(g.modes(a)));
        put<double>(out, g.length(a));
    }
    for (int c = 0; c < 3; ++c)
        for (double v : u.component(c)) put<double>(out, v);
    finish(out, file);
}

SpectralField read_snapshot(const fs::path& file, double pad_factor) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot '" + file.string() + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SLLB", 4) != 0)
        throw IoError("'" + file.string() + "' is not a snapshot (bad magic)");
    const auto version = get<std::uint32_t>(in, file);
    if (version != 1)
        throw IoError("snapshot '" + file.string() + "' has unsupported version " + std::to_string(version));
    const auto dim = get<std::uint32_t>(in, file);
    if (dim < 1 || dim > 3) throw IoError("snapshot '" + file.string() + "' has invalid dim");
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    std::array<int, 3> modes{1, 1, 1};
    for (std::uint32_t a = 0; a < dim; ++a) {
        modes[a] = static_cast<int>(get<std::uint32_t>(in, file));
        lengths[a] = get<double>(in, file);
    }
    Grid g = [&] {
        try {
            return Grid::make(static_cast<int>(dim), std::span<const double>(lengths.data(), dim),
                              std::span<const int>(modes.data(), dim), pad_factor);
        } catch (const ConfigError& e) {
            throw IoError("snapshot '" + file.string() + "' has an invalid grid: " + e.what());
        }
    }();
    SpectralField u(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : u.component(c)) v = get<double>(in, file);
    in.peek();
    if (!in.eof()) throw IoError("snapshot '" + file.string() + "' has trailing bytes");
    return u;
}

json to_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

json to_json(const TrajectoryRecord& rec, bool include_series) {
    json j{{"path", rec.path},
           {"seed", rec.seed},
           {"stop_reason", to_string(rec.stop_reason)},
           {"stop_time", rec.stop_time},
           {"steps_taken", rec.steps_taken},
           {"samples", rec.samples()}};
    if (!rec.times.empty()) {
        j["final"] = {{"t", rec.times.back()}, {"l2", rec.l2.back()}, {"h1", rec.h1.back()},
                      {"h2", rec.h2.back()}};
    }
    if (include_series) {
        j["series"] = {{"t", rec.times}, {"l2", rec.l2}, {"l4", rec.l4}, {"h1", rec.h1},
                       {"h2", rec.h2}, {"h3", rec.h3}, {"grad_l2", rec.grad_l2},
                       {"theta_arg", rec.theta_arg}};
    }
    return j;
}

}  // namespace sllbar
