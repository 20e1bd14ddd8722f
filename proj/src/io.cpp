#include "gazeforge/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "gazeforge/error.hpp"

namespace gazeforge::io {

namespace {

std::string to_chars_string(double v, std::chars_format fmt, int precision) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, fmt, precision);
    return std::string(buf.data(), res.ptr);
}

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

// Splits text into lines, dropping one trailing '\r' per line and a single
// final empty line.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

double parse_number(std::string_view field, std::size_t line, std::string_view column) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = field.data() + field.size();
    const auto res = std::from_chars(begin, end, v);
    if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        row_error(line, "invalid number '" + std::string(field) + "' in column " + std::string(column));
    }
    return v;
}

MovementLabel parse_label(std::string_view field, std::size_t line) {
    const auto label = parse_label_code(field);
    if (!label) row_error(line, "unknown label '" + std::string(field) + "'");
    return *label;
}

// Shared row loop: validates the header and field count, hands each row's
// fields to `row`.
template <typename RowFn>
void read_rows(std::string_view text, std::string_view header, std::size_t columns, RowFn row) {
    const std::vector<std::string_view> lines = split_lines(text);
    if (lines.empty()) throw ParseError("line 1: missing header, expected '" + std::string(header) + "'");
    if (lines[0] != header) {
        throw ParseError("line 1: header must be '" + std::string(header) + "', got '" + std::string(lines[0]) + "'");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        if (lines[i].empty()) row_error(line, "empty row");
        const auto fields = split_fields(lines[i]);
        if (fields.size() != columns) {
            row_error(line, "expected " + std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
        }
        row(fields, line);
    }
}

double read_time(std::string_view field, std::size_t line, std::optional<double>& previous) {
    const double t = parse_number(field, line, "t_ms") / 1000.0;
    if (t < 0.0) row_error(line, "negative timestamp");
    if (previous && !(t > *previous)) row_error(line, "timestamps must be strictly increasing");
    previous = t;
    return t;
}

// ---- PGM -------------------------------------------------------------------

class PgmCursor {
public:
    explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

    [[noreturn]] void fail(const std::string& what, std::size_t at) const {
        throw ParseError("pgm: " + what + " at byte " + std::to_string(at));
    }
    [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }

    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ >= bytes_.size(); }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    unsigned char byte_at(std::size_t i) const { return static_cast<unsigned char>(bytes_[i]); }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

    void skip_space_and_comments() {
        while (!done()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (!done() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint64_t read_uint(const char* what, std::uint64_t limit) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        if (done()) fail(std::string("truncated input, expected ") + what);
        std::uint64_t v = 0;
        while (!done() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
            if (v > limit) fail(std::string(what) + " overflow", start);
            ++pos_;
        }
        if (pos_ == start) fail(std::string("expected ") + what);
        if (!done() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') fail(std::string("malformed ") + what);
        return v;
    }

    void skip_single_space() {
        if (done()) fail("truncated header");
        if (!is_space(bytes_[pos_])) fail("expected whitespace after maxval");
        ++pos_;
    }

    void advance(std::size_t n) { pos_ += n; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

constexpr std::uint64_t kMaxSide = 1u << 20;
constexpr std::uint64_t kMaxPixels = 1u << 28;

}  // namespace

std::string format_fixed3(double v) {
    std::string s = to_chars_string(v, std::chars_format::fixed, 3);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string format_sig6(double v) {
    std::string s = to_chars_string(v, std::chars_format::general, 6);
    if (s == "-0") s = "0";
    return s;
}

std::string format_exact(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string write_velocity_csv(const SampledSignal& signal) {
    std::string out(kVelocityHeader);
    out += '\n';
    for (const auto& s : signal.samples) {
        out += format_fixed3(s.t * 1000.0);
        out += ',';
        out += format_sig6(s.velocity);
        out += ',';
        out += label_code(s.label);
        out += '\n';
    }
    return out;
}

SampledSignal read_velocity_csv(std::string_view text) {
    SampledSignal out;
    std::optional<double> previous;
    read_rows(text, kVelocityHeader, 3, [&](const auto& f, std::size_t line) {
        const double t = read_time(f[0], line, previous);
        const double v = parse_number(f[1], line, "velocity_deg_s");
        if (v < 0.0) row_error(line, "velocity must be >= 0");
        out.samples.push_back({t, v, parse_label(f[2], line)});
    });
    return out;
}

std::string write_gaze_csv(const GazeTrace& trace) {
    std::string out(kGazeHeader);
    out += '\n';
    for (const auto& s : trace.samples) {
        out += format_fixed3(s.t * 1000.0);
        out += ',';
        out += format_sig6(s.velocity);
        out += ',';
        out += label_code(s.label);
        out += ',';
        out += format_fixed3(s.x);
        out += ',';
        out += format_fixed3(s.y);
        out += '\n';
    }
    return out;
}

GazeTrace read_gaze_csv(std::string_view text) {
    GazeTrace out;
    std::optional<double> previous;
    read_rows(text, kGazeHeader, 5, [&](const auto& f, std::size_t line) {
        GazeSample s;
        s.t = read_time(f[0], line, previous);
        s.velocity = parse_number(f[1], line, "velocity_deg_s");
        if (s.velocity < 0.0) row_error(line, "velocity must be >= 0");
        s.label = parse_label(f[2], line);
        s.x = parse_number(f[3], line, "x_px");
        s.y = parse_number(f[4], line, "y_px");
        out.samples.push_back(s);
    });
    return out;
}

std::string write_targets_csv(const TargetSet& targets) {
    std::string out(kTargetsHeader);
    out += '\n';
    for (const auto& t : targets.points) {
        out += format_fixed3(t.x) + ',' + format_fixed3(t.y) + ',' + format_sig6(t.weight) + '\n';
    }
    return out;
}

std::string write_scene_targets_csv(const SceneTargets& scene) {
    std::string out(kFrameTargetsHeader);
    out += '\n';
    for (std::size_t f = 0; f < scene.frames.size(); ++f) {
        for (const auto& t : scene.frames[f].targets.points) {
            out += std::to_string(f) + ',' + format_fixed3(t.x) + ',' + format_fixed3(t.y) + ',' + format_sig6(t.weight) + '\n';
        }
    }
    return out;
}

std::string write_summary_csv(const ErrorSummary& summary) {
    std::string out(kSummaryHeader);
    out += '\n';
    for (const auto& [label, s] : summary.stats) {
        const std::string type(label_code(label));
        const std::array<std::pair<const char*, double>, 9> rows{{{"count", static_cast<double>(s.count)},
                                                                  {"mean", s.mean},
                                                                  {"median", s.median},
                                                                  {"q1", s.q1},
                                                                  {"q3", s.q3},
                                                                  {"whisker_low", s.whisker_low},
                                                                  {"whisker_high", s.whisker_high},
                                                                  {"min", s.min},
                                                                  {"max", s.max}}};
        for (const auto& [stat, value] : rows) out += type + ',' + stat + ',' + format_exact(value) + '\n';
    }
    return out;
}

std::string write_pooled_errors_csv(const ErrorSummary& summary) {
    std::string out(kPooledHeader);
    out += '\n';
    for (const auto& [label, values] : summary.pooled) {
        const std::string type(label_code(label));
        for (double v : values) out += type + ',' + format_exact(v) + '\n';
    }
    return out;
}

Grid read_pgm(std::string_view bytes) {
    PgmCursor cur(bytes);
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) cur.fail("bad magic", 0);
    const bool binary = bytes[1] == '5';
    cur.advance(2);
    if (!cur.done() && !PgmCursor::is_space(bytes[2]) && bytes[2] != '#') cur.fail("bad magic", 0);

    const std::uint64_t width = cur.read_uint("width", kMaxSide);
    const std::uint64_t height = cur.read_uint("height", kMaxSide);
    const std::size_t dims_end = cur.pos();
    if (width == 0 || height == 0) cur.fail("zero image dimension", dims_end);
    if (width * height > kMaxPixels) cur.fail("dimension overflow", dims_end);
    const std::uint64_t maxval = cur.read_uint("maxval", 65535);
    if (maxval == 0) cur.fail("maxval must be >= 1");

    Grid out(static_cast<std::size_t>(width), static_cast<std::size_t>(height));
    const std::size_t count = out.values.size();
    const auto denom = static_cast<double>(maxval);

    if (binary) {
        cur.skip_single_space();
        const std::size_t depth = maxval > 255 ? 2 : 1;
        if (cur.remaining() < count * depth) {
            cur.fail("truncated payload, expected " + std::to_string(count * depth) + " bytes but " +
                     std::to_string(cur.remaining()) + " remain");
        }
        const std::size_t base = cur.pos();
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t v = cur.byte_at(base + i * depth);
            if (depth == 2) v = (v << 8) | cur.byte_at(base + i * depth + 1);
            if (v > maxval) cur.fail("sample exceeds maxval", base + i * depth);
            out.values[i] = static_cast<double>(v) / denom;
        }
        cur.advance(count * depth);
        if (!cur.done()) cur.fail("unexpected trailing data");
        return out;
    }

    for (std::size_t i = 0; i < count; ++i) {
        cur.skip_space_and_comments();
        const std::size_t at = cur.pos();
        if (cur.done()) cur.fail("truncated payload, expected " + std::to_string(count) + " samples");
        const std::uint64_t v = cur.read_uint("sample", 65535);
        if (v > maxval) cur.fail("sample exceeds maxval", at);
        out.values[i] = static_cast<double>(v) / denom;
    }
    cur.skip_space_and_comments();
    if (!cur.done()) cur.fail("unexpected trailing data");
    return out;
}

std::string write_pgm(const Grid& image) {
    if (image.empty()) throw ParameterError("write_pgm: empty image");
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.values.size());
    for (double v : image.values) {
        const double clamped = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
        out += static_cast<char>(static_cast<unsigned char>(std::floor(clamped * 255.0 + 0.5)));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("output directory '" + dir.string() + "' does not exist");

    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

Grid load_pgm(const std::filesystem::path& path) {
    try {
        return read_pgm(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("frame directory '" + dir.string() + "' does not exist");

    struct Entry {
        std::optional<std::uint64_t> number;
        fs::path path;
    };
    std::vector<Entry> entries;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".pgm") continue;
        const std::string stem = e.path().stem().string();
        std::optional<std::uint64_t> number;
        const auto first = stem.find_first_of("0123456789");
        if (first != std::string::npos) {
            std::uint64_t n = 0;
            const auto res = std::from_chars(stem.data() + first, stem.data() + stem.size(), n);
            if (res.ec == std::errc()) number = n;
        }
        entries.push_back({number, e.path()});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.number != b.number) return a.number < b.number;
        return a.path.filename() < b.path.filename();
    });
    std::vector<fs::path> out;
    for (auto& e : entries) out.push_back(std::move(e.path));
    return out;
}

}  // namespace gazeforge::io
