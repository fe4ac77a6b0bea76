#include "sarcd/raster.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <numeric>
#include <string>

#include "sarcd/errors.hpp"

namespace sarcd {

namespace {

std::mutex& warning_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& warning_handler() {
    static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
}

bool is_pnm_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Cursor over a PNM header: skips whitespace and '#' comments between tokens.
class PnmHeader {
public:
    explicit PnmHeader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    void skip_space() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (is_pnm_space(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t number(const char* what) {
        skip_space();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFu) throw ParseError(std::string("PGM ") + what + " too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("PGM header: expected ") + what, start);
        return value;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance() noexcept { ++pos_; }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 2;
};

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32_le(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
}

constexpr std::array<unsigned char, 4> kSarfMagic{'S', 'A', 'R', 'F'};

struct PgmData {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t maxval = 0;
    std::vector<std::uint16_t> samples;
};

PgmData parse_pgm(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw ParseError("not a binary PGM (expected magic \"P5\")", 0);
    PnmHeader header(bytes);
    PgmData pgm;
    pgm.width = header.number("width");
    pgm.height = header.number("height");
    const std::size_t maxval_offset = header.pos();
    pgm.maxval = header.number("maxval");
    if (pgm.width == 0 || pgm.height == 0) throw ParseError("PGM dimensions must be positive", maxval_offset);
    if (pgm.maxval == 0 || pgm.maxval > 65535) throw ParseError("PGM maxval must be in [1, 65535]", maxval_offset);
    if (header.pos() >= bytes.size() || !is_pnm_space(bytes[header.pos()]))
        throw ParseError("PGM header: expected single whitespace before raster", header.pos());
    header.advance();

    const std::size_t bytes_per_sample = pgm.maxval > 255 ? 2 : 1;
    const std::size_t count = pgm.width * pgm.height;
    const std::size_t available = bytes.size() - header.pos();
    if (available < count * bytes_per_sample)
        throw LengthError("PGM raster truncated: expected " + std::to_string(count * bytes_per_sample) +
                          " bytes, found " + std::to_string(available));
    pgm.samples.resize(count);
    const unsigned char* data = bytes.data() + header.pos();
    for (std::size_t i = 0; i < count; ++i) {
        pgm.samples[i] = bytes_per_sample == 1
                             ? data[i]
                             : static_cast<std::uint16_t>((data[2 * i] << 8) | data[2 * i + 1]);
        if (pgm.samples[i] > pgm.maxval)
            throw ParseError("PGM sample exceeds maxval", header.pos() + i * bytes_per_sample);
    }
    return pgm;
}

void write_pgm_bytes(std::size_t width, std::size_t height, std::span<const std::uint8_t> pixels,
                     const std::filesystem::path& path) {
    const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), pixels.begin(), pixels.end());
    write_file(path, bytes);
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(warning_mutex());
    auto previous = std::move(warning_handler());
    warning_handler() = std::move(handler);
    return previous;
}

void warn(std::string_view message) {
    std::lock_guard lock(warning_mutex());
    if (warning_handler()) warning_handler()(message);
}

Raster::Raster(std::size_t width, std::size_t height)
    : width_(width), height_(height), values_(width * height, 0.0) {}

Raster::Raster(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != width_ * height_)
        throw ParameterError("raster values length " + std::to_string(values_.size()) + " != " +
                             std::to_string(width_) + "x" + std::to_string(height_));
    for (double v : values_)
        if (!std::isfinite(v)) throw ParameterError("raster values must be finite");
}

Raster Raster::filled(std::size_t width, std::size_t height, double value) {
    return Raster(width, height, std::vector<double>(width * height, value));
}

double Raster::clamped(std::ptrdiff_t row, std::ptrdiff_t col) const noexcept {
    const auto h = static_cast<std::ptrdiff_t>(height_);
    const auto w = static_cast<std::ptrdiff_t>(width_);
    row = std::clamp<std::ptrdiff_t>(row, 0, h - 1);
    col = std::clamp<std::ptrdiff_t>(col, 0, w - 1);
    return values_[static_cast<std::size_t>(row * w + col)];
}

BinaryMap::BinaryMap(std::size_t width, std::size_t height)
    : width_(width), height_(height), labels_(width * height, 0) {}

BinaryMap::BinaryMap(std::size_t width, std::size_t height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (labels_.size() != width_ * height_) throw ParameterError("binary map length mismatch");
    for (auto l : labels_)
        if (l > 1) throw ParameterError("binary map labels must be 0 or 1");
}

std::size_t BinaryMap::count_changed() const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

Raster load_pgm(const std::filesystem::path& path) {
    const PgmData pgm = parse_pgm(read_file(path));
    std::vector<double> values(pgm.samples.size());
    const double scale = static_cast<double>(pgm.maxval);
    std::transform(pgm.samples.begin(), pgm.samples.end(), values.begin(),
                   [scale](std::uint16_t s) { return static_cast<double>(s) / scale; });
    return Raster(pgm.width, pgm.height, std::move(values));
}

void save_pgm(const Raster& raster, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(raster.size());
    const auto values = raster.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw RangeError("PGM output requires values in [0, 1], got " + std::to_string(v));
        pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
    write_pgm_bytes(raster.width(), raster.height(), pixels, path);
}

void save_f32(const Raster& raster, const std::filesystem::path& path) {
    std::vector<unsigned char> bytes(kSarfMagic.begin(), kSarfMagic.end());
    bytes.reserve(16 + 4 * raster.size());
    put_u32_le(bytes, static_cast<std::uint32_t>(raster.width()));
    put_u32_le(bytes, static_cast<std::uint32_t>(raster.height()));
    put_u32_le(bytes, 0);
    for (double v : raster.values()) put_u32_le(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    write_file(path, bytes);
}

Raster load_f32(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < 16) throw LengthError("SARF header truncated");
    if (!std::equal(kSarfMagic.begin(), kSarfMagic.end(), bytes.begin()))
        throw ParseError("bad SARF magic", 0);
    const std::size_t width = read_u32_le(bytes.data() + 4);
    const std::size_t height = read_u32_le(bytes.data() + 8);
    const std::size_t expected = 16 + 4 * width * height;
    if (bytes.size() != expected)
        throw LengthError("SARF payload size mismatch: expected " + std::to_string(expected) + " bytes, found " +
                          std::to_string(bytes.size()));
    std::vector<double> values(width * height);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = std::bit_cast<float>(read_u32_le(bytes.data() + 16 + 4 * i));
    return Raster(width, height, std::move(values));
}

Raster load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() >= 2 && magic[0] == 'P' && magic[1] == '5') return load_pgm(path);
    return load_f32(path);
}

void save_binary_pgm(const BinaryMap& map, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(map.size());
    std::transform(map.labels().begin(), map.labels().end(), pixels.begin(),
                   [](std::uint8_t l) { return static_cast<std::uint8_t>(l ? 255 : 0); });
    write_pgm_bytes(map.width(), map.height(), pixels, path);
}

BinaryMap load_binary_pgm(const std::filesystem::path& path) {
    const PgmData pgm = parse_pgm(read_file(path));
    std::vector<std::uint8_t> labels(pgm.samples.size());
    std::transform(pgm.samples.begin(), pgm.samples.end(), labels.begin(), [&](std::uint16_t s) {
        return static_cast<std::uint8_t>(2 * static_cast<std::size_t>(s) > pgm.maxval ? 1 : 0);
    });
    return BinaryMap(pgm.width, pgm.height, std::move(labels));
}

Raster normalize_center(const Raster& raster) {
    const auto values = raster.values();
    if (values.empty()) throw DegenerateInputError("cannot normalize an empty raster");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (!(range > 0.0)) throw DegenerateInputError("constant raster has no contrast to normalize");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    for (double& v : out) v -= mean;
    return Raster(raster.width(), raster.height(), std::move(out));
}

Raster rescale_unit(const Raster& raster) {
    const auto values = raster.values();
    if (values.empty()) return raster;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    std::vector<double> out(values.size(), 0.0);
    if (range > 0.0)
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::clamp((values[i] - lo) / range, 0.0, 1.0);
    return Raster(raster.width(), raster.height(), std::move(out));
}

}  // namespace sarcd
