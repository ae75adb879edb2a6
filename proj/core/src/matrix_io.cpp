#include "rrsvd/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <system_error>

#include "rrsvd/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "RRSM I/O assumes a little-endian host");

namespace rrsvd {

namespace {

constexpr char kMagic[4] = {'R', 'R', 'S', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeComplexDouble = 0;

struct io_error : std::runtime_error {
    io_error(const std::string& what, const std::string& path)
        : std::runtime_error(what + ": " + path) {}
};

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_rrsm(const std::string& path, const DenseMatrix& a) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open for writing", path);
    f.write(kMagic, 4);
    std::uint32_t version = kVersion;
    std::uint8_t dtype = kDtypeComplexDouble;
    std::uint64_t rows = a.rows(), cols = a.cols();
    f.write(reinterpret_cast<const char*>(&version), sizeof(version));
    f.write(reinterpret_cast<const char*>(&dtype), sizeof(dtype));
    f.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    f.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    f.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(a.size() * sizeof(cplx)));
    if (!f) throw io_error("write failed", path);
}

DenseMatrix read_rrsm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open for reading", path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint8_t dtype = 0xff;
    std::uint64_t rows = 0, cols = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), sizeof(version));
    f.read(reinterpret_cast<char*>(&dtype), sizeof(dtype));
    f.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    f.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!f) throw io_error("truncated header", path);
    if (std::memcmp(magic, kMagic, 4) != 0) throw io_error("bad magic", path);
    if (version != kVersion) throw io_error("unsupported version", path);
    if (dtype != kDtypeComplexDouble) throw io_error("unsupported dtype", path);
    DenseMatrix a(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    f.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(cplx)));
    if (!f) throw io_error("truncated payload", path);
    if (!a.all_finite()) throw io_error("non-finite entries", path);
    return a;
}

void write_value_lines(const std::string& path, const std::vector<double>& values) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw io_error("cannot open for writing", path);
    for (double v : values) f << format_double(v) << '\n';
    if (!f) throw io_error("write failed", path);
}

std::vector<double> read_value_lines(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open for reading", path);
    std::vector<double> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const char* b = line.data();
        const char* e = b + line.size();
        double v = 0.0;
        auto res = std::from_chars(b, e, v);
        if (res.ec != std::errc()) throw io_error("bad value line", path);
        out.push_back(v);
    }
    return out;
}

}  // namespace rrsvd
