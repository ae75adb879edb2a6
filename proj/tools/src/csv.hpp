#ifndef RRSVD_TOOLS_CSV_HPP
#define RRSVD_TOOLS_CSV_HPP

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrsvd::bench {

// Minimal CSV writer: fixed header, locale-independent decimal points.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open CSV for writing: " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        columns_ = header.size();
    }

    CsvWriter& field(const std::string& v) {
        sep();
        out_ << v;
        return *this;
    }
    CsvWriter& field(const char* v) { return field(std::string(v)); }
    CsvWriter& field(double v) {
        char buf[40];
        auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
        return field(std::string(buf, res.ptr));
    }
    CsvWriter& field(std::size_t v) { return field(std::to_string(v)); }
    CsvWriter& field(int v) { return field(std::to_string(v)); }

    void end_row() {
        if (in_row_ != columns_)
            throw std::logic_error("CSV row has wrong number of fields");
        out_ << '\n';
        in_row_ = 0;
    }

  private:
    void sep() {
        if (in_row_) out_ << ',';
        ++in_row_;
    }
    std::ofstream out_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

}  // namespace rrsvd::bench

#endif
