#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "bohrlab/errors.hpp"

namespace bohrlab::io {

// shortest-exact decimal form; used everywhere a double reaches a file so
// reruns stay byte-identical
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw ConfigError("cannot open output file " + path);
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

} // namespace bohrlab::io
